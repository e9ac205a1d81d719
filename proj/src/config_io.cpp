#include "elwave/config_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace elwave {

using nlohmann::json;

namespace {

// Reads fields from one JSON object and rejects any key left unread.
class Fields {
 public:
  Fields(const json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
    if (!obj_.is_object()) throw ConfigError(where_ + ": expected an object");
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  const json& require(const std::string& key) {
    const json* v = find(key);
    if (v == nullptr) throw ConfigError(path(key) + ": missing required field");
    return *v;
  }

  double number(const json& v, const std::string& key) const {
    if (!v.is_number()) throw ConfigError(path(key) + ": expected a number");
    return v.get<double>();
  }

  void read(const std::string& key, double& out) {
    if (const json* v = find(key)) out = number(*v, key);
  }

  void read(const std::string& key, int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) throw ConfigError(path(key) + ": expected an integer");
      out = v->get<int>();
    }
  }

  void read(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) throw ConfigError(path(key) + ": expected true or false");
      out = v->get<bool>();
    }
  }

  std::string string(const std::string& key) {
    const json& v = require(key);
    if (!v.is_string()) throw ConfigError(path(key) + ": expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const json& v, const std::string& key) const {
    if (!v.is_array()) throw ConfigError(path(key) + ": expected an array");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) out.push_back(number(e, key));
    return out;
  }

  std::array<double, 2> pair(const json& v, const std::string& key) const {
    const auto xs = numbers(v, key);
    if (xs.size() != 2) throw ConfigError(path(key) + ": expected two numbers");
    return {xs[0], xs[1]};
  }

  std::string path(const std::string& key) const { return where_ + "." + key; }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(path(it.key()) + ": unknown key");
    }
  }

 private:
  const json& obj_;
  std::string where_;
  std::set<std::string> seen_;
};

DampingKind parse_kind(const std::string& name, const std::string& where) {
  if (name == "Zero") return DampingKind::Zero;
  if (name == "Critical") return DampingKind::Critical;
  if (name == "Tabulated") return DampingKind::Tabulated;
  throw ConfigError(where + ": unknown damping kind '" + name + "'");
}

std::vector<Bump> parse_bumps(const json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + ": expected an array of bumps");
  std::vector<Bump> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    Fields f(v[k], where + "[" + std::to_string(k) + "]");
    Bump bump;
    bump.center = f.pair(f.require("center"), "center");
    bump.radius = f.number(f.require("radius"), "radius");
    bump.amplitude = f.pair(f.require("amplitude"), "amplitude");
    f.finish();
    out.push_back(bump);
  }
  return out;
}

json bumps_json(const std::vector<Bump>& bumps) {
  json arr = json::array();
  for (const auto& b : bumps) {
    arr.push_back({{"center", {b.center[0], b.center[1]}},
                   {"radius", b.radius},
                   {"amplitude", {b.amplitude[0], b.amplitude[1]}}});
  }
  return arr;
}

}  // namespace

DampingCase parse_case(const std::string& name) {
  if (name == "StrongDamping") return DampingCase::StrongDamping;
  if (name == "IntermediateDamping") return DampingCase::IntermediateDamping;
  if (name == "Undamped") return DampingCase::Undamped;
  if (name == "WeakDamping") return DampingCase::WeakDamping;
  throw ConfigError("config.case: unknown case '" + name + "'");
}

SimConfig parse_config(const json& doc) {
  SimConfig c;
  Fields top(doc, "config");

  {
    Fields f(top.require("lame"), "config.lame");
    c.lame.a = f.number(f.require("a"), "a");
    c.lame.b = f.number(f.require("b"), "b");
    f.finish();
  }
  {
    Fields f(top.require("damping"), "config.damping");
    c.damping.kind = parse_kind(f.string("kind"), f.path("kind"));
    f.read("V0", c.damping.V0);
    if (const json* v = f.find("values")) c.damping.table = f.numbers(*v, "values");
    f.finish();
    if (c.damping.kind == DampingKind::Tabulated && c.damping.table.empty()) {
      throw ConfigError("config.damping.values: Tabulated damping needs one value per node");
    }
  }
  {
    Fields f(top.require("init"), "config.init");
    c.init.L = f.number(f.require("L"), "L");
    if (const json* v = f.find("u0")) c.init.u0 = parse_bumps(*v, f.path("u0"));
    if (const json* v = f.find("u1")) c.init.u1 = parse_bumps(*v, f.path("u1"));
    f.finish();
  }
  c.T = top.number(top.require("T"), "T");
  c.damping_case = parse_case(top.string("case"));
  top.read("cfl_safety", c.cfl_safety);
  top.read("t0", c.t0);
  top.read("delta", c.delta);
  top.read("output_stride", c.output_stride);
  top.read("grid_margin", c.grid_margin);
  top.read("resolution", c.resolution);
  top.read("tol_factor", c.tol_factor);
  if (const json* v = top.find("rate_window")) c.rate_window = top.pair(*v, "rate_window");
  if (const json* v = top.find("suites")) {
    Fields f(*v, "config.suites");
    f.read("multiplier", c.suites.multiplier);
    f.read("potential", c.suites.potential);
    f.read("rates", c.suites.rates);
    f.finish();
  }
  if (const json* v = top.find("potential")) {
    Fields f(*v, "config.potential");
    f.read("resolution", c.potential.resolution);
    f.read("near_cells", c.potential.near_cells);
    f.read("epsilon", c.potential.epsilon);
    if (const json* t = f.find("lemma26_times")) c.potential.lemma26_times = f.numbers(*t, "lemma26_times");
    f.finish();
  }
  if (const json* v = top.find("tolerances")) {
    Fields f(*v, "config.tolerances");
    f.read("energy", c.tolerances.energy);
    f.read("v_identity", c.tolerances.v_identity);
    f.read("multiplier", c.tolerances.multiplier);
    f.read("poisson", c.tolerances.poisson);
    f.finish();
  }
  top.finish();
  validate(c);
  return c;
}

SimConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

SimConfig load_config(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return parse_config_text(text);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

json to_json(const SimConfig& c) {
  json damping = {{"kind", to_string(c.damping.kind)}, {"V0", c.damping.V0}};
  if (!c.damping.table.empty()) damping["values"] = c.damping.table;
  json doc = {
      {"lame", {{"a", c.lame.a}, {"b", c.lame.b}}},
      {"damping", damping},
      {"init", {{"L", c.init.L}, {"u0", bumps_json(c.init.u0)}, {"u1", bumps_json(c.init.u1)}}},
      {"T", c.T},
      {"case", to_string(c.damping_case)},
      {"cfl_safety", c.cfl_safety},
      {"t0", c.t0},
      {"delta", c.delta},
      {"output_stride", c.output_stride},
      {"grid_margin", c.grid_margin},
      {"resolution", c.resolution},
      {"tol_factor", c.tol_factor},
      {"suites",
       {{"multiplier", c.suites.multiplier},
        {"potential", c.suites.potential},
        {"rates", c.suites.rates}}},
      {"potential",
       {{"resolution", c.potential.resolution},
        {"near_cells", c.potential.near_cells},
        {"epsilon", c.potential.epsilon},
        {"lemma26_times", c.potential.lemma26_times}}},
      {"tolerances",
       {{"energy", c.tolerances.energy},
        {"v_identity", c.tolerances.v_identity},
        {"multiplier", c.tolerances.multiplier},
        {"poisson", c.tolerances.poisson}}},
  };
  if (c.rate_window) doc["rate_window"] = {(*c.rate_window)[0], (*c.rate_window)[1]};
  return doc;
}

}  // namespace elwave
