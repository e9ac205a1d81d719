#pragma once

#if defined(__SSE2__)
#include <immintrin.h>
#endif

namespace elwave {

/// Flushes subnormal results and operands to zero on the calling thread.
/// The dispersive tails ahead of a wave front decay far below 1e-300 and
/// subnormal arithmetic would otherwise dominate the step time. Values that
/// small are never observable in any reported quantity.
inline void flush_subnormals() {
#if defined(__SSE2__)
  _mm_setcsr(_mm_getcsr() | 0x8040);  // FTZ | DAZ
#endif
}

}  // namespace elwave
