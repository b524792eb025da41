#pragma once

#include "cogpso/simd/kernels.hpp"

namespace cogpso::simd::detail {

extern const KernelTable scalar_table;
#if defined(COGPSO_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif

}  // namespace cogpso::simd::detail
