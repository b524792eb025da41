// Compiled with -mavx2. Keep this translation unit free of inline library
// templates so no AVX2-encoded copies of them leak into the rest of the link.

#include "kernels_internal.hpp"

#include <immintrin.h>

namespace cogpso::simd::detail {
namespace {

inline __m256i tail_mask(std::size_t remaining) {
    const long long m0 = remaining > 0 ? -1 : 0;
    const long long m1 = remaining > 1 ? -1 : 0;
    const long long m2 = remaining > 2 ? -1 : 0;
    const long long m3 = remaining > 3 ? -1 : 0;
    return _mm256_set_epi64x(m3, m2, m1, m0);
}

inline double horizontal_sum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    const __m128d swapped = _mm_unpackhi_pd(pair, pair);
    return _mm_cvtsd_f64(_mm_add_sd(pair, swapped));
}

double squared_l2_avx2(const double* a, const double* b, std::size_t dim) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 8 <= dim; j += 8) {
        const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + j), _mm256_loadu_pd(b + j));
        const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + j + 4), _mm256_loadu_pd(b + j + 4));
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(d0, d0));
        acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(d1, d1));
    }
    if (j + 4 <= dim) {
        const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + j), _mm256_loadu_pd(b + j));
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(d0, d0));
        j += 4;
    }
    if (j < dim) {
        const __m256i mask = tail_mask(dim - j);
        const __m256d d0 =
            _mm256_sub_pd(_mm256_maskload_pd(a + j, mask), _mm256_maskload_pd(b + j, mask));
        acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(d0, d0));
    }
    return horizontal_sum(_mm256_add_pd(acc0, acc1));
}

// Small dimensions dominate clustering workloads (d = 2..40), so for d <= 4
// each point is held in one register across the whole centroid scan.
void nearest_small_dim(const double* points, std::size_t n, const double* centroids, std::size_t k,
                       std::size_t dim, std::uint32_t* index_out, double* dist2_out) {
    const __m256i mask = tail_mask(dim);
    for (std::size_t i = 0; i < n; ++i) {
        const __m256d p = _mm256_maskload_pd(points + i * dim, mask);
        std::uint32_t best = 0;
        double best_d = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            const __m256d diff = _mm256_sub_pd(p, _mm256_maskload_pd(centroids + c * dim, mask));
            const double d = horizontal_sum(_mm256_mul_pd(diff, diff));
            if (c == 0 || d < best_d) {
                best_d = d;
                best = static_cast<std::uint32_t>(c);
            }
        }
        index_out[i] = best;
        dist2_out[i] = best_d;
    }
}

void nearest_avx2(const double* points, std::size_t n, const double* centroids, std::size_t k,
                  std::size_t dim, std::uint32_t* index_out, double* dist2_out) {
    if (dim <= 4) {
        nearest_small_dim(points, n, centroids, k, dim, index_out, dist2_out);
        return;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double* p = points + i * dim;
        std::uint32_t best = 0;
        double best_d = squared_l2_avx2(p, centroids, dim);
        for (std::size_t c = 1; c < k; ++c) {
            const double d = squared_l2_avx2(p, centroids + c * dim, dim);
            if (d < best_d) {
                best_d = d;
                best = static_cast<std::uint32_t>(c);
            }
        }
        index_out[i] = best;
        dist2_out[i] = best_d;
    }
}

// Same operation order as the scalar kernel and no FMA contraction, so the
// result is bit-identical to it.
void velocity_step_avx2(const VelocityArgs& a) {
    const __m256d omega = _mm256_set1_pd(a.omega);
    const __m256d sign = _mm256_set1_pd(-0.0);
    std::size_t j = 0;
    for (; j + 4 <= a.dim; j += 4) {
        const __m256d x = _mm256_loadu_pd(a.position + j);
        const __m256d inertia = _mm256_mul_pd(omega, _mm256_loadu_pd(a.velocity + j));
        const __m256d cognitive =
            _mm256_mul_pd(_mm256_loadu_pd(a.phi1 + j), _mm256_sub_pd(_mm256_loadu_pd(a.attractor1 + j), x));
        const __m256d social =
            _mm256_mul_pd(_mm256_loadu_pd(a.phi2 + j), _mm256_sub_pd(_mm256_loadu_pd(a.attractor2 + j), x));
        __m256d v = _mm256_add_pd(_mm256_add_pd(inertia, cognitive), social);
        if (a.clamp != nullptr) {
            const __m256d c = _mm256_loadu_pd(a.clamp + j);
            v = _mm256_min_pd(_mm256_max_pd(v, _mm256_xor_pd(c, sign)), c);
        }
        _mm256_storeu_pd(a.velocity + j, v);
    }
    for (; j < a.dim; ++j) {
        const double inertia = a.omega * a.velocity[j];
        const double cognitive = a.phi1[j] * (a.attractor1[j] - a.position[j]);
        const double social = a.phi2[j] * (a.attractor2[j] - a.position[j]);
        double v = (inertia + cognitive) + social;
        if (a.clamp != nullptr) {
            const double lo = -a.clamp[j];
            v = v > lo ? v : lo;
            v = v < a.clamp[j] ? v : a.clamp[j];
        }
        a.velocity[j] = v;
    }
}

}  // namespace

const KernelTable avx2_table{Level::avx2, &squared_l2_avx2, &nearest_avx2, &velocity_step_avx2};

}  // namespace cogpso::simd::detail
