#include "kernels_internal.hpp"

namespace cogpso::simd::detail {
namespace {

double squared_l2_scalar(const double* a, const double* b, std::size_t dim) {
    double sum = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
        const double diff = a[j] - b[j];
        sum += diff * diff;
    }
    return sum;
}

void nearest_scalar(const double* points, std::size_t n, const double* centroids, std::size_t k,
                    std::size_t dim, std::uint32_t* index_out, double* dist2_out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double* p = points + i * dim;
        std::uint32_t best = 0;
        double best_d = squared_l2_scalar(p, centroids, dim);
        for (std::size_t c = 1; c < k; ++c) {
            const double d = squared_l2_scalar(p, centroids + c * dim, dim);
            if (d < best_d) {
                best_d = d;
                best = static_cast<std::uint32_t>(c);
            }
        }
        index_out[i] = best;
        dist2_out[i] = best_d;
    }
}

void velocity_step_scalar(const VelocityArgs& a) {
    for (std::size_t j = 0; j < a.dim; ++j) {
        const double inertia = a.omega * a.velocity[j];
        const double cognitive = a.phi1[j] * (a.attractor1[j] - a.position[j]);
        const double social = a.phi2[j] * (a.attractor2[j] - a.position[j]);
        double v = (inertia + cognitive) + social;
        if (a.clamp != nullptr) {
            // max-then-min with the operand order of _mm256_max_pd/_mm256_min_pd
            const double lo = -a.clamp[j];
            v = v > lo ? v : lo;
            v = v < a.clamp[j] ? v : a.clamp[j];
        }
        a.velocity[j] = v;
    }
}

}  // namespace

const KernelTable scalar_table{Level::scalar, &squared_l2_scalar, &nearest_scalar,
                               &velocity_step_scalar};

}  // namespace cogpso::simd::detail
