#pragma once

// Data-parallel inner loops with a scalar reference implementation and
// vectorized variants chosen at runtime. All variants share one signature
// table; the scalar table is the ground truth the others are tested against.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace cogpso::simd {

enum class Level { scalar, avx2 };

std::string_view to_string(Level level) noexcept;
/// Parses "scalar" / "avx2"; throws std::invalid_argument otherwise.
Level parse_level(std::string_view name);

/// Arguments for one fused velocity step over `dim` components:
///   v = omega * v + phi1 * (attractor1 - x) + phi2 * (attractor2 - x)
/// then clamped to [-clamp[j], clamp[j]] when `clamp` is non-null.
struct VelocityArgs {
    double* velocity;
    const double* position;
    const double* attractor1;
    const double* attractor2;
    const double* phi1;
    const double* phi2;
    const double* clamp;  // nullable
    double omega;
    std::size_t dim;
};

struct KernelTable {
    Level level;
    /// Sum of squared differences over `dim` components.
    double (*squared_l2)(const double* a, const double* b, std::size_t dim);
    /// For each of `n` row-major points, index of the nearest of `k`
    /// centroids (lowest index on ties) and its squared distance.
    void (*nearest)(const double* points, std::size_t n, const double* centroids, std::size_t k,
                    std::size_t dim, std::uint32_t* index_out, double* dist2_out);
    void (*velocity_step)(const VelocityArgs& args);
};

/// True when the variant was compiled in and the running CPU supports it.
bool available(Level level) noexcept;
/// Best level the running CPU supports.
Level detected() noexcept;

/// Kernels for an explicit level; throws std::invalid_argument if unavailable.
const KernelTable& kernels(Level level);

/// Process-wide active kernels. Initialised from COGPSO_SIMD when set,
/// otherwise detected().
const KernelTable& active() noexcept;
Level active_level() noexcept;
void set_active_level(Level level);

}  // namespace cogpso::simd
