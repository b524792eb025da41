#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cogpso/data.hpp"
#include "cogpso/matrix.hpp"
#include "cogpso/rng.hpp"

namespace cogpso {

/// Inertia weight, linear from `start` at the first iteration to `end` at the
/// last. start == end gives a constant weight.
struct InertiaSchedule {
    double start = 0.9;
    double end = 0.4;

    static InertiaSchedule constant(double w) { return {w, w}; }
    double at(std::size_t iteration, std::size_t max_iters) const noexcept;
};

/// Social attractor pair used by the centre-of-gravity velocity rule.
///   as_printed:     (pbest + lbest)/2 and (pbest - lbest)/2
///   mean_attractor: (pbest + lbest)/2 and lbest
enum class CogVariant { as_printed, mean_attractor };

std::string_view to_string(CogVariant v) noexcept;
CogVariant parse_cog_variant(std::string_view name);

struct PsoConfig {
    std::size_t swarm_size = 30;
    InertiaSchedule omega{};
    double ac1 = 1.49;
    double ac2 = 1.49;
    std::size_t max_iters = 200;
    /// Absolute per-dimension velocity clamp. Unset means half the search box
    /// extent in each dimension.
    std::optional<double> v_max;
    std::uint64_t seed = 0;
    CogVariant cog_variant = CogVariant::as_printed;

    /// Throws std::invalid_argument on swarm_size < 2, negative coefficients,
    /// max_iters == 0 or a non-positive v_max.
    void validate() const;
    std::vector<double> velocity_clamp(const BoundingBox& box) const;
};

struct Particle {
    std::vector<double> position;
    std::vector<double> velocity;
    std::vector<double> pbest_position;
    double pbest_fitness = std::numeric_limits<double>::infinity();

    std::size_t dim() const noexcept { return position.size(); }
};

/// Who a particle takes its social attractor from: the whole swarm, or one
/// of several static neighbourhoods.
class Topology {
public:
    enum class Kind { global, neighborhoods };

    static Topology global(std::size_t swarm_size);
    /// Consecutive index blocks of `block_size`; the last may be shorter.
    static Topology contiguous_blocks(std::size_t swarm_size, std::size_t block_size);
    /// Particle i joins neighbourhood i mod k, so sizes differ by at most one.
    static Topology round_robin(std::size_t swarm_size, std::size_t k);
    /// Throws unless every id is < count and every neighbourhood is non-empty.
    static Topology from_membership(std::vector<std::size_t> membership, std::size_t count);

    Kind kind() const noexcept { return kind_; }
    std::size_t swarm_size() const noexcept { return swarm_size_; }
    std::size_t neighborhood_count() const noexcept { return kind_ == Kind::global ? 1 : count_; }
    /// Empty for the global kind.
    const std::vector<std::size_t>& membership() const noexcept { return membership_; }
    std::size_t neighborhood_of(std::size_t particle) const noexcept {
        return kind_ == Kind::global ? 0 : membership_[particle];
    }
    std::vector<std::size_t> members(std::size_t neighborhood) const;
    std::vector<std::size_t> neighborhood_sizes() const;

private:
    Kind kind_ = Kind::global;
    std::size_t swarm_size_ = 0;
    std::size_t count_ = 1;
    std::vector<std::size_t> membership_;
};

/// rnd * ac with rnd uniform on (0,1).
double draw_phi(double ac, Rng& rng);
/// One independent draw per component of `out`.
void draw_phi(double ac, Rng& rng, std::span<double> out);

/// v' = omega*v + phi1*(pbest - x) + phi2*(gbest - x), clamped to
/// [-clamp, clamp] per component when `clamp` is non-empty.
std::vector<double> velocity_update_gbest(const Particle& p, std::span<const double> gbest, double omega,
                                          std::span<const double> phi1, std::span<const double> phi2,
                                          std::span<const double> clamp = {});
std::vector<double> velocity_update_gbest(const Particle& p, std::span<const double> gbest, double omega,
                                          double phi1, double phi2, std::span<const double> clamp = {});

/// Centre-of-gravity rule. With the as-printed variant:
///   v' = omega*v + phi1*((pbest + lbest)/2 - x) + phi2*((pbest - lbest)/2 - x)
std::vector<double> velocity_update_cog(const Particle& p, std::span<const double> lbest, double omega,
                                        std::span<const double> phi1, std::span<const double> phi2,
                                        std::span<const double> clamp = {},
                                        CogVariant variant = CogVariant::as_printed);
std::vector<double> velocity_update_cog(const Particle& p, std::span<const double> lbest, double omega,
                                        double phi1, double phi2, std::span<const double> clamp = {},
                                        CogVariant variant = CogVariant::as_printed);

/// x' = x + v, then any component that leaves the box is reflected back off
/// the violated bound and its velocity component negated. Returns x'.
std::span<const double> position_update(Particle& p, const BoundingBox& box);

/// Replaces the personal best when `new_fitness` is strictly lower. Returns
/// whether it did.
bool pbest_update(Particle& p, double new_fitness);

/// Index of the lowest pbest_fitness within a neighbourhood, or the whole
/// swarm when `neighborhood` is empty. Ties go to the lowest index.
std::size_t best_of(const Topology& topology, std::span<const Particle> particles,
                    std::optional<std::size_t> neighborhood = std::nullopt);

// ---------------------------------------------------------------------------
// Generic swarm loop shared by the clustering drivers.

enum class VelocityRule { inertia_social, center_of_gravity };

/// Fills fitness[i] for row i of `positions` (one particle per row). The
/// fitness of one particle may depend on the others.
using SwarmFitness = std::function<void(const Matrix& positions, std::span<double> fitness)>;

/// Picks the social attractor of one neighbourhood; defaults to best_of.
using BestSelector =
    std::function<std::size_t(const Topology&, std::span<const Particle>, std::size_t neighborhood)>;

struct IterationView {
    std::size_t iteration;
    double omega;
    std::span<const Particle> particles;  // after the pbest update, before moving
    std::span<const double> fitness;      // of the positions just evaluated
    std::span<const std::size_t> best;    // attractor index per neighbourhood
};
using IterationObserver = std::function<void(const IterationView&)>;

struct SwarmSetup {
    Topology topology;
    VelocityRule rule = VelocityRule::inertia_social;
    BoundingBox box;
    Matrix initial_positions;  // swarm_size x D
    Matrix initial_pbest;      // swarm_size x D, evaluated to seed pbest_fitness
};

class Swarm {
public:
    /// Velocities start uniform in [-clamp, clamp] drawn from `rng`, which
    /// the swarm then owns.
    Swarm(const PsoConfig& config, SwarmSetup setup, SwarmFitness fitness, Rng rng,
          BestSelector selector = {});

    /// One evaluate / pbest / best / move cycle.
    void step(const IterationObserver& observer = {});
    void run(const IterationObserver& observer = {});

    std::span<const Particle> particles() const noexcept { return particles_; }
    const Topology& topology() const noexcept { return setup_.topology; }
    std::size_t iteration() const noexcept { return iteration_; }
    /// Lowest pbest fitness in the swarm after each completed iteration.
    const std::vector<double>& best_fitness_trace() const noexcept { return trace_; }
    /// Current attractor index for every neighbourhood.
    std::vector<std::size_t> neighborhood_bests() const;

private:
    Matrix positions_matrix() const;
    std::size_t select(std::size_t neighborhood) const;

    PsoConfig config_;
    SwarmSetup setup_;
    SwarmFitness fitness_;
    Rng rng_;
    BestSelector selector_;
    std::vector<double> clamp_;
    std::vector<Particle> particles_;
    std::vector<double> trace_;
    std::size_t iteration_ = 0;
};

}  // namespace cogpso
