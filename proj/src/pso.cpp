#include "cogpso/pso.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "cogpso/simd/kernels.hpp"

namespace cogpso {

double InertiaSchedule::at(std::size_t iteration, std::size_t max_iters) const noexcept {
    if (max_iters <= 1) return start;
    const double t = static_cast<double>(std::min(iteration, max_iters - 1)) / static_cast<double>(max_iters - 1);
    return start + (end - start) * t;
}

std::string_view to_string(CogVariant v) noexcept {
    return v == CogVariant::as_printed ? "as-printed" : "mean-attractor";
}

CogVariant parse_cog_variant(std::string_view name) {
    if (name == "as-printed") return CogVariant::as_printed;
    if (name == "mean-attractor") return CogVariant::mean_attractor;
    throw std::invalid_argument("unknown cog_variant '" + std::string(name) + "'");
}

void PsoConfig::validate() const {
    if (swarm_size < 2) throw std::invalid_argument("pso: swarm_size must be >= 2");
    if (!(ac1 >= 0.0) || !(ac2 >= 0.0)) throw std::invalid_argument("pso: acceleration coefficients must be >= 0");
    if (max_iters < 1) throw std::invalid_argument("pso: max_iters must be >= 1");
    if (v_max && !(*v_max > 0.0)) throw std::invalid_argument("pso: v_max must be > 0");
}

std::vector<double> PsoConfig::velocity_clamp(const BoundingBox& box) const {
    std::vector<double> clamp(box.dim());
    for (std::size_t j = 0; j < clamp.size(); ++j) clamp[j] = v_max ? *v_max : 0.5 * box.extent(j);
    return clamp;
}

// --- Topology ---------------------------------------------------------------

Topology Topology::global(std::size_t swarm_size) {
    Topology t;
    t.kind_ = Kind::global;
    t.swarm_size_ = swarm_size;
    t.count_ = 1;
    return t;
}

Topology Topology::from_membership(std::vector<std::size_t> membership, std::size_t count) {
    if (count == 0) throw std::invalid_argument("Topology: need at least one neighbourhood");
    std::vector<std::size_t> sizes(count, 0);
    for (auto m : membership) {
        if (m >= count) throw std::invalid_argument("Topology: neighbourhood id out of range");
        ++sizes[m];
    }
    for (auto s : sizes)
        if (s == 0) throw std::invalid_argument("Topology: empty neighbourhood");
    Topology t;
    t.kind_ = Kind::neighborhoods;
    t.swarm_size_ = membership.size();
    t.count_ = count;
    t.membership_ = std::move(membership);
    return t;
}

Topology Topology::contiguous_blocks(std::size_t swarm_size, std::size_t block_size) {
    if (block_size == 0 || block_size > swarm_size)
        throw std::invalid_argument("Topology: block size must be in [1, swarm_size]");
    std::vector<std::size_t> membership(swarm_size);
    for (std::size_t i = 0; i < swarm_size; ++i) membership[i] = i / block_size;
    const std::size_t count = (swarm_size + block_size - 1) / block_size;
    return from_membership(std::move(membership), count);
}

Topology Topology::round_robin(std::size_t swarm_size, std::size_t k) {
    if (k == 0 || k > swarm_size) throw std::invalid_argument("Topology: need 1 <= k <= swarm_size");
    std::vector<std::size_t> membership(swarm_size);
    for (std::size_t i = 0; i < swarm_size; ++i) membership[i] = i % k;
    return from_membership(std::move(membership), k);
}

std::vector<std::size_t> Topology::members(std::size_t neighborhood) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < swarm_size_; ++i)
        if (neighborhood_of(i) == neighborhood) out.push_back(i);
    return out;
}

std::vector<std::size_t> Topology::neighborhood_sizes() const {
    std::vector<std::size_t> sizes(neighborhood_count(), 0);
    for (std::size_t i = 0; i < swarm_size_; ++i) ++sizes[neighborhood_of(i)];
    return sizes;
}

// --- Update rules -----------------------------------------------------------

double draw_phi(double ac, Rng& rng) { return uniform_open01(rng) * ac; }

void draw_phi(double ac, Rng& rng, std::span<double> out) {
    for (double& phi : out) phi = draw_phi(ac, rng);
}

namespace {

void check_dims(const Particle& p, std::span<const double> social, std::span<const double> phi1,
                std::span<const double> phi2, std::span<const double> clamp) {
    const std::size_t d = p.dim();
    if (p.velocity.size() != d || p.pbest_position.size() != d || social.size() != d || phi1.size() != d ||
        phi2.size() != d || (!clamp.empty() && clamp.size() != d))
        throw std::invalid_argument("velocity update: dimension mismatch");
}

std::vector<double> apply_velocity(const Particle& p, std::span<const double> a1, std::span<const double> a2,
                                   double omega, std::span<const double> phi1, std::span<const double> phi2,
                                   std::span<const double> clamp) {
    std::vector<double> v = p.velocity;
    simd::active().velocity_step({v.data(), p.position.data(), a1.data(), a2.data(), phi1.data(), phi2.data(),
                                  clamp.empty() ? nullptr : clamp.data(), omega, v.size()});
    return v;
}

void cog_attractors(std::span<const double> pbest, std::span<const double> lbest, CogVariant variant,
                    std::vector<double>& a1, std::vector<double>& a2) {
    a1.resize(pbest.size());
    a2.resize(pbest.size());
    for (std::size_t j = 0; j < pbest.size(); ++j) {
        a1[j] = (pbest[j] + lbest[j]) / 2.0;
        a2[j] = variant == CogVariant::as_printed ? (pbest[j] - lbest[j]) / 2.0 : lbest[j];
    }
}

}  // namespace

std::vector<double> velocity_update_gbest(const Particle& p, std::span<const double> gbest, double omega,
                                          std::span<const double> phi1, std::span<const double> phi2,
                                          std::span<const double> clamp) {
    check_dims(p, gbest, phi1, phi2, clamp);
    return apply_velocity(p, p.pbest_position, gbest, omega, phi1, phi2, clamp);
}

std::vector<double> velocity_update_gbest(const Particle& p, std::span<const double> gbest, double omega,
                                          double phi1, double phi2, std::span<const double> clamp) {
    const std::vector<double> f1(p.dim(), phi1), f2(p.dim(), phi2);
    return velocity_update_gbest(p, gbest, omega, f1, f2, clamp);
}

std::vector<double> velocity_update_cog(const Particle& p, std::span<const double> lbest, double omega,
                                        std::span<const double> phi1, std::span<const double> phi2,
                                        std::span<const double> clamp, CogVariant variant) {
    check_dims(p, lbest, phi1, phi2, clamp);
    std::vector<double> a1, a2;
    cog_attractors(p.pbest_position, lbest, variant, a1, a2);
    return apply_velocity(p, a1, a2, omega, phi1, phi2, clamp);
}

std::vector<double> velocity_update_cog(const Particle& p, std::span<const double> lbest, double omega,
                                        double phi1, double phi2, std::span<const double> clamp,
                                        CogVariant variant) {
    const std::vector<double> f1(p.dim(), phi1), f2(p.dim(), phi2);
    return velocity_update_cog(p, lbest, omega, f1, f2, clamp, variant);
}

std::span<const double> position_update(Particle& p, const BoundingBox& box) {
    if (box.dim() != p.dim() || p.velocity.size() != p.dim())
        throw std::invalid_argument("position_update: dimension mismatch");
    for (std::size_t j = 0; j < p.dim(); ++j) {
        double x = p.position[j] + p.velocity[j];
        const double lo = box.min[j];
        const double hi = box.max[j];
        if (x > hi) {
            x = 2.0 * hi - x;
            p.velocity[j] = -p.velocity[j];
        } else if (x < lo) {
            x = 2.0 * lo - x;
            p.velocity[j] = -p.velocity[j];
        }
        // A step longer than the box extent can overshoot the opposite bound.
        p.position[j] = std::clamp(x, lo, hi);
    }
    return p.position;
}

bool pbest_update(Particle& p, double new_fitness) {
    if (!(new_fitness < p.pbest_fitness)) return false;
    p.pbest_fitness = new_fitness;
    p.pbest_position = p.position;
    return true;
}

std::size_t best_of(const Topology& topology, std::span<const Particle> particles,
                    std::optional<std::size_t> neighborhood) {
    if (particles.size() != topology.swarm_size())
        throw std::invalid_argument("best_of: particle count does not match topology");
    std::size_t best = particles.size();
    for (std::size_t i = 0; i < particles.size(); ++i) {
        if (neighborhood && topology.neighborhood_of(i) != *neighborhood) continue;
        if (best == particles.size() || particles[i].pbest_fitness < particles[best].pbest_fitness) best = i;
    }
    if (best == particles.size()) throw std::invalid_argument("best_of: empty scope");
    return best;
}

// --- Swarm ------------------------------------------------------------------

Swarm::Swarm(const PsoConfig& config, SwarmSetup setup, SwarmFitness fitness, Rng rng, BestSelector selector)
    : config_(config),
      setup_(std::move(setup)),
      fitness_(std::move(fitness)),
      rng_(std::move(rng)),
      selector_(std::move(selector)) {
    const std::size_t eta = setup_.initial_positions.rows();
    const std::size_t dim = setup_.initial_positions.cols();
    if (eta != setup_.topology.swarm_size() || setup_.initial_pbest.rows() != eta ||
        setup_.initial_pbest.cols() != dim || setup_.box.dim() != dim)
        throw std::invalid_argument("Swarm: inconsistent setup shapes");
    clamp_ = config_.velocity_clamp(setup_.box);

    particles_.resize(eta);
    for (std::size_t i = 0; i < eta; ++i) {
        auto& p = particles_[i];
        auto x = setup_.initial_positions.row(i);
        auto pb = setup_.initial_pbest.row(i);
        p.position.assign(x.begin(), x.end());
        p.pbest_position.assign(pb.begin(), pb.end());
        p.velocity.resize(dim);
        for (std::size_t j = 0; j < dim; ++j) p.velocity[j] = uniform(rng_, -clamp_[j], clamp_[j]);
    }
    std::vector<double> pbest_fitness(eta);
    fitness_(setup_.initial_pbest, pbest_fitness);
    for (std::size_t i = 0; i < eta; ++i) particles_[i].pbest_fitness = pbest_fitness[i];
}

Matrix Swarm::positions_matrix() const {
    Matrix m(particles_.size(), setup_.box.dim());
    for (std::size_t i = 0; i < particles_.size(); ++i)
        std::copy(particles_[i].position.begin(), particles_[i].position.end(), m.row(i).begin());
    return m;
}

std::size_t Swarm::select(std::size_t neighborhood) const {
    if (selector_) return selector_(setup_.topology, particles_, neighborhood);
    if (setup_.topology.kind() == Topology::Kind::global) return best_of(setup_.topology, particles_);
    return best_of(setup_.topology, particles_, neighborhood);
}

std::vector<std::size_t> Swarm::neighborhood_bests() const {
    std::vector<std::size_t> bests(setup_.topology.neighborhood_count());
    for (std::size_t nb = 0; nb < bests.size(); ++nb) bests[nb] = select(nb);
    return bests;
}

void Swarm::step(const IterationObserver& observer) {
    const double omega = config_.omega.at(iteration_, config_.max_iters);
    std::vector<double> fitness(particles_.size());
    fitness_(positions_matrix(), fitness);
    for (std::size_t i = 0; i < particles_.size(); ++i) pbest_update(particles_[i], fitness[i]);

    const auto bests = neighborhood_bests();
    double best = particles_.front().pbest_fitness;
    for (const auto& p : particles_) best = std::min(best, p.pbest_fitness);
    trace_.push_back(best);
    if (observer) observer(IterationView{iteration_, omega, particles_, fitness, bests});

    const std::size_t dim = setup_.box.dim();
    std::vector<double> phi1(dim), phi2(dim);
    for (std::size_t i = 0; i < particles_.size(); ++i) {
        auto& p = particles_[i];
        const auto& social = particles_[bests[setup_.topology.neighborhood_of(i)]].pbest_position;
        draw_phi(config_.ac1, rng_, phi1);
        draw_phi(config_.ac2, rng_, phi2);
        p.velocity = setup_.rule == VelocityRule::inertia_social
                         ? velocity_update_gbest(p, social, omega, phi1, phi2, clamp_)
                         : velocity_update_cog(p, social, omega, phi1, phi2, clamp_, config_.cog_variant);
        position_update(p, setup_.box);
    }
    ++iteration_;
}

void Swarm::run(const IterationObserver& observer) {
    while (iteration_ < config_.max_iters) step(observer);
}

}  // namespace cogpso
