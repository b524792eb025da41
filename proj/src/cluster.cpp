#include "cogpso/cluster.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "cogpso/rng.hpp"
#include "cogpso/simd/kernels.hpp"

namespace cogpso {

std::string_view to_string(Algorithm a) noexcept {
    switch (a) {
        case Algorithm::kmeans: return "kmeans";
        case Algorithm::psoc: return "psoc";
        case Algorithm::lpso: return "lpso";
        case Algorithm::lcpso: return "lcpso";
    }
    return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
    if (name == "kmeans") return Algorithm::kmeans;
    if (name == "psoc") return Algorithm::psoc;
    if (name == "lpso") return Algorithm::lpso;
    if (name == "lcpso") return Algorithm::lcpso;
    throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

bool is_pso(Algorithm a) noexcept { return a != Algorithm::kmeans; }

std::size_t ClusterRunConfig::effective_lpso_neighborhood_size() const noexcept {
    if (lpso_neighborhood_size != 0) return lpso_neighborhood_size;
    const std::size_t blocks = std::max<std::size_t>(k, 1);
    return std::max<std::size_t>(2, (pso.swarm_size + blocks - 1) / blocks);
}

void ClusterRunConfig::validate(std::size_t n) const {
    if (algorithm == Algorithm::kmeans) throw std::invalid_argument("ClusterRunConfig: kmeans is not a PSO driver");
    if (k < 1) throw std::invalid_argument(std::string(to_string(algorithm)) + ": k must be >= 1");
    if (k > n)
        throw std::invalid_argument(std::string(to_string(algorithm)) + ": k (" + std::to_string(k) +
                                    ") exceeds point count (" + std::to_string(n) + ")");
    pso.validate();
    if (algorithm == Algorithm::lpso) {
        const auto size = effective_lpso_neighborhood_size();
        if (size < 2 || size > pso.swarm_size)
            throw std::invalid_argument("lpso: neighbourhood size must be in [2, swarm_size]");
    }
    if (algorithm == Algorithm::lcpso && pso.swarm_size < k)
        throw std::invalid_argument("lcpso: swarm_size must be >= k");
}

RunResult make_run_result(const Dataset& ds, const Matrix& centroids, const Partition& partition,
                          Algorithm algorithm, std::uint64_t seed, std::vector<double> trace, double runtime_ms,
                          std::variant<KMeansConfig, ClusterRunConfig> config) {
    RunResult r;
    r.dataset = ds.name();
    r.algorithm = algorithm;
    r.seed = seed;
    if (ds.has_labels() && ds.size() >= 2)
        r.ari = adjusted_rand_index(std::span<const std::uint32_t>(ds.labels()),
                                    std::span<const std::uint32_t>(partition.assignment()));
    r.quantization_error = quantization_error(ds.points(), centroids, partition);
    r.sse = sse(ds.points(), centroids, partition);
    r.best_fitness_trace = std::move(trace);
    r.runtime_ms = runtime_ms;
    r.config = std::move(config);
    return r;
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void copy_row(std::span<const double> src, std::span<double> dst) { std::copy(src.begin(), src.end(), dst.begin()); }

/// Rows of distinct data points, `per_row` points per row concatenated.
/// Falls back to sampling with replacement only when fewer than
/// per_row points exist (which validation rules out).
Matrix sample_point_rows(const Matrix& points, std::size_t rows, std::size_t per_row, Rng& rng) {
    Matrix out(rows, per_row * points.cols());
    for (std::size_t r = 0; r < rows; ++r) {
        const auto picks = sample_without_replacement(points.rows(), per_row, rng);
        for (std::size_t c = 0; c < per_row; ++c)
            copy_row(points.row(picks[c]), out.row(r).subspan(c * points.cols(), points.cols()));
    }
    return out;
}

void apply_overrides(Matrix& positions, const FitHooks& hooks) {
    if (!hooks.initial_positions) return;
    const Matrix& seeded = *hooks.initial_positions;
    if (seeded.cols() != positions.cols() || seeded.rows() > positions.rows())
        throw std::invalid_argument("FitHooks: initial_positions shape does not fit the swarm");
    for (std::size_t i = 0; i < seeded.rows(); ++i) copy_row(seeded.row(i), positions.row(i));
}

Matrix decode(std::span<const double> flat, std::size_t k, std::size_t dim) {
    return Matrix(k, dim, std::vector<double>(flat.begin(), flat.end()));
}

/// Shared body of psoc_fit and lpso_fit; they differ only in topology.
ClusterFit full_solution_fit(const Dataset& ds, const ClusterRunConfig& cfg, Topology topology,
                             const FitHooks& hooks) {
    const auto start = Clock::now();
    const Matrix& points = ds.points();
    const std::size_t dim = ds.dim();
    Rng rng(cfg.pso.seed);

    SwarmSetup setup;
    setup.topology = std::move(topology);
    setup.rule = VelocityRule::inertia_social;
    setup.box = BoundingBox::of(points).tiled(cfg.k);
    setup.initial_positions = sample_point_rows(points, cfg.pso.swarm_size, cfg.k, rng);
    setup.initial_pbest = sample_point_rows(points, cfg.pso.swarm_size, cfg.k, rng);
    apply_overrides(setup.initial_positions, hooks);

    auto fitness = [&points, k = cfg.k, dim](const Matrix& positions, std::span<double> out) {
        for (std::size_t i = 0; i < positions.rows(); ++i) {
            const Matrix centroids = decode(positions.row(i), k, dim);
            out[i] = quantization_error(points, centroids, assign_nearest(points, centroids));
        }
    };

    Swarm swarm(cfg.pso, std::move(setup), fitness, std::move(rng));
    swarm.run(hooks.on_iteration);

    const auto global = best_of(Topology::global(swarm.particles().size()), swarm.particles());
    Matrix centroids = decode(swarm.particles()[global].pbest_position, cfg.k, dim);
    Partition partition = assign_nearest(points, centroids);
    repair_empty_clusters(points, centroids, partition);
    return ClusterFit{centroids, partition,
                      make_run_result(ds, centroids, partition, cfg.algorithm, cfg.pso.seed,
                                      swarm.best_fitness_trace(), elapsed_ms(start), cfg)};
}

/// Farthest-first anchors: a random first point, then repeatedly the point
/// farthest from every anchor chosen so far (lowest index on ties). Returns,
/// per anchor, the indices of the points nearer to it than to any other.
std::vector<std::vector<std::size_t>> anchor_cells(const Matrix& points, std::size_t k, Rng& rng) {
    const std::size_t n = points.rows();
    const auto& kernels = simd::active();
    std::vector<std::size_t> anchors{std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)};
    std::vector<double> gap(n);
    for (std::size_t i = 0; i < n; ++i)
        gap[i] = kernels.squared_l2(points.row(i).data(), points.row(anchors[0]).data(), points.cols());
    while (anchors.size() < k) {
        const auto far = static_cast<std::size_t>(std::max_element(gap.begin(), gap.end()) - gap.begin());
        anchors.push_back(far);
        for (std::size_t i = 0; i < n; ++i)
            gap[i] = std::min(gap[i], kernels.squared_l2(points.row(i).data(), points.row(far).data(), points.cols()));
    }
    Matrix centres(k, points.cols());
    for (std::size_t c = 0; c < k; ++c) copy_row(points.row(anchors[c]), centres.row(c));
    const Partition owner = assign_nearest(points, centres);
    std::vector<std::vector<std::size_t>> cells(k);
    for (std::size_t i = 0; i < n; ++i) cells[owner[i]].push_back(i);
    // Fewer distinct points than anchors leaves a cell empty; it draws from all points.
    for (auto& cell : cells)
        if (cell.empty())
            for (std::size_t i = 0; i < n; ++i) cell.push_back(i);
    return cells;
}

}  // namespace

ClusterFit psoc_fit(const Dataset& ds, const ClusterRunConfig& cfg, const FitHooks& hooks) {
    if (cfg.algorithm != Algorithm::psoc) throw std::invalid_argument("psoc_fit: algorithm must be psoc");
    cfg.validate(ds.size());
    return full_solution_fit(ds, cfg, Topology::global(cfg.pso.swarm_size), hooks);
}

ClusterFit lpso_fit(const Dataset& ds, const ClusterRunConfig& cfg, const FitHooks& hooks) {
    if (cfg.algorithm != Algorithm::lpso) throw std::invalid_argument("lpso_fit: algorithm must be lpso");
    cfg.validate(ds.size());
    return full_solution_fit(
        ds, cfg, Topology::contiguous_blocks(cfg.pso.swarm_size, cfg.effective_lpso_neighborhood_size()), hooks);
}

ClusterFit lcpso_fit(const Dataset& ds, const ClusterRunConfig& cfg, const FitHooks& hooks) {
    if (cfg.algorithm != Algorithm::lcpso) throw std::invalid_argument("lcpso_fit: algorithm must be lcpso");
    cfg.validate(ds.size());
    const auto start = Clock::now();
    const Matrix& points = ds.points();
    const std::size_t n = points.rows();
    const std::size_t eta = cfg.pso.swarm_size;
    Rng rng(cfg.pso.seed);

    const BoundingBox box = BoundingBox::of(points);
    const Topology topology = Topology::round_robin(eta, cfg.k);
    const auto cells = anchor_cells(points, cfg.k, rng);
    auto initial_rows = [&]() {
        Matrix rows(eta, ds.dim());
        for (std::size_t i = 0; i < eta; ++i) {
            const auto& cell = cells[topology.neighborhood_of(i)];
            std::uniform_int_distribution<std::size_t> pick(0, cell.size() - 1);
            copy_row(points.row(cell[pick(rng)]), rows.row(i));
        }
        return rows;
    };

    SwarmSetup setup;
    setup.topology = topology;
    setup.rule = VelocityRule::center_of_gravity;
    setup.box = box;
    setup.initial_positions = initial_rows();
    setup.initial_pbest = initial_rows();
    apply_overrides(setup.initial_positions, hooks);

    // Every point goes to its nearest particle swarm-wide; a particle's
    // fitness is the mean distance of the points it attracts.
    auto fitness = [&points, n](const Matrix& positions, std::span<double> out) {
        std::vector<std::uint32_t> nearest(n);
        std::vector<double> dist2(n);
        simd::active().nearest(points.flat().data(), n, positions.flat().data(), positions.rows(), points.cols(),
                               nearest.data(), dist2.data());
        std::vector<double> sum(positions.rows(), 0.0);
        std::vector<std::size_t> count(positions.rows(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            sum[nearest[i]] += std::sqrt(dist2[i]);
            ++count[nearest[i]];
        }
        for (std::size_t p = 0; p < positions.rows(); ++p)
            out[p] = count[p] == 0 ? std::numeric_limits<double>::infinity()
                                   : sum[p] / static_cast<double>(count[p]);
    };

    // Particles that attract no points sit at +inf; if a whole neighbourhood
    // is in that state, its member whose pbest lies closest to any data point
    // leads it.
    auto selector = [&points](const Topology& topology, std::span<const Particle> particles,
                              std::size_t neighborhood) -> std::size_t {
        const std::size_t best = best_of(topology, particles, neighborhood);
        if (std::isfinite(particles[best].pbest_fitness)) return best;
        const auto& kernels = simd::active();
        std::size_t chosen = best;
        double chosen_d = std::numeric_limits<double>::infinity();
        for (auto i : topology.members(neighborhood)) {
            std::uint32_t idx = 0;
            double d = 0.0;
            // nearest data point to the particle's pbest: treat points as centroids
            kernels.nearest(particles[i].pbest_position.data(), 1, points.flat().data(), points.rows(),
                            points.cols(), &idx, &d);
            if (d < chosen_d) {
                chosen_d = d;
                chosen = i;
            }
        }
        return chosen;
    };

    Swarm swarm(cfg.pso, std::move(setup), fitness, std::move(rng), selector);
    swarm.run(hooks.on_iteration);

    const auto bests = swarm.neighborhood_bests();
    Matrix centroids(cfg.k, ds.dim());
    for (std::size_t c = 0; c < cfg.k; ++c) copy_row(swarm.particles()[bests[c]].pbest_position, centroids.row(c));
    Partition partition = assign_nearest(points, centroids);
    repair_empty_clusters(points, centroids, partition);
    return ClusterFit{centroids, partition,
                      make_run_result(ds, centroids, partition, cfg.algorithm, cfg.pso.seed,
                                      swarm.best_fitness_trace(), elapsed_ms(start), cfg)};
}

ClusterFit kmeans_run(const Dataset& ds, const KMeansConfig& cfg) {
    const auto start = Clock::now();
    KMeansFit fit = kmeans_fit(ds, cfg);
    RunResult result = make_run_result(ds, fit.centroids, fit.partition, Algorithm::kmeans, cfg.seed,
                                       std::move(fit.sse_trace), elapsed_ms(start), cfg);
    return ClusterFit{std::move(fit.centroids), std::move(fit.partition), std::move(result)};
}

ClusterFit fit_clusters(const Dataset& ds, const ClusterRunConfig& cfg, const FitHooks& hooks) {
    switch (cfg.algorithm) {
        case Algorithm::psoc: return psoc_fit(ds, cfg, hooks);
        case Algorithm::lpso: return lpso_fit(ds, cfg, hooks);
        case Algorithm::lcpso: return lcpso_fit(ds, cfg, hooks);
        case Algorithm::kmeans: break;
    }
    throw std::invalid_argument("fit_clusters: kmeans has its own entry point (kmeans_run)");
}

}  // namespace cogpso
