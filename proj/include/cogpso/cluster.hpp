#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cogpso/data.hpp"
#include "cogpso/kmeans.hpp"
#include "cogpso/matrix.hpp"
#include "cogpso/metrics.hpp"
#include "cogpso/pso.hpp"

namespace cogpso {

enum class Algorithm { kmeans, psoc, lpso, lcpso };

std::string_view to_string(Algorithm a) noexcept;
Algorithm parse_algorithm(std::string_view name);
bool is_pso(Algorithm a) noexcept;

struct ClusterRunConfig {
    std::size_t k = 2;
    PsoConfig pso{};
    Algorithm algorithm = Algorithm::psoc;
    /// lpso only. 0 selects ceil(swarm_size / k), at least 2.
    std::size_t lpso_neighborhood_size = 0;

    std::size_t effective_lpso_neighborhood_size() const noexcept;
    /// Throws std::invalid_argument for configurations the driver cannot run
    /// on a dataset of `n` points.
    void validate(std::size_t n) const;
};

/// Outcome of one clustering run, whatever the algorithm.
struct RunResult {
    std::string dataset;
    Algorithm algorithm = Algorithm::psoc;
    std::uint64_t seed = 0;
    std::optional<double> ari;  // empty when the dataset has no labels
    double quantization_error = 0.0;
    double sse = 0.0;
    /// k-means: SSE per iteration. PSO drivers: lowest pbest fitness per
    /// iteration.
    std::vector<double> best_fitness_trace;
    double runtime_ms = 0.0;
    std::variant<KMeansConfig, ClusterRunConfig> config;

    std::size_t iterations() const noexcept { return best_fitness_trace.size(); }
};

struct ClusterFit {
    Matrix centroids;
    Partition partition;
    RunResult result;
};

struct FitHooks {
    IterationObserver on_iteration;
    /// Overrides the initial position of particle i with row i (as many rows
    /// as given).
    std::optional<Matrix> initial_positions;
};

/// Assembles a RunResult: ARI against the dataset labels when present,
/// quantization error and SSE of the final centroids.
RunResult make_run_result(const Dataset& ds, const Matrix& centroids, const Partition& partition,
                          Algorithm algorithm, std::uint64_t seed, std::vector<double> trace, double runtime_ms,
                          std::variant<KMeansConfig, ClusterRunConfig> config);

/// Global-best PSO: each particle is K concatenated centroids, fitness is the
/// quantization error of its nearest-centroid partition.
ClusterFit psoc_fit(const Dataset& ds, const ClusterRunConfig& cfg, const FitHooks& hooks = {});

/// As psoc_fit, but each particle follows the best of its contiguous index
/// block of lpso_neighborhood_size particles.
ClusterFit lpso_fit(const Dataset& ds, const ClusterRunConfig& cfg, const FitHooks& hooks = {});

/// Centre-of-gravity PSO: every particle is a single centroid, particles are
/// split round-robin into k neighbourhoods (one per cluster), points go to
/// their nearest particle, and each neighbourhood's best particle is that
/// cluster's centroid.
ClusterFit lcpso_fit(const Dataset& ds, const ClusterRunConfig& cfg, const FitHooks& hooks = {});

/// Runs k-means and wraps it in the common result type.
ClusterFit kmeans_run(const Dataset& ds, const KMeansConfig& cfg);

/// Dispatches on cfg.algorithm (psoc / lpso / lcpso).
ClusterFit fit_clusters(const Dataset& ds, const ClusterRunConfig& cfg, const FitHooks& hooks = {});

}  // namespace cogpso
