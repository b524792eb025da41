#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "cogpso/data.hpp"
#include "cogpso/matrix.hpp"
#include "cogpso/metrics.hpp"

namespace cogpso {

enum class KMeansInit { random_points, random_uniform_in_box };

std::string_view to_string(KMeansInit init) noexcept;
KMeansInit parse_kmeans_init(std::string_view name);

struct KMeansConfig {
    std::size_t k = 2;
    std::size_t max_iters = 1000;
    double tol = 1e-4;  // absolute SSE improvement below which iteration stops
    std::uint64_t seed = 0;
    KMeansInit init = KMeansInit::random_points;

    void validate() const;
};

struct KMeansFit {
    Matrix centroids;
    Partition partition;
    /// SSE after each iteration's centroid update.
    std::vector<double> sse_trace;
};

/// Lloyd iterations: assign, repair empty clusters, move centroids to member
/// means. Stops once the SSE improvement drops below `tol`, the partition is
/// unchanged, or `max_iters` is reached. Throws std::invalid_argument when
/// k < 1 or k > n.
KMeansFit kmeans_fit(const Dataset& ds, const KMeansConfig& cfg);

}  // namespace cogpso
