#include "cogpso/kmeans.hpp"

#include <stdexcept>
#include <string>

#include "cogpso/rng.hpp"

namespace cogpso {

std::string_view to_string(KMeansInit init) noexcept {
    return init == KMeansInit::random_points ? "random-points" : "random-uniform-in-box";
}

KMeansInit parse_kmeans_init(std::string_view name) {
    if (name == "random-points") return KMeansInit::random_points;
    if (name == "random-uniform-in-box") return KMeansInit::random_uniform_in_box;
    throw std::invalid_argument("unknown k-means init '" + std::string(name) + "'");
}

void KMeansConfig::validate() const {
    if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
    if (max_iters < 1) throw std::invalid_argument("kmeans: max_iters must be >= 1");
    if (!(tol >= 0.0)) throw std::invalid_argument("kmeans: tol must be >= 0");
}

namespace {

Matrix initial_centroids(const Dataset& ds, const KMeansConfig& cfg, Rng& rng) {
    Matrix centroids(cfg.k, ds.dim());
    if (cfg.init == KMeansInit::random_points) {
        const auto picks = sample_without_replacement(ds.size(), cfg.k, rng);
        for (std::size_t c = 0; c < cfg.k; ++c) {
            auto src = ds.points().row(picks[c]);
            std::copy(src.begin(), src.end(), centroids.row(c).begin());
        }
    } else {
        const auto box = BoundingBox::of(ds.points());
        for (std::size_t c = 0; c < cfg.k; ++c)
            for (std::size_t j = 0; j < ds.dim(); ++j) centroids(c, j) = uniform(rng, box.min[j], box.max[j]);
    }
    return centroids;
}

void move_to_means(const Matrix& points, const Partition& partition, Matrix& centroids) {
    Matrix sums(centroids.rows(), centroids.cols());
    std::vector<std::size_t> counts(centroids.rows(), 0);
    for (std::size_t i = 0; i < points.rows(); ++i) {
        auto p = points.row(i);
        auto s = sums.row(partition[i]);
        for (std::size_t j = 0; j < p.size(); ++j) s[j] += p[j];
        ++counts[partition[i]];
    }
    for (std::size_t c = 0; c < centroids.rows(); ++c) {
        if (counts[c] == 0) continue;
        auto s = sums.row(c);
        auto out = centroids.row(c);
        for (std::size_t j = 0; j < s.size(); ++j) out[j] = s[j] / static_cast<double>(counts[c]);
    }
}

}  // namespace

KMeansFit kmeans_fit(const Dataset& ds, const KMeansConfig& cfg) {
    cfg.validate();
    if (cfg.k > ds.size())
        throw std::invalid_argument("kmeans: k (" + std::to_string(cfg.k) + ") exceeds point count (" +
                                    std::to_string(ds.size()) + ")");
    Rng rng(cfg.seed);
    const Matrix& points = ds.points();
    KMeansFit fit{initial_centroids(ds, cfg, rng), Partition{}, {}};

    for (std::size_t iter = 0; iter < cfg.max_iters; ++iter) {
        Partition next = assign_nearest(points, fit.centroids);
        repair_empty_clusters(points, fit.centroids, next);
        const bool unchanged = iter > 0 && next == fit.partition;
        fit.partition = std::move(next);
        move_to_means(points, fit.partition, fit.centroids);
        const double current = sse(points, fit.centroids, fit.partition);
        const bool converged = !fit.sse_trace.empty() && fit.sse_trace.back() - current < cfg.tol;
        fit.sse_trace.push_back(current);
        if (unchanged || converged) break;
    }
    return fit;
}

}  // namespace cogpso
