#include "cogpso/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "cogpso/simd/kernels.hpp"

namespace cogpso {

Partition::Partition(std::vector<std::uint32_t> assignment, std::size_t k)
    : assignment_(std::move(assignment)), k_(k) {
    if (k_ == 0) throw std::invalid_argument("Partition: k must be >= 1");
    for (auto c : assignment_)
        if (c >= k_) throw std::invalid_argument("Partition: cluster id " + std::to_string(c) + " >= k");
}

std::vector<std::size_t> Partition::cluster_sizes() const {
    std::vector<std::size_t> sizes(k_, 0);
    for (auto c : assignment_) ++sizes[c];
    return sizes;
}

bool Partition::no_empty() const {
    for (auto s : cluster_sizes())
        if (s == 0) return false;
    return true;
}

void Partition::reassign(std::size_t i, std::uint32_t c) {
    if (c >= k_) throw std::invalid_argument("Partition::reassign: cluster id out of range");
    assignment_.at(i) = c;
}

bool is_valid_partition(const Partition& p, std::size_t n) {
    if (p.k() == 0 || p.size() != n) return false;
    for (auto c : p.assignment())
        if (c >= p.k()) return false;
    return p.no_empty();
}

Partition assign_nearest(const Matrix& points, const Matrix& centroids, Distance) {
    if (centroids.rows() == 0) throw std::invalid_argument("assign_nearest: no centroids");
    if (centroids.cols() != points.cols())
        throw std::invalid_argument("assign_nearest: centroid dimension does not match points");
    std::vector<std::uint32_t> index(points.rows());
    std::vector<double> dist2(points.rows());
    simd::active().nearest(points.flat().data(), points.rows(), centroids.flat().data(), centroids.rows(),
                           points.cols(), index.data(), dist2.data());
    return Partition(std::move(index), centroids.rows());
}

namespace {

void check_shapes(const Matrix& points, const Matrix& centroids, const Partition& partition) {
    if (partition.size() != points.rows()) throw std::invalid_argument("partition size does not match points");
    if (partition.k() != centroids.rows()) throw std::invalid_argument("partition k does not match centroids");
    if (centroids.cols() != points.cols()) throw std::invalid_argument("centroid dimension does not match points");
}

double distance_to_assigned(const Matrix& points, const Matrix& centroids, const Partition& partition,
                            std::size_t i) {
    const auto& kernels = simd::active();
    return kernels.squared_l2(points.row(i).data(), centroids.row(partition[i]).data(), points.cols());
}

}  // namespace

double quantization_error(const Matrix& points, const Matrix& centroids, const Partition& partition) {
    check_shapes(points, centroids, partition);
    std::vector<double> sum(centroids.rows(), 0.0);
    std::vector<std::size_t> count(centroids.rows(), 0);
    for (std::size_t i = 0; i < points.rows(); ++i) {
        sum[partition[i]] += std::sqrt(distance_to_assigned(points, centroids, partition, i));
        ++count[partition[i]];
    }
    double total = 0.0;
    std::size_t populated = 0;
    for (std::size_t c = 0; c < sum.size(); ++c) {
        if (count[c] == 0) continue;
        total += sum[c] / static_cast<double>(count[c]);
        ++populated;
    }
    if (populated == 0) throw std::invalid_argument("quantization_error: every cluster is empty");
    return total / static_cast<double>(populated);
}

double sse(const Matrix& points, const Matrix& centroids, const Partition& partition) {
    check_shapes(points, centroids, partition);
    double total = 0.0;
    for (std::size_t i = 0; i < points.rows(); ++i) total += distance_to_assigned(points, centroids, partition, i);
    return total;
}

std::size_t repair_empty_clusters(const Matrix& points, Matrix& centroids, Partition& partition) {
    check_shapes(points, centroids, partition);
    if (partition.k() > points.rows())
        throw std::invalid_argument("repair_empty_clusters: more clusters than points");
    std::size_t repairs = 0;
    auto sizes = partition.cluster_sizes();
    for (std::size_t empty = 0; empty < sizes.size(); ++empty) {
        if (sizes[empty] != 0) continue;
        std::size_t farthest = points.rows();
        double farthest_d = -1.0;
        for (std::size_t i = 0; i < points.rows(); ++i) {
            if (sizes[partition[i]] < 2) continue;
            const double d = distance_to_assigned(points, centroids, partition, i);
            if (d > farthest_d) {
                farthest_d = d;
                farthest = i;
            }
        }
        // k <= n guarantees some cluster still has two or more members.
        --sizes[partition[farthest]];
        partition.reassign(farthest, static_cast<std::uint32_t>(empty));
        ++sizes[empty];
        auto target = centroids.row(empty);
        auto source = points.row(farthest);
        std::copy(source.begin(), source.end(), target.begin());
        ++repairs;
    }
    return repairs;
}

namespace {

std::vector<std::uint32_t> compact(std::span<const std::uint32_t> labels, std::size_t& distinct) {
    std::unordered_map<std::uint32_t, std::uint32_t> ids;
    std::vector<std::uint32_t> out;
    out.reserve(labels.size());
    for (auto l : labels) {
        auto [it, inserted] = ids.try_emplace(l, static_cast<std::uint32_t>(ids.size()));
        out.push_back(it->second);
    }
    distinct = ids.size();
    return out;
}

using Wide = __int128;

Wide pairs(std::uint64_t m) { return static_cast<Wide>(m) * static_cast<Wide>(m - (m > 0 ? 1 : 0)) / 2; }

}  // namespace

Contingency contingency(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
    if (a.size() != b.size()) throw std::invalid_argument("contingency: label vectors differ in length");
    Contingency t;
    const auto ca = compact(a, t.rows);
    const auto cb = compact(b, t.cols);
    t.n = a.size();
    t.table.assign(t.rows * t.cols, 0);
    t.row_sums.assign(t.rows, 0);
    t.col_sums.assign(t.cols, 0);
    for (std::size_t i = 0; i < ca.size(); ++i) {
        ++t.table[ca[i] * t.cols + cb[i]];
        ++t.row_sums[ca[i]];
        ++t.col_sums[cb[i]];
    }
    return t;
}

double adjusted_rand_index(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
    if (a.size() != b.size()) throw std::invalid_argument("adjusted_rand_index: length mismatch");
    if (a.size() < 2) throw std::invalid_argument("adjusted_rand_index: need at least two points");
    const Contingency t = contingency(a, b);

    // Pair counts are integers; working in 2 * C(n,2) scaled integers keeps
    // the hand-checkable cases (and the symmetry) exact.
    Wide index = 0;
    for (auto cell : t.table) index += pairs(cell);
    Wide sum_rows = 0;
    for (auto s : t.row_sums) sum_rows += pairs(s);
    Wide sum_cols = 0;
    for (auto s : t.col_sums) sum_cols += pairs(s);
    const Wide total = pairs(t.n);

    // ARI = (index - rows*cols/total) / ((rows+cols)/2 - rows*cols/total)
    const Wide numerator = 2 * (index * total - sum_rows * sum_cols);
    const Wide denominator = (sum_rows + sum_cols) * total - 2 * sum_rows * sum_cols;
    if (denominator == 0) return 1.0;
    return static_cast<double>(static_cast<long double>(numerator) / static_cast<long double>(denominator));
}

double adjusted_rand_index(const Partition& a, const Partition& b) {
    return adjusted_rand_index(std::span<const std::uint32_t>(a.assignment()),
                               std::span<const std::uint32_t>(b.assignment()));
}

}  // namespace cogpso
