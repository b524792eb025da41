#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cogpso/matrix.hpp"

namespace cogpso {

/// Hard assignment of n points to clusters 0..k-1. Every point has exactly
/// one id by construction; whether every cluster is populated is checked
/// separately via no_empty().
class Partition {
public:
    Partition() = default;
    /// Throws std::invalid_argument if k == 0 or an id is >= k.
    Partition(std::vector<std::uint32_t> assignment, std::size_t k);

    std::size_t size() const noexcept { return assignment_.size(); }
    std::size_t k() const noexcept { return k_; }
    const std::vector<std::uint32_t>& assignment() const noexcept { return assignment_; }
    std::uint32_t operator[](std::size_t i) const noexcept { return assignment_[i]; }

    std::vector<std::size_t> cluster_sizes() const;
    /// True when every cluster id 0..k-1 occurs at least once.
    bool no_empty() const;

    /// Moves point i to cluster c.
    void reassign(std::size_t i, std::uint32_t c);

    bool operator==(const Partition&) const = default;

private:
    std::vector<std::uint32_t> assignment_;
    std::size_t k_ = 0;
};

/// Checks the three hard-partition properties for a dataset of n points:
/// one id per point, ids cover all n points, and no cluster is empty.
bool is_valid_partition(const Partition& p, std::size_t n);

enum class Distance { euclidean };

/// Nearest centroid per point, lowest index on ties. Throws on an empty
/// centroid set or a dimension mismatch.
Partition assign_nearest(const Matrix& points, const Matrix& centroids,
                         Distance distance = Distance::euclidean);

/// Mean over non-empty clusters of the mean Euclidean distance between each
/// member and its centroid. Throws if every cluster is empty.
double quantization_error(const Matrix& points, const Matrix& centroids, const Partition& partition);

/// Sum of squared Euclidean distances to the assigned centroids.
double sse(const Matrix& points, const Matrix& centroids, const Partition& partition);

/// Makes every cluster non-empty. While some cluster c is empty, the point
/// farthest from its assigned centroid (among clusters with >= 2 members,
/// lowest index on ties) becomes centroid c and moves to cluster c.
/// Requires k <= n. Returns the number of repairs made.
std::size_t repair_empty_clusters(const Matrix& points, Matrix& centroids, Partition& partition);

/// Pair-count cross tabulation of two labelings.
struct Contingency {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint64_t> table;  // rows x cols, row-major
    std::vector<std::uint64_t> row_sums;
    std::vector<std::uint64_t> col_sums;
    std::uint64_t n = 0;

    std::uint64_t at(std::size_t r, std::size_t c) const noexcept { return table[r * cols + c]; }
};

/// Labels may be any non-negative ids; they are compacted internally.
Contingency contingency(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b);

/// Hubert-Arabie adjusted Rand index. Symmetric, invariant under relabeling,
/// 1 for identical partitions (including the degenerate case where the
/// expected and maximum index coincide). Throws std::invalid_argument on a
/// length mismatch or fewer than two points.
double adjusted_rand_index(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b);
double adjusted_rand_index(const Partition& a, const Partition& b);

}  // namespace cogpso
