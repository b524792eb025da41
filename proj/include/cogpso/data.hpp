#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cogpso/matrix.hpp"

namespace cogpso {

/// Per-feature search bounds; min[j] <= max[j].
struct BoundingBox {
    std::vector<double> min;
    std::vector<double> max;

    std::size_t dim() const noexcept { return min.size(); }
    double extent(std::size_t j) const noexcept { return max[j] - min[j]; }

    /// Tightest box around the rows of `points`.
    static BoundingBox of(const Matrix& points);
    /// The box repeated `times` times, for particles that concatenate
    /// several centroids.
    BoundingBox tiled(std::size_t times) const;
};

/// n points in d dimensions, optionally with ground-truth class labels.
///
/// Labels are dense integer ids 0..C-1 assigned in order of first occurrence;
/// `label_names()[id]` is the original string. Immutable after construction.
class Dataset {
public:
    /// Throws std::invalid_argument if the matrix is empty, holds a
    /// non-finite value, or the labels do not match n.
    Dataset(std::string name, Matrix points, std::optional<std::vector<std::uint32_t>> labels = {},
            std::vector<std::string> label_names = {});

    /// Builds dense ids from raw label strings.
    static Dataset with_string_labels(std::string name, Matrix points,
                                      const std::vector<std::string>& raw_labels);

    const std::string& name() const noexcept { return name_; }
    const Matrix& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.rows(); }
    std::size_t dim() const noexcept { return points_.cols(); }

    bool has_labels() const noexcept { return labels_.has_value(); }
    const std::vector<std::uint32_t>& labels() const;
    const std::vector<std::string>& label_names() const noexcept { return label_names_; }
    /// Number of distinct classes; 0 when unlabeled.
    std::size_t class_count() const noexcept { return label_names_.size(); }

    Dataset renamed(std::string name) const;

private:
    std::string name_;
    Matrix points_;
    std::optional<std::vector<std::uint32_t>> labels_;
    std::vector<std::string> label_names_;
};

/// Malformed CSV input. `row` and `column` are 1-based positions in the file
/// (0 when not applicable).
class CsvError : public std::runtime_error {
public:
    CsvError(const std::string& message, std::size_t row = 0, std::size_t column = 0);
    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

/// Which column holds the class label.
struct LastColumn {
    bool operator==(const LastColumn&) const = default;
};
using LabelColumn = std::variant<LastColumn, std::size_t, std::string>;

/// Parses "last", a 0-based index, or a header name.
LabelColumn parse_label_column(const std::string& spec);

struct CsvOptions {
    std::optional<LabelColumn> label_column;
    bool has_header = false;
};

/// Reads a comma-separated file. Blank lines are skipped; fields are trimmed.
/// Throws CsvError on a missing or empty file, ragged rows, or a feature cell
/// that is not a finite number.
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

/// Writes features at round-trip precision, with a header (x0..x{d-1}[,label])
/// and the label name as the last column when labels are present.
void write_csv(const Dataset& ds, const std::filesystem::path& path);

/// Rescales every feature to [0,1]; constant features become 0. Returns the
/// original per-feature bounds.
std::pair<Dataset, BoundingBox> normalize_minmax(const Dataset& ds);

struct BlobSpec {
    std::size_t k = 2;
    std::size_t per_cluster = 50;
    std::size_t dim = 2;
    double spread = 0.05;
    std::uint64_t seed = 0;
};

/// k isotropic Gaussian clusters with centres uniform in [0,1]^d. Points are
/// grouped by component (labels 0,0,...,1,1,...). Deterministic in `seed`.
Dataset generate_blobs(const BlobSpec& spec);

}  // namespace cogpso
