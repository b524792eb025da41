#include "cogpso/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string_view>
#include <unordered_map>

#include "cogpso/rng.hpp"

namespace cogpso {

BoundingBox BoundingBox::of(const Matrix& points) {
    BoundingBox box;
    box.min.assign(points.cols(), 0.0);
    box.max.assign(points.cols(), 0.0);
    if (points.rows() == 0) return box;
    auto first = points.row(0);
    std::copy(first.begin(), first.end(), box.min.begin());
    std::copy(first.begin(), first.end(), box.max.begin());
    for (std::size_t i = 1; i < points.rows(); ++i) {
        auto p = points.row(i);
        for (std::size_t j = 0; j < p.size(); ++j) {
            box.min[j] = std::min(box.min[j], p[j]);
            box.max[j] = std::max(box.max[j], p[j]);
        }
    }
    return box;
}

BoundingBox BoundingBox::tiled(std::size_t times) const {
    BoundingBox out;
    out.min.reserve(min.size() * times);
    out.max.reserve(max.size() * times);
    for (std::size_t t = 0; t < times; ++t) {
        out.min.insert(out.min.end(), min.begin(), min.end());
        out.max.insert(out.max.end(), max.begin(), max.end());
    }
    return out;
}

Dataset::Dataset(std::string name, Matrix points, std::optional<std::vector<std::uint32_t>> labels,
                 std::vector<std::string> label_names)
    : name_(std::move(name)),
      points_(std::move(points)),
      labels_(std::move(labels)),
      label_names_(std::move(label_names)) {
    if (points_.rows() == 0 || points_.cols() == 0)
        throw std::invalid_argument("Dataset '" + name_ + "': need at least one point and one feature");
    for (double v : points_.flat())
        if (!std::isfinite(v))
            throw std::invalid_argument("Dataset '" + name_ + "': non-finite feature value");
    if (labels_) {
        if (labels_->size() != points_.rows())
            throw std::invalid_argument("Dataset '" + name_ + "': label count does not match point count");
        std::uint32_t max_id = 0;
        for (auto id : *labels_) max_id = std::max(max_id, id);
        if (label_names_.empty()) {
            for (std::uint32_t id = 0; id <= max_id; ++id) label_names_.push_back(std::to_string(id));
        } else if (max_id >= label_names_.size()) {
            throw std::invalid_argument("Dataset '" + name_ + "': label id without a name");
        }
    } else {
        label_names_.clear();
    }
}

Dataset Dataset::with_string_labels(std::string name, Matrix points,
                                    const std::vector<std::string>& raw_labels) {
    std::unordered_map<std::string, std::uint32_t> ids;
    std::vector<std::string> names;
    std::vector<std::uint32_t> labels;
    labels.reserve(raw_labels.size());
    for (const auto& raw : raw_labels) {
        auto [it, inserted] = ids.try_emplace(raw, static_cast<std::uint32_t>(names.size()));
        if (inserted) names.push_back(raw);
        labels.push_back(it->second);
    }
    return Dataset(std::move(name), std::move(points), std::move(labels), std::move(names));
}

const std::vector<std::uint32_t>& Dataset::labels() const {
    if (!labels_) throw std::logic_error("Dataset '" + name_ + "' has no labels");
    return *labels_;
}

Dataset Dataset::renamed(std::string name) const {
    Dataset copy = *this;
    copy.name_ = std::move(name);
    return copy;
}

CsvError::CsvError(const std::string& message, std::size_t row, std::size_t column)
    : std::runtime_error(row == 0 ? message
                                  : message + " (row " + std::to_string(row) +
                                        (column == 0 ? "" : ", column " + std::to_string(column)) + ")"),
      row_(row),
      column_(column) {}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

bool is_blank(std::string_view line) { return trim(line).empty(); }

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

}  // namespace

LabelColumn parse_label_column(const std::string& spec) {
    if (spec == "last") return LastColumn{};
    if (!spec.empty() && std::all_of(spec.begin(), spec.end(), [](char c) { return c >= '0' && c <= '9'; }))
        return static_cast<std::size_t>(std::stoull(spec));
    return spec;
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) throw CsvError("cannot open CSV file '" + path.string() + "'");

    std::vector<std::string> lines;
    std::vector<std::size_t> line_numbers;
    std::string line;
    for (std::size_t number = 1; std::getline(in, line); ++number) {
        if (is_blank(line)) continue;
        lines.push_back(line);
        line_numbers.push_back(number);
    }
    if (lines.empty()) throw CsvError("CSV file '" + path.string() + "' is empty");

    std::vector<std::string_view> header;
    std::size_t first_data = 0;
    if (options.has_header) {
        header = split_fields(lines[0]);
        first_data = 1;
        if (lines.size() == 1) throw CsvError("CSV file '" + path.string() + "' has a header but no data rows");
    }
    const std::size_t columns = split_fields(lines[first_data]).size();
    if (options.has_header && header.size() != columns)
        throw CsvError("header has " + std::to_string(header.size()) + " fields but data has " +
                           std::to_string(columns),
                       line_numbers[0]);

    std::optional<std::size_t> label_index;
    if (options.label_column) {
        label_index = std::visit(
            [&](const auto& spec) -> std::size_t {
                using T = std::decay_t<decltype(spec)>;
                if constexpr (std::is_same_v<T, LastColumn>) {
                    return columns - 1;
                } else if constexpr (std::is_same_v<T, std::size_t>) {
                    if (spec >= columns)
                        throw CsvError("label column index " + std::to_string(spec) + " out of range");
                    return spec;
                } else {
                    if (!options.has_header)
                        throw CsvError("label column '" + spec + "' given by name but the file has no header");
                    auto it = std::find(header.begin(), header.end(), spec);
                    if (it == header.end()) throw CsvError("no column named '" + spec + "' in header");
                    return static_cast<std::size_t>(it - header.begin());
                }
            },
            *options.label_column);
    }
    const std::size_t dim = columns - (label_index ? 1 : 0);
    if (dim == 0) throw CsvError("CSV file '" + path.string() + "' has no feature columns");

    const std::size_t n = lines.size() - first_data;
    std::vector<double> values;
    values.reserve(n * dim);
    std::vector<std::string> raw_labels;
    for (std::size_t r = first_data; r < lines.size(); ++r) {
        const auto fields = split_fields(lines[r]);
        if (fields.size() != columns)
            throw CsvError("expected " + std::to_string(columns) + " fields, found " +
                               std::to_string(fields.size()),
                           line_numbers[r]);
        for (std::size_t c = 0; c < columns; ++c) {
            if (label_index && c == *label_index) {
                raw_labels.emplace_back(fields[c]);
                continue;
            }
            double v = 0.0;
            const auto* begin = fields[c].data();
            const auto* end = begin + fields[c].size();
            auto [ptr, ec] = std::from_chars(begin, end, v);
            if (fields[c].empty() || ec != std::errc() || ptr != end || !std::isfinite(v))
                throw CsvError("non-numeric feature value '" + std::string(fields[c]) + "'", line_numbers[r],
                               c + 1);
            values.push_back(v);
        }
    }

    Matrix points(n, dim, std::move(values));
    const std::string name = path.stem().string();
    if (label_index) return Dataset::with_string_labels(name, std::move(points), raw_labels);
    return Dataset(name, std::move(points));
}

void write_csv(const Dataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write CSV file '" + path.string() + "'");
    for (std::size_t j = 0; j < ds.dim(); ++j) out << (j ? "," : "") << 'x' << j;
    if (ds.has_labels()) out << ",label";
    out << '\n';
    for (std::size_t i = 0; i < ds.size(); ++i) {
        auto p = ds.points().row(i);
        for (std::size_t j = 0; j < p.size(); ++j) out << (j ? "," : "") << format_double(p[j]);
        if (ds.has_labels()) out << ',' << ds.label_names()[ds.labels()[i]];
        out << '\n';
    }
    if (!out) throw std::runtime_error("error writing CSV file '" + path.string() + "'");
}

std::pair<Dataset, BoundingBox> normalize_minmax(const Dataset& ds) {
    BoundingBox box = BoundingBox::of(ds.points());
    Matrix scaled = ds.points();
    for (std::size_t i = 0; i < scaled.rows(); ++i) {
        auto p = scaled.row(i);
        for (std::size_t j = 0; j < p.size(); ++j) {
            const double extent = box.extent(j);
            p[j] = extent > 0.0 ? (p[j] - box.min[j]) / extent : 0.0;
        }
    }
    std::optional<std::vector<std::uint32_t>> labels;
    if (ds.has_labels()) labels = ds.labels();
    return {Dataset(ds.name(), std::move(scaled), std::move(labels), ds.label_names()), std::move(box)};
}

Dataset generate_blobs(const BlobSpec& spec) {
    if (spec.k < 1 || spec.per_cluster < 1 || spec.dim < 1)
        throw std::invalid_argument("generate_blobs: k, per_cluster and dim must be >= 1");
    if (!(spec.spread > 0.0)) throw std::invalid_argument("generate_blobs: spread must be > 0");

    Rng rng(spec.seed);
    Matrix centres(spec.k, spec.dim);
    for (double& c : centres.flat()) c = uniform(rng, 0.0, 1.0);

    std::normal_distribution<double> noise(0.0, spec.spread);
    Matrix points(spec.k * spec.per_cluster, spec.dim);
    std::vector<std::uint32_t> labels(points.rows());
    for (std::size_t c = 0; c < spec.k; ++c) {
        for (std::size_t m = 0; m < spec.per_cluster; ++m) {
            const std::size_t i = c * spec.per_cluster + m;
            auto p = points.row(i);
            auto centre = centres.row(c);
            for (std::size_t j = 0; j < spec.dim; ++j) p[j] = centre[j] + noise(rng);
            labels[i] = static_cast<std::uint32_t>(c);
        }
    }
    std::ostringstream name;
    name << "blobs_k" << spec.k << "_n" << spec.per_cluster << "_d" << spec.dim;
    return Dataset(name.str(), std::move(points), std::move(labels));
}

}  // namespace cogpso
