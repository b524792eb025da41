#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "cogpso/cluster.hpp"
#include "cogpso/data.hpp"

namespace cogpso {

/// One dataset entry: a CSV file or a blob generator.
struct DatasetSource {
    std::string name;  // defaults to the file stem / generator name
    std::optional<std::filesystem::path> csv;
    CsvOptions csv_options{LabelColumn{LastColumn{}}, true};
    std::optional<BlobSpec> generator;
    /// Cluster count; defaults to the number of label classes.
    std::optional<std::size_t> k;
};

/// Per-algorithm overrides of the built-in defaults. Unset fields keep them.
struct AlgorithmParams {
    std::optional<std::size_t> swarm_size;
    std::optional<std::size_t> max_iters;
    std::optional<double> omega_start;
    std::optional<double> omega_end;
    std::optional<double> ac1;
    std::optional<double> ac2;
    std::optional<double> v_max;
    std::optional<std::size_t> neighborhood_size;  // lpso
    std::optional<CogVariant> cog_variant;         // lcpso
    std::optional<double> tol;                     // kmeans
    std::optional<KMeansInit> init;                // kmeans
};

struct SweepSpec {
    std::vector<std::size_t> swarm_sizes;  // strictly increasing
};

struct ExperimentConfig {
    std::vector<DatasetSource> datasets;
    std::vector<Algorithm> algorithms{Algorithm::kmeans, Algorithm::psoc, Algorithm::lpso, Algorithm::lcpso};
    std::size_t replicates = 10;
    std::uint64_t base_seed = 0;
    bool normalize = true;
    std::map<Algorithm, AlgorithmParams> params;
    std::optional<SweepSpec> sweep;

    void validate() const;
};

/// Parses the JSON config document. Every field is optional except
/// "datasets"; relative CSV paths resolve against `base_dir`. Unknown keys
/// are rejected.
ExperimentConfig parse_experiment_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Options that affect how an experiment runs but not what it computes.
struct RunOptions {
    std::size_t workers = 1;
    /// Fill the runtime column of the summary. Wall-clock values make the
    /// summary differ between otherwise identical runs.
    bool record_timing = false;
};

/// The PSO or k-means configuration a cell of the experiment runs with.
ClusterRunConfig pso_config_for(const ExperimentConfig& cfg, Algorithm algorithm, std::size_t k, std::uint64_t seed);
KMeansConfig kmeans_config_for(const ExperimentConfig& cfg, std::size_t k, std::uint64_t seed);

struct RunRecord {
    std::string dataset;
    Algorithm algorithm = Algorithm::kmeans;
    std::size_t replicate = 0;
    std::uint64_t seed = 0;
    std::optional<RunResult> result;
    std::optional<std::string> error;
};

struct SummaryRow {
    std::string dataset;
    Algorithm algorithm = Algorithm::kmeans;
    std::optional<double> ari_median;  // empty for unlabeled datasets
    std::optional<double> ari_mean;
    std::optional<double> ari_std;
    double fitness_median = 0.0;  // quantization error
    std::optional<double> runtime_ms_median;
    std::size_t replicates = 0;
    std::uint64_t seed_base = 0;

    bool operator==(const SummaryRow&) const = default;
};

struct ExperimentResult {
    std::vector<SummaryRow> summary;  // cells with every replicate successful
    std::vector<RunRecord> runs;      // in (dataset, algorithm, replicate) order

    bool ok() const noexcept;
};

/// Runs every (dataset, algorithm, replicate) cell with seed base_seed + r.
/// A failing cell becomes an error record; the rest still run. Output does
/// not depend on `workers` or completion order.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& options = {});

struct SweepPoint {
    std::string dataset;
    Algorithm algorithm = Algorithm::lcpso;
    std::size_t swarm_size = 0;
    std::optional<double> ari_median;
    std::optional<double> ari_mean;
    std::optional<double> ari_std;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    std::vector<RunRecord> runs;

    bool ok() const noexcept;
};

/// Repeats run_experiment once per swarm size. Throws std::invalid_argument
/// if the config has no sweep or names a non-PSO algorithm.
SweepResult run_sweep(const ExperimentConfig& cfg, const RunOptions& options = {});

struct Stats {
    double median = 0.0;
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation; 0 for a single value
};
Stats summarize(std::span<const double> values);

void write_summary_csv(std::span<const SummaryRow> rows, std::ostream& out);
std::vector<SummaryRow> read_summary_csv(std::istream& in);

nlohmann::json to_json(const RunResult& r);
nlohmann::json to_json(const RunRecord& r);
void write_runs_jsonl(std::span<const RunRecord> runs, std::ostream& out);

void write_sweep_csv(std::span<const SweepPoint> points, std::ostream& out);
/// Two whitespace-separated columns, swarm_size and median ARI, for one
/// (dataset, algorithm) pair.
void write_sweep_dat(std::span<const SweepPoint> points, const std::string& dataset, Algorithm algorithm,
                     std::ostream& out);

/// summary.csv + runs.jsonl under `dir` (created if needed).
void write_experiment_outputs(const ExperimentResult& result, const std::filesystem::path& dir);
/// sweep.csv, one sweep_<dataset>_<algorithm>.dat per pair, and runs.jsonl.
void write_sweep_outputs(const SweepResult& result, const std::filesystem::path& dir);

}  // namespace cogpso
