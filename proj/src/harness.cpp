#include "cogpso/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace cogpso {

using nlohmann::json;

namespace {

constexpr std::size_t kDefaultSwarm = 30;
constexpr std::size_t kLcpsoParticlesPerCluster = 10;
constexpr std::size_t kDefaultPsoIters = 200;

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
    if (!obj.is_object()) throw std::invalid_argument(where + ": expected a JSON object");
    for (const auto& [key, _] : obj.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw std::invalid_argument(where + ": unknown key '" + key + "'");
}

template <class T>
void read_opt(const json& obj, const char* key, std::optional<T>& out) {
    if (obj.contains(key) && !obj.at(key).is_null()) out = obj.at(key).get<T>();
}

AlgorithmParams parse_params(const json& obj, const std::string& where) {
    reject_unknown_keys(obj,
                        {"swarm_size", "max_iters", "omega_start", "omega_end", "omega", "ac1", "ac2", "v_max",
                         "neighborhood_size", "cog_variant", "tol", "init"},
                        where);
    AlgorithmParams p;
    read_opt(obj, "swarm_size", p.swarm_size);
    read_opt(obj, "max_iters", p.max_iters);
    read_opt(obj, "omega_start", p.omega_start);
    read_opt(obj, "omega_end", p.omega_end);
    if (obj.contains("omega")) {
        const double w = obj.at("omega").get<double>();
        p.omega_start = w;
        p.omega_end = w;
    }
    read_opt(obj, "ac1", p.ac1);
    read_opt(obj, "ac2", p.ac2);
    read_opt(obj, "v_max", p.v_max);
    read_opt(obj, "neighborhood_size", p.neighborhood_size);
    read_opt(obj, "tol", p.tol);
    if (obj.contains("cog_variant")) p.cog_variant = parse_cog_variant(obj.at("cog_variant").get<std::string>());
    if (obj.contains("init")) p.init = parse_kmeans_init(obj.at("init").get<std::string>());
    return p;
}

DatasetSource parse_dataset(const json& obj, const std::filesystem::path& base_dir, std::size_t index) {
    const std::string where = "datasets[" + std::to_string(index) + "]";
    reject_unknown_keys(obj, {"name", "csv", "label_column", "has_header", "generator", "k"}, where);
    DatasetSource src;
    if (obj.contains("name")) src.name = obj.at("name").get<std::string>();
    read_opt(obj, "k", src.k);
    if (obj.contains("csv")) {
        std::filesystem::path p = obj.at("csv").get<std::string>();
        src.csv = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
        if (src.name.empty()) src.name = p.stem().string();
    }
    if (obj.contains("has_header")) src.csv_options.has_header = obj.at("has_header").get<bool>();
    if (obj.contains("label_column")) {
        const auto& lc = obj.at("label_column");
        if (lc.is_null())
            src.csv_options.label_column.reset();
        else if (lc.is_number_unsigned())
            src.csv_options.label_column = lc.get<std::size_t>();
        else
            src.csv_options.label_column = parse_label_column(lc.get<std::string>());
    }
    if (obj.contains("generator")) {
        const auto& g = obj.at("generator");
        reject_unknown_keys(g, {"k", "per_cluster", "dim", "spread", "seed"}, where + ".generator");
        BlobSpec spec;
        spec.k = g.value("k", spec.k);
        spec.per_cluster = g.value("per_cluster", spec.per_cluster);
        spec.dim = g.value("dim", spec.dim);
        spec.spread = g.value("spread", spec.spread);
        spec.seed = g.value("seed", spec.seed);
        src.generator = spec;
        if (src.name.empty())
            src.name = "blobs_k" + std::to_string(spec.k) + "_n" + std::to_string(spec.per_cluster) + "_d" +
                       std::to_string(spec.dim) + "_s" + std::to_string(spec.seed);
    }
    if (src.csv.has_value() == src.generator.has_value())
        throw std::invalid_argument(where + ": give exactly one of 'csv' or 'generator'");
    return src;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (datasets.empty()) throw std::invalid_argument("experiment: no datasets");
    if (algorithms.empty()) throw std::invalid_argument("experiment: no algorithms");
    if (replicates < 1) throw std::invalid_argument("experiment: replicates must be >= 1");
    std::set<std::string> names;
    for (const auto& d : datasets)
        if (!names.insert(d.name).second) throw std::invalid_argument("experiment: duplicate dataset name '" + d.name + "'");
    if (sweep) {
        if (sweep->swarm_sizes.empty()) throw std::invalid_argument("sweep: no values");
        for (std::size_t i = 1; i < sweep->swarm_sizes.size(); ++i)
            if (sweep->swarm_sizes[i] <= sweep->swarm_sizes[i - 1])
                throw std::invalid_argument("sweep: values must be strictly increasing");
    }
}

ExperimentConfig parse_experiment_config(const json& doc, const std::filesystem::path& base_dir) {
    reject_unknown_keys(doc, {"datasets", "algorithms", "replicates", "base_seed", "normalize", "params", "sweep"},
                        "config");
    ExperimentConfig cfg;
    if (!doc.contains("datasets") || !doc.at("datasets").is_array())
        throw std::invalid_argument("config: 'datasets' must be an array");
    for (std::size_t i = 0; i < doc.at("datasets").size(); ++i)
        cfg.datasets.push_back(parse_dataset(doc.at("datasets").at(i), base_dir, i));
    if (doc.contains("algorithms")) {
        cfg.algorithms.clear();
        for (const auto& a : doc.at("algorithms")) cfg.algorithms.push_back(parse_algorithm(a.get<std::string>()));
    }
    cfg.replicates = doc.value("replicates", cfg.replicates);
    cfg.base_seed = doc.value("base_seed", cfg.base_seed);
    cfg.normalize = doc.value("normalize", cfg.normalize);
    if (doc.contains("params")) {
        for (const auto& [name, obj] : doc.at("params").items())
            cfg.params[parse_algorithm(name)] = parse_params(obj, "params." + name);
    }
    if (doc.contains("sweep")) {
        const auto& s = doc.at("sweep");
        reject_unknown_keys(s, {"param", "values"}, "sweep");
        const auto param = s.value("param", std::string("swarm_size"));
        if (param != "swarm_size" && param != "swarm-size")
            throw std::invalid_argument("sweep: only 'swarm_size' can be swept");
        cfg.sweep = SweepSpec{s.at("values").get<std::vector<std::size_t>>()};
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config '" + path.string() + "': " + e.what());
    }
    return parse_experiment_config(doc, path.parent_path());
}

ClusterRunConfig pso_config_for(const ExperimentConfig& cfg, Algorithm algorithm, std::size_t k, std::uint64_t seed) {
    ClusterRunConfig run;
    run.k = k;
    run.algorithm = algorithm;
    run.pso.seed = seed;
    run.pso.max_iters = kDefaultPsoIters;
    run.pso.swarm_size = algorithm == Algorithm::lcpso ? kLcpsoParticlesPerCluster * k : kDefaultSwarm;
    if (auto it = cfg.params.find(algorithm); it != cfg.params.end()) {
        const auto& p = it->second;
        if (p.swarm_size) run.pso.swarm_size = *p.swarm_size;
        if (p.max_iters) run.pso.max_iters = *p.max_iters;
        if (p.omega_start) run.pso.omega.start = *p.omega_start;
        if (p.omega_end) run.pso.omega.end = *p.omega_end;
        if (p.ac1) run.pso.ac1 = *p.ac1;
        if (p.ac2) run.pso.ac2 = *p.ac2;
        if (p.v_max) run.pso.v_max = *p.v_max;
        if (p.neighborhood_size) run.lpso_neighborhood_size = *p.neighborhood_size;
        if (p.cog_variant) run.pso.cog_variant = *p.cog_variant;
    }
    return run;
}

KMeansConfig kmeans_config_for(const ExperimentConfig& cfg, std::size_t k, std::uint64_t seed) {
    KMeansConfig km;
    km.k = k;
    km.seed = seed;
    if (auto it = cfg.params.find(Algorithm::kmeans); it != cfg.params.end()) {
        const auto& p = it->second;
        if (p.max_iters) km.max_iters = *p.max_iters;
        if (p.tol) km.tol = *p.tol;
        if (p.init) km.init = *p.init;
    }
    return km;
}

bool ExperimentResult::ok() const noexcept {
    return std::none_of(runs.begin(), runs.end(), [](const RunRecord& r) { return r.error.has_value(); });
}

bool SweepResult::ok() const noexcept {
    return std::none_of(runs.begin(), runs.end(), [](const RunRecord& r) { return r.error.has_value(); });
}

Stats summarize(std::span<const double> values) {
    Stats s;
    if (values.empty()) return s;
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    s.median = n % 2 == 1 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(n);
    if (n > 1) {
        double sq = 0.0;
        for (double v : values) sq += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(sq / static_cast<double>(n - 1));
    }
    return s;
}

namespace {

struct LoadedDataset {
    std::string name;
    std::optional<Dataset> data;
    std::optional<std::size_t> k;
    std::string error;
};

LoadedDataset load_source(const DatasetSource& src, bool normalize) {
    LoadedDataset out;
    out.name = src.name;
    try {
        Dataset ds = src.csv ? load_csv(*src.csv, src.csv_options) : generate_blobs(*src.generator);
        if (normalize) ds = normalize_minmax(ds).first;
        ds = ds.renamed(src.name);
        out.k = src.k ? *src.k : ds.class_count();
        if (!out.k || *out.k == 0)
            throw std::invalid_argument("dataset '" + src.name + "' has no labels; set 'k' explicitly");
        out.data = std::move(ds);
    } catch (const std::exception& e) {
        out.error = e.what();
        out.data.reset();
    }
    return out;
}

struct Job {
    std::size_t dataset;
    Algorithm algorithm;
    std::size_t replicate;
};

RunRecord execute(const ExperimentConfig& cfg, const LoadedDataset& ds, const Job& job) {
    RunRecord rec;
    rec.dataset = ds.name;
    rec.algorithm = job.algorithm;
    rec.replicate = job.replicate;
    rec.seed = cfg.base_seed + job.replicate;
    if (!ds.data) {
        rec.error = ds.error;
        return rec;
    }
    try {
        ClusterFit fit = job.algorithm == Algorithm::kmeans
                             ? kmeans_run(*ds.data, kmeans_config_for(cfg, *ds.k, rec.seed))
                             : fit_clusters(*ds.data, pso_config_for(cfg, job.algorithm, *ds.k, rec.seed));
        if (!is_valid_partition(fit.partition, ds.data->size()))
            throw std::logic_error("driver returned a partition with an empty cluster");
        rec.result = std::move(fit.result);
    } catch (const std::exception& e) {
        rec.error = e.what();
    }
    return rec;
}

void run_jobs(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& body) {
    workers = std::max<std::size_t>(1, std::min(workers, count));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) body(i);
        });
}

std::vector<SummaryRow> aggregate(const ExperimentConfig& cfg, const std::vector<RunRecord>& runs,
                                  bool record_timing) {
    std::vector<SummaryRow> rows;
    for (std::size_t start = 0; start < runs.size(); start += cfg.replicates) {
        const auto cell = std::span(runs).subspan(start, cfg.replicates);
        if (std::any_of(cell.begin(), cell.end(), [](const RunRecord& r) { return r.error.has_value(); })) continue;
        std::vector<double> ari, fitness, runtime;
        for (const auto& r : cell) {
            if (r.result->ari) ari.push_back(*r.result->ari);
            fitness.push_back(r.result->quantization_error);
            runtime.push_back(r.result->runtime_ms);
        }
        SummaryRow row;
        row.dataset = cell.front().dataset;
        row.algorithm = cell.front().algorithm;
        if (ari.size() == cell.size()) {
            const Stats s = summarize(ari);
            row.ari_median = s.median;
            row.ari_mean = s.mean;
            row.ari_std = s.stddev;
        }
        row.fitness_median = summarize(fitness).median;
        if (record_timing) row.runtime_ms_median = summarize(runtime).median;
        row.replicates = cell.size();
        row.seed_base = cfg.base_seed;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& options) {
    cfg.validate();
    std::vector<LoadedDataset> loaded;
    for (const auto& src : cfg.datasets) loaded.push_back(load_source(src, cfg.normalize));

    std::vector<Job> jobs;
    for (std::size_t d = 0; d < loaded.size(); ++d)
        for (auto algorithm : cfg.algorithms)
            for (std::size_t r = 0; r < cfg.replicates; ++r) jobs.push_back({d, algorithm, r});

    ExperimentResult result;
    result.runs.resize(jobs.size());
    run_jobs(jobs.size(), options.workers,
             [&](std::size_t i) { result.runs[i] = execute(cfg, loaded[jobs[i].dataset], jobs[i]); });
    result.summary = aggregate(cfg, result.runs, options.record_timing);
    return result;
}

SweepResult run_sweep(const ExperimentConfig& cfg, const RunOptions& options) {
    cfg.validate();
    if (!cfg.sweep) throw std::invalid_argument("sweep: config has no sweep values");
    for (auto a : cfg.algorithms)
        if (!is_pso(a))
            throw std::invalid_argument("sweep: swarm_size does not apply to '" + std::string(to_string(a)) + "'");

    SweepResult out;
    for (std::size_t size : cfg.sweep->swarm_sizes) {
        ExperimentConfig point = cfg;
        point.sweep.reset();
        for (auto a : point.algorithms) point.params[a].swarm_size = size;
        ExperimentResult r = run_experiment(point, options);
        for (const auto& row : r.summary)
            out.points.push_back({row.dataset, row.algorithm, size, row.ari_median, row.ari_mean, row.ari_std});
        std::move(r.runs.begin(), r.runs.end(), std::back_inserter(out.runs));
    }
    std::stable_sort(out.points.begin(), out.points.end(), [](const SweepPoint& a, const SweepPoint& b) {
        if (a.dataset != b.dataset) return a.dataset < b.dataset;
        if (a.algorithm != b.algorithm) return a.algorithm < b.algorithm;
        return a.swarm_size < b.swarm_size;
    });
    return out;
}

// --- Serialisation ----------------------------------------------------------

namespace {

std::string number(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

std::string number(const std::optional<double>& v) { return v ? number(*v) : std::string(); }

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::optional<double> parse_optional(const std::string& s) {
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::invalid_argument("summary CSV: bad number '" + s + "'");
    return v;
}

constexpr const char* kSummaryHeader =
    "dataset,algorithm,ari_median,ari_mean,ari_std,fitness_median,runtime_ms_median,replicates,seed_base";

json config_json(const std::variant<KMeansConfig, ClusterRunConfig>& config) {
    return std::visit(
        [](const auto& c) -> json {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, KMeansConfig>) {
                return {{"k", c.k}, {"max_iters", c.max_iters}, {"tol", c.tol}, {"seed", c.seed},
                        {"init", std::string(to_string(c.init))}};
            } else {
                json j = {{"k", c.k},
                          {"algorithm", std::string(to_string(c.algorithm))},
                          {"swarm_size", c.pso.swarm_size},
                          {"max_iters", c.pso.max_iters},
                          {"omega_start", c.pso.omega.start},
                          {"omega_end", c.pso.omega.end},
                          {"ac1", c.pso.ac1},
                          {"ac2", c.pso.ac2},
                          {"v_max", c.pso.v_max ? json(*c.pso.v_max) : json("half-extent")},
                          {"seed", c.pso.seed}};
                if (c.algorithm == Algorithm::lpso) j["neighborhood_size"] = c.effective_lpso_neighborhood_size();
                if (c.algorithm == Algorithm::lcpso) j["cog_variant"] = std::string(to_string(c.pso.cog_variant));
                return j;
            }
        },
        config);
}

}  // namespace

void write_summary_csv(std::span<const SummaryRow> rows, std::ostream& out) {
    out << kSummaryHeader << '\n';
    for (const auto& r : rows) {
        out << r.dataset << ',' << to_string(r.algorithm) << ',' << number(r.ari_median) << ','
            << number(r.ari_mean) << ',' << number(r.ari_std) << ',' << number(r.fitness_median) << ','
            << number(r.runtime_ms_median) << ',' << r.replicates << ',' << r.seed_base << '\n';
    }
}

std::vector<SummaryRow> read_summary_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kSummaryHeader)
        throw std::invalid_argument("summary CSV: missing or unexpected header");
    std::vector<SummaryRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 9) throw std::invalid_argument("summary CSV: expected 9 fields in '" + line + "'");
        SummaryRow r;
        r.dataset = f[0];
        r.algorithm = parse_algorithm(f[1]);
        r.ari_median = parse_optional(f[2]);
        r.ari_mean = parse_optional(f[3]);
        r.ari_std = parse_optional(f[4]);
        r.fitness_median = parse_optional(f[5]).value_or(0.0);
        r.runtime_ms_median = parse_optional(f[6]);
        r.replicates = std::stoull(f[7]);
        r.seed_base = std::stoull(f[8]);
        rows.push_back(std::move(r));
    }
    return rows;
}

json to_json(const RunResult& r) {
    return {{"dataset", r.dataset},
            {"algorithm", std::string(to_string(r.algorithm))},
            {"seed", r.seed},
            {"ari", r.ari ? json(*r.ari) : json(nullptr)},
            {"quantization_error", r.quantization_error},
            {"sse", r.sse},
            {"iterations", r.iterations()},
            {"best_fitness_trace", r.best_fitness_trace},
            {"runtime_ms", r.runtime_ms},
            {"config", config_json(r.config)}};
}

json to_json(const RunRecord& r) {
    json j = r.result ? to_json(*r.result) : json::object();
    j["dataset"] = r.dataset;
    j["algorithm"] = std::string(to_string(r.algorithm));
    j["replicate"] = r.replicate;
    j["seed"] = r.seed;
    if (r.error) j["error"] = *r.error;
    return j;
}

void write_runs_jsonl(std::span<const RunRecord> runs, std::ostream& out) {
    for (const auto& r : runs) out << to_json(r).dump() << '\n';
}

void write_sweep_csv(std::span<const SweepPoint> points, std::ostream& out) {
    out << "dataset,algorithm,swarm_size,ari_median,ari_mean,ari_std\n";
    for (const auto& p : points)
        out << p.dataset << ',' << to_string(p.algorithm) << ',' << p.swarm_size << ',' << number(p.ari_median)
            << ',' << number(p.ari_mean) << ',' << number(p.ari_std) << '\n';
}

void write_sweep_dat(std::span<const SweepPoint> points, const std::string& dataset, Algorithm algorithm,
                     std::ostream& out) {
    out << "# swarm_size median_ari\n";
    for (const auto& p : points)
        if (p.dataset == dataset && p.algorithm == algorithm)
            out << p.swarm_size << ' ' << (p.ari_median ? number(*p.ari_median) : std::string("nan")) << '\n';
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    return out;
}

}  // namespace

void write_experiment_outputs(const ExperimentResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto summary = open_output(dir / "summary.csv");
    write_summary_csv(result.summary, summary);
    auto runs = open_output(dir / "runs.jsonl");
    write_runs_jsonl(result.runs, runs);
}

void write_sweep_outputs(const SweepResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto csv = open_output(dir / "sweep.csv");
    write_sweep_csv(result.points, csv);
    std::set<std::pair<std::string, Algorithm>> pairs;
    for (const auto& p : result.points) pairs.emplace(p.dataset, p.algorithm);
    for (const auto& [dataset, algorithm] : pairs) {
        auto dat = open_output(dir / ("sweep_" + dataset + "_" + std::string(to_string(algorithm)) + ".dat"));
        write_sweep_dat(result.points, dataset, algorithm, dat);
    }
    auto runs = open_output(dir / "runs.jsonl");
    write_runs_jsonl(result.runs, runs);
}

}  // namespace cogpso
