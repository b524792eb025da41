// cogpso: run clustering experiments, particle-count sweeps and generate
// synthetic blob datasets.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cogpso/data.hpp"
#include "cogpso/harness.hpp"
#include "cogpso/simd/kernels.hpp"

namespace {

std::vector<std::size_t> parse_values(const std::string& list) {
    std::vector<std::size_t> values;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        values.push_back(std::stoull(item));
    }
    return values;
}

int report(bool ok, const std::string& out_dir, std::size_t runs, std::size_t errors) {
    std::cout << "wrote " << out_dir << " (" << runs << " runs, " << errors << " errors)\n";
    return ok ? 0 : 2;
}

template <class Records>
std::size_t count_errors(const Records& runs) {
    std::size_t n = 0;
    for (const auto& r : runs)
        if (r.error) {
            ++n;
            std::cerr << "error: " << r.dataset << '/' << cogpso::to_string(r.algorithm) << " replicate "
                      << r.replicate << ": " << *r.error << '\n';
        }
    return n;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PSO-based partitional clustering experiments"};
    app.require_subcommand(1);
    std::string simd_level;
    app.add_option("--simd", simd_level, "Force kernel variant (scalar, avx2)");

    std::string config_path;
    std::string out_dir = "results";
    std::size_t workers = 1;
    std::uint64_t seed = 0;
    bool timing = false;

    auto* run = app.add_subcommand("run", "Run every dataset x algorithm x replicate cell of a config");
    run->add_option("--config", config_path, "JSON experiment config")->required()->check(CLI::ExistingFile);
    run->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
    run->add_option("--workers", workers, "Concurrent cells")->check(CLI::PositiveNumber)->capture_default_str();
    auto* run_seed = run->add_option("--seed", seed, "Override base_seed");
    run->add_flag("--timing", timing, "Fill runtime_ms_median in summary.csv (non-deterministic)");

    std::string param = "swarm-size";
    std::string values;
    auto* sweep = app.add_subcommand("sweep", "Repeat a config over several swarm sizes");
    sweep->add_option("--config", config_path, "JSON experiment config")->required()->check(CLI::ExistingFile);
    sweep->add_option("--param", param, "Swept parameter")->check(CLI::IsMember({"swarm-size", "swarm_size"}))
        ->capture_default_str();
    sweep->add_option("--values", values, "Comma-separated, strictly increasing swarm sizes")->required();
    sweep->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
    sweep->add_option("--workers", workers, "Concurrent cells")->check(CLI::PositiveNumber)->capture_default_str();
    auto* sweep_seed = sweep->add_option("--seed", seed, "Override base_seed");

    cogpso::BlobSpec blobs;
    std::string blob_out;
    auto* gen = app.add_subcommand("gen-blobs", "Write a synthetic Gaussian-blob dataset as CSV");
    gen->add_option("--k", blobs.k, "Clusters")->required()->check(CLI::PositiveNumber);
    gen->add_option("--per-cluster", blobs.per_cluster, "Points per cluster")->required()->check(CLI::PositiveNumber);
    gen->add_option("--dim", blobs.dim, "Dimensions")->required()->check(CLI::PositiveNumber);
    gen->add_option("--spread", blobs.spread, "Standard deviation")->required()->check(CLI::PositiveNumber);
    gen->add_option("--seed", blobs.seed, "RNG seed")->capture_default_str();
    gen->add_option("--out", blob_out, "Output CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (!simd_level.empty()) cogpso::simd::set_active_level(cogpso::simd::parse_level(simd_level));

        if (gen->parsed()) {
            cogpso::write_csv(cogpso::generate_blobs(blobs), blob_out);
            std::cout << "wrote " << blob_out << " (" << blobs.k * blobs.per_cluster << " points)\n";
            return 0;
        }

        auto cfg = cogpso::load_experiment_config(config_path);
        const cogpso::RunOptions options{workers, timing};
        if (run->parsed()) {
            if (*run_seed) cfg.base_seed = seed;
            const auto result = cogpso::run_experiment(cfg, options);
            cogpso::write_experiment_outputs(result, out_dir);
            return report(result.ok(), out_dir, result.runs.size(), count_errors(result.runs));
        }
        if (*sweep_seed) cfg.base_seed = seed;
        cfg.sweep = cogpso::SweepSpec{parse_values(values)};
        cfg.validate();
        const auto result = cogpso::run_sweep(cfg, options);
        cogpso::write_sweep_outputs(result, out_dir);
        return report(result.ok(), out_dir, result.runs.size(), count_errors(result.runs));
    } catch (const std::exception& e) {
        std::cerr << "cogpso: " << e.what() << '\n';
        return 1;
    }
}
