#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qelm/experiment.hpp"
#include "qelm/synth.hpp"

namespace fs = std::filesystem;

namespace {

qelm::ExperimentConfig load_config(const std::string& config_path,
                                   const std::vector<std::string>& overrides) {
    qelm::ExperimentConfig cfg;
    if (!config_path.empty()) cfg = qelm::parse_config_file(config_path);
    for (const auto& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("override '" + ov + "' is not key=value");
        qelm::apply_override(cfg, ov.substr(0, eq), ov.substr(eq + 1));
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"QELM workbench: feature reduction, quantum-reservoir simulation, "
                 "softmax readout"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("-c,--config", config_path, "key=value config file");
        cmd->add_option("-s,--set", overrides, "config override key=value (repeatable)");
    };

    auto* run = app.add_subcommand("run", "execute one pipeline configuration");
    add_common(run);

    auto* sweep = app.add_subcommand("sweep", "cartesian sweep over config axes");
    add_common(sweep);
    std::vector<std::string> axis_specs;
    sweep->add_option("-a,--axis", axis_specs,
                      "sweep axis key=v1;v2;... (repeatable)")->required();
    std::string results_csv = "out/results.csv";
    sweep->add_option("-o,--results", results_csv, "append-only results CSV");

    auto* baseline = app.add_subcommand("baseline", "classical ONN comparison rows");
    add_common(baseline);

    auto* report = app.add_subcommand("report", "summarize a results CSV");
    std::string report_in, report_prefix = "out/report", group_key = "reduction";
    report->add_option("input", report_in, "results CSV")->required();
    report->add_option("-o,--prefix", report_prefix, "output file prefix");
    report->add_option("-g,--group", group_key,
                       "series grouping: reduction|encoding|hamiltonian|dataset");

    auto* gen = app.add_subcommand("gen-data", "write a synthetic digit dataset in IDX format");
    std::string gen_dir = "data";
    int gen_train = 10000, gen_test = 2000;
    std::uint64_t gen_seed = 1;
    gen->add_option("-d,--dir", gen_dir, "output directory");
    gen->add_option("--train", gen_train, "training images");
    gen->add_option("--test", gen_test, "test images");
    gen->add_option("--seed", gen_seed, "generator seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            auto cfg = load_config(config_path, overrides);
            auto row = qelm::run_single(cfg);
            std::cout << qelm::result_csv_header() << "\n" << row.csv_row() << "\n";
            fs::create_directories(cfg.outdir);
            std::ofstream out(fs::path(cfg.outdir) / "results.csv", std::ios::app);
            if (out.tellp() == 0) out << qelm::result_csv_header() << "\n";
            out << row.csv_row() << "\n";
        } else if (sweep->parsed()) {
            auto cfg = load_config(config_path, overrides);
            std::vector<qelm::SweepAxis> axes;
            for (const auto& spec : axis_specs) {
                const auto eq = spec.find('=');
                if (eq == std::string::npos)
                    throw std::runtime_error("axis '" + spec + "' is not key=v1;v2");
                qelm::SweepAxis axis;
                axis.key = spec.substr(0, eq);
                std::string rest = spec.substr(eq + 1);
                std::size_t pos = 0;
                while (pos != std::string::npos) {
                    const auto semi = rest.find(';', pos);
                    axis.values.push_back(rest.substr(pos, semi - pos));
                    pos = semi == std::string::npos ? semi : semi + 1;
                }
                axes.push_back(std::move(axis));
            }
            if (!fs::path(results_csv).parent_path().empty())
                fs::create_directories(fs::path(results_csv).parent_path());
            auto result = qelm::run_sweep(cfg, axes, results_csv);
            std::cout << "sweep complete, " << result.rows.size() << " rows in " << results_csv
                      << "\n";
        } else if (baseline->parsed()) {
            auto cfg = load_config(config_path, overrides);
            auto result = qelm::run_classical_baselines(cfg);
            std::cout << qelm::result_csv_header() << "\n";
            for (const auto& row : result.rows) std::cout << row.csv_row() << "\n";
        } else if (report->parsed()) {
            qelm::SweepResult result{qelm::read_results_csv(report_in)};
            if (!fs::path(report_prefix).parent_path().empty())
                fs::create_directories(fs::path(report_prefix).parent_path());
            qelm::emit_report(result, report_prefix, group_key);
            std::cout << "report written to " << report_prefix << ".{csv,json,*.dat}\n";
        } else if (gen->parsed()) {
            fs::create_directories(gen_dir);
            qelm::write_synthetic_dataset(gen_dir, gen_train, gen_test, gen_seed);
            std::cout << "wrote " << gen_train << "+" << gen_test << " images to " << gen_dir
                      << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
