#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qelm/encoding.hpp"
#include "qelm/reservoir.hpp"
#include "qelm/softmax.hpp"
#include "qelm/types.hpp"

namespace qelm {

enum class Reduction { Pca, Ae, Imported };
enum class Hamiltonian { H1, H2, H3, H4, H5, H6, Identity };

Reduction reduction_from_string(const std::string& s);
Hamiltonian hamiltonian_from_string(const std::string& s);
std::string to_string(Reduction r);
std::string to_string(Hamiltonian h);

// Everything a single pipeline run depends on. Serializes to the key=value
// config format; the fingerprint hashes the canonical serialization.
struct ExperimentConfig {
    std::string dataset_dir;   // directory with IDX files
    std::string dataset = "mnist";
    int train_size = 8000;
    int test_size = 2000;
    std::uint64_t seed = 1;

    Reduction reduction = Reduction::Pca;
    int latent_dim = 0;  // 0 = derive from encoding and n_qubits
    int ae_epochs = 50;
    double ae_width_scale = 1.0;
    std::string import_train;  // latent CSVs when reduction=imported
    std::string import_test;

    EncodingKind encoding = EncodingKind::DenseAngle;
    int n_qubits = 8;
    bool phase_full_circle = false;

    Hamiltonian hamiltonian = Hamiltonian::H2;
    DisorderRegime regime = DisorderRegime::Transition;
    Boundary boundary = Boundary::Open;
    bool j2_zero = false;
    double dt = 20.0;
    int floquet_periods = 50;

    long shots = 0;  // 0 = exact probabilities

    TrainConfig classifier;
    std::string outdir = "out";
    bool cache_features = false;

    int resolved_latent_dim() const;
    std::string canonical() const;   // stable key=value text
    std::string fingerprint() const; // 16-hex-digit hash of canonical()
};

ExperimentConfig parse_config_file(const std::string& path);
void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value);

struct ResultRow {
    std::string fingerprint;
    std::string dataset;
    std::string reduction;
    std::string encoding;
    std::string hamiltonian;
    int n_qubits = 0;
    std::uint64_t seed = 0;
    double train_acc = 0.0;
    double test_acc = 0.0;
    double wall_s = 0.0;  // informational only; kept out of the CSV so rows reproduce bitwise

    std::string csv_row() const;
};

inline const char* result_csv_header() {
    return "fingerprint,dataset,reduction,encoding,hamiltonian,n_qubits,seed,train_acc,test_acc";
}

struct SweepResult {
    std::vector<ResultRow> rows;
};

// Executes ingest -> reduce -> encode -> evolve -> measure -> train -> evaluate.
ResultRow run_single(const ExperimentConfig& cfg);

// One axis of a sweep: every value is applied through apply_override.
struct SweepAxis {
    std::string key;
    std::vector<std::string> values;
};

// Cartesian product over axes; appends rows to <outdir>/results.csv as cells
// finish and skips fingerprints already present (crash-safe resume).
SweepResult run_sweep(const ExperimentConfig& base, const std::vector<SweepAxis>& axes,
                      const std::string& results_csv);

// Classical comparison rows: raw-784 ONN and latent-2N ONN.
SweepResult run_classical_baselines(const ExperimentConfig& cfg);

// CSV + JSON summary + one gnuplot-ready series file per value of group_key.
void emit_report(const SweepResult& results, const std::string& out_prefix,
                 const std::string& group_key = "reduction");

std::vector<ResultRow> read_results_csv(const std::string& path);

}  // namespace qelm
