#include "qelm/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <nlohmann/json.hpp>

#include "qelm/autoencoder.hpp"
#include "qelm/dataset.hpp"
#include "qelm/latent.hpp"
#include "qelm/measurement.hpp"
#include "qelm/pca.hpp"
#include "qelm/rng.hpp"

namespace qelm {

namespace fs = std::filesystem;

Reduction reduction_from_string(const std::string& s) {
    if (s == "pca") return Reduction::Pca;
    if (s == "ae") return Reduction::Ae;
    if (s == "imported") return Reduction::Imported;
    throw std::runtime_error("config: unknown reduction '" + s + "'");
}

Hamiltonian hamiltonian_from_string(const std::string& s) {
    if (s == "h1") return Hamiltonian::H1;
    if (s == "h2") return Hamiltonian::H2;
    if (s == "h3") return Hamiltonian::H3;
    if (s == "h4") return Hamiltonian::H4;
    if (s == "h5") return Hamiltonian::H5;
    if (s == "h6") return Hamiltonian::H6;
    if (s == "identity") return Hamiltonian::Identity;
    throw std::runtime_error("config: unknown hamiltonian '" + s + "'");
}

std::string to_string(Reduction r) {
    switch (r) {
        case Reduction::Pca: return "pca";
        case Reduction::Ae: return "ae";
        case Reduction::Imported: return "imported";
    }
    return "?";
}

std::string to_string(Hamiltonian h) {
    switch (h) {
        case Hamiltonian::H1: return "h1";
        case Hamiltonian::H2: return "h2";
        case Hamiltonian::H3: return "h3";
        case Hamiltonian::H4: return "h4";
        case Hamiltonian::H5: return "h5";
        case Hamiltonian::H6: return "h6";
        case Hamiltonian::Identity: return "identity";
    }
    return "?";
}

namespace {

std::string regime_name(DisorderRegime r) {
    switch (r) {
        case DisorderRegime::Localized: return "localized";
        case DisorderRegime::Transition: return "transition";
        case DisorderRegime::Mbl: return "mbl";
    }
    return "?";
}

std::string hamiltonian_label(const ExperimentConfig& cfg) {
    std::string label = to_string(cfg.hamiltonian);
    if (cfg.hamiltonian == Hamiltonian::H2 && cfg.j2_zero) label += "-j0";
    if (cfg.hamiltonian == Hamiltonian::H6) label += "-" + regime_name(cfg.regime);
    return label;
}

}  // namespace

int ExperimentConfig::resolved_latent_dim() const {
    if (latent_dim > 0) return latent_dim;
    // Comparison convention: amplitude runs default to the same 2N latent
    // budget as the other two-feature-per-qubit encodings.
    if (encoding == EncodingKind::Angle) return n_qubits;
    return 2 * n_qubits;
}

std::string ExperimentConfig::canonical() const {
    std::ostringstream out;
    out << "dataset=" << dataset << "\n"
        << "train_size=" << train_size << "\n"
        << "test_size=" << test_size << "\n"
        << "seed=" << seed << "\n"
        << "reduction=" << to_string(reduction) << "\n"
        << "latent_dim=" << resolved_latent_dim() << "\n"
        << "ae_epochs=" << ae_epochs << "\n"
        << "ae_width_scale=" << ae_width_scale << "\n"
        << "encoding=" << qelm::to_string(encoding) << "\n"
        << "phase_range=" << (phase_full_circle ? "2pi" : "pi") << "\n"
        << "n_qubits=" << n_qubits << "\n"
        << "hamiltonian=" << hamiltonian_label(*this) << "\n"
        << "boundary=" << (boundary == Boundary::Open ? "open" : "periodic") << "\n"
        << "dt=" << dt << "\n"
        << "floquet_periods=" << floquet_periods << "\n"
        << "shots=" << shots << "\n"
        << "lr=" << classifier.lr << "\n"
        << "batch=" << classifier.batch << "\n"
        << "epochs=" << classifier.epochs << "\n";
    return out.str();
}

std::string ExperimentConfig::fingerprint() const {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(canonical())));
    return buf;
}

void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "dataset_dir") cfg.dataset_dir = value;
    else if (key == "dataset") cfg.dataset = value;
    else if (key == "train_size") cfg.train_size = std::stoi(value);
    else if (key == "test_size") cfg.test_size = std::stoi(value);
    else if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "reduction") cfg.reduction = reduction_from_string(value);
    else if (key == "latent_dim") cfg.latent_dim = std::stoi(value);
    else if (key == "ae_epochs") cfg.ae_epochs = std::stoi(value);
    else if (key == "ae_width_scale") cfg.ae_width_scale = std::stod(value);
    else if (key == "import_train") cfg.import_train = value;
    else if (key == "import_test") cfg.import_test = value;
    else if (key == "encoding") cfg.encoding = encoding_from_string(value);
    else if (key == "n_qubits") cfg.n_qubits = std::stoi(value);
    else if (key == "phase_range") cfg.phase_full_circle = (value == "2pi");
    else if (key == "hamiltonian") cfg.hamiltonian = hamiltonian_from_string(value);
    else if (key == "regime") cfg.regime = regime_from_string(value);
    else if (key == "boundary") cfg.boundary = boundary_from_string(value);
    else if (key == "j2_zero") cfg.j2_zero = (value == "true" || value == "1");
    else if (key == "dt") cfg.dt = std::stod(value);
    else if (key == "floquet_periods") cfg.floquet_periods = std::stoi(value);
    else if (key == "shots") cfg.shots = std::stol(value);
    else if (key == "lr") cfg.classifier.lr = std::stod(value);
    else if (key == "batch") cfg.classifier.batch = std::stoi(value);
    else if (key == "epochs") cfg.classifier.epochs = std::stoi(value);
    else if (key == "patience") cfg.classifier.patience = std::stoi(value);
    else if (key == "outdir") cfg.outdir = value;
    else if (key == "cache_features") cfg.cache_features = (value == "true" || value == "1");
    else throw std::runtime_error("config: unknown key '" + key + "'");
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\r')) line.pop_back();
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: line " + std::to_string(lineno) + " has no '='");
        apply_override(cfg, line.substr(0, eq), line.substr(eq + 1));
    }
    return cfg;
}

std::string ResultRow::csv_row() const {
    std::ostringstream out;
    out.precision(17);
    out << fingerprint << "," << dataset << "," << reduction << "," << encoding << ","
        << hamiltonian << "," << n_qubits << "," << seed << "," << train_acc << "," << test_acc;
    return out.str();
}

namespace {

struct LatentPair {
    Mat train;  // samples x d, values in [0,1]
    Mat test;
};

bool read_mat_pair(const fs::path& file, Mat& a, Mat& b) {
    std::ifstream in(file, std::ios::binary);
    if (!in) return false;
    for (Mat* m : {&a, &b}) {
        Eigen::Index r, c;
        in.read(reinterpret_cast<char*>(&r), sizeof r);
        in.read(reinterpret_cast<char*>(&c), sizeof c);
        if (!in || r < 0 || c < 0) return false;
        m->resize(r, c);
        in.read(reinterpret_cast<char*>(m->data()),
                static_cast<std::streamsize>(sizeof(double) * r * c));
    }
    return static_cast<bool>(in);
}

void write_mat_pair(const fs::path& file, const Mat& a, const Mat& b) {
    fs::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary);
    for (const Mat* m : {&a, &b}) {
        const Eigen::Index r = m->rows(), c = m->cols();
        out.write(reinterpret_cast<const char*>(&r), sizeof r);
        out.write(reinterpret_cast<const char*>(&c), sizeof c);
        out.write(reinterpret_cast<const char*>(m->data()),
                  static_cast<std::streamsize>(sizeof(double) * r * c));
    }
}

// Key over only the fields that determine the latent matrices, so sweeps over
// encodings/Hamiltonians reuse one PCA/AE fit.
std::string latent_cache_key(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "dataset=" << cfg.dataset << "\ntrain_size=" << cfg.train_size
        << "\ntest_size=" << cfg.test_size << "\nseed=" << cfg.seed
        << "\nreduction=" << to_string(cfg.reduction)
        << "\nlatent_dim=" << cfg.resolved_latent_dim() << "\nae_epochs=" << cfg.ae_epochs
        << "\nae_width_scale=" << cfg.ae_width_scale << "\nimport=" << cfg.import_train << ";"
        << cfg.import_test << "\n";
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(out.str())));
    return buf;
}

LatentPair reduce_features(const ExperimentConfig& cfg, const Dataset& train,
                           const Dataset& test) {
    const int d = cfg.resolved_latent_dim();
    LatentPair out;
    const fs::path cache_file =
        fs::path(cfg.outdir) / "cache" / (latent_cache_key(cfg) + ".latents");
    if (cfg.cache_features && read_mat_pair(cache_file, out.train, out.test)) return out;
    switch (cfg.reduction) {
        case Reduction::Pca: {
            PcaModel pca = fit_pca(train.images, d);
            out.train = pca_transform_all(pca, train.images);
            out.test = pca_transform_all(pca, test.images);
            break;
        }
        case Reduction::Ae: {
            AeTrainConfig ae_cfg;
            ae_cfg.epochs = cfg.ae_epochs;
            ae_cfg.width_scale = cfg.ae_width_scale;
            AutoencoderModel ae =
                fit_autoencoder(train.images, d, stage_seed(cfg.seed, "ae"), ae_cfg);
            out.train = ae_encode_all(ae, train.images);
            out.test = ae_encode_all(ae, test.images);
            break;
        }
        case Reduction::Imported: {
            LatentBatch tr = import_latents(cfg.import_train, d);
            LatentBatch te = import_latents(cfg.import_test, d);
            out.train = tr.values;
            out.test = te.values;
            break;
        }
    }
    if (cfg.cache_features) write_mat_pair(cache_file, out.train, out.test);
    return out;
}

CMat build_propagator(const ExperimentConfig& cfg) {
    const std::uint64_t hseed = stage_seed(cfg.seed, "hamiltonian");
    switch (cfg.hamiltonian) {
        case Hamiltonian::H1: {
            FloquetPair pair = build_h1_pair(cfg.n_qubits);
            return propagator_floquet(pair.ha, pair.hb, cfg.floquet_periods);
        }
        case Hamiltonian::H2:
            return propagator_static(build_h2(cfg.n_qubits, hseed, cfg.j2_zero), cfg.dt);
        case Hamiltonian::H3: return propagator_static(build_h3(cfg.n_qubits), cfg.dt);
        case Hamiltonian::H4:
            return propagator_static(build_h4(cfg.n_qubits, cfg.boundary), cfg.dt);
        case Hamiltonian::H5:
            return propagator_static(build_h5(cfg.n_qubits, cfg.boundary), cfg.dt);
        case Hamiltonian::H6:
            return propagator_static(build_h6(cfg.n_qubits, cfg.regime, hseed), cfg.dt);
        case Hamiltonian::Identity: {
            const Eigen::Index dim = static_cast<Eigen::Index>(dim_for_qubits(cfg.n_qubits));
            return CMat::Identity(dim, dim);
        }
    }
    throw std::logic_error("config: unreachable hamiltonian");
}

Mat quantum_features(const ExperimentConfig& cfg, const Mat& latents) {
    EncodingSpec spec{cfg.encoding, cfg.n_qubits, cfg.phase_full_circle};
    EncodeStats stats;
    CMat states = encode_batch(spec, latents, &stats);
    CMat evolved = evolve_batch(build_propagator(cfg), states);
    if (cfg.shots <= 0) return measure_batch(evolved);
    Mat features(evolved.cols(), evolved.rows());
    const std::uint64_t base = stage_seed(cfg.seed, "shots");
    for (Eigen::Index s = 0; s < evolved.cols(); ++s)
        features.row(s) =
            measure_shots(evolved.col(s), cfg.shots, splitmix64(base + s)).transpose();
    return features;
}

std::pair<Dataset, Dataset> load_subsampled(const ExperimentConfig& cfg) {
    std::string dir = cfg.dataset_dir;
    if (dir.empty()) {
        if (const char* env = std::getenv("QELM_DATA_DIR")) dir = env;
        else throw std::runtime_error("config: dataset_dir not set (or QELM_DATA_DIR)");
    }
    Dataset train = load_split(dir, "train");
    Dataset test = load_split(dir, "test");
    if (cfg.train_size > 0 && cfg.train_size < train.size())
        train = subsample(train, cfg.train_size, stage_seed(cfg.seed, "subsample-train"));
    if (cfg.test_size > 0 && cfg.test_size < test.size())
        test = subsample(test, cfg.test_size, stage_seed(cfg.seed, "subsample-test"));
    return {std::move(train), std::move(test)};
}

ResultRow make_row(const ExperimentConfig& cfg, double train_acc, double test_acc,
                   double wall_s) {
    ResultRow row;
    row.fingerprint = cfg.fingerprint();
    row.dataset = cfg.dataset;
    row.reduction = to_string(cfg.reduction);
    row.encoding = qelm::to_string(cfg.encoding);
    row.hamiltonian = hamiltonian_label(cfg);
    row.n_qubits = cfg.n_qubits;
    row.seed = cfg.seed;
    row.train_acc = train_acc;
    row.test_acc = test_acc;
    row.wall_s = wall_s;
    return row;
}

// Readout features, optionally cached on disk keyed by the quantum-stage
// fingerprint so classifier-only reruns skip the simulation.
std::pair<Mat, Mat> features_for(const ExperimentConfig& cfg, const LatentPair& latents) {
    const fs::path cache_file =
        fs::path(cfg.outdir) / "cache" / (cfg.fingerprint() + ".features");
    Mat ftrain, ftest;
    if (cfg.cache_features && read_mat_pair(cache_file, ftrain, ftest))
        return {std::move(ftrain), std::move(ftest)};
    ftrain = quantum_features(cfg, latents.train);
    ftest = quantum_features(cfg, latents.test);
    if (cfg.cache_features) write_mat_pair(cache_file, ftrain, ftest);
    return {std::move(ftrain), std::move(ftest)};
}

}  // namespace

ResultRow run_single(const ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    auto [train, test] = load_subsampled(cfg);
    LatentPair latents = reduce_features(cfg, train, test);
    auto [ftrain, ftest] = features_for(cfg, latents);

    TrainConfig tc = cfg.classifier;
    tc.seed = stage_seed(cfg.seed, "classifier");
    SoftmaxModel model = train_softmax(ftrain, train.labels, 10, tc);
    const double train_acc = evaluate(model, ftrain, train.labels);
    const double test_acc = evaluate(model, ftest, test.labels);
    const double wall_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return make_row(cfg, train_acc, test_acc, wall_s);
}

SweepResult run_sweep(const ExperimentConfig& base, const std::vector<SweepAxis>& axes,
                      const std::string& results_csv) {
    for (const auto& axis : axes)
        if (axis.values.empty()) throw std::runtime_error("sweep: empty axis " + axis.key);

    std::set<std::string> done;
    SweepResult result;
    if (fs::exists(results_csv)) {
        result.rows = read_results_csv(results_csv);
        for (const auto& row : result.rows) done.insert(row.fingerprint);
    }
    fs::create_directories(fs::path(results_csv).parent_path().empty()
                               ? fs::path(".")
                               : fs::path(results_csv).parent_path());
    std::ofstream out(results_csv, std::ios::app);
    if (!out) throw std::runtime_error("sweep: cannot open " + results_csv);
    if (done.empty() && result.rows.empty()) out << result_csv_header() << "\n";

    // Cartesian product by odometer.
    std::vector<std::size_t> idx(axes.size(), 0);
    while (true) {
        ExperimentConfig cfg = base;
        for (std::size_t a = 0; a < axes.size(); ++a)
            apply_override(cfg, axes[a].key, axes[a].values[idx[a]]);
        const std::string fp = cfg.fingerprint();
        if (!done.count(fp)) {
            try {
                ResultRow row = run_single(cfg);
                result.rows.push_back(row);
                out << row.csv_row() << "\n" << std::flush;
            } catch (const std::exception& e) {
                std::fprintf(stderr, "sweep: cell %s failed: %s\n", fp.c_str(), e.what());
            }
            done.insert(fp);
        }
        std::size_t a = 0;
        for (; a < axes.size(); ++a) {
            if (++idx[a] < axes[a].values.size()) break;
            idx[a] = 0;
        }
        if (a == axes.size()) break;
    }
    return result;
}

SweepResult run_classical_baselines(const ExperimentConfig& cfg) {
    SweepResult result;
    auto [train, test] = load_subsampled(cfg);

    TrainConfig tc = cfg.classifier;
    tc.seed = stage_seed(cfg.seed, "classifier");

    {
        const auto t0 = std::chrono::steady_clock::now();
        SoftmaxModel model = train_softmax(train.images, train.labels, 10, tc);
        ResultRow row = make_row(cfg, evaluate(model, train.images, train.labels),
                                 evaluate(model, test.images, test.labels),
                                 std::chrono::duration<double>(
                                     std::chrono::steady_clock::now() - t0).count());
        row.fingerprint += "-raw";
        row.reduction = "classical-raw";
        row.encoding = "none";
        row.hamiltonian = "none";
        result.rows.push_back(row);
    }
    {
        const auto t0 = std::chrono::steady_clock::now();
        LatentPair latents = reduce_features(cfg, train, test);
        SoftmaxModel model = train_softmax(latents.train, train.labels, 10, tc);
        ResultRow row = make_row(cfg, evaluate(model, latents.train, train.labels),
                                 evaluate(model, latents.test, test.labels),
                                 std::chrono::duration<double>(
                                     std::chrono::steady_clock::now() - t0).count());
        row.fingerprint += "-latent";
        row.reduction = "classical-" + to_string(cfg.reduction);
        row.encoding = "none";
        row.hamiltonian = "none";
        result.rows.push_back(row);
    }
    return result;
}

std::vector<ResultRow> read_results_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("report: cannot open " + path);
    std::vector<ResultRow> rows;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        ResultRow row;
        std::string field;
        std::getline(ss, row.fingerprint, ',');
        std::getline(ss, row.dataset, ',');
        std::getline(ss, row.reduction, ',');
        std::getline(ss, row.encoding, ',');
        std::getline(ss, row.hamiltonian, ',');
        std::getline(ss, field, ',');
        row.n_qubits = std::stoi(field);
        std::getline(ss, field, ',');
        row.seed = std::stoull(field);
        std::getline(ss, field, ',');
        row.train_acc = std::stod(field);
        std::getline(ss, field, ',');
        row.test_acc = std::stod(field);
        rows.push_back(std::move(row));
    }
    return rows;
}

void emit_report(const SweepResult& results, const std::string& out_prefix,
                 const std::string& group_key) {
    if (results.rows.empty()) throw std::runtime_error("report: no result rows");

    auto rows = results.rows;
    std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        return std::tie(a.fingerprint, a.seed) < std::tie(b.fingerprint, b.seed);
    });

    {
        std::ofstream csv(out_prefix + ".csv");
        if (!csv) throw std::runtime_error("report: cannot write " + out_prefix + ".csv");
        csv << result_csv_header() << "\n";
        for (const auto& row : rows) csv << row.csv_row() << "\n";
    }

    auto group_of = [&](const ResultRow& row) -> std::string {
        if (group_key == "reduction") return row.reduction;
        if (group_key == "encoding") return row.encoding;
        if (group_key == "hamiltonian") return row.hamiltonian;
        if (group_key == "dataset") return row.dataset;
        throw std::runtime_error("report: unknown group key '" + group_key + "'");
    };

    nlohmann::ordered_json summary;
    summary["rows"] = rows.size();
    std::map<std::string, std::map<int, std::pair<double, int>>> series;  // group -> N -> (sum,count)
    for (const auto& row : rows) {
        auto& cell = series[group_of(row)][row.n_qubits];
        cell.first += row.test_acc;
        cell.second += 1;
    }
    for (const auto& [group, points] : series) {
        std::ofstream dat(out_prefix + "." + group + ".dat");
        dat << "# n_qubits mean_test_acc\n";
        nlohmann::ordered_json jpoints;
        for (const auto& [n, cell] : points) {
            const double mean = cell.first / cell.second;
            dat << n << " " << mean << "\n";
            jpoints[std::to_string(n)] = mean;
        }
        summary["series"][group] = jpoints;
    }
    std::ofstream js(out_prefix + ".json");
    js << summary.dump(2) << "\n";
}

}  // namespace qelm
