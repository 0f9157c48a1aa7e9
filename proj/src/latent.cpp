#include "qelm/latent.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace qelm {

LatentBatch import_latents(const std::string& path, int expected_d) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("latents: cannot open " + path);
    std::string header;
    std::getline(in, header);
    int d = -1;
    double lo = 0.0, hi = 1.0;
    if (std::sscanf(header.c_str(), "# d=%d range=[%lf,%lf]", &d, &lo, &hi) != 3)
        throw std::runtime_error("latents: bad header in " + path);
    if (d != expected_d) throw std::runtime_error("latents: header dimension mismatch in " + path);

    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    int clamped = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::vector<double> vals;
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            std::size_t pos = 0;
            double v;
            try {
                v = std::stod(cell, &pos);
            } catch (const std::exception&) {
                throw std::runtime_error("latents: non-numeric cell in " + path);
            }
            if (pos != cell.size()) throw std::runtime_error("latents: non-numeric cell in " + path);
            vals.push_back(v);
        }
        if (static_cast<int>(vals.size()) != d + 1)
            throw std::runtime_error("latents: wrong column count in " + path);
        const int label = static_cast<int>(vals.back());
        vals.pop_back();
        for (double& v : vals) {
            if (!std::isfinite(v)) throw std::runtime_error("latents: non-finite value in " + path);
            if (v < lo || v > hi) {
                v = std::clamp(v, lo, hi);
                ++clamped;
            }
        }
        rows.push_back(std::move(vals));
        labels.push_back(label);
    }
    if (clamped > 0)
        std::fprintf(stderr, "latents: clamped %d out-of-range cells in %s\n", clamped,
                     path.c_str());

    LatentBatch batch;
    batch.values.resize(static_cast<Eigen::Index>(rows.size()), d);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < d; ++j) batch.values(static_cast<Eigen::Index>(i), j) = rows[i][j];
    batch.labels = std::move(labels);
    batch.source = LatentSource::Imported;
    batch.range_lo = lo;
    batch.range_hi = hi;
    batch.clamped = clamped;
    return batch;
}

void export_latents(const std::string& path, const LatentBatch& batch) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("latents: cannot write " + path);
    out << "# d=" << batch.dim() << " range=[" << batch.range_lo << "," << batch.range_hi << "]\n";
    out.precision(17);
    for (int i = 0; i < batch.size(); ++i) {
        for (int j = 0; j < batch.dim(); ++j) out << batch.values(i, j) << ",";
        out << batch.labels[i] << "\n";
    }
}

}  // namespace qelm
