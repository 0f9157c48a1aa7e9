#include "qelm/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "qelm/rng.hpp"

namespace qelm {

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::uint32_t read_be32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw std::runtime_error("idx: truncated header");
    return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
           (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

void write_be32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v >> 24), static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 8), static_cast<unsigned char>(v)};
    out.write(reinterpret_cast<char*>(b), 4);
}

}  // namespace

Mat load_idx_images(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("idx: cannot open " + path);
    if (read_be32(in) != kImageMagic) throw std::runtime_error("idx: bad image magic in " + path);
    const std::uint32_t count = read_be32(in);
    const std::uint32_t rows = read_be32(in);
    const std::uint32_t cols = read_be32(in);
    const std::size_t pixels = std::size_t(rows) * cols;

    std::vector<unsigned char> buf(pixels);
    Mat images(count, pixels);
    for (std::uint32_t i = 0; i < count; ++i) {
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(pixels));
        if (!in) throw std::runtime_error("idx: truncated image payload in " + path);
        for (std::size_t p = 0; p < pixels; ++p) images(i, p) = buf[p] / 255.0;
    }
    return images;
}

std::vector<int> load_idx_labels(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("idx: cannot open " + path);
    if (read_be32(in) != kLabelMagic) throw std::runtime_error("idx: bad label magic in " + path);
    const std::uint32_t count = read_be32(in);
    std::vector<int> labels(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        int c = in.get();
        if (c == EOF) throw std::runtime_error("idx: truncated label payload in " + path);
        if (c > 9) throw std::runtime_error("idx: label out of range in " + path);
        labels[i] = c;
    }
    return labels;
}

void write_idx_images(const std::string& path, const Mat& images, int rows, int cols) {
    if (images.cols() != static_cast<Eigen::Index>(rows) * cols)
        throw std::runtime_error("idx: image width does not match rows*cols");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("idx: cannot write " + path);
    write_be32(out, kImageMagic);
    write_be32(out, static_cast<std::uint32_t>(images.rows()));
    write_be32(out, static_cast<std::uint32_t>(rows));
    write_be32(out, static_cast<std::uint32_t>(cols));
    for (Eigen::Index i = 0; i < images.rows(); ++i)
        for (Eigen::Index p = 0; p < images.cols(); ++p) {
            const double v = images(i, p);
            out.put(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
        }
}

void write_idx_labels(const std::string& path, const std::vector<int>& labels) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("idx: cannot write " + path);
    write_be32(out, kLabelMagic);
    write_be32(out, static_cast<std::uint32_t>(labels.size()));
    for (int l : labels) out.put(static_cast<char>(l));
}

Dataset assemble_dataset(Mat images, std::vector<int> labels, std::string split) {
    if (images.rows() != static_cast<Eigen::Index>(labels.size()))
        throw std::runtime_error("dataset: image/label count mismatch");
    for (int l : labels)
        if (l < 0 || l > 9) throw std::runtime_error("dataset: label out of range");
    if (images.size() > 0 && !images.allFinite())
        throw std::runtime_error("dataset: non-finite pixel");
    return Dataset{std::move(images), std::move(labels), std::move(split)};
}

Dataset subsample(const Dataset& ds, int k, std::uint64_t seed) {
    if (k > ds.size()) throw std::runtime_error("dataset: subsample larger than source");
    std::vector<int> idx(ds.size());
    std::iota(idx.begin(), idx.end(), 0);
    auto rng = make_rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(k);
    std::sort(idx.begin(), idx.end());  // keep original ordering inside the subset

    Mat images(k, ds.images.cols());
    std::vector<int> labels(k);
    for (int i = 0; i < k; ++i) {
        images.row(i) = ds.images.row(idx[i]);
        labels[i] = ds.labels[idx[i]];
    }
    return Dataset{std::move(images), std::move(labels), ds.split};
}

Dataset load_split(const std::string& dir, const std::string& split) {
    const std::string stem = split == "train" ? "train" : "t10k";
    auto images = load_idx_images(dir + "/" + stem + "-images-idx3-ubyte");
    auto labels = load_idx_labels(dir + "/" + stem + "-labels-idx1-ubyte");
    return assemble_dataset(std::move(images), std::move(labels), split);
}

}  // namespace qelm
