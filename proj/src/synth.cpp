#include "qelm/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>

#include "qelm/rng.hpp"

namespace qelm {

namespace {

// 12x8 glyph masks, '#' = stroke.
const std::array<std::array<const char*, 12>, 10> kGlyphs = {{
    // 0
    {{" ###### ", "##    ##", "##    ##", "##    ##", "##    ##", "##    ##", "##    ##",
      "##    ##", "##    ##", "##    ##", "##    ##", " ###### "}},
    // 1
    {{"   ##   ", "  ###   ", " ####   ", "   ##   ", "   ##   ", "   ##   ", "   ##   ",
      "   ##   ", "   ##   ", "   ##   ", "   ##   ", " ###### "}},
    // 2
    {{" ###### ", "##    ##", "      ##", "      ##", "     ## ", "    ##  ", "   ##   ",
      "  ##    ", " ##     ", "##      ", "##      ", "########"}},
    // 3
    {{" ###### ", "##    ##", "      ##", "      ##", "   #### ", "   #### ", "      ##",
      "      ##", "      ##", "      ##", "##    ##", " ###### "}},
    // 4
    {{"     ## ", "    ### ", "   #### ", "  ## ## ", " ##  ## ", "##   ## ", "########",
      "     ## ", "     ## ", "     ## ", "     ## ", "     ## "}},
    // 5
    {{"########", "##      ", "##      ", "##      ", "####### ", "      ##", "      ##",
      "      ##", "      ##", "      ##", "##    ##", " ###### "}},
    // 6
    {{" ###### ", "##    ##", "##      ", "##      ", "####### ", "##    ##", "##    ##",
      "##    ##", "##    ##", "##    ##", "##    ##", " ###### "}},
    // 7
    {{"########", "      ##", "      ##", "     ## ", "     ## ", "    ##  ", "    ##  ",
      "   ##   ", "   ##   ", "  ##    ", "  ##    ", "  ##    "}},
    // 8
    {{" ###### ", "##    ##", "##    ##", "##    ##", " ###### ", " ###### ", "##    ##",
      "##    ##", "##    ##", "##    ##", "##    ##", " ###### "}},
    // 9
    {{" ###### ", "##    ##", "##    ##", "##    ##", "##    ##", "##    ##", " #######",
      "      ##", "      ##", "      ##", "##    ##", " ###### "}},
}};

constexpr int kSide = 28;
constexpr int kGlyphRows = 12, kGlyphCols = 8;

}  // namespace

Dataset make_synthetic_digits(int count, std::uint64_t seed, const std::string& split) {
    auto rng = make_rng(seed);
    std::uniform_int_distribution<int> digit(0, 9);
    std::uniform_int_distribution<int> shift(-2, 2);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> jitter(0.0, 1.0);

    Mat images = Mat::Zero(count, kSide * kSide);
    std::vector<int> labels(count);

    // Glyphs are drawn at ~1.8x scale into a 28x28 canvas with per-sample
    // shear, stroke weight and shift, then blurred and perturbed with pixel
    // noise.
    const double scale = 1.8;
    for (int s = 0; s < count; ++s) {
        const int d = digit(rng);
        labels[s] = d;
        const int dy = shift(rng), dx = shift(rng);
        const double stroke = 0.75 + 0.25 * unit(rng);
        const double tilt = 0.12 * jitter(rng);  // horizontal shear

        Mat canvas = Mat::Zero(kSide, kSide);
        const double oy = (kSide - kGlyphRows * scale) / 2.0 + dy;
        const double ox = (kSide - kGlyphCols * scale) / 2.0 + dx;
        for (int r = 0; r < kSide; ++r)
            for (int c = 0; c < kSide; ++c) {
                const double gr = (r - oy) / scale;
                const double gc = (c - ox - tilt * (r - kSide / 2.0)) / scale;
                const int ir = static_cast<int>(std::floor(gr));
                const int ic = static_cast<int>(std::floor(gc));
                if (ir >= 0 && ir < kGlyphRows && ic >= 0 && ic < kGlyphCols &&
                    kGlyphs[d][ir][ic] == '#')
                    canvas(r, c) = stroke;
            }

        // 3x3 box blur softens the binary strokes.
        Mat blurred = Mat::Zero(kSide, kSide);
        for (int r = 0; r < kSide; ++r)
            for (int c = 0; c < kSide; ++c) {
                double sum = 0.0;
                int cnt = 0;
                for (int rr = std::max(0, r - 1); rr <= std::min(kSide - 1, r + 1); ++rr)
                    for (int cc = std::max(0, c - 1); cc <= std::min(kSide - 1, c + 1); ++cc) {
                        sum += canvas(rr, cc);
                        ++cnt;
                    }
                blurred(r, c) = sum / cnt;
            }

        for (int r = 0; r < kSide; ++r)
            for (int c = 0; c < kSide; ++c) {
                double v = blurred(r, c) + 0.03 * jitter(rng);
                images(s, r * kSide + c) = std::clamp(v, 0.0, 1.0);
            }
    }
    return assemble_dataset(std::move(images), std::move(labels), split);
}

void write_synthetic_dataset(const std::string& dir, int train_count, int test_count,
                             std::uint64_t seed) {
    Dataset train = make_synthetic_digits(train_count, stage_seed(seed, "synth-train"), "train");
    Dataset test = make_synthetic_digits(test_count, stage_seed(seed, "synth-test"), "test");
    write_idx_images(dir + "/train-images-idx3-ubyte", train.images);
    write_idx_labels(dir + "/train-labels-idx1-ubyte", train.labels);
    write_idx_images(dir + "/t10k-images-idx3-ubyte", test.images);
    write_idx_labels(dir + "/t10k-labels-idx1-ubyte", test.labels);
}

}  // namespace qelm
