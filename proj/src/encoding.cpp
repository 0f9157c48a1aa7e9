#include "qelm/encoding.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qelm {

EncodingKind encoding_from_string(const std::string& name) {
    if (name == "angle") return EncodingKind::Angle;
    if (name == "dense_angle") return EncodingKind::DenseAngle;
    if (name == "uniform_bloch") return EncodingKind::UniformBloch;
    if (name == "general") return EncodingKind::General;
    if (name == "amplitude") return EncodingKind::Amplitude;
    throw std::runtime_error("encoding: unknown kind '" + name + "'");
}

std::string to_string(EncodingKind kind) {
    switch (kind) {
        case EncodingKind::Angle: return "angle";
        case EncodingKind::DenseAngle: return "dense_angle";
        case EncodingKind::UniformBloch: return "uniform_bloch";
        case EncodingKind::General: return "general";
        case EncodingKind::Amplitude: return "amplitude";
    }
    return "?";
}

int EncodingSpec::expected_features() const {
    switch (kind) {
        case EncodingKind::Angle: return n_qubits;
        case EncodingKind::Amplitude: return static_cast<int>(dim_for_qubits(n_qubits));
        default: return 2 * n_qubits;
    }
}

namespace {

constexpr double kPi = std::numbers::pi;

// Tensor-in a single-qubit state; qubit order of the loop makes qubit 0 the
// most significant index bit.
void kron_qubit(CVec& state, const complex& a0, const complex& a1) {
    CVec next(state.size() * 2);
    for (Eigen::Index i = 0; i < state.size(); ++i) {
        next(2 * i) = state(i) * a0;
        next(2 * i + 1) = state(i) * a1;
    }
    state = std::move(next);
}

Vec padded(const Vec& x, int want) {
    if (x.size() == want) return x;
    Vec y = Vec::Zero(want);
    y.head(x.size()) = x;
    return y;
}

}  // namespace

CVec encode_state(const EncodingSpec& spec, const Vec& x, EncodeStats* stats) {
    const int n = spec.n_qubits;
    if (n < 1) throw std::runtime_error("encoding: need at least one qubit");
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (!std::isfinite(x(i)) || x(i) < 0.0 || x(i) > 1.0)
            throw std::runtime_error("encoding: feature outside [0,1]");

    const double phase_span = spec.phase_full_circle ? 2.0 * kPi : kPi;

    if (spec.kind == EncodingKind::Amplitude) {
        const int dim = static_cast<int>(dim_for_qubits(n));
        if (x.size() < 1 || x.size() > dim)
            throw std::runtime_error("encoding: amplitude feature count out of range");
        const double norm = x.norm();
        if (norm == 0.0) throw std::runtime_error("encoding: amplitude input is the zero vector");
        CVec state = CVec::Zero(dim);
        for (Eigen::Index i = 0; i < x.size(); ++i) state(i) = x(i) / norm;
        return state;
    }

    if (spec.kind == EncodingKind::Angle) {
        if (x.size() != n) throw std::runtime_error("encoding: angle expects N features");
        CVec state = CVec::Ones(1);
        for (int q = 0; q < n; ++q) {
            const double theta = x(q) * kPi;
            kron_qubit(state, std::cos(theta / 2.0), std::sin(theta / 2.0));
        }
        return state;
    }

    // Two features per qubit; an odd count gets one trailing zero feature.
    if (x.size() != 2 * n && x.size() != 2 * n - 1)
        throw std::runtime_error("encoding: expected 2N features");
    const Vec f = padded(x, 2 * n);

    CVec state = CVec::Ones(1);
    for (int q = 0; q < n; ++q) {
        const double a = f(2 * q);
        const double b = f(2 * q + 1);
        complex a0, a1;
        switch (spec.kind) {
            case EncodingKind::DenseAngle: {
                const double theta = a * kPi;
                const double phi = b * phase_span;
                a0 = std::cos(theta / 2.0);
                a1 = std::polar(std::sin(theta / 2.0), phi);
                break;
            }
            case EncodingKind::UniformBloch: {
                const double phi = b * phase_span;
                a0 = std::sqrt(a);
                a1 = std::polar(std::sqrt(1.0 - a), phi);
                break;
            }
            case EncodingKind::General: {
                const double norm = std::hypot(a, b);
                if (norm == 0.0) {
                    // Eq-undefined at the origin; map to |0> and count it.
                    if (stats) stats->degenerate_pairs++;
                    a0 = 1.0;
                    a1 = 0.0;
                } else {
                    a0 = a / norm;
                    a1 = b / norm;
                }
                break;
            }
            default: throw std::logic_error("encoding: unreachable");
        }
        kron_qubit(state, a0, a1);
    }
    return state;
}

CMat encode_batch(const EncodingSpec& spec, const Mat& latents, EncodeStats* stats) {
    const Eigen::Index dim = static_cast<Eigen::Index>(dim_for_qubits(spec.n_qubits));
    CMat states(dim, latents.rows());
    for (Eigen::Index i = 0; i < latents.rows(); ++i)
        states.col(i) = encode_state(spec, latents.row(i).transpose(), stats);
    return states;
}

}  // namespace qelm
