#pragma once

#include <string>

#include "qelm/types.hpp"

namespace qelm {

enum class EncodingKind { Angle, DenseAngle, UniformBloch, General, Amplitude };

EncodingKind encoding_from_string(const std::string& name);
std::string to_string(EncodingKind kind);

// How latent features map onto qubits. Inputs are expected in [0,1]; the
// encoder applies the per-role interval mapping itself (polar and phase
// features to [0,pi] by default, populations and pairs kept in [0,1]).
struct EncodingSpec {
    EncodingKind kind = EncodingKind::DenseAngle;
    int n_qubits = 0;
    // Ablation switch: map phase features onto the full circle [0,2pi]
    // instead of the default half sphere.
    bool phase_full_circle = false;

    // Latent dimension this spec consumes: N for angle, 2N for the other
    // per-qubit encodings, up to 2^N for amplitude.
    int expected_features() const;
};

struct EncodeStats {
    long degenerate_pairs = 0;  // (0,0) pairs mapped to |0> by the general encoding
};

// Maps one latent vector to a unit-norm state of 2^N amplitudes. Qubit 0 is
// the most significant bit of the basis index. Odd feature counts for
// two-feature-per-qubit encodings are padded with one trailing zero.
CVec encode_state(const EncodingSpec& spec, const Vec& x, EncodeStats* stats = nullptr);

// One state per row of `latents`, returned as columns of a 2^N x samples matrix.
CMat encode_batch(const EncodingSpec& spec, const Mat& latents, EncodeStats* stats = nullptr);

}  // namespace qelm
