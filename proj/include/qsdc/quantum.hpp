#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string_view>

#include "qsdc/rng.hpp"

namespace qsdc {

// Tolerance for all exact-algebra checks on double-precision 4-vectors.
inline constexpr double kAmplitudeTol = 1e-12;

enum class BellLabel : int {
    PhiPlus = 0,
    PhiMinus = 1,
    PsiPlus = 2,
    PsiMinus = 3,
};
using BellOutcome = BellLabel;

enum class QubitIndex { Home, Travel };

// Encoding alphabet: Z^0 (identity, bit 0) and Z^1 (phase flip, bit 1),
// Z = |0><0| - |1><1|.
enum class LocalOp { Z0, Z1 };

constexpr int bit_of(LocalOp op) { return op == LocalOp::Z1 ? 1 : 0; }
constexpr LocalOp op_of(int bit) { return bit ? LocalOp::Z1 : LocalOp::Z0; }

// 0 for Psi+, 1 for Psi-; empty for Phi outcomes, which sit outside the
// honest alphabet and act as tamper evidence.
std::optional<int> psi_parity(BellLabel label);

// 0 for Phi+/Psi+, 1 for Phi-/Psi-.
int sign_parity(BellLabel label);

std::string_view to_string(BellLabel label);
std::optional<BellLabel> bell_label_from_string(std::string_view s);

// Pure state of one EPR pair. Amplitudes are ordered over the basis
// |home,travel> as (a00, a01, a10, a11); index = 2*home_bit + travel_bit.
// Unit norm is an invariant of every operation below.
struct TwoQubitState {
    std::array<std::complex<double>, 4> amp{};

    double norm() const;
};

// Physical states are rays: equality ignores a global phase of unit modulus.
bool equal_up_to_phase(const TwoQubitState& a, const TwoQubitState& b,
                       double tol = kAmplitudeTol);

// Canonical Bell states with real amplitudes.
TwoQubitState make_bell(BellLabel label);

// (Z^bit ⊗ 1) or (1 ⊗ Z^bit) depending on target. Z0 returns the input
// unchanged, bit for bit.
TwoQubitState apply_local(const TwoQubitState& state, LocalOp op,
                          QubitIndex target);

struct MeasureResult {
    int bit;
    TwoQubitState post;
};

// Projective measurement of one qubit in the computational basis. The
// sampled branch always has nonzero probability; post is renormalized.
MeasureResult measure_computational(const TwoQubitState& state,
                                    QubitIndex target, RandomStream& rng);

// Coefficients of the state in the Bell basis, indexed by BellLabel:
//   c_Phi+ = (a00+a11)/sqrt2   c_Phi- = (a00-a11)/sqrt2
//   c_Psi+ = (a01+a10)/sqrt2   c_Psi- = (a01-a10)/sqrt2
using BellCoefficients = std::array<std::complex<double>, 4>;
BellCoefficients bell_coefficients(const TwoQubitState& state);

// Inverse basis change; reconstructs the computational amplitudes.
TwoQubitState state_from_bell_coefficients(const BellCoefficients& coeffs);

struct BellMeasureResult {
    BellLabel outcome;
    TwoQubitState post;
};

// Projective measurement in the Bell basis; post is the measured basis state.
BellMeasureResult measure_bell(const TwoQubitState& state, RandomStream& rng);

} // namespace qsdc
