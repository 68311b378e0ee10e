#include "qsdc/quantum.hpp"

#include <cmath>

namespace qsdc {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

int basis_bit(int index, QubitIndex target) {
    return target == QubitIndex::Travel ? (index & 1) : ((index >> 1) & 1);
}

} // namespace

std::optional<int> psi_parity(BellLabel label) {
    switch (label) {
        case BellLabel::PsiPlus: return 0;
        case BellLabel::PsiMinus: return 1;
        default: return std::nullopt;
    }
}

int sign_parity(BellLabel label) {
    return (label == BellLabel::PhiMinus || label == BellLabel::PsiMinus) ? 1
                                                                          : 0;
}

std::string_view to_string(BellLabel label) {
    switch (label) {
        case BellLabel::PhiPlus: return "phi+";
        case BellLabel::PhiMinus: return "phi-";
        case BellLabel::PsiPlus: return "psi+";
        case BellLabel::PsiMinus: return "psi-";
    }
    return "?";
}

std::optional<BellLabel> bell_label_from_string(std::string_view s) {
    if (s == "phi+") return BellLabel::PhiPlus;
    if (s == "phi-") return BellLabel::PhiMinus;
    if (s == "psi+") return BellLabel::PsiPlus;
    if (s == "psi-") return BellLabel::PsiMinus;
    return std::nullopt;
}

double TwoQubitState::norm() const {
    double n2 = 0.0;
    for (const auto& a : amp) n2 += std::norm(a);
    return std::sqrt(n2);
}

bool equal_up_to_phase(const TwoQubitState& a, const TwoQubitState& b,
                       double tol) {
    // Align b's phase to a's on the largest component of a, then compare
    // componentwise.
    int pivot = 0;
    double best = 0.0;
    for (int i = 0; i < 4; ++i) {
        if (std::norm(a.amp[i]) > best) {
            best = std::norm(a.amp[i]);
            pivot = i;
        }
    }
    if (best < tol * tol) return b.norm() < tol;
    if (std::abs(b.amp[pivot]) < tol) return false;
    std::complex<double> phase = b.amp[pivot] / a.amp[pivot];
    phase /= std::abs(phase);
    for (int i = 0; i < 4; ++i) {
        if (std::abs(phase * a.amp[i] - b.amp[i]) > tol) return false;
    }
    return true;
}

TwoQubitState make_bell(BellLabel label) {
    TwoQubitState s;
    switch (label) {
        case BellLabel::PhiPlus:
            s.amp = {kInvSqrt2, 0.0, 0.0, kInvSqrt2};
            break;
        case BellLabel::PhiMinus:
            s.amp = {kInvSqrt2, 0.0, 0.0, -kInvSqrt2};
            break;
        case BellLabel::PsiPlus:
            s.amp = {0.0, kInvSqrt2, kInvSqrt2, 0.0};
            break;
        case BellLabel::PsiMinus:
            s.amp = {0.0, kInvSqrt2, -kInvSqrt2, 0.0};
            break;
    }
    return s;
}

TwoQubitState apply_local(const TwoQubitState& state, LocalOp op,
                          QubitIndex target) {
    if (op == LocalOp::Z0) return state;
    TwoQubitState out = state;
    for (int i = 0; i < 4; ++i) {
        if (basis_bit(i, target) == 1) out.amp[i] = -out.amp[i];
    }
    return out;
}

MeasureResult measure_computational(const TwoQubitState& state,
                                    QubitIndex target, RandomStream& rng) {
    double p1 = 0.0;
    for (int i = 0; i < 4; ++i) {
        if (basis_bit(i, target) == 1) p1 += std::norm(state.amp[i]);
    }
    int bit = rng.uniform() < p1 ? 1 : 0;
    // Rounding in p1 could otherwise select a branch of probability ~0.
    if ((bit ? p1 : 1.0 - p1) < kAmplitudeTol) bit ^= 1;
    const double p = bit ? p1 : 1.0 - p1;

    TwoQubitState post = state;
    const double scale = 1.0 / std::sqrt(p);
    for (int i = 0; i < 4; ++i) {
        if (basis_bit(i, target) == bit) {
            post.amp[i] *= scale;
        } else {
            post.amp[i] = 0.0;
        }
    }
    return {bit, post};
}

BellCoefficients bell_coefficients(const TwoQubitState& state) {
    const auto& a = state.amp;
    BellCoefficients c;
    c[static_cast<int>(BellLabel::PhiPlus)] = (a[0] + a[3]) * kInvSqrt2;
    c[static_cast<int>(BellLabel::PhiMinus)] = (a[0] - a[3]) * kInvSqrt2;
    c[static_cast<int>(BellLabel::PsiPlus)] = (a[1] + a[2]) * kInvSqrt2;
    c[static_cast<int>(BellLabel::PsiMinus)] = (a[1] - a[2]) * kInvSqrt2;
    return c;
}

TwoQubitState state_from_bell_coefficients(const BellCoefficients& coeffs) {
    const auto& c = coeffs;
    TwoQubitState s;
    s.amp[0] = (c[0] + c[1]) * kInvSqrt2;
    s.amp[3] = (c[0] - c[1]) * kInvSqrt2;
    s.amp[1] = (c[2] + c[3]) * kInvSqrt2;
    s.amp[2] = (c[2] - c[3]) * kInvSqrt2;
    return s;
}

BellMeasureResult measure_bell(const TwoQubitState& state, RandomStream& rng) {
    const BellCoefficients c = bell_coefficients(state);
    const double u = rng.uniform();
    double acc = 0.0;
    int outcome = -1;
    for (int i = 0; i < 4; ++i) {
        acc += std::norm(c[i]);
        if (u < acc) {
            outcome = i;
            break;
        }
    }
    if (outcome < 0) {
        // u >= acc only through rounding of the probability sum; fall back
        // to the most likely label so a zero-probability branch is never
        // selected.
        double best = -1.0;
        for (int i = 0; i < 4; ++i) {
            if (std::norm(c[i]) > best) {
                best = std::norm(c[i]);
                outcome = i;
            }
        }
    }
    const auto label = static_cast<BellLabel>(outcome);
    return {label, make_bell(label)};
}

} // namespace qsdc
