#include "qsdc/adversary.hpp"

namespace qsdc {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Hadamard on one tensor factor.
TwoQubitState apply_hadamard(const TwoQubitState& state, QubitIndex target) {
    TwoQubitState out;
    const int stride = target == QubitIndex::Travel ? 1 : 2;
    const int other = target == QubitIndex::Travel ? 2 : 1;
    for (int o = 0; o < 2; ++o) {
        const auto a0 = state.amp[o * other];
        const auto a1 = state.amp[o * other + stride];
        out.amp[o * other] = (a0 + a1) * kInvSqrt2;
        out.amp[o * other + stride] = (a0 - a1) * kInvSqrt2;
    }
    return out;
}

} // namespace

MeasureResult x_basis_measure(const TwoQubitState& state, QubitIndex target,
                              RandomStream& rng) {
    // Rotate |+->/|-> onto the computational basis, measure, rotate back.
    auto [bit, post] = measure_computational(apply_hadamard(state, target),
                                             target, rng);
    return {bit, apply_hadamard(post, target)};
}

TransmitResult transmit(const TwoQubitState& state, ChannelLeg leg,
                        const AdversarySpec& spec, RandomStream& rng) {
    ChannelEvent event;
    event.leg = leg;

    if (spec.loss_p > 0.0 && rng.bernoulli(spec.loss_p)) {
        event.outcome = ChannelEvent::Outcome::Lost;
        return {std::nullopt, event};
    }

    if (!spec.attacks(leg)) {
        event.outcome = ChannelEvent::Outcome::Delivered;
        return {state, event};
    }

    // Intercept-measure-resend: Eve measures the in-flight travel qubit and
    // forwards the collapsed photon.
    MeasureResult m = spec.basis == MeasureBasis::Z
                          ? measure_computational(state, QubitIndex::Travel, rng)
                          : x_basis_measure(state, QubitIndex::Travel, rng);
    event.outcome = ChannelEvent::Outcome::Intercepted;
    event.eve_bit = m.bit;
    event.eve_basis = spec.basis;
    return {m.post, event};
}

namespace {

bool intercepted(const std::optional<ChannelEvent>& e) {
    return e && e->outcome == ChannelEvent::Outcome::Intercepted;
}

} // namespace

EveGuess eve_guess_round(const AdversarySpec& spec, const EveRoundView& view,
                         RandomStream& rng) {
    std::optional<int> j_known;
    if (spec.strategy == Strategy::InterceptResend &&
        spec.basis == MeasureBasis::X && intercepted(view.forward) &&
        intercepted(view.return_)) {
        j_known = *view.forward->eve_bit ^ *view.return_->eve_bit;
    }

    EveGuess g;
    g.j = j_known ? *j_known : rng.bit();
    // The announced outcome's sign parity equals j XOR k whenever the pair
    // survived undisturbed in the Z-observable sense; after a Z-basis
    // intercept the parity is pure noise and this inference degrades to a
    // coin flip, which is still the likelihood optimum.
    g.k = view.announcement ? sign_parity(*view.announcement) ^ g.j : rng.bit();
    return g;
}

std::vector<EveGuess> eve_guess(const AdversarySpec& spec,
                                std::span<const EveRoundView> rounds,
                                RandomStream& rng) {
    std::vector<EveGuess> out;
    out.reserve(rounds.size());
    for (const auto& view : rounds) {
        out.push_back(eve_guess_round(spec, view, rng));
    }
    return out;
}

} // namespace qsdc
