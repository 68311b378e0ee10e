#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qsdc/quantum.hpp"
#include "qsdc/rng.hpp"

namespace qsdc {

enum class ChannelLeg { Forward, Return }; // Forward = Bob->Alice

enum class MeasureBasis { Z, X };

enum class Strategy { Honest, InterceptResend, LossOnly };

// Channel adversary: which legs Eve touches, in which basis, plus the
// per-leg photon loss probability of the channel itself.
struct AdversarySpec {
    Strategy strategy = Strategy::Honest;
    MeasureBasis basis = MeasureBasis::Z;
    bool attack_forward = false;
    bool attack_return = false;
    double loss_p = 0.0;

    bool attacks(ChannelLeg leg) const {
        if (strategy != Strategy::InterceptResend) return false;
        return leg == ChannelLeg::Forward ? attack_forward : attack_return;
    }
};

struct ChannelEvent {
    enum class Outcome { Delivered, Lost, Intercepted };

    ChannelLeg leg = ChannelLeg::Forward;
    Outcome outcome = Outcome::Delivered;
    // Populated for Intercepted only. Eve's record; never visible to the
    // honest parties.
    std::optional<int> eve_bit;
    std::optional<MeasureBasis> eve_basis;

    bool operator==(const ChannelEvent&) const = default;
};

struct TransmitResult {
    // Empty on loss.
    std::optional<TwoQubitState> state;
    ChannelEvent event;
};

// One traversal of the quantum channel. Loss is drawn first; an intercept
// on a matching leg measures the travel qubit in the spec's basis and
// forwards the collapsed state.
TransmitResult transmit(const TwoQubitState& state, ChannelLeg leg,
                        const AdversarySpec& spec, RandomStream& rng);

// Projective measurement onto |+>/|-> of the target qubit; bit 0 <-> |+>.
MeasureResult x_basis_measure(const TwoQubitState& state, QubitIndex target,
                              RandomStream& rng);

// Everything Eve can see about one message round: her own channel records
// plus the public Bell announcement.
struct EveRoundView {
    std::optional<ChannelEvent> forward;
    std::optional<ChannelEvent> return_;
    std::optional<BellLabel> announcement;
};

struct EveGuess {
    int j = 0;
    int k = 0;
};

// Maximum-likelihood guess of the hidden bits (j, k) for one round. With an
// X-basis intercept on both legs, Eve's two travel-qubit results straddle
// Alice's Z encoding and their XOR equals j exactly; in every other
// implemented strategy her records carry no information about j and the
// guess falls back to a coin flip, with k inferred from the announced
// outcome's sign parity.
EveGuess eve_guess_round(const AdversarySpec& spec, const EveRoundView& view,
                         RandomStream& rng);

std::vector<EveGuess> eve_guess(const AdversarySpec& spec,
                                std::span<const EveRoundView> rounds,
                                RandomStream& rng);

} // namespace qsdc
