#include "qsdc/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace qsdc {

TwoQubitState bob_prepare() { return make_bell(BellLabel::PsiPlus); }

Mode alice_choose_mode(double control_prob, RandomStream& rng) {
    return rng.bernoulli(control_prob) ? Mode::Control : Mode::Message;
}

ControlResult control_round(const TwoQubitState& state, RandomStream& rng) {
    // Alice measures the travel photon and announces; Bob then measures the
    // home photon in the same basis.
    auto alice = measure_computational(state, QubitIndex::Travel, rng);
    auto bob = measure_computational(alice.post, QubitIndex::Home, rng);
    return {alice.bit, bob.bit, alice.bit == bob.bit};
}

TwoQubitState alice_encode(const TwoQubitState& state, int j) {
    return apply_local(state, op_of(j), QubitIndex::Travel);
}

BellLabel bob_encode_and_measure(const TwoQubitState& state, int k,
                                 QubitIndex target, RandomStream& rng) {
    return measure_bell(apply_local(state, op_of(k), target), rng).outcome;
}

std::optional<int> decode_peer_bit(BellLabel outcome, int own_bit) {
    auto parity = psi_parity(outcome);
    if (!parity) return std::nullopt;
    return *parity ^ own_bit;
}

RoundRecord run_round(const ProtocolConfig& config, int j, int k,
                      const AdversarySpec& adversary, std::uint64_t round_id,
                      RandomStream& rng) {
    RoundRecord rec;
    rec.round_id = round_id;
    // Alice's mode schedule is independent of channel events; drawing it
    // up front keeps lost rounds classifiable.
    rec.mode = alice_choose_mode(config.control_prob, rng);

    auto forward = transmit(bob_prepare(), ChannelLeg::Forward, adversary, rng);
    rec.forward_event = forward.event;
    if (!forward.state) {
        rec.lost = true;
        return rec;
    }

    if (rec.mode == Mode::Control) {
        auto ctl = control_round(*forward.state, rng);
        rec.alice_announcement = ctl.alice_bit;
        rec.bob_control_bit = ctl.bob_bit;
        rec.detected = ctl.detected;
        return rec;
    }

    auto back = transmit(alice_encode(*forward.state, j), ChannelLeg::Return,
                         adversary, rng);
    rec.return_event = back.event;
    if (!back.state) {
        rec.lost = true;
        return rec;
    }

    rec.j = j;
    rec.k = k;
    BellLabel outcome =
        bob_encode_and_measure(*back.state, k, config.bob_encode_target, rng);
    rec.bob_bell_announcement = outcome;
    rec.j_hat = decode_peer_bit(outcome, k);
    rec.k_hat = decode_peer_bit(outcome, j);
    rec.tamper_phi = !rec.j_hat.has_value();
    return rec;
}

bool check_mismatch(const RoundRecord& record) {
    if (!record.bob_bell_announcement || !record.j || !record.k) return true;
    auto parity = psi_parity(*record.bob_bell_announcement);
    if (!parity) return true; // Phi outcome
    return *parity != (*record.j ^ *record.k);
}

AnnouncementCheckReport announcement_check(std::span<RoundRecord> records,
                                           double fraction,
                                           RandomStream& rng) {
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (r.mode == Mode::Message && !r.lost && !r.consumed_by_check) {
            eligible.push_back(i);
        }
    }

    AnnouncementCheckReport report;
    if (eligible.empty() || fraction <= 0.0) return report;

    const auto want = static_cast<std::size_t>(std::min<double>(
        static_cast<double>(eligible.size()),
        std::ceil(fraction * static_cast<double>(eligible.size()))));

    // Partial Fisher-Yates: the first `want` entries become the sample
    // without replacement.
    for (std::size_t i = 0; i < want; ++i) {
        const std::size_t pick =
            i + static_cast<std::size_t>(rng.below(eligible.size() - i));
        std::swap(eligible[i], eligible[pick]);
        RoundRecord& r = records[eligible[i]];
        r.consumed_by_check = true;
        ++report.checked_rounds;
        if (check_mismatch(r)) ++report.mismatches;
    }
    return report;
}

} // namespace qsdc
