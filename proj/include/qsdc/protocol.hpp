#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "qsdc/adversary.hpp"
#include "qsdc/quantum.hpp"
#include "qsdc/rng.hpp"

namespace qsdc {

enum class Mode { Control, Message };

struct ProtocolConfig {
    double control_prob = 0.5;
    // Bob may encode on either photon; both yield the same outcome law.
    QubitIndex bob_encode_target = QubitIndex::Travel;
};

// Full per-round transcript. Hidden bits j/k are recorded only for message
// rounds that completed both channel legs; lost rounds are void and their
// bits are re-queued by the harness.
struct RoundRecord {
    std::uint64_t round_id = 0;
    Mode mode = Mode::Message;

    std::optional<int> j; // Alice's bit, message rounds
    std::optional<int> k; // Bob's bit, message rounds

    ChannelEvent forward_event;
    std::optional<ChannelEvent> return_event;

    std::optional<int> alice_announcement; // control rounds: travel result
    std::optional<int> bob_control_bit;    // control rounds: home result
    std::optional<BellLabel> bob_bell_announcement; // message rounds

    std::optional<int> j_hat; // Bob's decode of Alice's bit
    std::optional<int> k_hat; // Alice's decode of Bob's bit

    bool detected = false;   // control-round identical results
    bool tamper_phi = false; // announced outcome outside the Psi alphabet
    bool lost = false;       // photon dropped on either leg
    bool consumed_by_check = false; // revealed by announcement_check

    std::optional<int> eve_guess_j;
    std::optional<int> eve_guess_k;

    bool operator==(const RoundRecord&) const = default;
};

struct AnnouncementCheckReport {
    std::uint64_t checked_rounds = 0;
    std::uint64_t mismatches = 0;

    double mismatch_rate() const {
        return checked_rounds ? static_cast<double>(mismatches) /
                                    static_cast<double>(checked_rounds)
                              : 0.0;
    }
};

// Bob prepares the pair in Psi+.
TwoQubitState bob_prepare();

// Control with probability c, independently per round.
Mode alice_choose_mode(double control_prob, RandomStream& rng);

struct ControlResult {
    int alice_bit;
    int bob_bit;
    bool detected; // identical results = eavesdropping evidence
};

// Both parties measure in the computational basis; Psi states are perfectly
// anticorrelated, so identical bits flag an eavesdropper.
ControlResult control_round(const TwoQubitState& state, RandomStream& rng);

// Z^j on the travel photon.
TwoQubitState alice_encode(const TwoQubitState& state, int j);

// Z^k on Bob's chosen photon, then a Bell measurement; the outcome is
// publicly announced.
BellLabel bob_encode_and_measure(const TwoQubitState& state, int k,
                                 QubitIndex target, RandomStream& rng);

// Mutual decoding law: peer_bit = psi_parity(outcome) XOR own_bit. Empty
// for Phi outcomes, which are tamper evidence rather than message data.
std::optional<int> decode_peer_bit(BellLabel outcome, int own_bit);

// One full protocol round: prepare, forward leg, mode choice, then either
// the eavesdropping test or encode / return leg / Bell measurement / mutual
// decode. Deterministic given rng.
RoundRecord run_round(const ProtocolConfig& config, int j, int k,
                      const AdversarySpec& adversary, std::uint64_t round_id,
                      RandomStream& rng);

// The announce-fraction countermeasure: reveal the true (j, k) of a random
// fraction of completed message rounds and check them against the announced
// Bell outcome. Checked rounds are marked consumed; their bits leave the
// payload.
AnnouncementCheckReport announcement_check(std::span<RoundRecord> records,
                                           double fraction, RandomStream& rng);

// True iff the revealed bits contradict the announced outcome.
bool check_mismatch(const RoundRecord& record);

} // namespace qsdc
