#include "qsdc/harness.hpp"

#include <algorithm>
#include <cmath>

namespace qsdc {

namespace {

// Stream-splitting tags. Every random decision in an experiment comes from
// root.fork(tag) (possibly forked again per round), so the layout below is
// the complete derivation rule.
constexpr std::uint64_t kTagRounds = 1;
constexpr std::uint64_t kTagAliceSource = 2;
constexpr std::uint64_t kTagBobSource = 3;
constexpr std::uint64_t kTagCheck = 4;
constexpr std::uint64_t kTagEve = 5;

// Lazy bit supply with peek/pop semantics; a round that voids (lost photon)
// simply never pops, which re-queues the bits for the next round.
class BitQueue {
public:
    BitQueue(const MessageSource& source, RandomStream rng)
        : source_(source), rng_(std::move(rng)) {}

    int peek() {
        if (!pending_) pending_ = draw();
        return *pending_;
    }

    void pop() { pending_.reset(); }

private:
    int draw() {
        if (source_.kind == MessageSource::Kind::Fixed) {
            const int bit = source_.bits[cursor_ % source_.bits.size()];
            ++cursor_;
            return bit;
        }
        return rng_.bit();
    }

    MessageSource source_;
    RandomStream rng_;
    std::size_t cursor_ = 0;
    std::optional<int> pending_;
};

void require(bool ok, const char* message) {
    if (!ok) throw ConfigError(message);
}

bool in_unit(double p) { return p >= 0.0 && p <= 1.0; }

SummaryStats aggregate(std::span<const RoundRecord> records) {
    SummaryStats s;
    s.rounds = records.size();

    std::uint64_t detections = 0;
    std::uint64_t phi = 0;
    std::uint64_t mismatches = 0;
    std::uint64_t err_a2b = 0, err_b2a = 0;
    std::uint64_t eve_rounds = 0, eve_hits_j = 0, eve_hits_k = 0;
    std::optional<std::uint64_t> abort_round;

    auto note_abort = [&](std::uint64_t id) {
        if (!abort_round || id < *abort_round) abort_round = id;
    };

    for (const auto& r : records) {
        if (r.lost) {
            ++s.lost_rounds;
            continue;
        }
        if (r.mode == Mode::Control) {
            ++s.control_rounds;
            if (r.detected) {
                ++detections;
                note_abort(r.round_id);
            }
            continue;
        }
        ++s.message_rounds;
        if (r.tamper_phi) {
            ++phi;
            note_abort(r.round_id);
        }
        if (r.consumed_by_check) {
            ++s.checked_rounds;
            if (check_mismatch(r)) {
                ++mismatches;
                note_abort(r.round_id);
            }
        } else if (!r.tamper_phi) {
            ++s.payload_rounds;
            if (r.j_hat && r.j && *r.j_hat != *r.j) ++err_a2b;
            if (r.k_hat && r.k && *r.k_hat != *r.k) ++err_b2a;
        }
        if (r.eve_guess_j && r.j && r.k) {
            ++eve_rounds;
            if (*r.eve_guess_j == *r.j) ++eve_hits_j;
            if (r.eve_guess_k && *r.eve_guess_k == *r.k) ++eve_hits_k;
        }
    }

    auto ratio = [](std::uint64_t num, std::uint64_t den) {
        return static_cast<double>(num) / static_cast<double>(den);
    };

    if (s.control_rounds > 0) {
        auto iv = binomial_interval(detections, s.control_rounds);
        s.detection_rate = RateWithInterval{ratio(detections, s.control_rounds),
                                            iv->first, iv->second};
    }
    if (s.payload_rounds > 0) {
        s.ber_alice_to_bob = ratio(err_a2b, s.payload_rounds);
        s.ber_bob_to_alice = ratio(err_b2a, s.payload_rounds);
    }
    if (s.message_rounds > 0) s.phi_rate = ratio(phi, s.message_rounds);
    if (s.checked_rounds > 0)
        s.mismatch_rate = ratio(mismatches, s.checked_rounds);
    if (eve_rounds > 0) {
        s.eve_accuracy_j = ratio(eve_hits_j, eve_rounds);
        s.eve_accuracy_k = ratio(eve_hits_k, eve_rounds);
    }
    if (s.rounds > 0)
        s.throughput = ratio(2 * s.payload_rounds, s.rounds);
    s.would_abort_round = abort_round;
    return s;
}

} // namespace

void ExperimentConfig::validate() const {
    require(rounds >= 1, "rounds must be >= 1");
    require(in_unit(control_prob), "control_prob must be in [0,1]");
    require(in_unit(announce_fraction), "announce_fraction must be in [0,1]");
    require(in_unit(loss_p), "loss_p must be in [0,1]");
    for (const auto* src : {&alice_source, &bob_source}) {
        if (src->kind == MessageSource::Kind::Fixed) {
            require(!src->bits.empty(), "fixed message source needs bits");
            for (int b : src->bits)
                require(b == 0 || b == 1, "message bits must be 0 or 1");
        }
    }
}

std::optional<std::pair<double, double>> binomial_interval(
    std::uint64_t successes, std::uint64_t trials) {
    if (trials == 0) return std::nullopt;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double half = 1.959963984540054 * std::sqrt(p * (1.0 - p) / n);
    return std::make_pair(std::max(0.0, p - half), std::min(1.0, p + half));
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();

    const RandomStream root(config.seed);
    const RandomStream round_root = root.fork(kTagRounds);
    const RandomStream eve_root = root.fork(kTagEve);
    BitQueue alice_bits(config.alice_source, root.fork(kTagAliceSource));
    BitQueue bob_bits(config.bob_source, root.fork(kTagBobSource));

    AdversarySpec adversary = config.adversary;
    adversary.loss_p = config.loss_p;
    const ProtocolConfig pcfg{config.control_prob, config.bob_encode_target};

    std::vector<RoundRecord> transcript;
    transcript.reserve(config.rounds);

    for (std::uint64_t i = 0; i < config.rounds; ++i) {
        RandomStream round_rng = round_root.fork(i);
        RoundRecord rec = run_round(pcfg, alice_bits.peek(), bob_bits.peek(),
                                    adversary, i, round_rng);
        if (rec.mode == Mode::Message && !rec.lost) {
            alice_bits.pop();
            bob_bits.pop();
            RandomStream eve_rng = eve_root.fork(i);
            EveRoundView view{rec.forward_event, rec.return_event,
                              rec.bob_bell_announcement};
            EveGuess guess = eve_guess_round(adversary, view, eve_rng);
            rec.eve_guess_j = guess.j;
            rec.eve_guess_k = guess.k;
        }
        transcript.push_back(std::move(rec));
    }

    RandomStream check_rng = root.fork(kTagCheck);
    announcement_check(transcript, config.announce_fraction, check_rng);

    return {aggregate(transcript), std::move(transcript)};
}

SummaryStats replay(std::span<const RoundRecord> transcript) {
    return aggregate(transcript);
}

} // namespace qsdc
