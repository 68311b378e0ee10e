#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qsdc/adversary.hpp"
#include "qsdc/protocol.hpp"

namespace qsdc {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MessageSource {
    enum class Kind { SeededRandom, Fixed };

    Kind kind = Kind::SeededRandom;
    // Fixed sources cycle through these bits when exhausted.
    std::vector<int> bits;
};

struct ExperimentConfig {
    std::uint64_t rounds = 10000;
    double control_prob = 0.5;
    double announce_fraction = 0.1;
    double loss_p = 0.0;
    AdversarySpec adversary;
    std::uint64_t seed = 0;
    MessageSource alice_source;
    MessageSource bob_source;
    QubitIndex bob_encode_target = QubitIndex::Travel;

    // Throws ConfigError with a field-specific message.
    void validate() const;
};

struct RateWithInterval {
    double rate = 0.0;
    double low = 0.0;
    double high = 0.0;

    bool operator==(const RateWithInterval&) const = default;
};

struct SummaryStats {
    std::uint64_t rounds = 0;
    std::uint64_t control_rounds = 0;
    std::uint64_t message_rounds = 0;
    std::uint64_t lost_rounds = 0;
    std::uint64_t checked_rounds = 0;
    std::uint64_t payload_rounds = 0; // message rounds still carrying payload

    std::optional<RateWithInterval> detection_rate; // per control round
    std::optional<double> ber_alice_to_bob;
    std::optional<double> ber_bob_to_alice;
    std::optional<double> phi_rate;      // per message round
    std::optional<double> mismatch_rate; // per checked round
    std::optional<double> eve_accuracy_j;
    std::optional<double> eve_accuracy_k;
    double throughput = 0.0; // payload bits per transmitted pair
    std::optional<std::uint64_t> would_abort_round;

    bool operator==(const SummaryStats&) const = default;
};

struct ExperimentResult {
    SummaryStats summary;
    std::vector<RoundRecord> transcript; // ordered by round_id
};

// Seeded Monte Carlo run: `rounds` protocol rounds, announcement check,
// Eve's guesses, aggregation. Deterministic per config; per-round random
// streams are forked from the seed so execution order cannot matter.
ExperimentResult run_experiment(const ExperimentConfig& config);

// 95% normal-approximation binomial interval, clamped to [0, 1]. Empty for
// trials = 0.
std::optional<std::pair<double, double>> binomial_interval(
    std::uint64_t successes, std::uint64_t trials);

// Recomputes SummaryStats from a transcript alone; equals the live-run
// summary field for field.
SummaryStats replay(std::span<const RoundRecord> transcript);

} // namespace qsdc
