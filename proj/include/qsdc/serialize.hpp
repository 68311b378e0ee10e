#pragma once

#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "qsdc/harness.hpp"

namespace qsdc {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::string_view kToolName = "qsdc";
inline constexpr std::string_view kToolVersion = "0.1.0";

// Malformed transcript or summary document.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Json = nlohmann::ordered_json;

// CLI/config spelling of an adversary: `strategy[-basis][:legs]`, e.g.
// `none`, `loss`, `intercept-z:forward`, `intercept-x:both`. Basis defaults
// to z, legs to both. loss_p is carried separately by ExperimentConfig.
std::string format_adversary(const AdversarySpec& spec);
AdversarySpec parse_adversary(std::string_view text); // throws ConfigError

std::string_view to_string(QubitIndex target);
QubitIndex qubit_index_from_string(std::string_view s); // throws ConfigError

// One transcript.jsonl line per record.
Json record_to_json(const RoundRecord& record);
RoundRecord record_from_json(const Json& j); // throws SchemaError

Json summary_to_json(const SummaryStats& stats);
Json config_to_json(const ExperimentConfig& config);

// summary.json document: schema version, tool id, effective config, stats.
Json summary_document(const ExperimentConfig& config,
                      const SummaryStats& stats);

// Flat key=value config file ('#' comments, blank lines ignored). Unknown
// keys are an error. Throws ConfigError.
ExperimentConfig parse_config_file(std::istream& in);

// Applies `key = value` to a config; shared by the file parser and tests.
void apply_config_entry(ExperimentConfig& config, std::string_view key,
                        std::string_view value);

} // namespace qsdc
