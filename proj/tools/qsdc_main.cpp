// qsdc: Monte Carlo simulator for the bidirectional ping-pong protocol.
//
// Subcommands:
//   run          execute a seeded experiment, write summary.json and
//                transcript.jsonl into the output directory
//   replay       recompute the summary from a transcript and compare it
//                against an existing summary.json
//   check-table  exhaustively verify the encode/decode outcome table
//
// Exit codes: 0 success, 1 verification mismatch, 2 configuration error,
// 3 malformed transcript.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qsdc/harness.hpp"
#include "qsdc/serialize.hpp"

namespace fs = std::filesystem;
using namespace qsdc;

namespace {

struct Overrides {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> rounds;
    std::string adversary;
    std::optional<double> control_prob;
    std::optional<double> announce_fraction;
    std::optional<double> loss_p;
    std::string bob_encode_target;
    std::string alice_bits;
    std::string bob_bits;
};

std::string default_out_dir() {
    if (const char* env = std::getenv("QSDC_OUT_DIR")) return env;
    return ".";
}

ExperimentConfig resolve_config(const Overrides& o) {
    ExperimentConfig config;
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in) throw ConfigError("cannot read config file: " + o.config_path);
        config = parse_config_file(in);
    }
    if (o.seed) config.seed = *o.seed;
    if (o.rounds) config.rounds = *o.rounds;
    if (!o.adversary.empty()) config.adversary = parse_adversary(o.adversary);
    if (o.control_prob) config.control_prob = *o.control_prob;
    if (o.announce_fraction) config.announce_fraction = *o.announce_fraction;
    if (o.loss_p) config.loss_p = *o.loss_p;
    if (!o.bob_encode_target.empty())
        config.bob_encode_target = qubit_index_from_string(o.bob_encode_target);
    if (!o.alice_bits.empty())
        apply_config_entry(config, "alice_bits", o.alice_bits);
    if (!o.bob_bits.empty())
        apply_config_entry(config, "bob_bits", o.bob_bits);
    config.validate();
    return config;
}

int cmd_run(const Overrides& o) {
    const ExperimentConfig config = resolve_config(o);

    const fs::path dir(o.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);

    ExperimentResult result = run_experiment(config);

    std::ofstream transcript(dir / "transcript.jsonl");
    if (!transcript)
        throw ConfigError("cannot write to output directory: " + o.out_dir);
    for (const auto& rec : result.transcript)
        transcript << record_to_json(rec).dump() << '\n';
    transcript.close();

    std::ofstream summary(dir / "summary.json");
    if (!summary)
        throw ConfigError("cannot write to output directory: " + o.out_dir);
    summary << summary_document(config, result.summary).dump(2) << '\n';
    return 0;
}

int cmd_replay(const std::string& dir_arg) {
    const fs::path dir(dir_arg);
    std::ifstream in(dir / "transcript.jsonl");
    if (!in) throw ConfigError("cannot read " + (dir / "transcript.jsonl").string());

    std::vector<RoundRecord> records;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            records.push_back(record_from_json(Json::parse(line)));
        } catch (const std::exception& e) {
            std::cerr << "transcript line " << lineno << ": " << e.what()
                      << '\n';
            return 3;
        }
    }

    const SummaryStats stats = replay(records);
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["tool"] = Json{{"name", std::string(kToolName)},
                       {"version", std::string(kToolVersion)}};
    doc["summary"] = summary_to_json(stats);

    std::ofstream out(dir / "replay_summary.json");
    if (out) out << doc.dump(2) << '\n';

    const fs::path existing = dir / "summary.json";
    if (fs::exists(existing)) {
        std::ifstream sf(existing);
        Json prior = Json::parse(sf, nullptr, false);
        if (prior.is_discarded() || !prior.contains("summary")) {
            std::cerr << "summary.json is not a valid summary document\n";
            return 3;
        }
        if (prior.at("summary") != doc.at("summary")) {
            std::cerr << "replayed summary differs from summary.json\n";
            return 1;
        }
    }
    std::cout << doc.at("summary").dump(2) << '\n';
    return 0;
}

int cmd_check_table(const std::string& target_arg, std::uint64_t reps,
                    std::uint64_t seed) {
    const QubitIndex target = target_arg.empty()
                                  ? QubitIndex::Travel
                                  : qubit_index_from_string(target_arg);
    const BellLabel expected[2][2] = {
        {BellLabel::PsiPlus, BellLabel::PsiMinus},
        {BellLabel::PsiMinus, BellLabel::PsiPlus},
    };

    RandomStream rng(seed);
    bool ok = true;
    std::cout << "        bob=0    bob=1\n";
    for (int j = 0; j < 2; ++j) {
        std::cout << "alice=" << j;
        for (int k = 0; k < 2; ++k) {
            BellLabel seen = expected[j][k];
            bool cell_ok = true;
            for (std::uint64_t r = 0; r < reps; ++r) {
                seen = bob_encode_and_measure(
                    alice_encode(bob_prepare(), j), k, target, rng);
                if (seen != expected[j][k]) {
                    cell_ok = false;
                    break;
                }
            }
            std::cout << "  " << to_string(seen)
                      << (cell_ok ? "    " : "(!)");
            if (!cell_ok) {
                std::cerr << "cell (j=" << j << ", k=" << k
                          << ") deviated from " << to_string(expected[j][k])
                          << '\n';
                ok = false;
            }
        }
        std::cout << '\n';
    }
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-qubit simulator for deterministic secure direct "
                 "bidirectional communication"};
    app.require_subcommand(1);

    Overrides o;
    o.out_dir = default_out_dir();

    auto* run = app.add_subcommand("run", "run a seeded experiment");
    run->add_option("--config", o.config_path, "key=value config file");
    run->add_option("--seed", o.seed, "rng seed");
    run->add_option("--rounds", o.rounds, "number of protocol rounds");
    run->add_option("--adversary", o.adversary,
                    "none | loss | intercept-{z,x}:{forward,return,both}");
    run->add_option("--control-prob", o.control_prob,
                    "control-mode probability c");
    run->add_option("--announce-fraction", o.announce_fraction,
                    "fraction of message rounds revealed for checking");
    run->add_option("--loss", o.loss_p, "per-leg photon loss probability");
    run->add_option("--bob-encode-target", o.bob_encode_target,
                    "travel | home");
    run->add_option("--alice-bits", o.alice_bits, "fixed bitstring for Alice");
    run->add_option("--bob-bits", o.bob_bits, "fixed bitstring for Bob");
    run->add_option("--out-dir", o.out_dir,
                    "output directory (env QSDC_OUT_DIR)");

    std::string replay_dir = default_out_dir();
    auto* rep = app.add_subcommand(
        "replay", "recompute the summary from transcript.jsonl");
    rep->add_option("--dir", replay_dir, "directory holding the run outputs");

    std::string table_target;
    std::uint64_t table_reps = 10000;
    std::uint64_t table_seed = 0;
    auto* tab = app.add_subcommand("check-table",
                                   "verify the encode/decode outcome table");
    tab->add_option("--bob-encode-target", table_target, "travel | home");
    tab->add_option("--reps", table_reps, "repetitions per cell");
    tab->add_option("--seed", table_seed, "rng seed");

    try {
        app.parse(argc, argv);
        if (run->parsed()) return cmd_run(o);
        if (rep->parsed()) return cmd_replay(replay_dir);
        return cmd_check_table(table_target, table_reps, table_seed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
