#include "qsdc/serialize.hpp"

#include <charconv>
#include <cstdint>

namespace qsdc {

namespace {

std::string_view to_string(MeasureBasis b) {
    return b == MeasureBasis::Z ? "z" : "x";
}

std::string_view event_status(ChannelEvent::Outcome o) {
    switch (o) {
        case ChannelEvent::Outcome::Delivered: return "delivered";
        case ChannelEvent::Outcome::Lost: return "lost";
        case ChannelEvent::Outcome::Intercepted: return "intercepted";
    }
    return "?";
}

Json event_to_json(const ChannelEvent& e) {
    Json j;
    j["status"] = event_status(e.outcome);
    if (e.eve_bit) j["eve_bit"] = *e.eve_bit;
    if (e.eve_basis) j["eve_basis"] = to_string(*e.eve_basis);
    return j;
}

ChannelEvent event_from_json(const Json& j, ChannelLeg leg) {
    if (!j.is_object() || !j.contains("status"))
        throw SchemaError("channel event must be an object with a status");
    ChannelEvent e;
    e.leg = leg;
    const std::string status = j.at("status").get<std::string>();
    if (status == "delivered") {
        e.outcome = ChannelEvent::Outcome::Delivered;
    } else if (status == "lost") {
        e.outcome = ChannelEvent::Outcome::Lost;
    } else if (status == "intercepted") {
        e.outcome = ChannelEvent::Outcome::Intercepted;
        if (!j.contains("eve_bit") || !j.contains("eve_basis"))
            throw SchemaError("intercepted event needs eve_bit and eve_basis");
        e.eve_bit = j.at("eve_bit").get<int>();
        const std::string basis = j.at("eve_basis").get<std::string>();
        if (basis == "z") e.eve_basis = MeasureBasis::Z;
        else if (basis == "x") e.eve_basis = MeasureBasis::X;
        else throw SchemaError("unknown eve_basis: " + basis);
    } else {
        throw SchemaError("unknown channel event status: " + status);
    }
    return e;
}

int bit_from_json(const Json& j, const char* field) {
    if (!j.is_number_integer())
        throw SchemaError(std::string(field) + " must be an integer bit");
    const int v = j.get<int>();
    if (v != 0 && v != 1)
        throw SchemaError(std::string(field) + " must be 0 or 1");
    return v;
}

std::uint64_t parse_u64(std::string_view v, const char* key) {
    std::uint64_t out{};
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size())
        throw ConfigError(std::string(key) + " must be a non-negative integer");
    return out;
}

double parse_prob(std::string_view v, const char* key) {
    double out{};
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size())
        throw ConfigError(std::string(key) + " must be a number");
    return out;
}

std::vector<int> parse_bits(std::string_view v, const char* key) {
    std::vector<int> bits;
    bits.reserve(v.size());
    for (char c : v) {
        if (c != '0' && c != '1')
            throw ConfigError(std::string(key) + " must be a string of 0/1");
        bits.push_back(c - '0');
    }
    if (bits.empty())
        throw ConfigError(std::string(key) + " must not be empty");
    return bits;
}

Json source_to_json(const MessageSource& src) {
    Json j;
    if (src.kind == MessageSource::Kind::SeededRandom) {
        j["kind"] = "random";
    } else {
        j["kind"] = "fixed";
        std::string bits;
        for (int b : src.bits) bits.push_back(static_cast<char>('0' + b));
        j["bits"] = bits;
    }
    return j;
}

} // namespace

std::string format_adversary(const AdversarySpec& spec) {
    switch (spec.strategy) {
        case Strategy::Honest: return "none";
        case Strategy::LossOnly: return "loss";
        case Strategy::InterceptResend: break;
    }
    std::string out = "intercept-";
    out += to_string(spec.basis);
    out += ':';
    if (spec.attack_forward && spec.attack_return) out += "both";
    else if (spec.attack_forward) out += "forward";
    else if (spec.attack_return) out += "return";
    else return "none"; // empty leg set is the honest channel
    return out;
}

AdversarySpec parse_adversary(std::string_view text) {
    AdversarySpec spec;
    std::string_view head = text;
    std::string_view legs = "both";
    if (auto colon = text.find(':'); colon != std::string_view::npos) {
        head = text.substr(0, colon);
        legs = text.substr(colon + 1);
    }

    if (head == "none") {
        spec.strategy = Strategy::Honest;
        return spec;
    }
    if (head == "loss") {
        spec.strategy = Strategy::LossOnly;
        return spec;
    }

    std::string_view basis = "z";
    if (head.starts_with("intercept")) {
        auto rest = head.substr(std::string_view("intercept").size());
        if (rest.empty() || (rest.starts_with('-') && rest.size() == 2)) {
            if (!rest.empty()) basis = rest.substr(1);
        } else {
            throw ConfigError("unknown adversary: " + std::string(text));
        }
    } else {
        throw ConfigError("unknown adversary: " + std::string(text));
    }

    spec.strategy = Strategy::InterceptResend;
    if (basis == "z") spec.basis = MeasureBasis::Z;
    else if (basis == "x") spec.basis = MeasureBasis::X;
    else throw ConfigError("unknown intercept basis: " + std::string(basis));

    if (legs == "forward") {
        spec.attack_forward = true;
    } else if (legs == "return") {
        spec.attack_return = true;
    } else if (legs == "both") {
        spec.attack_forward = spec.attack_return = true;
    } else {
        throw ConfigError("unknown adversary legs: " + std::string(legs));
    }
    return spec;
}

std::string_view to_string(QubitIndex target) {
    return target == QubitIndex::Travel ? "travel" : "home";
}

QubitIndex qubit_index_from_string(std::string_view s) {
    if (s == "travel") return QubitIndex::Travel;
    if (s == "home") return QubitIndex::Home;
    throw ConfigError("bob_encode_target must be travel or home");
}

Json record_to_json(const RoundRecord& r) {
    Json j;
    j["round"] = r.round_id;
    j["mode"] = r.mode == Mode::Control ? "control" : "message";
    if (r.j) j["j"] = *r.j;
    if (r.k) j["k"] = *r.k;
    j["forward"] = event_to_json(r.forward_event);
    if (r.return_event) j["return"] = event_to_json(*r.return_event);
    if (r.alice_announcement) j["alice_bit"] = *r.alice_announcement;
    if (r.bob_control_bit) j["bob_bit"] = *r.bob_control_bit;
    if (r.bob_bell_announcement)
        j["bell"] = std::string(to_string(*r.bob_bell_announcement));
    if (r.j_hat) j["j_hat"] = *r.j_hat;
    if (r.k_hat) j["k_hat"] = *r.k_hat;
    j["detected"] = r.detected;
    j["tamper_phi"] = r.tamper_phi;
    j["lost"] = r.lost;
    j["checked"] = r.consumed_by_check;
    if (r.eve_guess_j) j["eve_j"] = *r.eve_guess_j;
    if (r.eve_guess_k) j["eve_k"] = *r.eve_guess_k;
    return j;
}

RoundRecord record_from_json(const Json& j) {
    if (!j.is_object()) throw SchemaError("record must be a JSON object");
    for (const char* key : {"round", "mode", "forward", "detected",
                            "tamper_phi", "lost", "checked"}) {
        if (!j.contains(key))
            throw SchemaError(std::string("record missing field: ") + key);
    }

    RoundRecord r;
    if (!j.at("round").is_number_unsigned() &&
        !j.at("round").is_number_integer())
        throw SchemaError("round must be an integer");
    r.round_id = j.at("round").get<std::uint64_t>();

    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "control") r.mode = Mode::Control;
    else if (mode == "message") r.mode = Mode::Message;
    else throw SchemaError("unknown mode: " + mode);

    r.forward_event = event_from_json(j.at("forward"), ChannelLeg::Forward);
    if (j.contains("return"))
        r.return_event = event_from_json(j.at("return"), ChannelLeg::Return);

    if (j.contains("j")) r.j = bit_from_json(j.at("j"), "j");
    if (j.contains("k")) r.k = bit_from_json(j.at("k"), "k");
    if (j.contains("alice_bit"))
        r.alice_announcement = bit_from_json(j.at("alice_bit"), "alice_bit");
    if (j.contains("bob_bit"))
        r.bob_control_bit = bit_from_json(j.at("bob_bit"), "bob_bit");
    if (j.contains("bell")) {
        auto label = bell_label_from_string(j.at("bell").get<std::string>());
        if (!label)
            throw SchemaError("unknown bell outcome: " +
                              j.at("bell").get<std::string>());
        r.bob_bell_announcement = *label;
    }
    if (j.contains("j_hat")) r.j_hat = bit_from_json(j.at("j_hat"), "j_hat");
    if (j.contains("k_hat")) r.k_hat = bit_from_json(j.at("k_hat"), "k_hat");

    r.detected = j.at("detected").get<bool>();
    r.tamper_phi = j.at("tamper_phi").get<bool>();
    r.lost = j.at("lost").get<bool>();
    r.consumed_by_check = j.at("checked").get<bool>();
    if (j.contains("eve_j")) r.eve_guess_j = bit_from_json(j.at("eve_j"), "eve_j");
    if (j.contains("eve_k")) r.eve_guess_k = bit_from_json(j.at("eve_k"), "eve_k");

    // Cross-field consistency, so replay never aggregates nonsense.
    if (r.mode == Mode::Control && (r.k || r.bob_bell_announcement))
        throw SchemaError("control round carries message fields");
    if (r.mode == Mode::Message && !r.lost) {
        if (!r.bob_bell_announcement)
            throw SchemaError("completed message round missing bell outcome");
        if (!r.j || !r.k)
            throw SchemaError("completed message round missing j/k");
        if (auto parity = psi_parity(*r.bob_bell_announcement)) {
            if (r.tamper_phi)
                throw SchemaError("tamper_phi set on a Psi outcome");
            if (!r.j_hat || !r.k_hat || *r.j_hat != (*parity ^ *r.k) ||
                *r.k_hat != (*parity ^ *r.j))
                throw SchemaError(
                    "decoded bits inconsistent with announced outcome");
        } else if (r.j_hat || r.k_hat || !r.tamper_phi) {
            throw SchemaError("Phi outcome must flag tamper and skip decode");
        }
    }
    return r;
}

Json summary_to_json(const SummaryStats& s) {
    Json j;
    j["rounds"] = s.rounds;
    j["control_rounds"] = s.control_rounds;
    j["message_rounds"] = s.message_rounds;
    j["lost_rounds"] = s.lost_rounds;
    j["checked_rounds"] = s.checked_rounds;
    j["payload_rounds"] = s.payload_rounds;
    if (s.detection_rate) {
        j["detection_rate"] = Json{{"rate", s.detection_rate->rate},
                                   {"low", s.detection_rate->low},
                                   {"high", s.detection_rate->high}};
    } else {
        j["detection_rate"] = nullptr;
    }
    auto opt = [](const std::optional<double>& v) {
        return v ? Json(*v) : Json(nullptr);
    };
    j["ber_alice_to_bob"] = opt(s.ber_alice_to_bob);
    j["ber_bob_to_alice"] = opt(s.ber_bob_to_alice);
    j["phi_rate"] = opt(s.phi_rate);
    j["mismatch_rate"] = opt(s.mismatch_rate);
    j["eve_accuracy_j"] = opt(s.eve_accuracy_j);
    j["eve_accuracy_k"] = opt(s.eve_accuracy_k);
    j["throughput"] = s.throughput;
    j["would_abort_round"] =
        s.would_abort_round ? Json(*s.would_abort_round) : Json(nullptr);
    return j;
}

Json config_to_json(const ExperimentConfig& c) {
    Json j;
    j["rounds"] = c.rounds;
    j["control_prob"] = c.control_prob;
    j["announce_fraction"] = c.announce_fraction;
    j["loss_p"] = c.loss_p;
    j["seed"] = c.seed;
    j["adversary"] = format_adversary(c.adversary);
    j["bob_encode_target"] = std::string(to_string(c.bob_encode_target));
    j["alice_source"] = source_to_json(c.alice_source);
    j["bob_source"] = source_to_json(c.bob_source);
    return j;
}

Json summary_document(const ExperimentConfig& config,
                      const SummaryStats& stats) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["tool"] = Json{{"name", std::string(kToolName)},
                     {"version", std::string(kToolVersion)}};
    j["config"] = config_to_json(config);
    j["summary"] = summary_to_json(stats);
    return j;
}

void apply_config_entry(ExperimentConfig& config, std::string_view key,
                        std::string_view value) {
    if (key == "rounds") config.rounds = parse_u64(value, "rounds");
    else if (key == "seed") config.seed = parse_u64(value, "seed");
    else if (key == "control_prob")
        config.control_prob = parse_prob(value, "control_prob");
    else if (key == "announce_fraction")
        config.announce_fraction = parse_prob(value, "announce_fraction");
    else if (key == "loss_p") config.loss_p = parse_prob(value, "loss_p");
    else if (key == "adversary") config.adversary = parse_adversary(value);
    else if (key == "bob_encode_target")
        config.bob_encode_target = qubit_index_from_string(value);
    else if (key == "alice_bits")
        config.alice_source = {MessageSource::Kind::Fixed,
                               parse_bits(value, "alice_bits")};
    else if (key == "bob_bits")
        config.bob_source = {MessageSource::Kind::Fixed,
                             parse_bits(value, "bob_bits")};
    else
        throw ConfigError("unknown config key: " + std::string(key));
}

ExperimentConfig parse_config_file(std::istream& in) {
    ExperimentConfig config;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
            s.remove_prefix(1);
        while (!s.empty() &&
               (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
            s.remove_suffix(1);
        return s;
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view v = trim(line);
        if (v.empty() || v.front() == '#') continue;
        auto eq = v.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key = value");
        apply_config_entry(config, trim(v.substr(0, eq)),
                           trim(v.substr(eq + 1)));
    }
    return config;
}

} // namespace qsdc
