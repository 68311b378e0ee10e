#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracle.hpp"
#include "qsdc/protocol.hpp"

using namespace qsdc;

namespace {

TwoQubitState from_oracle(const oracle::Vec4& v) {
    TwoQubitState s;
    for (int i = 0; i < 4; ++i) s.amp[i] = v[i];
    return s;
}

std::vector<RoundRecord> honest_message_rounds(int n, std::uint64_t seed) {
    ProtocolConfig cfg;
    cfg.control_prob = 0.0;
    AdversarySpec honest;
    std::vector<RoundRecord> records;
    RandomStream root(seed);
    for (int i = 0; i < n; ++i) {
        RandomStream rng = root.fork(i);
        records.push_back(run_round(cfg, i % 2, (i / 2) % 2, honest, i, rng));
    }
    return records;
}

} // namespace

TEST_CASE("bob_prepare returns Psi+") {
    auto s = bob_prepare();
    CHECK(equal_up_to_phase(s, make_bell(BellLabel::PsiPlus)));
    CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-13));
    auto c = bell_coefficients(s);
    CHECK(std::abs(c[static_cast<int>(BellLabel::PsiPlus)]) ==
          doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("alice_choose_mode respects the control probability") {
    RandomStream rng(5);
    for (int i = 0; i < 100; ++i) {
        CHECK(alice_choose_mode(0.0, rng) == Mode::Message);
        CHECK(alice_choose_mode(1.0, rng) == Mode::Control);
    }
    const int n = 100000;
    int control = 0;
    for (int i = 0; i < n; ++i)
        control += alice_choose_mode(0.5, rng) == Mode::Control;
    CHECK(std::abs(double(control) / n - 0.5) < 3.0 * std::sqrt(0.25 / n));
}

TEST_CASE("control_round: Psi+ never gives identical bits") {
    RandomStream rng(6);
    for (int i = 0; i < 10000; ++i) {
        auto r = control_round(make_bell(BellLabel::PsiPlus), rng);
        CHECK_FALSE(r.detected);
        CHECK(r.alice_bit != r.bob_bit);
    }
}

TEST_CASE("control_round: post-Z-intercept product state stays anticorrelated") {
    TwoQubitState s01; // |01> = home 0, travel 1
    s01.amp = {0.0, 1.0, 0.0, 0.0};
    RandomStream rng(7);
    for (int i = 0; i < 10000; ++i) {
        CHECK_FALSE(control_round(s01, rng).detected);
    }
}

TEST_CASE("control_round: |+-> is detected half the time") {
    auto plus_minus = from_oracle(oracle::tensor(oracle::ketPlus,
                                                 oracle::ketMinus));
    RandomStream rng(8);
    const int n = 100000;
    int detected = 0;
    for (int i = 0; i < n; ++i) detected += control_round(plus_minus, rng).detected;
    CHECK(std::abs(double(detected) / n - 0.5) < 3.0 * std::sqrt(0.25 / n));
}

TEST_CASE("alice_encode matches the encoding law") {
    CHECK(equal_up_to_phase(alice_encode(make_bell(BellLabel::PsiPlus), 0),
                            make_bell(BellLabel::PsiPlus)));
    CHECK(equal_up_to_phase(alice_encode(make_bell(BellLabel::PsiPlus), 1),
                            make_bell(BellLabel::PsiMinus)));
    CHECK(equal_up_to_phase(alice_encode(make_bell(BellLabel::PsiMinus), 1),
                            make_bell(BellLabel::PsiPlus)));
}

TEST_CASE("outcome table is exhaustive and deterministic") {
    RandomStream rng(9);
    for (auto target : {QubitIndex::Travel, QubitIndex::Home}) {
        for (int j = 0; j < 2; ++j) {
            for (int k = 0; k < 2; ++k) {
                const BellLabel expected = (j ^ k) == 0 ? BellLabel::PsiPlus
                                                        : BellLabel::PsiMinus;
                for (int rep = 0; rep < 200; ++rep) {
                    auto outcome = bob_encode_and_measure(
                        alice_encode(bob_prepare(), j), k, target, rng);
                    CHECK(outcome == expected);
                }
            }
        }
    }
}

TEST_CASE("decode_peer_bit: table cells and the Phi tamper signal") {
    CHECK(decode_peer_bit(BellLabel::PsiPlus, 0) == 0);
    CHECK(decode_peer_bit(BellLabel::PsiMinus, 1) == 0);
    CHECK(decode_peer_bit(BellLabel::PsiMinus, 0) == 1);
    CHECK_FALSE(decode_peer_bit(BellLabel::PhiMinus, 0).has_value());
    CHECK_FALSE(decode_peer_bit(BellLabel::PhiPlus, 1).has_value());
}

TEST_CASE("decode round trip: both parties recover the peer bit") {
    RandomStream rng(10);
    for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) {
            auto outcome = bob_encode_and_measure(
                alice_encode(bob_prepare(), j), k, QubitIndex::Travel, rng);
            CHECK(decode_peer_bit(outcome, k) == j);
            CHECK(decode_peer_bit(outcome, j) == k);
        }
    }
}

TEST_CASE("run_round: honest message round decodes both directions") {
    ProtocolConfig cfg;
    cfg.control_prob = 0.0;
    AdversarySpec honest;
    RandomStream rng(20);
    auto rec = run_round(cfg, 0, 1, honest, 0, rng);
    CHECK(rec.mode == Mode::Message);
    CHECK(rec.bob_bell_announcement == BellLabel::PsiMinus);
    CHECK(rec.j_hat == 0);
    CHECK(rec.k_hat == 1);
    CHECK_FALSE(rec.lost);
    CHECK_FALSE(rec.tamper_phi);
    CHECK(rec.j == 0);
    CHECK(rec.k == 1);
}

TEST_CASE("run_round: honest control round never detects") {
    ProtocolConfig cfg;
    cfg.control_prob = 1.0;
    AdversarySpec honest;
    RandomStream root(21);
    for (int i = 0; i < 5000; ++i) {
        RandomStream rng = root.fork(i);
        auto rec = run_round(cfg, 0, 0, honest, i, rng);
        CHECK(rec.mode == Mode::Control);
        CHECK_FALSE(rec.detected);
        CHECK(rec.alice_announcement.has_value());
        CHECK(rec.bob_control_bit.has_value());
        CHECK_FALSE(rec.k.has_value());
        CHECK_FALSE(rec.bob_bell_announcement.has_value());
    }
}

TEST_CASE("run_round: loss probability 1 voids every round") {
    ProtocolConfig cfg;
    AdversarySpec adv;
    adv.loss_p = 1.0;
    RandomStream root(22);
    for (int i = 0; i < 100; ++i) {
        RandomStream rng = root.fork(i);
        auto rec = run_round(cfg, 0, 0, adv, i, rng);
        CHECK(rec.lost);
        CHECK_FALSE(rec.j.has_value());
        CHECK_FALSE(rec.j_hat.has_value());
    }
}

TEST_CASE("run_round is deterministic per stream seed") {
    ProtocolConfig cfg;
    AdversarySpec adv;
    adv.strategy = Strategy::InterceptResend;
    adv.basis = MeasureBasis::X;
    adv.attack_forward = true;
    adv.loss_p = 0.2;
    for (int i = 0; i < 50; ++i) {
        RandomStream a(1000 + i), b(1000 + i);
        CHECK(run_round(cfg, 1, 0, adv, i, a) == run_round(cfg, 1, 0, adv, i, b));
    }
}

TEST_CASE("run_round: both encode targets obey the same outcome law") {
    AdversarySpec honest;
    for (auto target : {QubitIndex::Travel, QubitIndex::Home}) {
        ProtocolConfig cfg;
        cfg.control_prob = 0.0;
        cfg.bob_encode_target = target;
        RandomStream root(23);
        for (int i = 0; i < 400; ++i) {
            RandomStream rng = root.fork(i);
            const int j = i & 1, k = (i >> 1) & 1;
            auto rec = run_round(cfg, j, k, honest, i, rng);
            CHECK(rec.bob_bell_announcement ==
                  ((j ^ k) ? BellLabel::PsiMinus : BellLabel::PsiPlus));
        }
    }
}

TEST_CASE("announcement_check: honest records never mismatch") {
    auto records = honest_message_rounds(1000, 30);
    RandomStream rng(31);
    auto report = announcement_check(records, 0.5, rng);
    CHECK(report.checked_rounds == 500);
    CHECK(report.mismatches == 0);
    CHECK(report.mismatch_rate() == 0.0);
    std::size_t consumed = 0;
    for (const auto& r : records) consumed += r.consumed_by_check;
    CHECK(consumed == 500);
}

TEST_CASE("announcement_check: fraction 0 and empty input") {
    auto records = honest_message_rounds(100, 32);
    RandomStream rng(33);
    CHECK(announcement_check(records, 0.0, rng).checked_rounds == 0);
    std::vector<RoundRecord> empty;
    CHECK(announcement_check(empty, 1.0, rng).checked_rounds == 0);
}

TEST_CASE("announcement_check: fraction 1 consumes everything once") {
    auto records = honest_message_rounds(777, 34);
    RandomStream rng(35);
    auto report = announcement_check(records, 1.0, rng);
    CHECK(report.checked_rounds == 777);
    // A second pass finds nothing eligible.
    CHECK(announcement_check(records, 1.0, rng).checked_rounds == 0);
}

TEST_CASE("announcement_check: Z-intercept scrambles half the checked rounds") {
    ProtocolConfig cfg;
    cfg.control_prob = 0.0;
    AdversarySpec adv;
    adv.strategy = Strategy::InterceptResend;
    adv.basis = MeasureBasis::Z;
    adv.attack_forward = true;

    std::vector<RoundRecord> records;
    RandomStream root(36);
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        RandomStream rng = root.fork(i);
        records.push_back(run_round(cfg, i & 1, (i >> 1) & 1, adv, i, rng));
    }
    RandomStream rng(37);
    auto report = announcement_check(records, 1.0, rng);
    CHECK(report.checked_rounds == n);
    CHECK(std::abs(report.mismatch_rate() - 0.5) <
          3.0 * std::sqrt(0.25 / n));
}

TEST_CASE("check_mismatch agrees with the parity law") {
    auto records = honest_message_rounds(100, 38);
    for (auto& r : records) {
        CHECK_FALSE(check_mismatch(r));
        // Corrupt the announcement: flipped parity must mismatch.
        r.bob_bell_announcement =
            *r.bob_bell_announcement == BellLabel::PsiPlus
                ? BellLabel::PsiMinus
                : BellLabel::PsiPlus;
        CHECK(check_mismatch(r));
        r.bob_bell_announcement = BellLabel::PhiPlus;
        CHECK(check_mismatch(r));
    }
}
