#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <bit>

#include "cspref/predicate.hpp"
#include "cspref/rng.hpp"

using namespace cspref;

TEST_CASE("truth table constructor and index convention") {
    // k=1, bits=[1,0]: satisfied only at index 0, i.e. z_1 = +1
    Predicate dict = Predicate::from_truth_table(1, {1, 0});
    CHECK(dict.evaluate(std::vector<int>{1}));
    CHECK_FALSE(dict.evaluate(std::vector<int>{-1}));

    // 2-XOR = (1 - z1 z2)/2: satisfied iff exactly one coordinate is -1
    Predicate x2 = Predicate::from_truth_table(2, {0, 1, 1, 0});
    CHECK(x2 == make_xor(2));

    CHECK_THROWS_AS(Predicate::from_truth_table(3, {1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(Predicate::from_truth_table(0, {}), std::invalid_argument);
    CHECK_THROWS_AS(Predicate::from_truth_table(25, std::vector<std::uint8_t>(8, 1)),
                    std::invalid_argument);

    // all-ones table constructs fine but is flagged trivial
    Predicate triv = Predicate::from_truth_table(3, std::vector<std::uint8_t>(8, 1));
    CHECK(triv.trivial_true());
}

TEST_CASE("named families") {
    Predicate maj3 = make_maj(3);
    int sat = 0;
    for (std::uint32_t i = 0; i < 8; ++i)
        if (maj3.at(i)) ++sat;
    CHECK(sat == 4);
    // satisfied exactly when S_z >= 1, i.e. at most one -1
    for (std::uint32_t i = 0; i < 8; ++i)
        CHECK(maj3.at(i) == (std::popcount(i) <= 1));

    CHECK(make_or(3).mean() == Rat(7, 8));
    CHECK(make_xor(4).mean() == Rat(1, 2));
    CHECK(make_maj(3).mean() == Rat(1, 2));

    // Thr_k^{-k} is the trivial all-satisfied predicate
    CHECK(make_thr(5, -5).trivial_true());
    // Thr_5^{-1} = 2-out-of-5-SAT: satisfied iff at least two +1 coordinates
    Predicate thr = make_thr(5, -1);
    for (std::uint32_t i = 0; i < 32; ++i)
        CHECK(thr.at(i) == (5 - std::popcount(i) >= 2));

    // Huang arity: kappa + C(kappa,3)
    CHECK(huang_arity(4) == 8);
    CHECK(huang_arity(9) == 93);
    CHECK(make_huang(4).arity() == 8);

    CHECK(make_nae(2) == make_xor(2));
    CHECK(make_exactly(4, 2).mean() == Rat(6, 16));

    CHECK_THROWS_AS(make_thr(4, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_thr(5, 2), std::invalid_argument);
    CHECK_THROWS_AS(make_huang(6), std::invalid_argument);  // arity 26 > 24
    CHECK_THROWS_AS(named_predicate("nosuch", {3}), std::invalid_argument);

    CHECK(named_predicate("maj", {3}) == maj3);
    CHECK(named_predicate("thr", {5, -1}) == thr);
}

TEST_CASE("huang membership") {
    const int kappa = 4;
    for (std::uint32_t y = 0; y < 16; ++y) {
        auto z = huang_strong_string(kappa, y);
        CHECK(huang_strongly_satisfying(kappa, z));
        CHECK(huang_value(kappa, z));
        // flipping any <= kappa bits keeps the value 1
        auto flipped = z;
        for (int j = 0; j < kappa; ++j) flipped[j] = -flipped[j];
        CHECK(huang_value(kappa, flipped));
    }
    // Every table-arity case is identically 1 (the radius-kappa balls around
    // the strong strings cover the cube up to kappa = 5); the predicate only
    // becomes nontrivial at large kappa, reachable through point evaluation.
    CHECK(make_huang(4).trivial_true());
    CHECK(make_huang(5).trivial_true());

    // kappa = 9, arity 93: strong strings and their kappa-balls satisfy, and
    // far strings do not
    CounterRng rng(7);
    int zeros = 0;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<int> z(huang_arity(9));
        for (auto& v : z) v = rng.next_u64() & 1 ? 1 : -1;
        if (!huang_value(9, z)) ++zeros;
    }
    CHECK(zeros == 20);  // random strings are far from all 512 strong strings
    for (int trial = 0; trial < 3; ++trial) {
        auto z = huang_strong_string(9, static_cast<std::uint32_t>(rng.next_u64()));
        CHECK(huang_value(9, z));
        for (int f = 0; f < 9; ++f) {
            std::size_t pos = rng.next_below(z.size());
            z[pos] = -z[pos];
        }
        CHECK(huang_value(9, z));
    }
}

TEST_CASE("fourier expansion exact values") {
    FourierExpansion x2 = fourier_expansion(make_xor(2));
    CHECK(x2.coefficient(0) == Rat(1, 2));
    CHECK(x2.coefficient(3) == Rat(-1, 2));
    CHECK(x2.coefficient(1) == 0);
    CHECK(x2.coefficient(2) == 0);

    FourierExpansion ones =
        fourier_expansion(Predicate::from_truth_table(3, std::vector<std::uint8_t>(8, 1)));
    CHECK(ones.coefficient(0) == 1);
    for (std::uint32_t s = 1; s < 8; ++s) CHECK(ones.coefficient(s) == 0);

    FourierExpansion maj3 = fourier_expansion(make_maj(3));
    CHECK(maj3.coefficient(0) == Rat(1, 2));
    CHECK(maj3.coefficient(1) == Rat(1, 4));
    CHECK(maj3.coefficient(2) == Rat(1, 4));
    CHECK(maj3.coefficient(4) == Rat(1, 4));
    CHECK(maj3.coefficient(7) == Rat(-1, 4));
    CHECK(maj3.coefficient(3) == 0);
}

TEST_CASE("fourier inversion and parseval for every family, k <= 10") {
    std::vector<Predicate> preds = {make_xor(3),       make_or(4),  make_maj(5),
                                    make_thr(5, -1),   make_nae(4), make_exactly(6, 3),
                                    make_huang(3),     make_xor(10)};
    for (const auto& p : preds) {
        CAPTURE(p.name());
        FourierExpansion f = fourier_expansion(p);
        const std::uint32_t size = p.table_size();
        // inversion: 2^k P(z) = sum_S nhat_S z^S on every point
        for (std::uint32_t z = 0; z < size; ++z) {
            std::int64_t expect = p.at(z) ? std::int64_t(size) : 0;
            CHECK(f.evaluate_scaled(z) == expect);
        }
        // Parseval: sum_S Phat(S)^2 = E[P^2] = E[P]
        Rat acc = 0;
        for (std::uint32_t s = 0; s < size; ++s) {
            Rat c = f.coefficient(s);
            acc += c * c;
        }
        CHECK(acc == p.mean());
    }
}

TEST_CASE("zero variability") {
    CHECK(zero_variability(make_or(3)) == 3);
    CHECK(zero_variability(make_or(6)) == 6);
    CHECK(zero_variability(make_maj(3)) == 2);
    CHECK(zero_variability(make_maj(5)) == 3);
    CHECK(zero_variability(make_maj(7)) == 4);
    CHECK(zero_variability(make_xor(2)) == 2);
    CHECK(zero_variability(make_xor(5)) == 5);
    CHECK_THROWS_AS(zero_variability(make_thr(3, -3)), std::domain_error);
}

TEST_CASE("predicate json round trip") {
    Predicate p = make_thr(5, -1);
    Predicate q = predicate_from_json(predicate_to_json(p));
    CHECK(p == q);
    CHECK(q.spec().has_value());

    Predicate raw = Predicate::from_truth_table(3, {0, 1, 1, 0, 1, 0, 0, 1}, "parity-ish");
    Predicate back = predicate_from_json(predicate_to_json(raw));
    CHECK(raw == back);
    CHECK(back.name() == "parity-ish");

    // hex is little-endian nibbles of the table
    Predicate x2 = make_xor(2);
    CHECK(x2.table_hex() == "6");  // bits 0110 -> nibble 0b0110
}
