#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <bit>
#include <set>

#include "cspref/rng.hpp"
#include "cspref/twise.hpp"

using namespace cspref;

TEST_CASE("surd arithmetic and comparisons") {
    Surd a(Rat(1), Rat(1), 2);   // 1 + sqrt(2)
    Surd b(Rat(3), Rat(-1), 2);  // 3 - sqrt(2)
    CHECK((a + b) == Surd(Rat(4)));
    CHECK((a * b).a == Rat(1));   // (1+s)(3-s) = 3 - s + 3s - 2 = 1 + 2 sqrt(2)
    CHECK((a * b).b == Rat(2));
    CHECK(a > Surd(Rat(2)));      // 1 + 1.414 > 2
    CHECK(a < Surd(Rat(5, 2)));   // 2.414 < 2.5
    CHECK(Surd(Rat(0), Rat(-1), 3).sign() == -1);
    CHECK(Surd(Rat(2), Rat(-1), 4).sign() == 0);  // 2 - sqrt(4) = 0
}

TEST_CASE("lp exact values for named predicates") {
    // 3-OR: supporting at t=2, delta = 1/8 at t=3
    CHECK(twise_distance(make_or(3), 2).delta == 0);
    CHECK(twise_distance(make_or(3), 3).delta == Rat(1, 8));

    // k-XOR: delta(k) = 1/2, delta(k-1) = 0
    for (int k = 2; k <= 5; ++k) {
        CAPTURE(k);
        CHECK(twise_distance(make_xor(k), k).delta == Rat(1, 2));
        if (k >= 2) CHECK(twise_distance(make_xor(k), k - 1).delta == 0);
    }

    // Maj_3 at t=2: 1/4 (i.e. max_D E[thr] = 1 - 1/(k+1))
    CHECK(twise_distance(make_maj(3), 2).delta == Rat(1, 4));
    CHECK(twise_distance(make_maj(3), 3).delta == Rat(1, 2));

    // Thr_5^{-1} at t=3 is nonzero and at least the explicit separator value
    LPResult thr = twise_distance(make_thr(5, -1), 3);
    CHECK(thr.delta >= Rat(1, 196));
    CHECK(thr.delta == Rat(1, 16));
}

TEST_CASE("lp primal is a t-wise uniform distribution and duality is strong") {
    for (auto& [pred, t] : std::vector<std::pair<Predicate, int>>{
             {make_maj(3), 2}, {make_or(3), 3}, {make_thr(5, -1), 3}, {make_nae(4), 2}}) {
        CAPTURE(pred.name());
        LPResult res = twise_distance(pred, t);
        // masses nonnegative and sum to 1
        Rat total = 0;
        for (auto& [atom, mass] : res.primal_distribution) {
            CHECK(mass >= 0);
            total += mass;
        }
        CHECK(total == 1);
        // all moments up to t vanish
        for (std::uint32_t s = 1; s < pred.table_size(); ++s) {
            if (std::popcount(s) > t) continue;
            Rat moment = 0;
            for (auto& [atom, mass] : res.primal_distribution)
                moment += (chi(atom, s) > 0 ? mass : -mass);
            CHECK(moment == 0);
        }
        // objective equals the mass on unsatisfying strings
        Rat unsat = 0;
        for (auto& [atom, mass] : res.primal_distribution)
            if (!pred.at(atom)) unsat += mass;
        CHECK(unsat == res.delta);
        // dual polynomial separates at delta
        CHECK(verify_separating(pred, res.dual_polynomial, res.delta));
        CHECK(res.dual_polynomial.degree() <= t);
    }
}

TEST_CASE("t = k shortcut: delta is the unsatisfied fraction") {
    for (int k = 2; k <= 6; ++k) {
        for (const Predicate& p : {make_xor(k), make_or(k)}) {
            CAPTURE(p.name());
            LPResult res = twise_distance(p, k);
            CHECK(res.delta == 1 - p.mean());
            CHECK(verify_separating(p, res.dual_polynomial, res.delta));
        }
    }
}

TEST_CASE("delta monotone in t") {
    for (const Predicate& p : {make_maj(5), make_or(4), make_exactly(4, 2)}) {
        CAPTURE(p.name());
        Rat prev = 0;
        for (int t = 1; t <= p.arity(); ++t) {
            Rat d = twise_distance(p, t).delta;
            CHECK(d >= prev);
            prev = d;
        }
    }
}

TEST_CASE("verify_separating conditions") {
    Predicate p = make_maj(3);
    MultilinearPolynomial zero(3);
    CHECK(verify_separating(p, zero, Rat(0)));  // degenerate separation

    // a polynomial with a constant coefficient is rejected
    MultilinearPolynomial biased(3);
    biased.set(0, Rat(1));
    CHECK_FALSE(verify_separating(p, biased, Rat(0)));

    // the LP dual round-trips
    LPResult res = twise_distance(p, 2);
    CHECK(verify_separating(p, res.dual_polynomial, res.delta));
    // but not at any larger delta
    CHECK_FALSE(verify_separating(p, res.dual_polynomial, res.delta + Rat(1, 1000)));
}

TEST_CASE("scale polynomial") {
    MultilinearPolynomial q(2);
    q.set(1, Rat(1));
    auto [scaled, delta] = scale_polynomial(q, Rat(1), Rat(-1));
    CHECK(delta == Rat(1, 2));
    CHECK(scaled.coefficient(1) == Rat(1, 2));

    CHECK(scaled_delta(Rat(5) - Rat(30, 7), Rat(-5)) == Rat(1, 8));
    CHECK(scaled_delta(Rat(1, 8), Rat(-8, 9)) == Rat(9, 73));
    CHECK(scaled_delta(Rat(1, 48), Rat(-14, 3)) == Rat(1, 225));
    CHECK_THROWS_AS(scaled_delta(Rat(0), Rat(-1)), std::domain_error);
    CHECK_THROWS_AS(scaled_delta(Rat(1), Rat(0)), std::domain_error);
}

TEST_CASE("krawtchouk univariate conversion") {
    // a=1 only: Q_u(s) = s ; b=1 only: Q_u(s) = (s^2 - k)/2
    SymmetricSpec just_a{7, Surd(Rat(1)), Surd(Rat(0)), Surd(Rat(0)), Surd(Rat(0))};
    UnivariatePoly ua = univariate_from_symmetric(just_a);
    CHECK(ua.evaluate(3) == Surd(Rat(3)));
    CHECK(ua.evaluate(-5) == Surd(Rat(-5)));

    SymmetricSpec just_b{7, Surd(Rat(0)), Surd(Rat(1)), Surd(Rat(0)), Surd(Rat(0))};
    UnivariatePoly ub = univariate_from_symmetric(just_b);
    CHECK(ub.evaluate(3) == Surd(Rat(1)));    // (9-7)/2
    CHECK(ub.evaluate(-1) == Surd(Rat(-3)));  // (1-7)/2

    // identity Q(z) = Q_u(S_z) on every point, via direct subset sums
    SymmetricSpec mixed{9, Surd(Rat(2, 3)), Surd(Rat(-1, 2)), Surd(Rat(1, 5)), Surd(Rat(3, 7))};
    UnivariatePoly um = univariate_from_symmetric(mixed);
    for (std::uint32_t z = 0; z < (1u << 9); ++z) {
        long s = 9 - 2 * std::popcount(z);
        Surd direct = mixed.a * Surd(Rat(elementary_symmetric_direct(z, 9, 1))) +
                      mixed.b * Surd(Rat(elementary_symmetric_direct(z, 9, 2))) +
                      mixed.c * Surd(Rat(elementary_symmetric_direct(z, 9, 3))) +
                      mixed.d * Surd(Rat(elementary_symmetric_direct(z, 9, 4)));
        CHECK(direct == um.evaluate(s));
    }
}

TEST_CASE("library separator: thr_minus1") {
    LibrarySeparator sep = library_separator("thr_minus1", 5);
    CHECK(sep.delta == Rat(6, 1176));
    CHECK(sep.delta == Rat(1, 196));
    const auto& spec = std::get<SymmetricSpec>(sep.polynomial);
    ThresholdPredicate thr{5, false, -1};
    CHECK(verify_separating(thr, spec, sep.delta));
    // and exhaustively against the table predicate
    MultilinearPolynomial q = expand_symmetric(spec);
    CHECK(verify_separating(make_thr(5, -1), q, sep.delta));

    LibrarySeparator sep9 = library_separator("thr_minus1", 9);
    CHECK(verify_separating(ThresholdPredicate{9, false, -1},
                            std::get<SymmetricSpec>(sep9.polynomial), sep9.delta));
    CHECK_THROWS_AS(library_separator("thr_minus1", 3), std::invalid_argument);
    CHECK_THROWS_AS(library_separator("thr_minus1", 6), std::invalid_argument);
}

TEST_CASE("library separator: maj") {
    for (int k : {25, 27, 55, 101}) {
        CAPTURE(k);
        LibrarySeparator sep = library_separator("maj", k);
        CHECK(sep.delta == Rat(9, 73));
        CHECK(verify_separating(ThresholdPredicate{k, false, 1},
                                std::get<SymmetricSpec>(sep.polynomial), sep.delta));
    }
    CHECK_THROWS_AS(library_separator("maj", 23), std::invalid_argument);
}

TEST_CASE("library separator: thr_halfsqrt") {
    for (int k : {99, 149, 301}) {
        CAPTURE(k);
        LibrarySeparator sep = library_separator("thr_halfsqrt", k);
        CHECK(sep.delta == Rat(1, 225));
        CHECK(verify_separating(ThresholdPredicate{k, true, 0},
                                std::get<SymmetricSpec>(sep.polynomial), sep.delta));
    }
}

TEST_CASE("library separator: huang structure and values") {
    const auto& shapes = HuangSeparator::zeta_monomials();
    CHECK(shapes.size() == 5);
    // every triple of [6] appears exactly once across zeta
    std::set<std::array<int, 3>> seen;
    for (const auto& shape : shapes) {
        std::array<int, 6> count{};
        for (const auto& tri : shape) {
            auto sorted = tri;
            std::sort(sorted.begin(), sorted.end());
            CHECK(seen.insert(sorted).second);
            for (int v : tri) count[v]++;
        }
        // each position of [6] in exactly 2 of the 4 triples
        for (int v = 0; v < 6; ++v) CHECK(count[v] == 2);
    }
    CHECK(seen.size() == 20);

    HuangSeparator sep(9);
    CHECK(sep.theta1() == Rat(5) - Rat(30, 7));
    // strongly satisfying strings evaluate to exactly 5
    CounterRng rng(42);
    for (int trial = 0; trial < 5; ++trial) {
        auto z = huang_strong_string(9, static_cast<std::uint32_t>(rng.next_u64()));
        CHECK(sep.evaluate_raw(z) == Rat(5));
    }
    // flipping up to kappa bits keeps the value >= theta1(kappa)
    for (int trial = 0; trial < 5; ++trial) {
        auto z = huang_strong_string(9, static_cast<std::uint32_t>(rng.next_u64()));
        for (int f = 0; f < 9; ++f) {
            std::size_t pos = rng.next_below(z.size());
            z[pos] = -z[pos];
        }
        CHECK(sep.evaluate_raw(z) >= Rat(5) - Rat(240, 8 * 7));
    }
}

TEST_CASE("4-wise support probe at k = 7") {
    // dual-code-based distributions put 4-wise uniform mass on high-weight
    // strings at k = 2^m - 1; the LP confirms feasibility inside Thr_7^{-5}
    LPResult probe = twise_distance(make_thr(7, -5), 4);
    CHECK(probe.delta == 0);
    CHECK(probe.supporting);
}

TEST_CASE("granularity bound") {
    CHECK(granularity_bound(2, 2) == Rat(1, 16));           // K=4 -> 4^-2
    CHECK(granularity_bound(3, 2) == Rat(1, 2401));         // K=7 -> 7^-4 (floor of 7^-3.5)
    // consistency at small k: nonzero deltas exceed the bound
    for (int k = 2; k <= 6; ++k) {
        for (int t = 1; t <= std::min(k, 3); ++t) {
            for (const Predicate& p : {make_xor(k), make_or(k)}) {
                Rat d = twise_distance(p, t).delta;
                if (d != 0) CHECK(d >= granularity_bound(k, t));
            }
        }
    }
}
