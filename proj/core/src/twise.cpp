#include "cspref/twise.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

#include "cspref/lp.hpp"
#include "json.hpp"

namespace cspref {

using nlohmann::json;

std::string LPResult::to_json() const {
    json primal = json::object();
    char buf[16];
    for (const auto& [atom, mass] : primal_distribution) {
        std::snprintf(buf, sizeof buf, "%x", atom);
        primal[buf] = rat_string(mass);
    }
    json j{{"delta", rat_string(delta)},
           {"t", t},
           {"supporting", supporting},
           {"primal", std::move(primal)},
           {"dual", json::parse(dual_polynomial.to_json())}};
    return j.dump();
}

LPResult twise_distance(const Predicate& p, int t) {
    const int k = p.arity();
    if (t < 1 || t > k) throw std::invalid_argument("twise_distance: t must be in [1,k]");

    LPResult res;
    res.t = t;

    if (t == k) {
        // The only k-wise uniform distribution is uniform, so delta is the
        // unsatisfied mass and P - E[P] is an optimal dual.
        Rat mean = p.mean();
        res.delta = 1 - mean;
        res.supporting = (res.delta == 0);
        Rat atom_mass(1, BigInt(1) << k);
        for (std::uint32_t z = 0; z < p.table_size(); ++z)
            res.primal_distribution.emplace(z, atom_mass);
        FourierExpansion f = fourier_expansion(p);
        MultilinearPolynomial q(k);
        for (std::uint32_t s = 1; s < p.table_size(); ++s)
            q.set(s, f.coefficient(s));
        res.dual_polynomial = std::move(q);
        return res;
    }

    std::vector<std::uint32_t> moment_masks;
    for (std::uint32_t s = 1; s < (1u << k); ++s)
        if (std::popcount(s) <= t) moment_masks.push_back(s);

    LinearProgram lp;
    lp.rows = moment_masks.size() + 1;
    lp.cols = std::size_t(1) << k;
    if (lp.rows * lp.cols > LpLimits{}.max_cells)
        throw std::length_error("twise_distance: arity too large for exact solve");
    lp.a.assign(lp.rows, std::vector<Rat>(lp.cols));
    lp.b.assign(lp.rows, Rat(0));
    lp.c.assign(lp.cols, Rat(0));
    for (std::size_t r = 0; r < moment_masks.size(); ++r)
        for (std::uint32_t z = 0; z < lp.cols; ++z)
            lp.a[r][z] = chi(z, moment_masks[r]);
    const std::size_t sum_row = lp.rows - 1;
    for (std::uint32_t z = 0; z < lp.cols; ++z) {
        lp.a[sum_row][z] = 1;
        lp.c[z] = p.at(z) ? 0 : 1;
    }
    lp.b[sum_row] = 1;

    LpSolution sol = solve_lp(lp);
    if (sol.objective != sol.y[sum_row])
        throw std::logic_error("twise_distance: strong duality violated");

    res.delta = sol.objective;
    res.supporting = (res.delta == 0);
    for (std::uint32_t z = 0; z < lp.cols; ++z)
        if (sol.x[z] != 0) res.primal_distribution.emplace(z, sol.x[z]);
    // Dual constraint: sum_S c(S) z^S <= 1-P(z) - xi with c(S) = y_S; the
    // separating polynomial is Q(z) = -sum_S c(S) z^S.
    MultilinearPolynomial q(k);
    for (std::size_t r = 0; r < moment_masks.size(); ++r)
        if (sol.y[r] != 0) q.set(moment_masks[r], -sol.y[r]);
    res.dual_polynomial = std::move(q);
    return res;
}

bool verify_separating(const Predicate& p, const MultilinearPolynomial& q, const Rat& delta) {
    if (q.arity() != p.arity()) return false;
    if (!q.unbiased()) return false;
    const Rat lower = delta - 1;
    for (std::uint32_t z = 0; z < p.table_size(); ++z) {
        Rat v = q.evaluate_index(z);
        if (v < lower) return false;
        if (p.at(z) && v < delta) return false;
    }
    return true;
}

bool ThresholdPredicate::satisfied_at_weight(long s) const {
    if (!half_sqrt) return s >= theta;
    if (s >= 0) return true;
    return 4 * s * s <= k;  // s >= -sqrt(k)/2 for negative s
}

bool verify_separating(const ThresholdPredicate& p, const SymmetricSpec& spec, const Rat& delta) {
    if (spec.k != p.k) return false;
    UnivariatePoly qu = univariate_from_symmetric(spec);
    const Surd lower{delta - 1};
    const Surd on_sat{delta};
    for (long s = -p.k; s <= p.k; s += 2) {
        Surd v = qu.evaluate(s);
        if (v < lower) return false;
        if (p.satisfied_at_weight(s) && v < on_sat) return false;
    }
    return true;
}

Rat scaled_delta(const Rat& theta1, const Rat& theta0) {
    if (theta1 <= 0) throw std::domain_error("scale_polynomial: theta1 must be positive");
    if (theta0 >= 0) throw std::domain_error("scale_polynomial: theta0 must be negative");
    return theta1 / (theta1 - theta0);
}

std::pair<MultilinearPolynomial, Rat> scale_polynomial(const MultilinearPolynomial& q,
                                                       const Rat& theta1, const Rat& theta0) {
    Rat delta = scaled_delta(theta1, theta0);
    return {q.scaled(Rat(1) / (theta1 - theta0)), delta};
}

// ---- Huang separator ----

namespace {

// Canonical list of the 20 size-3 subsets of {0..5}.
const std::array<std::array<int, 3>, 20>& six_triples() {
    static const auto t = [] {
        std::array<std::array<int, 3>, 20> out{};
        int idx = 0;
        for (int a = 0; a < 6; ++a)
            for (int b = a + 1; b < 6; ++b)
                for (int c = b + 1; c < 6; ++c) out[idx++] = {a, b, c};
        return out;
    }();
    return t;
}

int six_triple_slot(int a, int b, int c) {
    const auto& list = six_triples();
    for (int i = 0; i < 20; ++i)
        if (list[i][0] == a && list[i][1] == b && list[i][2] == c) return i;
    throw std::logic_error("six_triple_slot");
}

// Flattened (permutation, shape, factor) -> slot table over the canonical
// triples of [6]; shared by every kappa.
const std::vector<std::uint8_t>& perm_shape_slots() {
    static const std::vector<std::uint8_t> table = [] {
        const auto& shapes = HuangSeparator::zeta_monomials();
        std::array<int, 6> perm{0, 1, 2, 3, 4, 5};
        std::vector<std::uint8_t> out;
        out.reserve(720 * 5 * 4);
        do {
            for (const auto& shape : shapes) {
                for (const auto& tri : shape) {
                    std::array<int, 3> mapped{perm[tri[0]], perm[tri[1]], perm[tri[2]]};
                    std::sort(mapped.begin(), mapped.end());
                    out.push_back(static_cast<std::uint8_t>(
                        six_triple_slot(mapped[0], mapped[1], mapped[2])));
                }
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        return out;
    }();
    return table;
}

}  // namespace

const std::array<std::array<std::array<int, 3>, 4>, 5>& HuangSeparator::zeta_monomials() {
    // 0-based positions of the five zeta monomials.
    static const std::array<std::array<std::array<int, 3>, 4>, 5> m = {{
        {{{0, 1, 5}, {0, 2, 3}, {1, 2, 4}, {3, 4, 5}}},
        {{{1, 4, 5}, {0, 3, 5}, {2, 3, 4}, {0, 1, 2}}},
        {{{0, 2, 5}, {1, 2, 5}, {0, 3, 4}, {1, 3, 4}}},
        {{{0, 1, 3}, {1, 2, 3}, {2, 4, 5}, {0, 4, 5}}},
        {{{0, 1, 4}, {0, 2, 4}, {2, 3, 5}, {1, 3, 5}}},
    }};
    return m;
}

HuangSeparator::HuangSeparator(int kappa) : kappa_(kappa) {
    if (kappa < 9) throw std::invalid_argument("huang separator needs kappa >= 9");
    if (kappa > 40) throw std::invalid_argument("huang separator: kappa too large");
    triples_ = huang_triples(kappa);
    triple_index_.assign(kappa * kappa * kappa, -1);
    for (std::size_t i = 0; i < triples_.size(); ++i) {
        const auto& t = triples_[i];
        triple_index_[(t[0] * kappa + t[1]) * kappa + t[2]] = static_cast<int>(i);
    }
    z6_count_ = 1;
    for (int i = 0; i < 6; ++i) z6_count_ *= kappa - i;
}

int HuangSeparator::arity() const { return huang_arity(kappa_); }

Rat HuangSeparator::theta1() const {
    return Rat(5) - Rat(240, (kappa_ - 1) * (kappa_ - 2));
}

Rat HuangSeparator::evaluate_raw(std::span<const int> z) const {
    if (static_cast<int>(z.size()) != arity())
        throw std::invalid_argument("huang separator: arity mismatch");
    const int kappa = kappa_;
    // sign bit per triple coordinate: 1 means -1
    std::vector<std::uint8_t> bits(triples_.size());
    for (std::size_t i = 0; i < triples_.size(); ++i)
        bits[i] = z[kappa + static_cast<int>(i)] == -1;

    const auto& slots = perm_shape_slots();
    const auto& local_triples = six_triples();
    std::array<int, 6> comb{0, 1, 2, 3, 4, 5};
    std::int64_t total = 0;
    std::array<std::uint8_t, 20> local{};
    for (;;) {
        for (int j = 0; j < 20; ++j) {
            const auto& t = local_triples[j];
            int a = comb[t[0]], b = comb[t[1]], c = comb[t[2]];
            local[j] = bits[triple_index_[(a * kappa + b) * kappa + c]];
        }
        std::int64_t acc = 0;
        const std::uint8_t* s = slots.data();
        for (int e = 0; e < 720 * 5; ++e, s += 4) {
            int sign = local[s[0]] ^ local[s[1]] ^ local[s[2]] ^ local[s[3]];
            acc += 1 - 2 * sign;
        }
        total += acc;
        // next combination of 6 out of kappa
        int i = 5;
        while (i >= 0 && comb[i] == kappa - 6 + i) --i;
        if (i < 0) break;
        ++comb[i];
        for (int j2 = i + 1; j2 < 6; ++j2) comb[j2] = comb[j2 - 1] + 1;
    }
    return Rat(total, z6_count_);
}

// ---- separator library ----

LibrarySeparator library_separator(const std::string& name, int param) {
    if (name == "huang") {
        HuangSeparator sep(param);
        return {name, sep.delta(), std::move(sep)};
    }
    if (name == "thr_minus1") {
        const long k = param;
        if (k < 5 || k % 2 == 0)
            throw std::invalid_argument("thr_minus1 separator needs odd k >= 5");
        // raw coefficients (k^2-k-1, 1-k, 1+k) with theta1 = Q_u(-1) = 1 and
        // theta0 = Q_u(-k) = -(k^4+7k^3-13k^2-k)/6
        Rat theta1(1);
        Rat theta0 = -Rat(k * k * k * k + 7 * k * k * k - 13 * k * k - k, 6);
        Rat scale = Rat(1) / (theta1 - theta0);
        SymmetricSpec spec;
        spec.k = param;
        spec.a = Surd(Rat(k * k - k - 1) * scale);
        spec.b = Surd(Rat(1 - k) * scale);
        spec.c = Surd(Rat(1 + k) * scale);
        spec.d = Surd(Rat(0));
        return {name, scaled_delta(theta1, theta0), spec};
    }
    if (name == "maj") {
        const long k = param;
        if (k < 25 || k % 2 == 0)
            throw std::invalid_argument("maj separator needs odd k >= 25");
        Rat theta1(1, 8), theta0(-8, 9);
        Rat scale = Rat(1) / (theta1 - theta0);  // 72/73
        SymmetricSpec spec;
        spec.k = param;
        spec.a = Surd(Rat(0), Rat(8, 27) / k * scale, k);          // 8/(27 sqrt k)
        spec.b = Surd(Rat(0));
        spec.c = Surd(Rat(0), Rat(-5, 9) / (k * k) * scale, k);    // -5/(9 k^{3/2})
        spec.d = Surd(Rat(4) / (3 * k * k) * scale);
        return {name, scaled_delta(theta1, theta0), spec};
    }
    if (name == "thr_halfsqrt") {
        const long k = param;
        if (k < 99 || k % 2 == 0)
            throw std::invalid_argument("thr_halfsqrt separator needs odd k >= 99");
        Rat theta1(1, 48), theta0(-14, 3);
        Rat scale = Rat(1) / (theta1 - theta0);  // 16/75
        SymmetricSpec spec;
        spec.k = param;
        spec.a = Surd(Rat(0), Rat(3, 2) / k * scale, k);           // (3/2) k^{-1/2}
        spec.b = Surd(Rat(1) / (2 * k) * scale);
        spec.c = Surd(Rat(0), Rat(2) / (k * k) * scale, k);        // 2 k^{-3/2}
        spec.d = Surd(Rat(8) / (k * k) * scale);
        return {name, scaled_delta(theta1, theta0), spec};
    }
    throw std::invalid_argument("unknown separator: " + name);
}

Rat granularity_bound(int k, int t) {
    if (t > k || t < 1) throw std::invalid_argument("granularity_bound: t out of range");
    BigInt big_k = 1;
    BigInt binom = 1;
    for (int i = 1; i <= t; ++i) {
        binom = binom * (k - i + 1) / i;
        big_k += binom;
    }
    // 1 / K^ceil(K/2): rational floor of the Hadamard bound K^{-K/2}
    BigInt exponent = (big_k + 1) / 2;
    if (exponent > 4096) throw std::length_error("granularity_bound: K too large");
    BigInt denom = pow(big_k, exponent.convert_to<unsigned>());
    return Rat(1, denom);
}

}  // namespace cspref
