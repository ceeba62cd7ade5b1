#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cspref/polynomial.hpp"
#include "cspref/predicate.hpp"
#include "cspref/rational.hpp"

namespace cspref {

// Result of the t-wise support LP for a predicate: delta is the largest gamma
// such that every t-wise uniform distribution puts mass >= gamma on P^{-1}(0).
struct LPResult {
    Rat delta;
    int t = 0;
    std::map<std::uint32_t, Rat> primal_distribution;  // optimal D, support only
    MultilinearPolynomial dual_polynomial;             // delta-separates P
    bool supporting = false;                           // delta == 0

    std::string to_json() const;
};

// Exact LP over the 2^k distribution variables with the degree-<=t moment
// equalities.  t = k short-circuits to the uniform distribution (the only
// k-wise uniform one) with dual P - E[P].
LPResult twise_distance(const Predicate& p, int t);

// The three separating conditions, checked exactly over all 2^k points.
bool verify_separating(const Predicate& p, const MultilinearPolynomial& q, const Rat& delta);

// Univariate route for symmetric predicates of any odd arity: conditions are
// checked on the k+1 Hamming weight levels in Q[sqrt(k)].
struct ThresholdPredicate {
    int k = 0;                  // odd
    bool half_sqrt = false;     // satisfied iff S_z >= -sqrt(k)/2
    int theta = 0;              // used when !half_sqrt: satisfied iff S_z >= theta

    bool satisfied_at_weight(long s) const;
};
bool verify_separating(const ThresholdPredicate& p, const SymmetricSpec& spec, const Rat& delta);

// Lemma-style rescaling: given unbiased Q with Q >= theta1 on P^{-1}(1) and
// Q >= theta0 everywhere, Q/(theta1-theta0) separates P at theta1/(theta1-theta0).
std::pair<MultilinearPolynomial, Rat> scale_polynomial(const MultilinearPolynomial& q,
                                                       const Rat& theta1, const Rat& theta0);
Rat scaled_delta(const Rat& theta1, const Rat& theta0);

// The Huang separator is an average over ordered 6-tuples of distinct indices
// and is evaluated structurally (its monomials live on the triple block).
class HuangSeparator {
  public:
    explicit HuangSeparator(int kappa);

    int kappa() const { return kappa_; }
    int arity() const;
    // Exact value of the *scaled* polynomial times 56 (the scale is 7/56=1/8 at
    // theta1 = 5-30/7): returns Q_raw(z) as an exact rational.
    Rat evaluate_raw(std::span<const int> z) const;

    // zeta structure checks: 5 monomials, 4 triples each, every triple of [6]
    // used exactly once, each position in exactly 2 triples per monomial.
    static const std::array<std::array<std::array<int, 3>, 4>, 5>& zeta_monomials();

    Rat theta1() const;  // 5 - 240/((kappa-1)(kappa-2))
    Rat theta0() const { return Rat(-5); }
    Rat delta() const { return Rat(1, 8); }

  private:
    int kappa_;
    std::vector<std::array<int, 3>> triples_;             // triple coordinate layout
    std::vector<int> triple_index_;                       // dense (a,b,c) -> coordinate
    std::int64_t z6_count_ = 0;                           // kappa!/(kappa-6)!
};

// Library of explicit separators.
struct LibrarySeparator {
    std::string name;
    Rat delta;
    std::variant<MultilinearPolynomial, SymmetricSpec, HuangSeparator> polynomial;
};

// name in {"huang","thr_minus1","maj","thr_halfsqrt"}; parameter is kappa for
// huang and the (odd) arity otherwise.  Parameter thresholds follow the
// theorems: kappa >= 9, k >= 5, k >= 25, k >= 99.
LibrarySeparator library_separator(const std::string& name, int param);

// Certified lower bound on any nonzero delta of the t-wise LP.  K is the dual
// dimension 1 + sum_{i<=t} C(k,i); the bound returned is 1/K^ceil(K/2), the
// rational floor of the Hadamard bound K^{-K/2}.
Rat granularity_bound(int k, int t);

}  // namespace cspref
