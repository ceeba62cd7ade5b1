#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cspref/predicate.hpp"
#include "cspref/rational.hpp"
#include "cspref/rng.hpp"

namespace cspref {

struct Constraint {
    std::vector<std::int32_t> scope;  // 1-based variable indices, repeats allowed
    std::vector<std::int8_t> neg;     // +1/-1 entries
};

struct InstanceMeta {
    enum class Model { binomial, fixed } model = Model::binomial;
    double p = 0;          // binomial model
    std::uint64_t m = 0;   // fixed model
    std::uint64_t seed = 0;
    double expected_m = 0;  // 2^k n^k p for the binomial model
};

// A CSP(P) instance: a set of (negation, scope) constraints over n variables.
// Constraints are stored flat and kept in increasing universe order, where the
// universe index of (S,c) is s*2^k + c with s the base-n encoding of the scope
// (first coordinate most significant) and bit j of c set iff c_{j+1} = -1.
class Instance {
  public:
    Instance() = default;
    Instance(Predicate pred, int n, InstanceMeta meta)
        : predicate_(std::move(pred)), n_(n), meta_(meta) {}

    const Predicate& predicate() const { return predicate_; }
    int n() const { return n_; }
    int k() const { return predicate_.arity(); }
    std::size_t size() const { return scopes_.size() / k(); }
    const InstanceMeta& meta() const { return meta_; }
    InstanceMeta& meta() { return meta_; }

    std::int32_t scope(std::size_t c, int j) const { return scopes_[c * k() + j]; }
    std::int8_t neg(std::size_t c, int j) const { return negs_[c * k() + j]; }
    Constraint constraint(std::size_t c) const;

    void add_constraint(std::span<const std::int32_t> scope, std::span<const std::int8_t> neg);
    void remove_constraints(const std::vector<std::size_t>& sorted_positions);

    // index into P's truth table of c o x_S for the given +-1 assignment
    std::uint32_t constraint_input(std::size_t c, std::span<const int> x) const;

    std::uint64_t digest() const;  // FNV-1a over (k, n, constraints)

    std::string to_json() const;
    static Instance from_json(const std::string& text);

  private:
    Predicate predicate_;
    int n_ = 0;
    std::vector<std::int32_t> scopes_;
    std::vector<std::int8_t> negs_;
    InstanceMeta meta_;
};

// F_P(n,p): every one of the 2^k n^k (scope, negation) pairs included
// independently with probability p, via one reproducible counter-mode stream
// per seed.  Throws if the universe size overflows 2^62.
Instance sample_instance(const Predicate& p, int n, double prob, std::uint64_t seed);

// Uniformly random size-m subset of the constraint universe.
Instance sample_fixed_m(const Predicate& p, int n, std::uint64_t m, std::uint64_t seed);

// Appendix-style reduction from the fixed-m model to the binomial model:
// draws m' ~ Binomial((2n)^k, p) at p = mu(1-d)(2n)^{-k}, d = sqrt(ln mu / mu),
// fails when m' leaves [mu(1-2d), mu], otherwise discards mu-m' random
// constraints.  Any value bound certified for the result must be increased by
// `correction` = 2d before it applies to the original instance.
struct FixedMAdapterResult {
    std::optional<Instance> instance;
    double correction = 0;
    double p = 0;
    std::string failure;  // nonempty iff the binomial draw left the band
};
FixedMAdapterResult fixed_m_adapter(const Instance& fixed_instance, double p_min,
                                    std::uint64_t seed);

// Fraction of satisfied constraints, exact.
Rat value(const Instance& inst, std::span<const int> x);

// max_x value(I,x) over all 2^n assignments (n <= 24), via a Walsh-Hadamard
// accumulation of the constraints' Fourier expansions.
Rat brute_force_opt(const Instance& inst);

// Empirical distribution of constraint inputs c o x_S.
struct InducedDistribution {
    int k = 0;
    std::uint64_t m = 0;
    std::vector<std::uint64_t> counts;  // size 2^k, mass = counts/m

    Rat mass(std::uint32_t atom) const { return Rat(counts[atom], m); }
    Rat total_variation_to_uniform() const;
};
InducedDistribution induced_distribution(const Instance& inst, std::span<const int> x);

// Fourier coefficient of the induced density: E_{z~D}[z^S], exact.
Rat induced_fourier(const Instance& inst, std::span<const int> x, std::uint32_t mask);

// DIMACS CNF with uniform clause width k, mapped onto the k-OR predicate
// (negative literal -> negation entry -1).
Instance instance_from_dimacs(const std::string& text);
std::string instance_to_dimacs(const Instance& inst);

}  // namespace cspref
