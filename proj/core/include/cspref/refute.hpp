#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "cspref/instance.hpp"
#include "cspref/polynomial.hpp"
#include "cspref/spectral.hpp"
#include "cspref/twise.hpp"

namespace cspref {

// Uniform (over all assignments) certified bounds on the induced-density
// Fourier coefficients: |D-hat_{I,x}(S)| <= bounds[S] for every x.
struct FourierBoundTable {
    std::uint64_t instance_digest = 0;
    int k = 0;
    double expected_m = 0;
    std::map<std::uint32_t, double> bounds;
};

struct RefutationOutcome {
    enum class Verdict { bound, fail };
    Verdict verdict = Verdict::fail;
    double bound = 1.0;
    std::string kind;  // quasirandom | strong | xor | delta | t-quasirandom
    std::optional<Rat> delta;
    FourierBoundTable fourier_bounds;
    std::map<std::string, double> components;
    std::string failure;

    bool refuted() const { return verdict == Verdict::bound; }
    std::string to_json() const;
};

// Certified two-sided bound on D-hat_{I,x}(S) uniform over assignments; the
// s = 1 route is the exact L1 bound, s >= 2 goes through certify_sum_form.
double certify_fourier_bound(const Instance& inst, std::uint32_t mask,
                             const CertifyOptions& opts = {});

// Bounds for every nonempty S with |S| <= t (t = k by default); honors
// CSPREF_THREADS for independent subsets.
FourierBoundTable fourier_bound_table(const Instance& inst, int t,
                                      const CertifyOptions& opts = {});

// Quasirandomness certificate: dTV(D_{I,x}, uniform) <= eps for all x, via
// Parseval: eps = (1/2) sqrt(sum_S B_S^2).  Fact-style consequence:
// Opt(I) <= E[P] + eps.
double certify_quasirandom(const Instance& inst, const CertifyOptions& opts = {});

// (eps,t)-quasirandomness: eps_t = max over 0 < |S| <= t of B_S.
double certify_t_quasirandom(const Instance& inst, int t, const CertifyOptions& opts = {});

// Strong refutation: bound = E[P] + sum_{S != 0} |P-hat(S)| B_S.
RefutationOutcome strong_refute(const Instance& inst, const CertifyOptions& opts = {});

// k-XOR specialization: bound = 1/2 + (2^{k-1}/m) * certify_form(w).bound with
// w(T) = -2^{-k} sum_c 1{(T,c) in I} prod_i c_i.
RefutationOutcome xor_strong_refute(const Instance& inst, const CertifyOptions& opts = {});

// delta-refutation via a separating polynomial of degree t:
// bound = 1 - delta + sum_{0<|S|<=t} |Q-hat(S)| B_S.  When check_separator is
// set the polynomial is verified against the instance's predicate first.
RefutationOutcome delta_refute(const Instance& inst, const MultilinearPolynomial& q,
                               const Rat& delta, bool check_separator = true,
                               const CertifyOptions& opts = {});

// Pipeline: k-XOR instances take the specialized path; otherwise the LP
// (at the given t, or scanning 2..min(k,4)) supplies a separating dual for the
// delta path, and the strong bound is always computed.  Returns the smallest
// sound bound among the candidates.
RefutationOutcome refute(const Instance& inst, std::optional<int> t = std::nullopt,
                         const CertifyOptions& opts = {});

}  // namespace cspref
