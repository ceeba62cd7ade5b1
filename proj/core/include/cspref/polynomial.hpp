#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>

#include "cspref/rational.hpp"
#include "cspref/surd.hpp"

namespace cspref {

// Sparse multilinear polynomial over {-1,1}^k: sum_S coeff(S) z^S with S a
// coordinate bitmask.  Separating polynomials keep coeff(empty) = 0.
class MultilinearPolynomial {
  public:
    MultilinearPolynomial() = default;
    explicit MultilinearPolynomial(int k) : k_(k) {}

    int arity() const { return k_; }
    int degree() const;

    void set(std::uint32_t mask, Rat value);
    Rat coefficient(std::uint32_t mask) const;
    const std::map<std::uint32_t, Rat>& coefficients() const { return coeff_; }

    bool unbiased() const { return coefficient(0) == 0; }

    Rat evaluate_index(std::uint32_t index) const;  // z encoded as assignment index
    Rat evaluate(std::span<const int> z) const;

    MultilinearPolynomial scaled(const Rat& factor) const;

    std::string to_json() const;  // {"k","t","coeffs":{mask-hex:"num/den"}}
    static MultilinearPolynomial from_json(const std::string& text);

  private:
    int k_ = 0;
    std::map<std::uint32_t, Rat> coeff_;
};

// Symmetric polynomial template a*e1 + b*e2 + c*e3 + d*e4 where e_i is the sum
// of all degree-i square-free monomials.  Coefficients may involve sqrt(k).
struct SymmetricSpec {
    int k = 0;
    Surd a, b, c, d;
};

// Degree-4 univariate polynomial in the Hamming weight s = S_z, exact over
// Q[sqrt(k)]: value = u[0] + u[1] s + u[2] s^2 + u[3] s^3 + u[4] s^4.
struct UnivariatePoly {
    int k = 0;
    std::array<Surd, 5> u;

    Surd evaluate(long s) const;
};

// Krawtchouk conversion: Q(z) = Q_u(S_z) for every z in {-1,1}^k.
UnivariatePoly univariate_from_symmetric(const SymmetricSpec& spec);

// Expands the symmetric template into an explicit multilinear polynomial.
// Requires rational coefficients (no sqrt part) and k <= 24.
MultilinearPolynomial expand_symmetric(const SymmetricSpec& spec);

// Elementary symmetric function e_i(z) evaluated at the assignment with the
// given index, for i <= 4, by direct subset enumeration (test oracle for the
// Krawtchouk identities).
std::int64_t elementary_symmetric_direct(std::uint32_t index, int k, int i);

}  // namespace cspref
