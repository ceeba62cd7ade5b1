#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cspref/rational.hpp"

namespace cspref {

// Assignment/index convention used everywhere: a point z in {-1,+1}^k is
// encoded as the index whose bit j is set iff z_{j+1} = -1.  Index 0 is the
// all-(+1) assignment.  Subsets S of [k] are bitmasks with bit j <-> coordinate
// j+1, and z^S = (-1)^popcount(index & S).
inline int chi(std::uint32_t index, std::uint32_t mask) {
    return (__builtin_popcount(index & mask) & 1) ? -1 : 1;
}

inline constexpr int kMaxTableArity = 24;

struct NamedSpec {
    std::string family;
    std::vector<long> params;
};

// A k-ary Boolean predicate over {-1,1}^k stored as a truth table.
class Predicate {
  public:
    Predicate() = default;

    static Predicate from_truth_table(int k, const std::vector<std::uint8_t>& bits,
                                      std::string name = {});

    int arity() const { return k_; }
    std::uint32_t table_size() const { return 1u << k_; }
    const std::string& name() const { return name_; }
    const std::optional<NamedSpec>& spec() const { return spec_; }

    bool at(std::uint32_t index) const {
        return (table_[index >> 6] >> (index & 63)) & 1;
    }
    // z entries are +1/-1.
    bool evaluate(std::span<const int> z) const;

    std::uint64_t ones() const;
    Rat mean() const;
    bool trivial_true() const { return ones() == table_size(); }
    bool trivial_false() const { return ones() == 0; }

    bool operator==(const Predicate& o) const {
        return k_ == o.k_ && table_ == o.table_;
    }

    std::string table_hex() const;  // ceil(2^k/4) nibbles, little-endian bit order

  private:
    int k_ = 0;
    std::vector<std::uint64_t> table_;  // bit i = P at index i
    std::string name_;
    std::optional<NamedSpec> spec_;

    friend Predicate make_xor(int);
    friend Predicate make_or(int);
    friend Predicate make_thr(int, int);
    friend Predicate make_maj(int);
    friend Predicate make_nae(int);
    friend Predicate make_exactly(int, int);
    friend Predicate make_huang(int);
    friend Predicate make_i8k(int);
};

std::uint32_t assignment_index(std::span<const int> z);
std::vector<int> assignment_of_index(std::uint32_t index, int k);

// Named families.  Thresholds follow the Hamming weight S_z = sum z_i.
Predicate make_xor(int k);
Predicate make_or(int k);
Predicate make_thr(int k, int theta);  // S_z >= theta, k odd, theta in {-k,-k+2,...,k}
Predicate make_maj(int k);             // thr(k, 1)
Predicate make_nae(int k);
Predicate make_exactly(int k, int k1);  // exactly k1 coordinates equal +1
Predicate make_huang(int kappa);        // arity kappa + C(kappa,3); table mode needs arity <= 24
Predicate make_i8k(int k);              // arity 8k

// family: "xor" "or" "thr" "maj" "nae" "exactly" "huang" "i8k"; params as in the
// make_* functions.
Predicate named_predicate(const std::string& family, const std::vector<long>& params);

// Point evaluation of the Huang predicate for 3 <= kappa <= 12 without a table:
// z has kappa singleton bits followed by C(kappa,3) triple bits, triples ordered
// lexicographically.  Minimizes Hamming distance to the strongly satisfying
// string generated by each y in {-1,1}^kappa.
bool huang_value(int kappa, std::span<const int> z);
int huang_arity(int kappa);
// Triple coordinate layout shared by huang_value and the Huang separator.
std::vector<std::array<int, 3>> huang_triples(int kappa);
// The strongly satisfying string generated by the given first-kappa bits
// (bit j set means z_{j+1} = -1); triple bits are the singleton products.
std::vector<int> huang_strong_string(int kappa, std::uint32_t first_bits);
bool huang_strongly_satisfying(int kappa, std::span<const int> z);

// Exact Fourier expansion; coefficients are n_S / 2^k with integer n_S.
class FourierExpansion {
  public:
    FourierExpansion() = default;
    FourierExpansion(int k, std::vector<std::int64_t> numerators)
        : k_(k), num_(std::move(numerators)) {}

    int arity() const { return k_; }
    Rat coefficient(std::uint32_t mask) const { return Rat(num_[mask], BigInt(1) << k_); }
    std::int64_t numerator(std::uint32_t mask) const { return num_[mask]; }
    const std::vector<std::int64_t>& numerators() const { return num_; }

    // Sum over S of coeff(S) * z^S at the given assignment index, times 2^k.
    std::int64_t evaluate_scaled(std::uint32_t index) const;

  private:
    int k_ = 0;
    std::vector<std::int64_t> num_;
};

FourierExpansion fourier_expansion(const Predicate& p);

// In-place Walsh-Hadamard transform: out[S] = sum_i (-1)^popcount(i&S) in[i].
void walsh_hadamard(std::vector<std::int64_t>& data);

Rat predicate_mean(const Predicate& p);

// Least c such that fixing some c coordinates forces P to 0.  Throws if P is
// identically 1.
int zero_variability(const Predicate& p);

// JSON (nlohmann) — text form documented in the README.
std::string predicate_to_json(const Predicate& p);
Predicate predicate_from_json(const std::string& text);

}  // namespace cspref
