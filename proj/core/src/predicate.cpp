#include "cspref/predicate.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "json.hpp"

namespace cspref {

using nlohmann::json;

Predicate Predicate::from_truth_table(int k, const std::vector<std::uint8_t>& bits,
                                      std::string name) {
    if (k < 1 || k > kMaxTableArity)
        throw std::invalid_argument("predicate arity out of range [1," +
                                    std::to_string(kMaxTableArity) + "]: " + std::to_string(k));
    if (bits.size() != (std::size_t(1) << k))
        throw std::invalid_argument("truth table length must be 2^k");
    Predicate p;
    p.k_ = k;
    p.name_ = std::move(name);
    p.table_.assign(((std::size_t(1) << k) + 63) / 64, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) p.table_[i >> 6] |= std::uint64_t(1) << (i & 63);
    return p;
}

bool Predicate::evaluate(std::span<const int> z) const {
    if (static_cast<int>(z.size()) != k_) throw std::invalid_argument("assignment arity mismatch");
    return at(assignment_index(z));
}

std::uint64_t Predicate::ones() const {
    std::uint64_t c = 0;
    for (std::uint64_t w : table_) c += std::popcount(w);
    return c;
}

Rat Predicate::mean() const { return Rat(BigInt(ones()), BigInt(1) << k_); }

std::string Predicate::table_hex() const {
    std::uint32_t nibbles = (table_size() + 3) / 4;
    std::string out(nibbles, '0');
    static const char* digits = "0123456789abcdef";
    for (std::uint32_t v = 0; v < nibbles; ++v) {
        int nib = 0;
        for (int b = 0; b < 4; ++b) {
            std::uint32_t i = 4 * v + b;
            if (i < table_size() && at(i)) nib |= 1 << b;
        }
        out[v] = digits[nib];
    }
    return out;
}

std::uint32_t assignment_index(std::span<const int> z) {
    std::uint32_t idx = 0;
    for (std::size_t j = 0; j < z.size(); ++j) {
        if (z[j] == -1)
            idx |= 1u << j;
        else if (z[j] != 1)
            throw std::invalid_argument("assignment entries must be +1/-1");
    }
    return idx;
}

std::vector<int> assignment_of_index(std::uint32_t index, int k) {
    std::vector<int> z(k);
    for (int j = 0; j < k; ++j) z[j] = (index >> j) & 1 ? -1 : 1;
    return z;
}

// ---- named families ----

namespace {

int hamming_weight_sz(std::uint32_t index, int k) {
    return k - 2 * std::popcount(index);  // S_z = #(+1) - #(-1)
}

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

Predicate make_xor(int k) {
    require(k >= 1 && k <= kMaxTableArity, "xor: bad arity");
    std::vector<std::uint8_t> bits(std::size_t(1) << k);
    for (std::uint32_t i = 0; i < bits.size(); ++i) bits[i] = std::popcount(i) & 1;
    Predicate p = Predicate::from_truth_table(k, bits, std::to_string(k) + "-XOR");
    p.spec_ = NamedSpec{"xor", {k}};
    return p;
}

Predicate make_or(int k) {
    require(k >= 1 && k <= kMaxTableArity, "or: bad arity");
    std::uint32_t all = (std::uint32_t(1) << k) - 1;
    std::vector<std::uint8_t> bits(std::size_t(1) << k);
    for (std::uint32_t i = 0; i < bits.size(); ++i) bits[i] = (i != all);
    Predicate p = Predicate::from_truth_table(k, bits, std::to_string(k) + "-OR");
    p.spec_ = NamedSpec{"or", {k}};
    return p;
}

Predicate make_thr(int k, int theta) {
    require(k >= 1 && k <= kMaxTableArity && (k & 1), "thr: arity must be odd and <= 24");
    require(theta >= -k && theta <= k && ((theta - k) % 2 == 0),
            "thr: theta must be in {-k,-k+2,...,k}");
    std::vector<std::uint8_t> bits(std::size_t(1) << k);
    for (std::uint32_t i = 0; i < bits.size(); ++i)
        bits[i] = hamming_weight_sz(i, k) >= theta;
    Predicate p = Predicate::from_truth_table(
        k, bits, "Thr_" + std::to_string(k) + "^" + std::to_string(theta));
    p.spec_ = NamedSpec{"thr", {k, theta}};
    return p;
}

Predicate make_maj(int k) {
    Predicate p = make_thr(k, 1);
    p.name_ = "Maj_" + std::to_string(k);
    p.spec_ = NamedSpec{"maj", {k}};
    return p;
}

Predicate make_nae(int k) {
    require(k >= 2 && k <= kMaxTableArity, "nae: bad arity");
    std::uint32_t all = (std::uint32_t(1) << k) - 1;
    std::vector<std::uint8_t> bits(std::size_t(1) << k);
    for (std::uint32_t i = 0; i < bits.size(); ++i) bits[i] = (i != 0 && i != all);
    Predicate p = Predicate::from_truth_table(k, bits, "NAE_" + std::to_string(k));
    p.spec_ = NamedSpec{"nae", {k}};
    return p;
}

Predicate make_exactly(int k, int k1) {
    require(k >= 1 && k <= kMaxTableArity, "exactly: bad arity");
    require(k1 >= 0 && k1 <= k, "exactly: count out of range");
    std::vector<std::uint8_t> bits(std::size_t(1) << k);
    for (std::uint32_t i = 0; i < bits.size(); ++i)
        bits[i] = (k - std::popcount(i)) == k1;
    Predicate p = Predicate::from_truth_table(
        k, bits, "Exactly-" + std::to_string(k1) + "-of-" + std::to_string(k));
    p.spec_ = NamedSpec{"exactly", {k, k1}};
    return p;
}

int huang_arity(int kappa) { return kappa + kappa * (kappa - 1) * (kappa - 2) / 6; }

std::vector<std::array<int, 3>> huang_triples(int kappa) {
    std::vector<std::array<int, 3>> t;
    t.reserve(kappa * (kappa - 1) * (kappa - 2) / 6);
    for (int a = 0; a < kappa; ++a)
        for (int b = a + 1; b < kappa; ++b)
            for (int c = b + 1; c < kappa; ++c) t.push_back({a, b, c});
    return t;
}

bool huang_value(int kappa, std::span<const int> z) {
    require(kappa >= 3 && kappa <= 12, "huang: kappa must be in [3,12]");
    const int k = huang_arity(kappa);
    if (static_cast<int>(z.size()) != k) throw std::invalid_argument("huang: bad arity");
    auto triples = huang_triples(kappa);
    // Distance to the ball of strongly satisfying strings, each generated by
    // its first kappa bits.
    for (std::uint32_t y = 0; y < (std::uint32_t(1) << kappa); ++y) {
        int dist = 0;
        for (int j = 0; j < kappa; ++j) {
            int yj = (y >> j) & 1 ? -1 : 1;
            if (z[j] != yj) ++dist;
        }
        if (dist > kappa) continue;
        for (std::size_t t = 0; t < triples.size() && dist <= kappa; ++t) {
            int prod = ((y >> triples[t][0]) ^ (y >> triples[t][1]) ^ (y >> triples[t][2])) & 1
                           ? -1
                           : 1;
            if (z[kappa + static_cast<int>(t)] != prod) ++dist;
        }
        if (dist <= kappa) return true;
    }
    return false;
}

std::vector<int> huang_strong_string(int kappa, std::uint32_t first_bits) {
    auto triples = huang_triples(kappa);
    std::vector<int> z(huang_arity(kappa));
    for (int j = 0; j < kappa; ++j) z[j] = (first_bits >> j) & 1 ? -1 : 1;
    for (std::size_t i = 0; i < triples.size(); ++i)
        z[kappa + static_cast<int>(i)] =
            z[triples[i][0]] * z[triples[i][1]] * z[triples[i][2]];
    return z;
}

bool huang_strongly_satisfying(int kappa, std::span<const int> z) {
    auto triples = huang_triples(kappa);
    if (static_cast<int>(z.size()) != huang_arity(kappa)) return false;
    for (std::size_t i = 0; i < triples.size(); ++i)
        if (z[kappa + static_cast<int>(i)] !=
            z[triples[i][0]] * z[triples[i][1]] * z[triples[i][2]])
            return false;
    return true;
}

Predicate make_huang(int kappa) {
    require(kappa >= 3, "huang: kappa >= 3 required");
    const int k = huang_arity(kappa);
    require(k <= kMaxTableArity,
            "huang: arity " + std::to_string(k) + " exceeds table mode; use huang_value");
    std::vector<std::uint8_t> bits(std::size_t(1) << k);
    std::vector<int> z(k);
    for (std::uint32_t i = 0; i < bits.size(); ++i) {
        for (int j = 0; j < k; ++j) z[j] = (i >> j) & 1 ? -1 : 1;
        bits[i] = huang_value(kappa, z);
    }
    Predicate p = Predicate::from_truth_table(k, bits, "H_" + std::to_string(kappa));
    p.spec_ = NamedSpec{"huang", {kappa}};
    return p;
}

Predicate make_i8k(int k) {
    require(k >= 1 && (k & 1), "i8k: k must be odd");
    require(8 * k <= kMaxTableArity, "i8k: arity 8k exceeds table mode");
    const int arity = 8 * k;
    std::vector<std::uint8_t> bits(std::size_t(1) << arity);
    for (std::uint32_t i = 0; i < bits.size(); ++i) {
        bool first = true, last = true;
        for (int block = 0; block < 8; ++block) {
            int pc = std::popcount((i >> (block * k)) & ((1u << k) - 1));
            bool thr = (k - 2 * pc) >= -1;
            if (block < 4)
                first = first && thr;
            else
                last = last && thr;
        }
        bits[i] = first && !last;
    }
    Predicate p = Predicate::from_truth_table(arity, bits, "I_" + std::to_string(8 * k));
    p.spec_ = NamedSpec{"i8k", {k}};
    return p;
}

Predicate named_predicate(const std::string& family, const std::vector<long>& params) {
    auto need = [&](std::size_t n) {
        if (params.size() != n)
            throw std::invalid_argument("family '" + family + "' expects " + std::to_string(n) +
                                        " parameter(s)");
    };
    if (family == "xor") { need(1); return make_xor(int(params[0])); }
    if (family == "or") { need(1); return make_or(int(params[0])); }
    if (family == "thr") { need(2); return make_thr(int(params[0]), int(params[1])); }
    if (family == "maj") { need(1); return make_maj(int(params[0])); }
    if (family == "nae") { need(1); return make_nae(int(params[0])); }
    if (family == "exactly") { need(2); return make_exactly(int(params[0]), int(params[1])); }
    if (family == "huang") { need(1); return make_huang(int(params[0])); }
    if (family == "i8k") { need(1); return make_i8k(int(params[0])); }
    throw std::invalid_argument("unknown predicate family: " + family);
}

// ---- Fourier ----

void walsh_hadamard(std::vector<std::int64_t>& data) {
    const std::size_t n = data.size();
    for (std::size_t len = 1; len < n; len <<= 1) {
        for (std::size_t i = 0; i < n; i += len << 1) {
            for (std::size_t j = i; j < i + len; ++j) {
                std::int64_t u = data[j], v = data[j + len];
                data[j] = u + v;
                data[j + len] = u - v;
            }
        }
    }
}

FourierExpansion fourier_expansion(const Predicate& p) {
    std::vector<std::int64_t> buf(p.table_size());
    for (std::uint32_t i = 0; i < p.table_size(); ++i) buf[i] = p.at(i) ? 1 : 0;
    walsh_hadamard(buf);
    return FourierExpansion(p.arity(), std::move(buf));
}

std::int64_t FourierExpansion::evaluate_scaled(std::uint32_t index) const {
    std::int64_t acc = 0;
    for (std::uint32_t s = 0; s < num_.size(); ++s)
        acc += chi(index, s) * num_[s];
    return acc;
}

Rat predicate_mean(const Predicate& p) { return p.mean(); }

int zero_variability(const Predicate& p) {
    if (p.trivial_true()) throw std::domain_error("zero_variability: predicate is identically 1");
    const int k = p.arity();
    const std::uint32_t size = p.table_size();
    for (int c = 0; c <= k; ++c) {
        // all coordinate subsets of size c
        for (std::uint32_t mask = 0; mask < (std::uint32_t(1) << k); ++mask) {
            if (std::popcount(mask) != c) continue;
            // all assignments to the restricted coordinates; "pattern" places
            // the -1 choices inside mask
            std::uint32_t pattern = 0;
            do {
                bool forced = true;
                for (std::uint32_t i = 0; i < size && forced; ++i)
                    if ((i & mask) == pattern && p.at(i)) forced = false;
                if (forced) return c;
                pattern = (pattern - mask) & mask;  // next subset of mask
            } while (pattern != 0);
        }
    }
    throw std::logic_error("zero_variability: unreachable for non-constant predicates");
}

// ---- JSON ----

std::string predicate_to_json(const Predicate& p) {
    json j;
    if (p.spec()) {
        j["family"] = p.spec()->family;
        j["params"] = p.spec()->params;
    } else {
        j["k"] = p.arity();
        j["table"] = p.table_hex();
        if (!p.name().empty()) j["name"] = p.name();
    }
    return j.dump();
}

Predicate predicate_from_json(const std::string& text) {
    json j = json::parse(text);
    if (j.contains("family"))
        return named_predicate(j["family"].get<std::string>(), j["params"].get<std::vector<long>>());
    int k = j.at("k").get<int>();
    std::string hex = j.at("table").get<std::string>();
    if (hex.size() != ((std::size_t(1) << k) + 3) / 4)
        throw std::invalid_argument("truth table hex has wrong length");
    std::vector<std::uint8_t> bits(std::size_t(1) << k, 0);
    for (std::size_t v = 0; v < hex.size(); ++v) {
        char c = hex[v];
        int nib;
        if (c >= '0' && c <= '9')
            nib = c - '0';
        else if ((c | 32) >= 'a' && (c | 32) <= 'f')
            nib = (c | 32) - 'a' + 10;
        else
            throw std::invalid_argument("bad hex digit in truth table");
        for (int b = 0; b < 4; ++b) {
            std::size_t i = 4 * v + b;
            if (i < bits.size()) bits[i] = (nib >> b) & 1;
        }
    }
    return Predicate::from_truth_table(k, bits, j.value("name", std::string{}));
}

}  // namespace cspref
