#include "cspref/instance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_set>
#include <utility>

#include "json.hpp"

namespace cspref {

using nlohmann::json;

namespace {

// 2^k n^k with an overflow guard.
std::uint64_t universe_size(int n, int k) {
    std::uint64_t size = 1;
    const std::uint64_t cap = std::uint64_t(1) << 62;
    for (int i = 0; i < k; ++i) {
        if (size > cap / std::uint64_t(n))
            throw std::overflow_error("constraint universe exceeds 2^62");
        size *= std::uint64_t(n);
    }
    if (size > cap >> k) throw std::overflow_error("constraint universe exceeds 2^62");
    return size << k;
}

void decode_universe_index(std::uint64_t u, int n, int k, std::int32_t* scope,
                           std::int8_t* neg) {
    std::uint32_t cbits = static_cast<std::uint32_t>(u & ((std::uint64_t(1) << k) - 1));
    std::uint64_t s = u >> k;
    for (int j = k - 1; j >= 0; --j) {
        scope[j] = static_cast<std::int32_t>(s % n) + 1;
        s /= n;
    }
    for (int j = 0; j < k; ++j) neg[j] = (cbits >> j) & 1 ? -1 : 1;
}

// Visits every universe index included by an independent-inclusion pass with
// probability p, in increasing order, using geometric gaps.
template <typename Fn>
void for_each_included(std::uint64_t universe, double p, CounterRng& rng, Fn&& fn) {
    if (p <= 0) return;
    if (p >= 1) {
        for (std::uint64_t u = 0; u < universe; ++u) fn(u);
        return;
    }
    const double log_q = std::log1p(-p);
    std::uint64_t pos = 0;  // next candidate index
    for (;;) {
        double u01 = 1.0 - rng.next_double();  // (0,1]
        double gap = std::floor(std::log(u01) / log_q) + 1.0;
        if (!(gap <= static_cast<double>(universe - pos))) return;
        std::uint64_t included = pos + static_cast<std::uint64_t>(gap) - 1;
        fn(included);
        pos = included + 1;
        if (pos >= universe) return;
    }
}

}  // namespace

Constraint Instance::constraint(std::size_t c) const {
    Constraint out;
    out.scope.assign(scopes_.begin() + c * k(), scopes_.begin() + (c + 1) * k());
    out.neg.assign(negs_.begin() + c * k(), negs_.begin() + (c + 1) * k());
    return out;
}

void Instance::add_constraint(std::span<const std::int32_t> scope,
                              std::span<const std::int8_t> neg) {
    if (static_cast<int>(scope.size()) != k() || static_cast<int>(neg.size()) != k())
        throw std::invalid_argument("constraint arity mismatch");
    for (auto v : scope)
        if (v < 1 || v > n_) throw std::invalid_argument("scope entry out of [1,n]");
    for (auto s : neg)
        if (s != 1 && s != -1) throw std::invalid_argument("negation entries must be +1/-1");
    scopes_.insert(scopes_.end(), scope.begin(), scope.end());
    negs_.insert(negs_.end(), neg.begin(), neg.end());
}

void Instance::remove_constraints(const std::vector<std::size_t>& sorted_positions) {
    if (sorted_positions.empty()) return;
    std::vector<std::int32_t> new_scopes;
    std::vector<std::int8_t> new_negs;
    new_scopes.reserve(scopes_.size());
    new_negs.reserve(negs_.size());
    std::size_t next = 0;
    for (std::size_t c = 0; c < size(); ++c) {
        if (next < sorted_positions.size() && sorted_positions[next] == c) {
            ++next;
            continue;
        }
        new_scopes.insert(new_scopes.end(), scopes_.begin() + c * k(),
                          scopes_.begin() + (c + 1) * k());
        new_negs.insert(new_negs.end(), negs_.begin() + c * k(),
                        negs_.begin() + (c + 1) * k());
    }
    scopes_ = std::move(new_scopes);
    negs_ = std::move(new_negs);
}

std::uint32_t Instance::constraint_input(std::size_t c, std::span<const int> x) const {
    std::uint32_t idx = 0;
    const int arity = k();
    for (int j = 0; j < arity; ++j) {
        int lit = neg(c, j) * x[scope(c, j) - 1];
        if (lit == -1) idx |= 1u << j;
    }
    return idx;
}

std::uint64_t Instance::digest() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](std::uint64_t v) {
        for (int b = 0; b < 8; ++b) {
            h ^= (v >> (8 * b)) & 0xff;
            h *= 0x100000001b3ull;
        }
    };
    mix(static_cast<std::uint64_t>(k()));
    mix(static_cast<std::uint64_t>(n_));
    for (auto s : scopes_) mix(static_cast<std::uint64_t>(s));
    for (auto g : negs_) mix(static_cast<std::uint64_t>(static_cast<std::int64_t>(g)));
    return h;
}

Instance sample_instance(const Predicate& p, int n, double prob, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_instance: n >= 1 required");
    if (!(prob >= 0.0 && prob <= 1.0))
        throw std::invalid_argument("sample_instance: p must be in [0,1]");
    const int k = p.arity();
    std::uint64_t universe = universe_size(n, k);
    InstanceMeta meta;
    meta.model = InstanceMeta::Model::binomial;
    meta.p = prob;
    meta.seed = seed;
    meta.expected_m = static_cast<double>(universe) * prob;
    Instance inst(p, n, meta);
    CounterRng rng(seed);
    std::vector<std::int32_t> scope(k);
    std::vector<std::int8_t> neg(k);
    for_each_included(universe, prob, rng, [&](std::uint64_t u) {
        decode_universe_index(u, n, k, scope.data(), neg.data());
        inst.add_constraint(scope, neg);
    });
    return inst;
}

Instance sample_fixed_m(const Predicate& p, int n, std::uint64_t m, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_fixed_m: n >= 1 required");
    const int k = p.arity();
    std::uint64_t universe = universe_size(n, k);
    if (m > universe) throw std::invalid_argument("sample_fixed_m: m exceeds universe");
    InstanceMeta meta;
    meta.model = InstanceMeta::Model::fixed;
    meta.m = m;
    meta.seed = seed;
    meta.expected_m = static_cast<double>(m);
    Instance inst(p, n, meta);
    CounterRng rng(seed);
    // Floyd's subset sampling, then sorted for a canonical order.
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(m * 2);
    for (std::uint64_t i = universe - m; i < universe; ++i) {
        std::uint64_t t = rng.next_below(i + 1);
        if (!chosen.insert(t).second) chosen.insert(i);
    }
    std::vector<std::uint64_t> sorted(chosen.begin(), chosen.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::int32_t> scope(k);
    std::vector<std::int8_t> neg(k);
    for (std::uint64_t u : sorted) {
        decode_universe_index(u, n, k, scope.data(), neg.data());
        inst.add_constraint(scope, neg);
    }
    return inst;
}

FixedMAdapterResult fixed_m_adapter(const Instance& fixed_instance, double p_min,
                                    std::uint64_t seed) {
    const std::uint64_t mu = fixed_instance.size();
    if (mu < 2) throw std::invalid_argument("fixed_m_adapter: need at least 2 constraints");
    const std::uint64_t universe =
        universe_size(fixed_instance.n(), fixed_instance.k());
    const double d = std::sqrt(std::log(static_cast<double>(mu)) / static_cast<double>(mu));
    const double p = static_cast<double>(mu) * (1.0 - d) / static_cast<double>(universe);
    if (p > 1.0) throw std::invalid_argument("fixed_m_adapter: mu exceeds universe capacity");
    if (p < p_min)
        throw std::invalid_argument("fixed_m_adapter: mu too small for requested p_min");

    FixedMAdapterResult res;
    res.correction = 2.0 * d;
    res.p = p;

    CounterRng rng(seed);
    std::uint64_t m_draw = 0;
    for_each_included(universe, p, rng, [&](std::uint64_t) { ++m_draw; });
    const double lower = static_cast<double>(mu) * (1.0 - 2.0 * d);
    if (m_draw > mu || static_cast<double>(m_draw) < lower) {
        res.failure = "binomial draw left the band [mu(1-2d), mu]";
        return res;
    }

    Instance trimmed = fixed_instance;
    std::uint64_t discard = mu - m_draw;
    if (discard > 0) {
        std::unordered_set<std::uint64_t> chosen;
        for (std::uint64_t i = mu - discard; i < mu; ++i) {
            std::uint64_t t = rng.next_below(i + 1);
            if (!chosen.insert(t).second) chosen.insert(i);
        }
        std::vector<std::size_t> positions(chosen.begin(), chosen.end());
        std::sort(positions.begin(), positions.end());
        trimmed.remove_constraints(positions);
    }
    trimmed.meta().model = InstanceMeta::Model::binomial;
    trimmed.meta().p = p;
    trimmed.meta().expected_m = static_cast<double>(universe) * p;
    res.instance = std::move(trimmed);
    return res;
}

Rat value(const Instance& inst, std::span<const int> x) {
    if (inst.size() == 0) throw std::domain_error("value: empty instance");
    if (static_cast<int>(x.size()) != inst.n())
        throw std::invalid_argument("value: assignment size mismatch");
    std::uint64_t sat = 0;
    for (std::size_t c = 0; c < inst.size(); ++c)
        if (inst.predicate().at(inst.constraint_input(c, x))) ++sat;
    return Rat(sat, inst.size());
}

Rat brute_force_opt(const Instance& inst) {
    if (inst.size() == 0) throw std::domain_error("brute_force_opt: empty instance");
    const int n = inst.n();
    if (n > 24) throw std::invalid_argument("brute_force_opt: n <= 24 required");
    const int k = inst.k();
    FourierExpansion f = fourier_expansion(inst.predicate());

    // m 2^k Val(x) = sum_j sum_S nhat_S c_j^S x^{mask(j,S)} accumulated into
    // one bucket per variable mask, then a single Walsh-Hadamard transform
    // evaluates all 2^n assignments at once.
    std::vector<std::int64_t> buckets(std::size_t(1) << n, 0);
    for (std::size_t c = 0; c < inst.size(); ++c) {
        for (std::uint32_t s = 0; s < (1u << k); ++s) {
            std::int64_t coeff = f.numerator(s);
            if (coeff == 0) continue;
            int sign = 1;
            std::uint32_t xmask = 0;
            for (int j = 0; j < k; ++j) {
                if (!(s >> j & 1)) continue;
                if (inst.neg(c, j) == -1) sign = -sign;
                xmask ^= 1u << (inst.scope(c, j) - 1);
            }
            buckets[xmask] += sign * coeff;
        }
    }
    walsh_hadamard(buckets);
    std::int64_t best = buckets[0];
    for (std::size_t i = 1; i < buckets.size(); ++i) best = std::max(best, buckets[i]);
    return Rat(best, BigInt(inst.size()) << k);
}

InducedDistribution induced_distribution(const Instance& inst, std::span<const int> x) {
    if (inst.size() == 0) throw std::domain_error("induced_distribution: empty instance");
    InducedDistribution d;
    d.k = inst.k();
    d.m = inst.size();
    d.counts.assign(std::size_t(1) << d.k, 0);
    for (std::size_t c = 0; c < inst.size(); ++c) ++d.counts[inst.constraint_input(c, x)];
    return d;
}

Rat InducedDistribution::total_variation_to_uniform() const {
    // (1/2) sum_alpha |counts/m - 2^-k|
    BigInt denom = BigInt(m) << k;
    BigInt acc = 0;
    for (std::uint64_t c : counts) {
        BigInt diff = BigInt(c) << k;
        diff -= BigInt(m);
        acc += abs(diff);
    }
    return Rat(acc, 2 * denom);
}

Rat induced_fourier(const Instance& inst, std::span<const int> x, std::uint32_t mask) {
    if (inst.size() == 0) throw std::domain_error("induced_fourier: empty instance");
    const int k = inst.k();
    if (mask >= (1u << k)) throw std::invalid_argument("induced_fourier: bad subset mask");
    std::int64_t acc = 0;
    for (std::size_t c = 0; c < inst.size(); ++c) {
        int prod = 1;
        for (int j = 0; j < k; ++j)
            if (mask >> j & 1) prod *= inst.neg(c, j) * x[inst.scope(c, j) - 1];
        acc += prod;
    }
    return Rat(acc, inst.size());
}

// ---- serialization ----

std::string Instance::to_json() const {
    json constraints = json::array();
    for (std::size_t c = 0; c < size(); ++c) {
        json item;
        item["scope"] = std::vector<std::int32_t>(scopes_.begin() + c * k(),
                                                  scopes_.begin() + (c + 1) * k());
        item["neg"] = std::vector<int>(negs_.begin() + c * k(), negs_.begin() + (c + 1) * k());
        constraints.push_back(std::move(item));
    }
    json meta;
    meta["model"] = meta_.model == InstanceMeta::Model::binomial ? "binomial" : "fixed";
    if (meta_.model == InstanceMeta::Model::binomial)
        meta["p"] = meta_.p;
    else
        meta["m"] = meta_.m;
    meta["seed"] = meta_.seed;
    meta["expected_m"] = meta_.expected_m;
    json j{{"predicate", json::parse(predicate_to_json(predicate_))},
           {"n", n_},
           {"constraints", std::move(constraints)},
           {"meta", std::move(meta)}};
    return j.dump();
}

Instance Instance::from_json(const std::string& text) {
    json j = json::parse(text);
    Predicate pred = predicate_from_json(j.at("predicate").dump());
    InstanceMeta meta;
    const json& jm = j.at("meta");
    meta.model = jm.at("model").get<std::string>() == "fixed" ? InstanceMeta::Model::fixed
                                                              : InstanceMeta::Model::binomial;
    if (jm.contains("p")) meta.p = jm["p"].get<double>();
    if (jm.contains("m")) meta.m = jm["m"].get<std::uint64_t>();
    meta.seed = jm.value("seed", std::uint64_t(0));
    meta.expected_m = jm.value("expected_m", 0.0);
    Instance inst(std::move(pred), j.at("n").get<int>(), meta);
    for (const auto& item : j.at("constraints")) {
        auto scope = item.at("scope").get<std::vector<std::int32_t>>();
        auto negs = item.at("neg").get<std::vector<int>>();
        std::vector<std::int8_t> neg(negs.begin(), negs.end());
        inst.add_constraint(scope, neg);
    }
    return inst;
}

Instance instance_from_dimacs(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int n = 0;
    std::vector<std::vector<int>> clauses;
    std::vector<int> current;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == 'c') continue;
        std::istringstream ls(line);
        if (line[0] == 'p') {
            std::string tag, fmt;
            std::uint64_t m = 0;
            ls >> tag >> fmt >> n >> m;
            if (fmt != "cnf") throw std::invalid_argument("dimacs: expected 'p cnf'");
            continue;
        }
        int lit;
        while (ls >> lit) {
            if (lit == 0) {
                if (!current.empty()) clauses.push_back(std::exchange(current, {}));
            } else {
                current.push_back(lit);
            }
        }
    }
    if (!current.empty()) clauses.push_back(current);
    if (clauses.empty()) throw std::invalid_argument("dimacs: no clauses");
    const int k = static_cast<int>(clauses.front().size());
    for (const auto& cl : clauses)
        if (static_cast<int>(cl.size()) != k)
            throw std::invalid_argument("dimacs: clause width must be uniform");
    InstanceMeta meta;
    meta.model = InstanceMeta::Model::fixed;
    meta.m = clauses.size();
    Instance inst(make_or(k), n, meta);
    std::vector<std::int32_t> scope(k);
    std::vector<std::int8_t> neg(k);
    for (const auto& cl : clauses) {
        for (int j = 0; j < k; ++j) {
            scope[j] = std::abs(cl[j]);
            neg[j] = cl[j] > 0 ? 1 : -1;
        }
        inst.add_constraint(scope, neg);
    }
    return inst;
}

std::string instance_to_dimacs(const Instance& inst) {
    std::ostringstream out;
    out << "p cnf " << inst.n() << ' ' << inst.size() << '\n';
    for (std::size_t c = 0; c < inst.size(); ++c) {
        for (int j = 0; j < inst.k(); ++j)
            out << (inst.neg(c, j) == 1 ? inst.scope(c, j) : -inst.scope(c, j)) << ' ';
        out << "0\n";
    }
    return out.str();
}

}  // namespace cspref
