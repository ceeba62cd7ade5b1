#include "cspref/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cspref/rng.hpp"
#include "json.hpp"

namespace cspref {

using nlohmann::json;

namespace {

std::uint64_t binomial_u64(std::uint64_t n, int k) {
    if (k < 0 || std::uint64_t(k) > n) return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        // exact at each step: r * (n-k+i) is divisible by i after the multiply
        std::uint64_t num = n - std::uint64_t(k) + std::uint64_t(i);
        if (r > (std::uint64_t(1) << 62) / num) throw std::overflow_error("binomial overflow");
        r = r * num / std::uint64_t(i);
    }
    return r;
}

// colex unranking: the r-th k-subset of [0,n) in colexicographic order
std::vector<int> unrank_subset(std::uint64_t r, int n, int k) {
    std::vector<int> out(k);
    for (int i = k; i >= 1; --i) {
        // largest v with C(v,i) <= r
        int lo = i - 1, hi = n - 1, v = i - 1;
        while (lo <= hi) {
            int mid = (lo + hi) / 2;
            if (binomial_u64(mid, i) <= r) {
                v = mid;
                lo = mid + 1;
            } else {
                hi = mid - 1;
            }
        }
        out[i - 1] = v;
        r -= binomial_u64(v, i);
    }
    return out;
}

template <typename Fn>
void for_each_included_edge(std::uint64_t universe, double p, CounterRng& rng, Fn&& fn) {
    if (p <= 0) return;
    if (p >= 1) {
        for (std::uint64_t u = 0; u < universe; ++u) fn(u);
        return;
    }
    const double log_q = std::log1p(-p);
    std::uint64_t pos = 0;
    for (;;) {
        double u01 = 1.0 - rng.next_double();
        double gap = std::floor(std::log(u01) / log_q) + 1.0;
        if (!(gap <= static_cast<double>(universe - pos))) return;
        std::uint64_t included = pos + static_cast<std::uint64_t>(gap) - 1;
        fn(included);
        pos = included + 1;
        if (pos >= universe) return;
    }
}

}  // namespace

Hypergraph sample_hypergraph(int n, double p, int k, std::uint64_t seed) {
    if (k < 3 || k > 8) throw std::invalid_argument("sample_hypergraph: k must be in [3,8]");
    if (n < k) throw std::invalid_argument("sample_hypergraph: n >= k required");
    if (!(p >= 0 && p <= 1)) throw std::invalid_argument("sample_hypergraph: bad p");
    Hypergraph h;
    h.n = n;
    h.k = k;
    h.p = p;
    h.seed = seed;
    std::uint64_t universe = binomial_u64(n, k);
    CounterRng rng(seed);
    for_each_included_edge(universe, p, rng,
                           [&](std::uint64_t u) { h.edges.push_back(unrank_subset(u, n, k)); });
    return h;
}

IndependenceCertificate certify_independence(const Hypergraph& h, double p,
                                             const CertifyOptions& opts) {
    if (p <= 0) p = h.p;
    if (!(p > 0 && p <= 1))
        throw std::invalid_argument("certify_independence: sampling probability required");
    const int k = h.k;

    // w(T_e) = p - 1{e in E} on the sorted canonical tuple of each possible
    // edge; zero elsewhere.  Present edges carry p-1, absent ones carry p.
    std::vector<std::pair<std::uint64_t, double>> entries;
    std::uint64_t universe = binomial_u64(h.n, k);
    entries.reserve(universe);
    auto tuple_index = [&](const std::vector<int>& e) {
        std::uint64_t t = 0;
        for (int v : e) t = t * h.n + static_cast<std::uint64_t>(v);
        return t;
    };
    std::vector<std::uint64_t> present;
    present.reserve(h.edges.size());
    for (const auto& e : h.edges) {
        if (static_cast<int>(e.size()) != k)
            throw std::invalid_argument("certify_independence: edge arity mismatch");
        present.push_back(tuple_index(e));
    }
    std::sort(present.begin(), present.end());
    std::vector<int> comb(k);
    for (int i = 0; i < k; ++i) comb[i] = i;
    for (;;) {
        std::uint64_t t = tuple_index(comb);
        bool in_e = std::binary_search(present.begin(), present.end(), t);
        double w = p - (in_e ? 1.0 : 0.0);
        if (w != 0) entries.emplace_back(t, w);
        int i = k - 1;
        while (i >= 0 && comb[i] == h.n - k + i) --i;
        if (i < 0) break;
        ++comb[i];
        for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
    }
    std::sort(entries.begin(), entries.end());

    IndependenceCertificate cert;
    cert.p = p;
    cert.form = certify_form(CoefficientTensor::from_entries(k, h.n, std::move(entries)), opts);
    cert.spectral_bound = cert.form.bound;
    std::uint64_t beta = k;  // smallest b with C(b,k) >= 1
    while (beta <= std::uint64_t(h.n) &&
           p * static_cast<double>(binomial_u64(beta, k)) <= cert.spectral_bound)
        ++beta;
    cert.beta = beta;
    return cert;
}

ChromaticVerdict certify_chromatic(const Hypergraph& h, double p, int xi,
                                   const CertifyOptions& opts) {
    if (xi < 2) throw std::invalid_argument("certify_chromatic: xi >= 2 required");
    ChromaticVerdict v;
    v.xi = xi;
    v.independence = certify_independence(h, p, opts);
    std::uint64_t class_size = (std::uint64_t(h.n) + xi - 1) / xi;  // ceil(n/xi)
    v.certified = v.independence.beta <= class_size;
    return v;
}

// ---- serialization ----

std::string Hypergraph::to_json() const {
    json j{{"n", n}, {"k", k}, {"edges", edges}, {"meta", {{"p", p}, {"seed", seed}}}};
    return j.dump();
}

Hypergraph Hypergraph::from_json(const std::string& text) {
    json j = json::parse(text);
    Hypergraph h;
    h.n = j.at("n").get<int>();
    h.k = j.at("k").get<int>();
    h.edges = j.at("edges").get<std::vector<std::vector<int>>>();
    if (j.contains("meta")) {
        h.p = j["meta"].value("p", 0.0);
        h.seed = j["meta"].value("seed", std::uint64_t(0));
    }
    for (auto& e : h.edges) {
        std::sort(e.begin(), e.end());
        if (static_cast<int>(e.size()) != h.k) throw std::invalid_argument("bad edge arity");
    }
    return h;
}

std::string Hypergraph::to_edge_list() const {
    std::ostringstream out;
    for (const auto& e : edges) {
        for (std::size_t i = 0; i < e.size(); ++i) out << e[i] << (i + 1 < e.size() ? ' ' : '\n');
    }
    return out.str();
}

Hypergraph Hypergraph::from_edge_list(const std::string& text, int n, int k) {
    Hypergraph h;
    h.n = n;
    h.k = k;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::vector<int> e;
        int v;
        while (ls >> v) e.push_back(v);
        if (e.empty()) continue;
        if (static_cast<int>(e.size()) != k)
            throw std::invalid_argument("edge list: expected " + std::to_string(k) +
                                        " vertices per line");
        std::sort(e.begin(), e.end());
        for (int u : e)
            if (u < 0 || u >= n) throw std::invalid_argument("edge list: vertex out of range");
        h.edges.push_back(std::move(e));
    }
    return h;
}

std::string IndependenceCertificate::to_json() const {
    json j{{"spectral_bound", spectral_bound},
           {"beta", beta},
           {"p", p},
           {"form", json::parse(form.to_json())}};
    return j.dump();
}

}  // namespace cspref
