#include "cspref/refute.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <thread>
#include <unordered_map>

#include "json.hpp"

namespace cspref {

using nlohmann::json;

namespace {

unsigned worker_count() {
    if (const char* env = std::getenv("CSPREF_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    return 1;
}

// v_U = sum over constraints with scope projection U of c^S, U in [n]^|S|.
std::vector<std::pair<std::uint64_t, double>> projection_sums(const Instance& inst,
                                                              std::uint32_t mask) {
    const int k = inst.k();
    std::vector<int> positions;
    for (int j = 0; j < k; ++j)
        if (mask >> j & 1) positions.push_back(j);
    std::unordered_map<std::uint64_t, std::int64_t> acc;
    acc.reserve(inst.size() * 2);
    for (std::size_t c = 0; c < inst.size(); ++c) {
        std::uint64_t u = 0;
        int sign = 1;
        for (int j : positions) {
            u = u * inst.n() + static_cast<std::uint64_t>(inst.scope(c, j) - 1);
            sign *= inst.neg(c, j);
        }
        acc[u] += sign;
    }
    std::vector<std::pair<std::uint64_t, double>> v;
    v.reserve(acc.size());
    for (const auto& [u, val] : acc)
        if (val != 0) v.emplace_back(u, static_cast<double>(val));
    std::sort(v.begin(), v.end());
    return v;
}

std::map<std::string, double> norm_components(const char* prefix,
                                              const SpectralCertificate& cert) {
    std::map<std::string, double> c;
    c[std::string(prefix) + ".norm"] = cert.norm;
    c[std::string(prefix) + ".margin"] = cert.margin;
    c[std::string(prefix) + ".dim"] = static_cast<double>(cert.dim);
    if (cert.kind == SpectralCertificate::Kind::odd)
        c[std::string(prefix) + ".sum_sq"] = cert.sum_sq;
    return c;
}

}  // namespace

double certify_fourier_bound(const Instance& inst, std::uint32_t mask,
                             const CertifyOptions& opts) {
    if (inst.size() == 0) throw std::domain_error("certify_fourier_bound: empty instance");
    const int s = std::popcount(mask);
    if (mask == 0 || mask >= (1u << inst.k()))
        throw std::invalid_argument("certify_fourier_bound: bad subset mask");
    auto v = projection_sums(inst, mask);
    SumFormCertificate cert = certify_sum_form(v, s, inst.n(), opts);
    return cert.bound / static_cast<double>(inst.size());
}

FourierBoundTable fourier_bound_table(const Instance& inst, int t, const CertifyOptions& opts) {
    const int k = inst.k();
    if (t < 1 || t > k) throw std::invalid_argument("fourier_bound_table: t out of range");
    std::vector<std::uint32_t> masks;
    for (std::uint32_t s = 1; s < (1u << k); ++s)
        if (std::popcount(s) <= t) masks.push_back(s);

    FourierBoundTable table;
    table.instance_digest = inst.digest();
    table.k = k;
    table.expected_m = inst.meta().expected_m;

    std::vector<double> results(masks.size());
    std::vector<std::string> failures(masks.size());
    unsigned workers = std::min<unsigned>(worker_count(), masks.size());
    auto run = [&](unsigned w) {
        for (std::size_t i = w; i < masks.size(); i += workers) {
            try {
                results[i] = certify_fourier_bound(inst, masks[i], opts);
            } catch (const CertifyError& e) {
                failures[i] = e.what();
            }
        }
    };
    if (workers <= 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
        for (auto& th : pool) th.join();
    }
    for (std::size_t i = 0; i < masks.size(); ++i) {
        if (!failures[i].empty()) throw CertifyError(failures[i]);
        table.bounds[masks[i]] = results[i];
    }
    return table;
}

double certify_quasirandom(const Instance& inst, const CertifyOptions& opts) {
    FourierBoundTable table = fourier_bound_table(inst, inst.k(), opts);
    double acc = 0;
    for (const auto& [mask, b] : table.bounds) acc += b * b;
    return 0.5 * std::sqrt(acc);
}

double certify_t_quasirandom(const Instance& inst, int t, const CertifyOptions& opts) {
    if (t < 2 || t > inst.k())
        throw std::invalid_argument("certify_t_quasirandom: t must be in [2,k]");
    FourierBoundTable table = fourier_bound_table(inst, t, opts);
    double worst = 0;
    for (const auto& [mask, b] : table.bounds) worst = std::max(worst, b);
    return worst;
}

RefutationOutcome strong_refute(const Instance& inst, const CertifyOptions& opts) {
    RefutationOutcome out;
    out.kind = "strong";
    if (inst.size() == 0) throw std::domain_error("strong_refute: empty instance");
    try {
        out.fourier_bounds = fourier_bound_table(inst, inst.k(), opts);
    } catch (const CertifyError& e) {
        out.failure = e.what();
        return out;
    }
    FourierExpansion f = fourier_expansion(inst.predicate());
    double mean = to_double(inst.predicate().mean());
    double acc = 0;
    for (const auto& [mask, b] : out.fourier_bounds.bounds) {
        double phat = std::abs(to_double(f.coefficient(mask)));
        acc += phat * b;
    }
    out.verdict = RefutationOutcome::Verdict::bound;
    out.bound = mean + acc;
    out.components["mean"] = mean;
    out.components["fourier_term"] = acc;
    return out;
}

RefutationOutcome xor_strong_refute(const Instance& inst, const CertifyOptions& opts) {
    const int k = inst.k();
    if (!(inst.predicate() == make_xor(k)))
        throw std::invalid_argument("xor_strong_refute: predicate is not k-XOR");
    if (inst.size() == 0) throw std::domain_error("xor_strong_refute: empty instance");
    RefutationOutcome out;
    out.kind = "xor";

    const double unit = std::ldexp(1.0, -k);  // 2^-k per constraint
    std::unordered_map<std::uint64_t, double> w;
    w.reserve(inst.size() * 2);
    for (std::size_t c = 0; c < inst.size(); ++c) {
        std::uint64_t t = 0;
        int sign = 1;
        for (int j = 0; j < k; ++j) {
            t = t * inst.n() + static_cast<std::uint64_t>(inst.scope(c, j) - 1);
            sign *= inst.neg(c, j);
        }
        w[t] -= sign * unit;
    }
    std::vector<std::pair<std::uint64_t, double>> entries;
    entries.reserve(w.size());
    double scale = 1.0;  // multiset instances can push |w(T)| past 1
    for (const auto& [t, val] : w)
        if (val != 0) {
            entries.emplace_back(t, val);
            scale = std::max(scale, std::abs(val));
        }
    if (scale > 1.0)
        for (auto& [t, val] : entries) val /= scale;
    std::sort(entries.begin(), entries.end());

    try {
        SpectralCertificate cert =
            certify_form(CoefficientTensor::from_entries(k, inst.n(), std::move(entries)), opts);
        out.verdict = RefutationOutcome::Verdict::bound;
        double factor = std::ldexp(1.0, k - 1) / static_cast<double>(inst.size());
        out.bound = 0.5 + factor * scale * cert.bound;
        out.components = norm_components("form", cert);
        out.components["form.bound"] = scale * cert.bound;
    } catch (const CertifyError& e) {
        out.failure = e.what();
    }
    return out;
}

RefutationOutcome delta_refute(const Instance& inst, const MultilinearPolynomial& q,
                               const Rat& delta, bool check_separator,
                               const CertifyOptions& opts) {
    RefutationOutcome out;
    out.kind = "delta";
    out.delta = delta;
    if (inst.size() == 0) throw std::domain_error("delta_refute: empty instance");
    if (check_separator && !verify_separating(inst.predicate(), q, delta))
        throw std::invalid_argument("delta_refute: polynomial does not separate the predicate");
    const int t = q.degree();
    out.fourier_bounds.instance_digest = inst.digest();
    out.fourier_bounds.k = inst.k();
    try {
        if (t >= 1) out.fourier_bounds = fourier_bound_table(inst, t, opts);
    } catch (const CertifyError& e) {
        out.failure = e.what();
        return out;
    }
    double acc = 0;
    for (const auto& [mask, coeff] : q.coefficients()) {
        if (mask == 0) continue;
        auto it = out.fourier_bounds.bounds.find(mask);
        if (it != out.fourier_bounds.bounds.end())
            acc += std::abs(to_double(coeff)) * it->second;
    }
    out.verdict = RefutationOutcome::Verdict::bound;
    out.bound = 1.0 - to_double(delta) + acc;
    out.components["one_minus_delta"] = 1.0 - to_double(delta);
    out.components["fourier_term"] = acc;
    return out;
}

RefutationOutcome refute(const Instance& inst, std::optional<int> t, const CertifyOptions& opts) {
    const int k = inst.k();
    if (inst.predicate() == make_xor(k)) return xor_strong_refute(inst, opts);

    std::optional<RefutationOutcome> best;
    auto consider = [&](RefutationOutcome&& cand) {
        if (!cand.refuted()) {
            if (!best) best = std::move(cand);
            return;
        }
        if (!best || !best->refuted() || cand.bound < best->bound) best = std::move(cand);
    };

    std::optional<LPResult> lp;
    if (t) {
        lp = twise_distance(inst.predicate(), *t);
    } else if (k <= 16) {
        for (int probe = 2; probe <= std::min(k, 4); ++probe) {
            LPResult r = twise_distance(inst.predicate(), probe);
            if (!r.supporting) {
                lp = std::move(r);
                break;
            }
        }
    }
    if (lp && !lp->supporting)
        consider(delta_refute(inst, lp->dual_polynomial, lp->delta, false, opts));
    consider(strong_refute(inst, opts));
    return std::move(*best);
}

std::string RefutationOutcome::to_json() const {
    json fb = json::object();
    char buf[16];
    for (const auto& [mask, b] : fourier_bounds.bounds) {
        std::snprintf(buf, sizeof buf, "%x", mask);
        fb[buf] = b;
    }
    json j{{"verdict", refuted() ? "bound" : "fail"},
           {"kind", kind},
           {"fourier_bounds", std::move(fb)},
           {"components", components}};
    if (refuted())
        j["bound"] = bound;
    else
        j["failure"] = failure;
    if (delta) j["delta"] = rat_string(*delta);
    char dig[32];
    std::snprintf(dig, sizeof dig, "%016llx",
                  static_cast<unsigned long long>(fourier_bounds.instance_digest));
    j["instance_digest"] = dig;
    return j.dump();
}

}  // namespace cspref
