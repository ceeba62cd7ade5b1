#include "cspref/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <dlfcn.h>
#include <mutex>

#include "cspref/rng.hpp"
#include "json.hpp"

namespace cspref {

using nlohmann::json;

namespace {

using DsymvFn = void (*)(const char*, const int*, const double*, const double*, const int*,
                         const double*, const int*, const double*, double*, const int*);
using DpotrfFn = void (*)(const char*, const int*, double*, const int*, int*);
using DgemmFn = void (*)(const char*, const char*, const int*, const int*, const int*,
                         const double*, const double*, const int*, const double*, const int*,
                         const double*, double*, const int*);

// OpenBLAS reads OPENBLAS_CORETYPE in its ELF constructor, and its runtime
// dispatch falls back to broken "generic" kernels when CPUID is masked (seen
// under virtualization).  Loading the library lazily lets us pin a kernel
// family first; a correctness probe then guards every certificate-producing
// call.
struct BlasRuntime {
    DsymvFn dsymv = nullptr;
    DpotrfFn dpotrf = nullptr;
    DgemmFn dgemm = nullptr;
    bool checked_ok = false;
    std::string error;
};

const BlasRuntime& blas() {
    static const BlasRuntime rt = [] {
        BlasRuntime r;
        if (__builtin_cpu_supports("avx2"))
            setenv("OPENBLAS_CORETYPE", "Haswell", 0);
        else if (__builtin_cpu_supports("sse3"))
            setenv("OPENBLAS_CORETYPE", "Prescott", 0);
        setenv("OPENBLAS_NUM_THREADS", "1", 0);
        void* handle = dlopen("libopenblas.so.0", RTLD_NOW | RTLD_LOCAL);
        if (!handle) handle = dlopen("libopenblas.so", RTLD_NOW | RTLD_LOCAL);
        if (!handle) handle = dlopen("liblapack.so.3", RTLD_NOW | RTLD_GLOBAL);
        if (!handle) {
            r.error = "no BLAS/LAPACK library could be loaded";
            return r;
        }
        r.dsymv = reinterpret_cast<DsymvFn>(dlsym(handle, "dsymv_"));
        r.dpotrf = reinterpret_cast<DpotrfFn>(dlsym(handle, "dpotrf_"));
        r.dgemm = reinterpret_cast<DgemmFn>(dlsym(handle, "dgemm_"));
        if (!r.dsymv || !r.dpotrf || !r.dgemm) {
            r.error = "BLAS symbols missing from the loaded library";
            return r;
        }

        // probe dgemm against a scalar reference
        const int n = 48;
        std::vector<double> a(n * n), b(n * n), c(n * n, 0.0), ref(n * n, 0.0);
        CounterRng rng(0x5e1fc8ec);
        for (auto& v : a) v = rng.next_double() * 2 - 1;
        for (auto& v : b) v = rng.next_double() * 2 - 1;
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l) {
                double s = b[j * n + l];
                for (int i = 0; i < n; ++i) ref[j * n + i] += a[l * n + i] * s;
            }
        double one = 1.0, zero = 0.0;
        r.dgemm("N", "N", &n, &n, &n, &one, a.data(), &n, b.data(), &n, &zero, c.data(), &n);
        double err = 0;
        for (int i = 0; i < n * n; ++i) err = std::max(err, std::abs(c[i] - ref[i]));

        // probe dpotrf on a known positive definite matrix
        std::vector<double> pd(n * n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                pd[i * n + j] = (i == j) ? 2.0 : 1.0 / (1 + std::abs(i - j) + n);
        int info = -1;
        r.dpotrf("L", &n, pd.data(), &n, &info);

        r.checked_ok = err < 1e-10 && info == 0;
        if (!r.checked_ok)
            r.error =
                "BLAS kernels failed the correctness self-check; set OPENBLAS_CORETYPE to a "
                "kernel family matching the host CPU";
        return r;
    }();
    return rt;
}

void blas_self_check() {
    const BlasRuntime& rt = blas();
    if (!rt.checked_ok) throw std::runtime_error(rt.error);
}

double frobenius(const DenseSym& m) {
    double acc = 0;
    for (double v : m.a) acc += v * v;
    return std::sqrt(acc);
}

// Largest eigenvalue of a symmetric tridiagonal matrix by Sturm bisection.
double tridiag_max_eig(const std::vector<double>& alpha, const std::vector<double>& beta) {
    const int n = static_cast<int>(alpha.size());
    if (n == 1) return alpha[0];
    double radius = 0;
    for (int i = 0; i < n; ++i) {
        double r = std::abs(alpha[i]);
        if (i > 0) r += std::abs(beta[i - 1]);
        if (i + 1 < n) r += std::abs(beta[i]);
        radius = std::max(radius, r);
    }
    auto count_below = [&](double x) {
        // Sturm sequence: number of eigenvalues < x
        int count = 0;
        double d = alpha[0] - x;
        if (d < 0) ++count;
        for (int i = 1; i < n; ++i) {
            double bb = beta[i - 1] * beta[i - 1];
            d = alpha[i] - x - bb / (d == 0 ? 1e-300 : d);
            if (d < 0) ++count;
        }
        return count;
    };
    double lo = -radius, hi = radius + 1e-300;
    for (int iter = 0; iter < 200 && hi - lo > 1e-14 * (1 + std::abs(hi)); ++iter) {
        double mid = 0.5 * (lo + hi);
        if (count_below(mid) < n)
            lo = mid;  // some eigenvalue >= mid
        else
            hi = mid;
    }
    return hi;
}

// Lanczos with full reorthogonalization; returns a lower estimate of
// lambda_max.
double lanczos_estimate(const DenseSym& m, int max_iters) {
    const int n = static_cast<int>(m.dim);
    if (n == 0) return 0;
    if (n == 1) return m.a[0];
    max_iters = std::min(max_iters, n);

    CounterRng rng(0x1a2c3e5u);
    std::vector<std::vector<double>> basis;
    std::vector<double> v(n), w(n), alpha, beta;
    for (auto& x : v) x = rng.next_double() * 2 - 1;
    double nrm = 0;
    for (double x : v) nrm += x * x;
    nrm = std::sqrt(nrm);
    for (auto& x : v) x /= nrm;

    const double one = 1.0, zero = 0.0;
    const int inc = 1;
    double best = -1e300, prev = -1e300;
    int stall = 0;
    for (int it = 0; it < max_iters; ++it) {
        basis.push_back(v);
        blas().dsymv("L", &n, &one, m.a.data(), &n, v.data(), &inc, &zero, w.data(), &inc);
        double a = 0;
        for (int i = 0; i < n; ++i) a += v[i] * w[i];
        alpha.push_back(a);
        // full reorthogonalization
        for (const auto& u : basis) {
            double dot = 0;
            for (int i = 0; i < n; ++i) dot += u[i] * w[i];
            for (int i = 0; i < n; ++i) w[i] -= dot * u[i];
        }
        double b = 0;
        for (double x : w) b += x * x;
        b = std::sqrt(b);

        best = tridiag_max_eig(alpha, beta);
        if (std::abs(best - prev) <= 1e-13 * (1 + std::abs(best))) {
            if (++stall >= 3) break;
        } else {
            stall = 0;
        }
        prev = best;
        if (b < 1e-13) break;  // invariant subspace reached
        beta.push_back(b);
        for (int i = 0; i < n; ++i) v[i] = w[i] / b;
    }
    return best;
}

bool cholesky_psd(const DenseSym& m, double mu, std::vector<double>& scratch) {
    const int n = static_cast<int>(m.dim);
    scratch.assign(m.a.size(), 0.0);
    for (std::int64_t i = 0; i < m.dim; ++i)
        for (std::int64_t j = 0; j < m.dim; ++j)
            scratch[i * m.dim + j] = (i == j ? mu : 0.0) - m.at(i, j);
    int info = -1;
    blas().dpotrf("L", &n, scratch.data(), &n, &info);
    return info == 0;
}

std::uint64_t ipow(std::uint64_t base, int exp) {
    std::uint64_t v = 1;
    while (exp-- > 0) {
        if (base != 0 && v > (std::uint64_t(1) << 62) / base)
            throw CertifyError("flattening dimension overflows");
        v *= base;
    }
    return v;
}

}  // namespace

CoefficientTensor CoefficientTensor::from_entries(
    int k, int n, std::vector<std::pair<std::uint64_t, double>> e) {
    if (k < 1 || n < 1) throw std::invalid_argument("tensor: k, n >= 1 required");
    std::uint64_t card = 1;
    for (int i = 0; i < k; ++i) card *= std::uint64_t(n);
    std::sort(e.begin(), e.end());
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i].first >= card) throw std::invalid_argument("tensor: tuple index out of range");
        if (i > 0 && e[i].first == e[i - 1].first)
            throw std::invalid_argument("tensor: duplicate tuple");
        if (!(std::abs(e[i].second) <= 1.0))
            throw std::invalid_argument("tensor: |w(T)| <= 1 required");
    }
    CoefficientTensor t;
    t.k = k;
    t.n = n;
    t.entries = std::move(e);
    return t;
}

NormCertificate certified_norm_upper(DenseSym& m, const CertifyOptions& opts) {
    blas_self_check();
    if (m.dim == 0) throw std::invalid_argument("certified_norm_upper: empty matrix");

    NormCertificate cert;
    cert.dim = m.dim;
    cert.estimate = lanczos_estimate(m, opts.lanczos_max_iters);
    const double frob = frobenius(m);

    std::vector<double> scratch;
    for (double rel = opts.margin_rel_start;; rel *= 2) {
        if (rel > opts.margin_rel_cap)
            throw CertifyError("norm certificate: factorization failed at every margin");
        ++cert.attempts;
        double mu = cert.estimate + rel * std::abs(cert.estimate) + 1e-9 * frob + 1e-300;
        if (cholesky_psd(m, mu, scratch)) {
            cert.mu = mu;
            cert.margin_rel = rel;
            return cert;
        }
    }
}

std::string SpectralCertificate::to_json() const {
    json j{{"kind", kind == Kind::even ? "even" : "odd"},
           {"bound", bound},
           {"norm", norm},
           {"margin", margin},
           {"dim", dim}};
    if (kind == Kind::odd) j["sum_sq"] = sum_sq;
    return j.dump();
}

namespace {

SpectralCertificate certify_even(const CoefficientTensor& w, const CertifyOptions& opts) {
    const int half = w.k / 2;
    const std::uint64_t side = ipow(w.n, half);
    if (side > opts.max_side)
        throw CertifyError("flattening side " + std::to_string(side) + " exceeds cap");
    const std::uint64_t dim = 2 * side;
    if (dim * dim * 8 > opts.max_bytes) throw CertifyError("flattening exceeds memory cap");

    DenseSym b;
    b.dim = static_cast<std::int64_t>(dim);
    b.a.assign(dim * dim, 0.0);
    for (const auto& [t, val] : w.entries) {
        std::uint64_t row = t / side, col = t % side;
        b.at(row, side + col) = val;
        b.at(side + col, row) = val;
    }
    NormCertificate nc = certified_norm_upper(b, opts);

    SpectralCertificate cert;
    cert.kind = SpectralCertificate::Kind::even;
    cert.norm = std::max(nc.mu, 0.0);
    cert.dim = nc.dim;
    cert.margin = nc.margin_rel;
    cert.attempts = nc.attempts;
    cert.bound = cert.norm * std::pow(static_cast<double>(w.n), w.k / 2.0);
    return cert;
}

SpectralCertificate certify_odd(const CoefficientTensor& w, const CertifyOptions& opts) {
    const int r = (w.k - 1) / 2;
    const std::uint64_t half = ipow(w.n, r);
    const std::uint64_t full = half * half;
    if (full > opts.max_side)
        throw CertifyError("flattening side " + std::to_string(full) + " exceeds cap");
    const std::uint64_t dim = half * (half + 1) / 2;  // block-swap-symmetric subspace
    if (dim * dim * 8 > opts.max_bytes) throw CertifyError("flattening exceeds memory cap");

    // slice entries by the last coordinate
    struct Entry {
        std::uint32_t a, b;
        double w;
    };
    std::vector<std::vector<Entry>> slices(w.n);
    double sum_sq = 0;
    for (const auto& [t, val] : w.entries) {
        std::uint64_t ell = t % w.n;
        std::uint64_t rest = t / w.n;
        slices[ell].push_back(Entry{static_cast<std::uint32_t>(rest / half),
                                    static_cast<std::uint32_t>(rest % half), val});
        sum_sq += val * val;
    }

    // sym index: (a,b) with a <= b -> a*half - a(a-1)/2 + (b-a) row-major upper
    auto sym = [&](std::uint64_t a, std::uint64_t b) {
        if (a > b) std::swap(a, b);
        return a * half - a * (a - 1) / 2 + (b - a);
    };
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    DenseSym h;
    h.dim = static_cast<std::int64_t>(dim);
    h.a.assign(dim * dim, 0.0);
    for (const auto& slice : slices) {
        for (std::size_t i = 0; i < slice.size(); ++i) {
            const Entry& u = slice[i];
            for (std::size_t j = 0; j < slice.size(); ++j) {
                if (i == j) continue;  // the (T,U) = (T',U') diagonal is carried by sum_sq
                const Entry& v = slice[j];
                double coef = u.w * v.w;
                if (u.a != v.a) coef *= inv_sqrt2;
                if (u.b != v.b) coef *= inv_sqrt2;
                h.at(static_cast<std::int64_t>(sym(u.a, v.a)),
                     static_cast<std::int64_t>(sym(u.b, v.b))) += coef;
            }
        }
    }
    // symmetrize the accumulated quadratic form
    for (std::int64_t i = 0; i < h.dim; ++i)
        for (std::int64_t j = i + 1; j < h.dim; ++j) {
            double v = 0.5 * (h.at(i, j) + h.at(j, i));
            h.at(i, j) = v;
            h.at(j, i) = v;
        }

    NormCertificate nc = certified_norm_upper(h, opts);

    SpectralCertificate cert;
    cert.kind = SpectralCertificate::Kind::odd;
    cert.norm = std::max(nc.mu, 0.0);
    cert.sum_sq = sum_sq;
    cert.dim = nc.dim;
    cert.margin = nc.margin_rel;
    cert.attempts = nc.attempts;
    double first = cert.norm * std::pow(static_cast<double>(w.n), w.k - 1);
    cert.bound = std::sqrt(static_cast<double>(w.n)) * std::sqrt(first + sum_sq);
    return cert;
}

}  // namespace

SpectralCertificate certify_form(const CoefficientTensor& w, const CertifyOptions& opts) {
    if (w.k < 2) throw std::invalid_argument("certify_form: k >= 2 required");
    if (w.entries.empty()) {
        SpectralCertificate cert;
        cert.kind = (w.k % 2 == 0) ? SpectralCertificate::Kind::even
                                   : SpectralCertificate::Kind::odd;
        return cert;
    }
    return (w.k % 2 == 0) ? certify_even(w, opts) : certify_odd(w, opts);
}

SumFormCertificate certify_sum_form(const std::vector<std::pair<std::uint64_t, double>>& v,
                                    int s, int n, const CertifyOptions& opts) {
    if (s < 1) throw std::invalid_argument("certify_sum_form: s >= 1 required");
    SumFormCertificate out;
    if (v.empty()) return out;
    if (s == 1) {
        double acc = 0;
        for (const auto& [i, val] : v) acc += std::abs(val);
        out.bound = acc;
        return out;
    }
    double scale = 0;
    for (const auto& [i, val] : v) scale = std::max(scale, std::abs(val));
    if (scale == 0) return out;
    std::vector<std::pair<std::uint64_t, double>> scaled(v);
    for (auto& [i, val] : scaled) val /= scale;
    SpectralCertificate cert = certify_form(CoefficientTensor::from_entries(s, n, std::move(scaled)), opts);
    out.scale = scale;
    out.bound = scale * cert.bound;
    out.spectral = std::move(cert);
    return out;
}

}  // namespace cspref
