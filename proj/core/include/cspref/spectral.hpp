#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cspref {

// Raised when a certificate cannot be produced (dimension guard, persistent
// factorization failure).  Refutation callers map this to a "fail" verdict;
// an unsound bound is never returned.
class CertifyError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Sparse coefficient tensor w : [n]^k -> double with |w(T)| <= 1.  Tuple T is
// encoded in base n, first coordinate most significant.
struct CoefficientTensor {
    int k = 0;
    int n = 0;
    std::vector<std::pair<std::uint64_t, double>> entries;  // unique tuple indices

    static CoefficientTensor from_entries(int k, int n,
                                          std::vector<std::pair<std::uint64_t, double>> e);
};

struct CertifyOptions {
    std::uint64_t max_side = 20000;        // dense matrix side cap
    std::uint64_t max_bytes = 3'000'000'000;  // dense buffer cap (bytes, per buffer)
    int lanczos_max_iters = 256;
    double margin_rel_start = 1e-6;
    double margin_rel_cap = 1e-2;
};

// Certified upper bound on lambda_max of a symmetric matrix: a Lanczos value
// mu0 (always a lower estimate) is inflated by a margin and accepted only once
// (mu I - M) passes a Cholesky factorization.
struct NormCertificate {
    double mu = 0;        // certified upper bound
    double estimate = 0;  // Lanczos estimate (lower bound on lambda_max)
    double margin_rel = 0;
    int attempts = 0;
    std::int64_t dim = 0;
};

// Row-major dense symmetric matrix; both triangles stored.
struct DenseSym {
    std::int64_t dim = 0;
    std::vector<double> a;

    double& at(std::int64_t i, std::int64_t j) { return a[i * dim + j]; }
    double at(std::int64_t i, std::int64_t j) const { return a[i * dim + j]; }
};

// Destroys `m` (the factorization works in place).  Throws CertifyError when
// every margin up to the cap fails.
NormCertificate certified_norm_upper(DenseSym& m, const CertifyOptions& opts = {});

struct SpectralCertificate {
    enum class Kind { even, odd };
    Kind kind = Kind::even;
    double bound = 0;
    double norm = 0;     // certified mu of the flattening (even) or of A (odd)
    double sum_sq = 0;   // odd path only: sum_T w(T)^2
    double margin = 0;
    std::int64_t dim = 0;
    int attempts = 0;

    std::string to_json() const;
};

// Theorem-style certificate for sup over ||x||_inf <= 1 of |sum_T w(T) x^T|.
// Even arity: the form is y^T B y on the flattening; bound = mu(B~) n^{k/2}
// with B~ the 2x2 block symmetrization.  Odd arity: Cauchy-Schwarz over the
// last coordinate; the quadratic form of the paired products is certified on
// the block-swap-symmetric subspace (where x^{(k-1)} lives), and
// bound = sqrt(n) sqrt(mu n^{k-1} + sum_T w(T)^2).
SpectralCertificate certify_form(const CoefficientTensor& w, const CertifyOptions& opts = {});

// Bound for coefficient maps that arise as sums: s = 1 uses the exact L1
// bound, s >= 2 rescales by max|v| and certifies the form.  The returned
// bound is two-sided: |sum_U v_U x^U| <= bound for all ||x||_inf <= 1.
struct SumFormCertificate {
    double bound = 0;
    double scale = 1;  // rescaling applied before certify_form (s >= 2)
    std::optional<SpectralCertificate> spectral;  // absent for the s = 1 route
};
SumFormCertificate certify_sum_form(const std::vector<std::pair<std::uint64_t, double>>& v,
                                    int s, int n, const CertifyOptions& opts = {});

}  // namespace cspref
