#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>

#include "cspref/rng.hpp"
#include "cspref/spectral.hpp"

using namespace cspref;

namespace {

double eigen_lambda_max(const DenseSym& m) {
    Eigen::MatrixXd em(m.dim, m.dim);
    for (std::int64_t i = 0; i < m.dim; ++i)
        for (std::int64_t j = 0; j < m.dim; ++j) em(i, j) = m.at(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(em);
    return solver.eigenvalues().maxCoeff();
}

// sup over the +-1 cube by direct enumeration (complete oracle on vertices)
double vertex_max_abs(const CoefficientTensor& w, int n) {
    double best = 0;
    std::vector<int> x(n);
    for (std::uint32_t a = 0; a < (1u << n); ++a) {
        for (int j = 0; j < n; ++j) x[j] = (a >> j) & 1 ? -1 : 1;
        double acc = 0;
        for (const auto& [t, val] : w.entries) {
            std::uint64_t rest = t;
            double prod = val;
            for (int j = 0; j < w.k; ++j) {
                prod *= x[rest % n];
                rest /= n;
            }
            acc += prod;
        }
        best = std::max(best, std::abs(acc));
    }
    return best;
}

CoefficientTensor random_tensor(int k, int n, double density, std::uint64_t seed) {
    CounterRng rng(seed);
    std::uint64_t card = 1;
    for (int i = 0; i < k; ++i) card *= n;
    std::vector<std::pair<std::uint64_t, double>> entries;
    for (std::uint64_t t = 0; t < card; ++t) {
        if (rng.next_double() < density)
            entries.emplace_back(t, rng.next_u64() & 1 ? 1.0 : -1.0);
    }
    return CoefficientTensor::from_entries(k, n, std::move(entries));
}

}  // namespace

TEST_CASE("certified norm upper bound basics") {
    DenseSym zero;
    zero.dim = 4;
    zero.a.assign(16, 0.0);
    NormCertificate nz = certified_norm_upper(zero);
    CHECK(nz.mu >= 0);
    CHECK(nz.mu < 1e-8);

    DenseSym diag;
    diag.dim = 2;
    diag.a = {3, 0, 0, 1};
    NormCertificate nd = certified_norm_upper(diag);
    CHECK(nd.mu >= 3.0);
    CHECK(nd.mu <= 3.0004);

    // negative definite: mu can be negative but never below lambda_max
    DenseSym neg;
    neg.dim = 2;
    neg.a = {-2, 0, 0, -5};
    NormCertificate nn = certified_norm_upper(neg);
    CHECK(nn.mu >= -2.0);
    CHECK(nn.mu <= -1.9);
}

TEST_CASE("certified norm dominates a dense eigensolve") {
    for (int dim : {50, 200}) {
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            CAPTURE(dim);
            DenseSym m;
            m.dim = dim;
            m.a.assign(std::size_t(dim) * dim, 0.0);
            CounterRng rng(seed);
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j <= i; ++j) {
                    double v = rng.next_u64() & 1 ? 1.0 : -1.0;
                    m.at(i, j) = v;
                    m.at(j, i) = v;
                }
            double lmax = eigen_lambda_max(m);
            NormCertificate nc = certified_norm_upper(m);
            CHECK(nc.mu >= lmax);
            CHECK(nc.mu / lmax <= 1.001);
        }
    }
}

TEST_CASE("certify_form edge cases") {
    CoefficientTensor empty = CoefficientTensor::from_entries(3, 4, {});
    CHECK(certify_form(empty).bound == 0);

    // k=2, n=2, single w((1,2)) = 1: flattening norm 1, bound 2 >= true max 1
    CoefficientTensor single = CoefficientTensor::from_entries(2, 2, {{1, 1.0}});
    SpectralCertificate cert = certify_form(single);
    CHECK(cert.kind == SpectralCertificate::Kind::even);
    CHECK(cert.bound >= 1.0);
    CHECK(cert.bound <= 2.001);

    CHECK_THROWS_AS(CoefficientTensor::from_entries(2, 2, {{0, 1.5}}), std::invalid_argument);
    CHECK_THROWS_AS(CoefficientTensor::from_entries(2, 2, {{0, 1.0}, {0, -1.0}}),
                    std::invalid_argument);

    CertifyOptions tight;
    tight.max_side = 3;
    CHECK_THROWS_AS(certify_form(random_tensor(3, 4, 0.5, 1), tight), CertifyError);
}

TEST_CASE("soundness against vertex enumeration, odd arity") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        int n = 4 + static_cast<int>(seed % 5);
        CoefficientTensor w = random_tensor(3, n, 0.3, 1000 + seed);
        if (w.entries.empty()) continue;
        SpectralCertificate cert = certify_form(w);
        CHECK(cert.kind == SpectralCertificate::Kind::odd);
        CHECK(cert.bound + 1e-9 >= vertex_max_abs(w, n));
    }
}

TEST_CASE("soundness against vertex enumeration, even arity") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        int n = 3 + static_cast<int>(seed % 4);
        for (int k : {2, 4}) {
            CoefficientTensor w = random_tensor(k, n, k == 2 ? 0.5 : 0.1, 2000 + seed);
            if (w.entries.empty()) continue;
            SpectralCertificate cert = certify_form(w);
            CHECK(cert.bound + 1e-9 >= vertex_max_abs(w, n));
        }
    }
}

TEST_CASE("scaling equivariance") {
    CoefficientTensor w = random_tensor(3, 6, 0.4, 99);
    SpectralCertificate base = certify_form(w);
    CoefficientTensor half = w;
    for (auto& [t, v] : half.entries) v *= 0.5;
    SpectralCertificate scaled = certify_form(half);
    CHECK(scaled.bound == doctest::Approx(0.5 * base.bound).epsilon(1e-4));
}

TEST_CASE("odd path decomposition identity") {
    // sum_i W_i^2 = v^T A v + sum_{T,U} (x^T x^U)^2 sum_i w(T,U,i)^2 on the cube
    const int n = 5, k = 3;
    CoefficientTensor w = random_tensor(k, n, 0.35, 4242);
    auto wval = [&](int a, int b, int c) {
        std::uint64_t t = (std::uint64_t(a) * n + b) * n + c;
        for (const auto& [idx, val] : w.entries)
            if (idx == t) return val;
        return 0.0;
    };
    CounterRng rng(11);
    for (int trial = 0; trial < 8; ++trial) {
        std::vector<int> x(n);
        for (auto& v : x) v = rng.next_u64() & 1 ? 1 : -1;

        double sum_wi2 = 0;
        for (int i = 0; i < n; ++i) {
            double wi = 0;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) wi += wval(a, b, i) * x[a] * x[b];
            sum_wi2 += wi * wi;
        }

        double quad = 0;  // v^T A v with the (T,U)=(T',U') entries zeroed
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    for (int d = 0; d < n; ++d) {
                        if (a == b && c == d) continue;
                        double cell = 0;
                        for (int l = 0; l < n; ++l) cell += wval(a, c, l) * wval(b, d, l);
                        quad += cell * x[a] * x[b] * x[c] * x[d];
                    }
        double diag = 0;
        for (const auto& [t, val] : w.entries) diag += val * val;
        CHECK(sum_wi2 == doctest::Approx(quad + diag).epsilon(1e-9));
    }
}

TEST_CASE("certify_sum_form") {
    // s = 1: exact L1
    std::vector<std::pair<std::uint64_t, double>> v{{0, 1.0}, {1, -2.0}, {2, 3.0}};
    CHECK(certify_sum_form(v, 1, 3).bound == 6.0);

    // all zero -> 0
    CHECK(certify_sum_form({}, 2, 4).bound == 0);
    std::vector<std::pair<std::uint64_t, double>> zeros{{0, 0.0}, {5, 0.0}};
    CHECK(certify_sum_form(zeros, 2, 4).bound == 0);

    // s = 2, n = 8, |v| <= 3: sound against enumeration and rescaled correctly
    CounterRng rng(31337);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<std::pair<std::uint64_t, double>> entries;
        for (std::uint64_t t = 0; t < 64; ++t)
            if (rng.next_double() < 0.4)
                entries.emplace_back(t, std::floor(rng.next_double() * 7 - 3));
        SumFormCertificate cert = certify_sum_form(entries, 2, 8);
        // enumeration oracle
        double best = 0;
        for (std::uint32_t a = 0; a < 256; ++a) {
            double acc = 0;
            for (const auto& [t, val] : entries) {
                int xi = (a >> (t / 8)) & 1 ? -1 : 1;
                int xj = (a >> (t % 8)) & 1 ? -1 : 1;
                acc += val * xi * xj;
            }
            best = std::max(best, std::abs(acc));
        }
        CHECK(cert.bound + 1e-9 >= best);
    }
}
