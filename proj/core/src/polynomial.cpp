#include "cspref/polynomial.hpp"

#include <bit>
#include <stdexcept>

#include "cspref/predicate.hpp"
#include "json.hpp"

namespace cspref {

using nlohmann::json;

int MultilinearPolynomial::degree() const {
    int d = 0;
    for (const auto& [mask, v] : coeff_)
        if (v != 0) d = std::max(d, std::popcount(mask));
    return d;
}

void MultilinearPolynomial::set(std::uint32_t mask, Rat value) {
    if (value == 0)
        coeff_.erase(mask);
    else
        coeff_[mask] = std::move(value);
}

Rat MultilinearPolynomial::coefficient(std::uint32_t mask) const {
    auto it = coeff_.find(mask);
    return it == coeff_.end() ? Rat(0) : it->second;
}

Rat MultilinearPolynomial::evaluate_index(std::uint32_t index) const {
    Rat acc = 0;
    for (const auto& [mask, v] : coeff_) acc += (chi(index, mask) > 0) ? v : -v;
    return acc;
}

Rat MultilinearPolynomial::evaluate(std::span<const int> z) const {
    return evaluate_index(assignment_index(z));
}

MultilinearPolynomial MultilinearPolynomial::scaled(const Rat& factor) const {
    MultilinearPolynomial out(k_);
    for (const auto& [mask, v] : coeff_) out.set(mask, v * factor);
    return out;
}

std::string MultilinearPolynomial::to_json() const {
    json coeffs = json::object();
    char buf[16];
    for (const auto& [mask, v] : coeff_) {
        std::snprintf(buf, sizeof buf, "%x", mask);
        coeffs[buf] = rat_string(v);
    }
    json j{{"k", k_}, {"t", degree()}, {"coeffs", std::move(coeffs)}};
    return j.dump();
}

MultilinearPolynomial MultilinearPolynomial::from_json(const std::string& text) {
    json j = json::parse(text);
    MultilinearPolynomial p(j.at("k").get<int>());
    for (auto& [key, val] : j.at("coeffs").items()) {
        std::uint32_t mask = std::stoul(key, nullptr, 16);
        p.set(mask, parse_rat(val.get<std::string>()));
    }
    return p;
}

Surd UnivariatePoly::evaluate(long s) const {
    Surd acc = u[4];
    for (int i = 3; i >= 0; --i) acc = acc * Surd(Rat(s)) + u[i];
    return acc;
}

UnivariatePoly univariate_from_symmetric(const SymmetricSpec& spec) {
    const long k = spec.k;
    UnivariatePoly q;
    q.k = spec.k;
    q.u[4] = spec.d * Surd(Rat(1, 24));
    q.u[3] = spec.c * Surd(Rat(1, 6));
    q.u[2] = spec.b * Surd(Rat(1, 2)) + spec.d * Surd(Rat(1, 3)) - spec.d * Surd(Rat(k, 4));
    q.u[1] = spec.a + spec.c * Surd(Rat(-3 * k + 2, 6));
    q.u[0] = spec.b * Surd(Rat(-k, 2)) + spec.d * Surd(Rat(k * (3 * k - 6), 24));
    return q;
}

MultilinearPolynomial expand_symmetric(const SymmetricSpec& spec) {
    if (!spec.a.is_rational() || !spec.b.is_rational() || !spec.c.is_rational() ||
        !spec.d.is_rational())
        throw std::domain_error("expand_symmetric: coefficients must be rational");
    if (spec.k < 1 || spec.k > kMaxTableArity)
        throw std::domain_error("expand_symmetric: arity out of table range");
    MultilinearPolynomial p(spec.k);
    const Rat levels[5] = {Rat(0), spec.a.a, spec.b.a, spec.c.a, spec.d.a};
    for (std::uint32_t mask = 1; mask < (1u << spec.k); ++mask) {
        int w = std::popcount(mask);
        if (w <= 4 && levels[w] != 0) p.set(mask, levels[w]);
    }
    return p;
}

std::int64_t elementary_symmetric_direct(std::uint32_t index, int k, int i) {
    if (i == 0) return 1;
    if (i > k) return 0;
    // enumerate size-i subsets with nested loops up to i = 4
    std::int64_t acc = 0;
    auto sign = [&](int j) { return (index >> j) & 1 ? -1 : 1; };
    if (i == 1) {
        for (int a = 0; a < k; ++a) acc += sign(a);
    } else if (i == 2) {
        for (int a = 0; a < k; ++a)
            for (int b = a + 1; b < k; ++b) acc += sign(a) * sign(b);
    } else if (i == 3) {
        for (int a = 0; a < k; ++a)
            for (int b = a + 1; b < k; ++b)
                for (int c = b + 1; c < k; ++c) acc += sign(a) * sign(b) * sign(c);
    } else if (i == 4) {
        for (int a = 0; a < k; ++a)
            for (int b = a + 1; b < k; ++b)
                for (int c = b + 1; c < k; ++c)
                    for (int d = c + 1; d < k; ++d)
                        acc += sign(a) * sign(b) * sign(c) * sign(d);
    } else {
        throw std::domain_error("elementary_symmetric_direct supports i <= 4");
    }
    return acc;
}

}  // namespace cspref
