#pragma once

#include <cmath>
#include <stdexcept>

#include "cspref/rational.hpp"

namespace cspref {

// Exact value a + b*sqrt(root) with rational a, b and a fixed integer root >= 0.
// The univariate forms of the majority and near-sqrt(k) threshold separators
// have coefficients in Q[sqrt(k)], so their bound checks are done in this field
// rather than in floating point.
struct Surd {
    Rat a;
    Rat b;
    long root = 0;

    Surd() = default;
    Surd(Rat rational_part) : a(std::move(rational_part)), b(0), root(0) {}
    Surd(Rat a_, Rat b_, long root_) : a(std::move(a_)), b(std::move(b_)), root(root_) {
        if (root_ < 0) throw std::domain_error("negative root");
        if (b == 0) root = 0;
    }

    bool is_rational() const { return b == 0; }

    Surd operator+(const Surd& o) const {
        check_compatible(o);
        return Surd(a + o.a, b + o.b, b + o.b == 0 ? 0 : std::max(root, o.root));
    }
    Surd operator-(const Surd& o) const {
        check_compatible(o);
        return Surd(a - o.a, b - o.b, b - o.b == 0 ? 0 : std::max(root, o.root));
    }
    Surd operator*(const Surd& o) const {
        check_compatible(o);
        long r = std::max(root, o.root);
        return Surd(a * o.a + b * o.b * r, a * o.b + b * o.a, r);
    }
    Surd operator-() const { return Surd(-a, -b, root); }

    Surd& operator+=(const Surd& o) { return *this = *this + o; }
    Surd& operator-=(const Surd& o) { return *this = *this - o; }
    Surd& operator*=(const Surd& o) { return *this = *this * o; }

    // -1, 0, +1
    int sign() const {
        int sa = a == 0 ? 0 : (a > 0 ? 1 : -1);
        if (b == 0) return sa;
        int sb = b > 0 ? 1 : -1;
        if (sa == 0) return root == 0 ? 0 : sb;
        if (sa == sb) return sa;
        // Opposite signs: compare a^2 against b^2 * root.
        Rat lhs = a * a;
        Rat rhs = b * b * root;
        if (lhs == rhs) return 0;
        return (lhs > rhs) ? sa : sb;
    }

    bool operator>(const Surd& o) const { return (*this - o).sign() > 0; }
    bool operator>=(const Surd& o) const { return (*this - o).sign() >= 0; }
    bool operator<(const Surd& o) const { return (*this - o).sign() < 0; }
    bool operator<=(const Surd& o) const { return (*this - o).sign() <= 0; }
    bool operator==(const Surd& o) const { return (*this - o).sign() == 0; }

    double approx() const;

  private:
    void check_compatible(const Surd& o) const {
        if (root != 0 && o.root != 0 && root != o.root)
            throw std::domain_error("mixing surds over different roots");
    }
};

inline double Surd::approx() const {
    double v = to_double(a);
    if (b != 0) v += to_double(b) * std::sqrt(static_cast<double>(root));
    return v;
}

}  // namespace cspref
