#include "cspref/rational.hpp"

#include <stdexcept>

namespace cspref {

double to_double(const Rat& r) { return r.convert_to<double>(); }

std::string rat_string(const Rat& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) {
        s += '/';
        s += denominator(r).str();
    }
    return s;
}

Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(BigInt(s));
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("rational with zero denominator: " + s);
    return Rat(num, den);
}

BigInt isqrt_floor(const BigInt& v) {
    if (v < 0) throw std::domain_error("isqrt_floor of negative value");
    if (v == 0) return 0;
    BigInt x = BigInt(1) << (msb(v) / 2 + 1);
    for (;;) {
        BigInt y = (x + v / x) / 2;
        if (y >= x) break;
        x = y;
    }
    return x;
}

}  // namespace cspref
