#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace cspref {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

double to_double(const Rat& r);

// "num/den" with den omitted when it is 1; round trips exactly.
std::string rat_string(const Rat& r);
Rat parse_rat(const std::string& s);

// Largest integer f with f*f <= v.  v must be nonnegative.
BigInt isqrt_floor(const BigInt& v);

}  // namespace cspref
