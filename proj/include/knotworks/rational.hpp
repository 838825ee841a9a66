#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <string>

namespace knotworks {

// Exact rational arithmetic for concurrency measures and ratio reports.
// Every equality the test suites assert on these is exact; nothing
// in the library converts them to floating point.
using Rational = boost::rational<std::int64_t>;

// Canonical "num/den" form, e.g. "2/5", "1/2", "2/1".
inline std::string to_fraction_string(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace knotworks
