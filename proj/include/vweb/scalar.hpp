#pragma once

#include <gmpxx.h>

#include <string>

namespace vweb {

// Exact rational; gmp keeps it canonical (positive denominator, reduced).
using Scalar = mpq_class;

inline Scalar make_scalar(long num, long den = 1) {
  Scalar s(num, den);
  s.canonicalize();
  return s;
}

inline bool is_integer(const Scalar& s) { return s.get_den() == 1; }

inline std::string to_string(const Scalar& s) { return s.get_str(); }

// Accepts "3", "-2/7", and finite decimals such as "0.49" or "-1.5e-2".
Scalar parse_scalar(const std::string& text);

}  // namespace vweb
