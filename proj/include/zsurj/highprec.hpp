#pragma once

#include <limits>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace zsurj {

// 50-decimal-digit working precision for the analytic formulas.
using Real = boost::multiprecision::cpp_bin_float_50;

// A value together with a rigorous bound on its total error (truncation
// plus accumulated rounding).
struct HighPrecisionValue {
    Real value{0};
    Real error_bound{0};
};

namespace detail {

inline Real rounding_slack(const Real& v, unsigned ops = 4) {
    return abs(v) * std::numeric_limits<Real>::epsilon() * ops;
}

}  // namespace detail

inline HighPrecisionValue hp_exact(const Real& v) { return {v, Real(0)}; }

inline HighPrecisionValue hp_mul(const HighPrecisionValue& a, const HighPrecisionValue& b) {
    Real v = a.value * b.value;
    Real e = abs(a.value) * b.error_bound + abs(b.value) * a.error_bound +
             a.error_bound * b.error_bound + detail::rounding_slack(v);
    return {v, e};
}

// Reciprocal; requires the error bound to be well inside the value.
inline HighPrecisionValue hp_inv(const HighPrecisionValue& a) {
    Real mag = abs(a.value);
    Real v = 1 / a.value;
    Real denom = mag * (mag - a.error_bound);
    Real e = a.error_bound / denom + detail::rounding_slack(v);
    return {v, e};
}

}  // namespace zsurj
