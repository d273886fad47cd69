#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "nustab/errors.hpp"

namespace nustab {

/// Exact rational scalar. Arbitrary precision, always normalized
/// (positive denominator, reduced fraction), so equality is structural.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline Integer numerator(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denominator(const Rational& q) { return boost::multiprecision::denominator(q); }

/// Renders `p` or `p/q`, matching the matrix file format.
inline std::string to_string(const Rational& q) {
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

/// Parses an integer or `p/q` token.
inline Rational parse_rational(const std::string& token) {
    Integer num, den = 1;
    try {
        const auto slash = token.find('/');
        if (slash == std::string::npos) {
            num = Integer(token);
        } else {
            num = Integer(token.substr(0, slash));
            den = Integer(token.substr(slash + 1));
        }
    } catch (const std::exception&) {
        throw input_error("cannot parse rational: '" + token + "'");
    }
    if (den == 0) throw input_error("rational with zero denominator: " + token);
    return Rational(num, den);
}

} // namespace nustab
