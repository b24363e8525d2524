#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace revpref {

/// Exact rational number. Expression templates are disabled so that `auto`
/// always binds a value.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

using RationalVector = std::vector<Rational>;

/// Parses a decimal literal ("12", "-0.25", "1.5e-3") or an integer
/// fraction ("7/12"). Throws std::invalid_argument on malformed input or a
/// zero denominator.
Rational parse_rational(std::string_view text);

/// Parses a comma separated list of rationals, e.g. "4,4" or "1/2, 1/3".
RationalVector parse_rational_list(std::string_view text);

/// Renders as a terminating decimal when one exists, otherwise as "a/b".
/// parse_rational(format_rational(x)) == x for every x.
std::string format_rational(const Rational& value);

/// Always renders "a/b" (or "a" for integers).
std::string format_fraction(const Rational& value);

double to_double(const Rational& value);

/// True when the reduced denominator has no prime factors other than 2 and 5.
bool has_terminating_decimal(const Rational& value);

Rational dot(const RationalVector& a, const RationalVector& b);

}  // namespace revpref
