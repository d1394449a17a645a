#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <string>

namespace dsp {

using Rational = boost::multiprecision::mpq_rational;

// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& q);
Rational parse_rational(const std::string& text);

}  // namespace dsp
