#include "dsp/rational.hpp"

#include <stdexcept>

namespace dsp {

std::string to_string(const Rational& q) {
  auto num = boost::multiprecision::numerator(q);
  auto den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(boost::multiprecision::mpz_int(text));
  boost::multiprecision::mpz_int n(text.substr(0, slash));
  boost::multiprecision::mpz_int d(text.substr(slash + 1));
  if (d == 0) throw std::invalid_argument("zero denominator in " + text);
  return Rational(n, d);
}

}  // namespace dsp
