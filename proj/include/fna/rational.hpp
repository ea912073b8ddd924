#ifndef FNA_RATIONAL_HPP
#define FNA_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <string_view>

#include "fna/count.hpp"

namespace fna {

// Exact rational arithmetic; always kept in lowest terms by the backend.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Accepts "a/b", plain integers, and decimal notation with an optional
// exponent ("0.25", "1e-4", "2.5e-3"); everything parses exactly.
Rational parse_rational(std::string_view s);

// "num/den" in lowest terms, or just "num" when the denominator is one.
std::string format_rational(const Rational& r);

Rational rational_from_count(const Count& c);

}  // namespace fna

#endif
