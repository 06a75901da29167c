#ifndef POPMATCH_RATIONAL_HPP
#define POPMATCH_RATIONAL_HPP

// Exact rational arithmetic.  All weight and polytope computations use these
// to keep decision answers bit-reproducible; no floating point anywhere.

#include <gmpxx.h>

#include <string>

namespace popmatch {

using Rational = mpq_class;

// Parses "p", "-p", or "p/q" (q > 0 after canonicalization); throws
// ParseError on malformed text or a zero denominator.
Rational parse_rational(const std::string& text);

// Canonical text form: plain integer when the denominator is 1, else "p/q".
std::string format_rational(const Rational& r);

}  // namespace popmatch

#endif  // POPMATCH_RATIONAL_HPP
