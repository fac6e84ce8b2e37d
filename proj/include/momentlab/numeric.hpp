#pragma once

// Exact and high-precision number types shared by every module.
//
// Rational/Integer are GMP's C++ classes. Real is an MPFR float whose
// precision is a process-wide setting: change it with set_precision_bits()
// only while no computation is running on other threads.

#include <gmpxx.h>
#include <mpfr.h>

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>

namespace momentlab {

using Integer = mpz_class;
using Rational = mpq_class;
using Real = boost::multiprecision::mpfr_float;

/// Input outside an operation's mathematical domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical method failed to reach its target accuracy.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A hard size cap (support size, order ceiling, ...) would be exceeded.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr unsigned kDefaultPrecisionBits = 256;
inline constexpr unsigned kMinPrecisionBits = 64;
inline constexpr const char* kPrecisionEnvVar = "MOMENTLAB_PRECISION_BITS";

namespace detail {

inline unsigned& precision_bits_slot() {
  static unsigned bits = kDefaultPrecisionBits;
  return bits;
}

// Smallest digits10 whose Boost conversion yields at least `bits` bits.
inline unsigned digits10_for_bits(unsigned bits) {
  unsigned d = 1;
  while (boost::multiprecision::detail::digits10_2_2(d) < bits) ++d;
  return d;
}

inline unsigned apply_precision(unsigned bits) {
  if (bits < kMinPrecisionBits) {
    throw DomainError("precision must be at least " +
                      std::to_string(kMinPrecisionBits) + " bits");
  }
  precision_bits_slot() = bits;
  Real::default_precision(digits10_for_bits(bits));
  return bits;
}

inline unsigned precision_from_environment() {
  if (const char* env = std::getenv(kPrecisionEnvVar); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != nullptr && *end == '\0' && v >= kMinPrecisionBits && v <= (1UL << 20)) {
      return static_cast<unsigned>(v);
    }
  }
  return kDefaultPrecisionBits;
}

inline const unsigned kInitialPrecision = apply_precision(precision_from_environment());

}  // namespace detail

/// Requested working precision in bits.
inline unsigned precision_bits() { return detail::precision_bits_slot(); }

/// Actual mantissa size of freshly constructed Reals (>= precision_bits()).
inline unsigned effective_precision_bits() {
  Real probe(0);
  return static_cast<unsigned>(mpfr_get_prec(probe.backend().data()));
}

inline void set_precision_bits(unsigned bits) { detail::apply_precision(bits); }

/// Restores the previous precision on scope exit.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits) : saved_(precision_bits()) { set_precision_bits(bits); }
  ~PrecisionScope() { set_precision_bits(saved_); }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_;
};

// ---------------------------------------------------------------------------
// Rational helpers

inline Rational canonical(Rational q) {
  q.canonicalize();
  return q;
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline Rational pow(const Rational& base, unsigned long exponent) {
  Integer num;
  Integer den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exponent);
  return Rational(num, den);
}

/// Parses "a/b", an integer, or a plain decimal ("0.25", "-1.5") into an
/// exact rational. Decimals are read digit by digit, never through a double.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&] { return DomainError("not an exact rational: '" + std::string(text) + "'"); };
  if (text.empty()) throw fail();
  std::string s(text);
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    Integer num;
    Integer den;
    if (num.set_str(s.substr(0, slash), 10) != 0 || den.set_str(s.substr(slash + 1), 10) != 0) {
      throw fail();
    }
    if (den == 0) throw DomainError("zero denominator in '" + s + "'");
    return canonical(Rational(num, den));
  }
  std::size_t pos = 0;
  bool negative = false;
  if (s[0] == '-' || s[0] == '+') {
    negative = s[0] == '-';
    pos = 1;
  }
  std::string digits;
  long scale = 0;
  bool seen_dot = false;
  for (; pos < s.size(); ++pos) {
    const char c = s[pos];
    if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else if (c >= '0' && c <= '9') {
      digits.push_back(c);
      if (seen_dot) ++scale;
    } else {
      throw fail();
    }
  }
  if (digits.empty()) throw fail();
  Integer num(digits, 10);
  Integer den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(scale));
  if (negative) num = -num;
  return canonical(Rational(num, den));
}

inline std::string to_string(const Rational& q) { return q.get_str(10); }

// ---------------------------------------------------------------------------
// Real helpers

inline Real to_real(const Rational& q) {
  Real r;
  mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
  return r;
}

inline Real to_real(const Integer& z) {
  Real r;
  mpfr_set_z(r.backend().data(), z.get_mpz_t(), MPFR_RNDN);
  return r;
}

inline double to_double(const Rational& q) { return q.get_d(); }
inline double to_double(const Real& r) { return r.convert_to<double>(); }

/// Unit roundoff of the working precision, 2^(1 - bits).
inline Real unit_roundoff() {
  Real r(1);
  mpfr_mul_2si(r.backend().data(), r.backend().data(),
               1 - static_cast<long>(effective_precision_bits()), MPFR_RNDN);
  return r;
}

/// Scientific string with enough digits to re-parse to the same value.
inline std::string to_string(const Real& r) {
  const auto prec = static_cast<double>(mpfr_get_prec(r.backend().data()));
  const auto digits = static_cast<std::streamsize>(std::ceil(prec * 0.30102999566398120)) + 2;
  return r.str(digits, std::ios_base::scientific);
}

inline Real parse_real(std::string_view text) {
  Real r;
  if (mpfr_set_str(r.backend().data(), std::string(text).c_str(), 10, MPFR_RNDN) != 0) {
    throw DomainError("not a real number: '" + std::string(text) + "'");
  }
  return r;
}

/// base^exponent for a nonnegative rational base; 0^p = 0 for p > 0.
inline Real pow_real(const Rational& base, const Rational& exponent) {
  if (sgn(base) < 0) throw DomainError("negative base in real power");
  if (sgn(base) == 0) {
    if (sgn(exponent) > 0) return Real(0);
    throw DomainError("0 raised to a nonpositive power");
  }
  if (is_integer(exponent) && exponent.get_num().fits_slong_p()) {
    const long e = exponent.get_num().get_si();
    const Rational v = e >= 0 ? pow(base, static_cast<unsigned long>(e))
                              : pow(Rational(base.get_den(), base.get_num()),
                                    static_cast<unsigned long>(-e));
    return to_real(v);
  }
  return boost::multiprecision::pow(to_real(base), to_real(exponent));
}

}  // namespace momentlab
