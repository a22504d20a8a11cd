#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <string>

namespace kraftlab {

/// Non-negative dyadic rational m / 2^e with arbitrary-precision mantissa.
/// Canonical form: m is odd or zero, and e == 0 when m == 0. Supports exactly
/// the operations Kraft bookkeeping needs: addition, multiplication,
/// comparison. No subtraction, no division.
class Dyadic {
 public:
  Dyadic() = default;

  /// Exact integer value.
  explicit Dyadic(unsigned long v) : mant_(v) {}
  explicit Dyadic(const mpz_class& v) : mant_(v) { canonicalize(); }

  /// m / 2^e, canonicalized. m must be non-negative.
  static Dyadic from_mantissa_exp(mpz_class m, std::uint64_t e);

  /// 2^-bits.
  static Dyadic half_pow(std::uint64_t bits);

  /// 2^bits (an integer).
  static Dyadic pow2(std::uint64_t bits);

  const mpz_class& mantissa() const { return mant_; }
  std::uint64_t exponent() const { return exp_; }
  bool is_zero() const { return mant_ == 0; }

  /// Mantissa width in bits; zero has width 0. Drives bit budgets.
  std::size_t bit_size() const;

  Dyadic& operator+=(const Dyadic& o);
  Dyadic& operator*=(const Dyadic& o);
  friend Dyadic operator+(Dyadic a, const Dyadic& b) { return a += b; }
  friend Dyadic operator*(Dyadic a, const Dyadic& b) { return a *= b; }

  /// Three-way comparison, exact.
  int compare(const Dyadic& o) const;
  bool operator==(const Dyadic& o) const { return compare(o) == 0; }
  bool operator!=(const Dyadic& o) const { return compare(o) != 0; }
  bool operator<(const Dyadic& o) const { return compare(o) < 0; }
  bool operator<=(const Dyadic& o) const { return compare(o) <= 0; }
  bool operator>(const Dyadic& o) const { return compare(o) > 0; }
  bool operator>=(const Dyadic& o) const { return compare(o) >= 0; }

  /// Nearest double (may round for wide mantissas).
  double to_double() const;

  /// log2 of the value; -inf for zero. Accurate to double precision even
  /// when the value itself over- or underflows double range.
  double log2() const;

  /// Mantissa as a decimal string, for serialization.
  std::string mantissa_str() const { return mant_.get_str(); }

 private:
  void canonicalize();

  mpz_class mant_ = 0;
  std::uint64_t exp_ = 0;
};

}  // namespace kraftlab
