#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>
#include <string_view>

namespace apx {

/// Arbitrary-precision natural number; used for indices of dense subsets.
using Nat = mpz_class;

std::string to_string(const Nat& n);
Nat parse_nat(std::string_view text);

/// Exact rational number, always in lowest terms with positive denominator.
class Rat {
 public:
  Rat() = default;
  Rat(long value) : q_(value) {}  // NOLINT(google-explicit-constructor)
  Rat(const Nat& num, const Nat& den);
  explicit Rat(const Nat& integer) : q_(integer) {}
  explicit Rat(mpq_class q);

  /// Parses "-3/8", "2", "10/4" (normalized). Throws ParseError.
  static Rat parse(std::string_view text);

  /// Canonical text form: optional '-', numerator, optional "/den".
  std::string str() const;

  Nat num() const { return q_.get_num(); }
  Nat den() const { return q_.get_den(); }
  const mpq_class& raw() const { return q_; }

  int sign() const { return sgn(q_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return q_.get_den() == 1; }

  Rat operator-() const { return Rat(mpq_class(-q_)); }
  Rat& operator+=(const Rat& o);
  Rat& operator-=(const Rat& o);
  Rat& operator*=(const Rat& o);
  Rat& operator/=(const Rat& o);

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

  friend bool operator==(const Rat& a, const Rat& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class q_;
};

Rat abs(const Rat& r);
Rat min(const Rat& a, const Rat& b);
Rat max(const Rat& a, const Rat& b);
/// 2^(-e) for e >= 0.
Rat inverse_power_of_two(unsigned long e);
Nat floor(const Rat& r);

}  // namespace apx
