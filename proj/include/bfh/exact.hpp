#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bfh::exact {

/// Arbitrary-precision signed integer, sign-magnitude with base-2^32 limbs.
/// Torsion coefficients and Smith-form pivots can outgrow any fixed width,
/// so the homological core stores these instead of machine ints.
class Int {
 public:
  Int() = default;
  Int(long long v);  // NOLINT: implicit by design, mirrors built-in ints

  static Int from_string(std::string_view s);
  std::string str() const;

  bool is_zero() const { return sign_ == 0; }
  int sign() const { return sign_; }

  bool fits_int64() const;
  long long to_int64() const;  // throws std::overflow_error if out of range

  Int operator-() const;
  Int& operator+=(const Int& o);
  Int& operator-=(const Int& o);
  Int& operator*=(const Int& o);
  Int& operator/=(const Int& o);  // truncated toward zero, like built-ins
  Int& operator%=(const Int& o);  // sign follows the dividend

  friend Int operator+(Int a, const Int& b) { return a += b; }
  friend Int operator-(Int a, const Int& b) { return a -= b; }
  friend Int operator*(const Int& a, const Int& b) { return mul(a, b); }
  friend Int operator/(Int a, const Int& b) { return a /= b; }
  friend Int operator%(Int a, const Int& b) { return a %= b; }

  /// Truncated quotient and remainder in one pass: a == q*b + r, |r| < |b|.
  static void div_mod(const Int& a, const Int& b, Int& q, Int& r);
  /// Floor division: r has the sign of the divisor, used by lattice reduction.
  static void div_mod_floor(const Int& a, const Int& b, Int& q, Int& r);

  friend bool operator==(const Int& a, const Int& b) {
    return a.sign_ == b.sign_ && a.mag_ == b.mag_;
  }
  friend std::strong_ordering operator<=>(const Int& a, const Int& b);

  friend std::ostream& operator<<(std::ostream& os, const Int& v);

 private:
  static Int mul(const Int& a, const Int& b);
  static int cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
  static void add_mag(std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
  // requires |a| >= |b|
  static void sub_mag(std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
  static void div_mod_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                          std::vector<uint32_t>& q, std::vector<uint32_t>& r);
  void trim();

  int sign_ = 0;
  std::vector<uint32_t> mag_;  // little-endian, no trailing zero limbs
};

inline Int abs(const Int& v) { return v.sign() < 0 ? -v : v; }
Int gcd(Int a, Int b);  // nonnegative

/// Exact rational, always normalized with positive denominator.
class Rat {
 public:
  Rat() : num_(0), den_(1) {}
  Rat(Int n) : num_(std::move(n)), den_(1) {}  // NOLINT
  Rat(long long n) : num_(n), den_(1) {}       // NOLINT
  Rat(Int n, Int d);

  static Rat from_string(std::string_view s);  // "p/q" or "p"
  std::string str() const;

  const Int& num() const { return num_; }
  const Int& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  int sign() const { return num_.sign(); }

  Rat operator-() const;
  Rat& operator+=(const Rat& o);
  Rat& operator-=(const Rat& o);
  Rat& operator*=(const Rat& o);
  Rat& operator/=(const Rat& o);

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b);

  friend std::ostream& operator<<(std::ostream& os, const Rat& v);

 private:
  void normalize();
  Int num_, den_;
};

inline Rat abs(const Rat& v) { return v.sign() < 0 ? -v : v; }

}  // namespace bfh::exact
