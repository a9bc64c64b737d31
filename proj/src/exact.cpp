#include "bfh/exact.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>

namespace bfh::exact {

namespace {
constexpr uint64_t kBase = uint64_t{1} << 32;
}

Int::Int(long long v) {
  if (v == 0) return;
  sign_ = v < 0 ? -1 : 1;
  // avoid overflow on LLONG_MIN
  uint64_t m = v < 0 ? ~static_cast<uint64_t>(v) + 1 : static_cast<uint64_t>(v);
  mag_.push_back(static_cast<uint32_t>(m & 0xffffffffu));
  if (m >> 32) mag_.push_back(static_cast<uint32_t>(m >> 32));
}

void Int::trim() {
  while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
  if (mag_.empty()) sign_ = 0;
}

int Int::cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

void Int::add_mag(std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  if (b.size() > a.size()) a.resize(b.size(), 0);
  uint64_t carry = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    uint64_t s = carry + a[i] + (i < b.size() ? b[i] : 0);
    a[i] = static_cast<uint32_t>(s & 0xffffffffu);
    carry = s >> 32;
  }
  if (carry) a.push_back(static_cast<uint32_t>(carry));
}

void Int::sub_mag(std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  int64_t borrow = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    int64_t d = static_cast<int64_t>(a[i]) - borrow - (i < b.size() ? b[i] : 0);
    if (d < 0) {
      d += static_cast<int64_t>(kBase);
      borrow = 1;
    } else {
      borrow = 0;
    }
    a[i] = static_cast<uint32_t>(d);
  }
}

Int& Int::operator+=(const Int& o) {
  if (o.sign_ == 0) return *this;
  if (sign_ == 0) return *this = o;
  if (sign_ == o.sign_) {
    add_mag(mag_, o.mag_);
    return *this;
  }
  int c = cmp_mag(mag_, o.mag_);
  if (c == 0) {
    sign_ = 0;
    mag_.clear();
  } else if (c > 0) {
    sub_mag(mag_, o.mag_);
    trim();
  } else {
    std::vector<uint32_t> m = o.mag_;
    sub_mag(m, mag_);
    mag_ = std::move(m);
    sign_ = o.sign_;
    trim();
  }
  return *this;
}

Int& Int::operator-=(const Int& o) { return *this += -o; }

Int Int::operator-() const {
  Int r = *this;
  r.sign_ = -r.sign_;
  return r;
}

Int Int::mul(const Int& a, const Int& b) {
  Int r;
  if (a.sign_ == 0 || b.sign_ == 0) return r;
  r.sign_ = a.sign_ * b.sign_;
  r.mag_.assign(a.mag_.size() + b.mag_.size(), 0);
  for (size_t i = 0; i < a.mag_.size(); ++i) {
    uint64_t carry = 0;
    for (size_t j = 0; j < b.mag_.size(); ++j) {
      uint64_t cur = r.mag_[i + j] + static_cast<uint64_t>(a.mag_[i]) * b.mag_[j] + carry;
      r.mag_[i + j] = static_cast<uint32_t>(cur & 0xffffffffu);
      carry = cur >> 32;
    }
    size_t k = i + b.mag_.size();
    while (carry) {
      uint64_t cur = r.mag_[k] + carry;
      r.mag_[k] = static_cast<uint32_t>(cur & 0xffffffffu);
      carry = cur >> 32;
      ++k;
    }
  }
  r.trim();
  return r;
}

Int& Int::operator*=(const Int& o) { return *this = mul(*this, o); }

// Knuth algorithm D on 32-bit limbs.
void Int::div_mod_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                      std::vector<uint32_t>& q, std::vector<uint32_t>& r) {
  q.clear();
  r.clear();
  if (cmp_mag(a, b) < 0) {
    r = a;
    return;
  }
  if (b.size() == 1) {
    uint64_t d = b[0], rem = 0;
    q.assign(a.size(), 0);
    for (size_t i = a.size(); i-- > 0;) {
      uint64_t cur = (rem << 32) | a[i];
      q[i] = static_cast<uint32_t>(cur / d);
      rem = cur % d;
    }
    while (!q.empty() && q.back() == 0) q.pop_back();
    if (rem) r.push_back(static_cast<uint32_t>(rem));
    return;
  }
  // normalize so the top divisor limb has its high bit set
  int shift = 0;
  for (uint32_t top = b.back(); !(top & 0x80000000u); top <<= 1) ++shift;
  auto shl = [shift](const std::vector<uint32_t>& v) {
    std::vector<uint32_t> out(v.size() + 1, 0);
    for (size_t i = 0; i < v.size(); ++i) {
      out[i] |= static_cast<uint32_t>((static_cast<uint64_t>(v[i]) << shift) & 0xffffffffu);
      out[i + 1] = static_cast<uint32_t>(static_cast<uint64_t>(v[i]) >> (32 - shift));
    }
    if (shift == 0) out[v.size()] = 0;
    return out;
  };
  std::vector<uint32_t> u = shl(a);
  std::vector<uint32_t> v = shl(b);
  while (!v.empty() && v.back() == 0) v.pop_back();
  size_t n = v.size(), m = u.size() - n;
  q.assign(m, 0);
  for (size_t j = m; j-- > 0;) {
    uint64_t num = (static_cast<uint64_t>(u[j + n]) << 32) | u[j + n - 1];
    uint64_t qhat = num / v[n - 1];
    uint64_t rhat = num % v[n - 1];
    while (qhat >= kBase ||
           (n >= 2 && qhat * v[n - 2] > ((rhat << 32) | u[j + n - 2]))) {
      --qhat;
      rhat += v[n - 1];
      if (rhat >= kBase) break;
    }
    // multiply-subtract qhat * v from u[j .. j+n]
    int64_t borrow = 0;
    uint64_t carry = 0;
    for (size_t i = 0; i < n; ++i) {
      uint64_t p = qhat * v[i] + carry;
      carry = p >> 32;
      int64_t t = static_cast<int64_t>(u[i + j]) - static_cast<int64_t>(p & 0xffffffffu) - borrow;
      if (t < 0) {
        t += static_cast<int64_t>(kBase);
        borrow = 1;
      } else {
        borrow = 0;
      }
      u[i + j] = static_cast<uint32_t>(t);
    }
    int64_t t = static_cast<int64_t>(u[j + n]) - static_cast<int64_t>(carry) - borrow;
    if (t < 0) {
      // qhat was one too large: add v back
      t += static_cast<int64_t>(kBase);
      --qhat;
      uint64_t c2 = 0;
      for (size_t i = 0; i < n; ++i) {
        uint64_t s = static_cast<uint64_t>(u[i + j]) + v[i] + c2;
        u[i + j] = static_cast<uint32_t>(s & 0xffffffffu);
        c2 = s >> 32;
      }
      t += static_cast<int64_t>(c2);
      t %= static_cast<int64_t>(kBase);
    }
    u[j + n] = static_cast<uint32_t>(t);
    q[j] = static_cast<uint32_t>(qhat);
  }
  while (!q.empty() && q.back() == 0) q.pop_back();
  // denormalize remainder
  u.resize(n);
  r.assign(n, 0);
  for (size_t i = 0; i < n; ++i) {
    uint64_t lo = static_cast<uint64_t>(u[i]) >> shift;
    uint64_t hi = (i + 1 < n && shift) ? (static_cast<uint64_t>(u[i + 1]) << (32 - shift)) : 0;
    r[i] = static_cast<uint32_t>((lo | hi) & 0xffffffffu);
  }
  while (!r.empty() && r.back() == 0) r.pop_back();
}

void Int::div_mod(const Int& a, const Int& b, Int& q, Int& r) {
  if (b.sign_ == 0) throw std::domain_error("Int: division by zero");
  const int qs = a.sign_ * b.sign_, rs = a.sign_;
  std::vector<uint32_t> qm, rm;
  div_mod_mag(a.mag_, b.mag_, qm, rm);
  q.sign_ = qm.empty() ? 0 : qs;
  q.mag_ = std::move(qm);
  q.trim();
  r.sign_ = rm.empty() ? 0 : rs;
  r.mag_ = std::move(rm);
  r.trim();
}

void Int::div_mod_floor(const Int& a, const Int& b, Int& q, Int& r) {
  div_mod(a, b, q, r);
  if (!r.is_zero() && (r.sign() != b.sign())) {
    q -= 1;
    r += b;
  }
}

Int& Int::operator/=(const Int& o) {
  Int q, r;
  div_mod(*this, o, q, r);
  return *this = q;
}

Int& Int::operator%=(const Int& o) {
  Int q, r;
  div_mod(*this, o, q, r);
  return *this = r;
}

std::strong_ordering operator<=>(const Int& a, const Int& b) {
  if (a.sign_ != b.sign_) return a.sign_ <=> b.sign_;
  int c = Int::cmp_mag(a.mag_, b.mag_) * (a.sign_ < 0 ? -1 : 1);
  return c <=> 0;
}

bool Int::fits_int64() const {
  if (mag_.size() > 2) return false;
  if (mag_.size() < 2) return true;
  uint64_t m = (static_cast<uint64_t>(mag_[1]) << 32) | mag_[0];
  return sign_ > 0 ? m <= 0x7fffffffffffffffull : m <= 0x8000000000000000ull;
}

long long Int::to_int64() const {
  if (!fits_int64()) throw std::overflow_error("Int: value exceeds int64 range");
  uint64_t m = 0;
  if (!mag_.empty()) m = mag_[0];
  if (mag_.size() == 2) m |= static_cast<uint64_t>(mag_[1]) << 32;
  return sign_ < 0 ? -static_cast<long long>(m) : static_cast<long long>(m);
}

Int Int::from_string(std::string_view s) {
  size_t i = 0;
  int sign = 1;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    if (s[i] == '-') sign = -1;
    ++i;
  }
  if (i >= s.size()) throw std::invalid_argument("Int: empty numeral");
  Int r;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      throw std::invalid_argument("Int: bad digit in numeral");
    r *= 10;
    r += (s[i] - '0');
  }
  return sign < 0 ? -r : r;
}

std::string Int::str() const {
  if (sign_ == 0) return "0";
  std::vector<uint32_t> m = mag_;
  std::string digits;
  while (!m.empty()) {
    uint64_t rem = 0;
    for (size_t i = m.size(); i-- > 0;) {
      uint64_t cur = (rem << 32) | m[i];
      m[i] = static_cast<uint32_t>(cur / 1000000000u);
      rem = cur % 1000000000u;
    }
    while (!m.empty() && m.back() == 0) m.pop_back();
    for (int k = 0; k < 9; ++k) {
      digits.push_back(static_cast<char>('0' + rem % 10));
      rem /= 10;
    }
  }
  while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
  if (sign_ < 0) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

std::ostream& operator<<(std::ostream& os, const Int& v) { return os << v.str(); }

Int gcd(Int a, Int b) {
  a = abs(a);
  b = abs(b);
  while (!b.is_zero()) {
    Int r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

Rat::Rat(Int n, Int d) : num_(std::move(n)), den_(std::move(d)) {
  if (den_.is_zero()) throw std::domain_error("Rat: zero denominator");
  normalize();
}

void Rat::normalize() {
  if (den_.sign() < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  if (num_.is_zero()) {
    den_ = 1;
    return;
  }
  Int g = gcd(num_, den_);
  num_ /= g;
  den_ /= g;
}

Rat Rat::operator-() const {
  Rat r = *this;
  r.num_ = -r.num_;
  return r;
}

Rat& Rat::operator+=(const Rat& o) {
  num_ = num_ * o.den_ + o.num_ * den_;
  den_ *= o.den_;
  normalize();
  return *this;
}

Rat& Rat::operator-=(const Rat& o) { return *this += -o; }

Rat& Rat::operator*=(const Rat& o) {
  num_ *= o.num_;
  den_ *= o.den_;
  normalize();
  return *this;
}

Rat& Rat::operator/=(const Rat& o) {
  if (o.num_.is_zero()) throw std::domain_error("Rat: division by zero");
  num_ *= o.den_;
  den_ *= o.num_;
  normalize();
  return *this;
}

std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
  return a.num_ * b.den_ <=> b.num_ * a.den_;
}

Rat Rat::from_string(std::string_view s) {
  size_t slash = s.find('/');
  if (slash == std::string_view::npos) return Rat(Int::from_string(s));
  return Rat(Int::from_string(s.substr(0, slash)), Int::from_string(s.substr(slash + 1)));
}

std::string Rat::str() const {
  if (den_ == Int(1)) return num_.str();
  return num_.str() + "/" + den_.str();
}

std::ostream& operator<<(std::ostream& os, const Rat& v) { return os << v.str(); }

}  // namespace bfh::exact
