#include "had/bigint.hpp"

#include <algorithm>
#include <stdexcept>

namespace had {

BigInt::BigInt(long long v) {
  if (v == 0) return;
  sign_ = v > 0 ? 1 : -1;
  unsigned long long u = v > 0 ? static_cast<unsigned long long>(v)
                               : ~static_cast<unsigned long long>(v) + 1;
  while (u) {
    mag_.push_back(static_cast<uint32_t>(u & 0xffffffffu));
    u >>= 32;
  }
}

void BigInt::trim() {
  while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
  if (mag_.empty()) sign_ = 0;
}

int BigInt::cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (size_t i = a.size(); i-- > 0;)
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  return 0;
}

std::vector<uint32_t> BigInt::add_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  std::vector<uint32_t> r(std::max(a.size(), b.size()) + 1, 0);
  uint64_t carry = 0;
  for (size_t i = 0; i < r.size(); ++i) {
    uint64_t s = carry;
    if (i < a.size()) s += a[i];
    if (i < b.size()) s += b[i];
    r[i] = static_cast<uint32_t>(s);
    carry = s >> 32;
  }
  while (!r.empty() && r.back() == 0) r.pop_back();
  return r;
}

// Requires |a| >= |b|.
std::vector<uint32_t> BigInt::sub_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  std::vector<uint32_t> r(a.size(), 0);
  int64_t borrow = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    int64_t s = static_cast<int64_t>(a[i]) - borrow - (i < b.size() ? b[i] : 0);
    if (s < 0) {
      s += (int64_t{1} << 32);
      borrow = 1;
    } else {
      borrow = 0;
    }
    r[i] = static_cast<uint32_t>(s);
  }
  while (!r.empty() && r.back() == 0) r.pop_back();
  return r;
}

BigInt BigInt::operator-() const {
  BigInt r = *this;
  r.sign_ = -r.sign_;
  return r;
}

BigInt BigInt::abs() const {
  BigInt r = *this;
  if (r.sign_ < 0) r.sign_ = 1;
  return r;
}

BigInt BigInt::operator+(const BigInt& o) const {
  if (sign_ == 0) return o;
  if (o.sign_ == 0) return *this;
  BigInt r;
  if (sign_ == o.sign_) {
    r.sign_ = sign_;
    r.mag_ = add_mag(mag_, o.mag_);
  } else {
    int c = cmp_mag(mag_, o.mag_);
    if (c == 0) return BigInt();
    if (c > 0) {
      r.sign_ = sign_;
      r.mag_ = sub_mag(mag_, o.mag_);
    } else {
      r.sign_ = o.sign_;
      r.mag_ = sub_mag(o.mag_, mag_);
    }
  }
  r.trim();
  return r;
}

BigInt BigInt::operator-(const BigInt& o) const { return *this + (-o); }

BigInt BigInt::operator*(const BigInt& o) const {
  if (sign_ == 0 || o.sign_ == 0) return BigInt();
  BigInt r;
  r.sign_ = sign_ * o.sign_;
  r.mag_.assign(mag_.size() + o.mag_.size(), 0);
  for (size_t i = 0; i < mag_.size(); ++i) {
    uint64_t carry = 0;
    for (size_t j = 0; j < o.mag_.size(); ++j) {
      uint64_t cur = r.mag_[i + j] + static_cast<uint64_t>(mag_[i]) * o.mag_[j] + carry;
      r.mag_[i + j] = static_cast<uint32_t>(cur);
      carry = cur >> 32;
    }
    size_t k = i + o.mag_.size();
    while (carry) {
      uint64_t cur = r.mag_[k] + carry;
      r.mag_[k] = static_cast<uint32_t>(cur);
      carry = cur >> 32;
      ++k;
    }
  }
  r.trim();
  return r;
}

void BigInt::divmod_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                        std::vector<uint32_t>& q, std::vector<uint32_t>& r) {
  if (b.empty()) throw std::domain_error("BigInt division by zero");
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
  // Binary long division: shift the divisor up and subtract.
  int abits = static_cast<int>(a.size()) * 32;
  q.assign(a.size(), 0);
  r.clear();
  std::vector<uint32_t> cur;  // running remainder
  for (int bit = abits - 1; bit >= 0; --bit) {
    // cur = cur*2 + bit of a
    uint32_t carry = (a[bit / 32] >> (bit % 32)) & 1;
    for (size_t i = 0; i < cur.size(); ++i) {
      uint32_t nxt = cur[i] >> 31;
      cur[i] = (cur[i] << 1) | carry;
      carry = nxt;
    }
    if (carry) cur.push_back(carry);
    if (cmp_mag(cur, b) >= 0) {
      cur = sub_mag(cur, b);
      q[bit / 32] |= uint32_t{1} << (bit % 32);
    }
  }
  while (!q.empty() && q.back() == 0) q.pop_back();
  r = cur;
}

BigInt BigInt::operator/(const BigInt& o) const {
  std::vector<uint32_t> q, r;
  divmod_mag(mag_, o.mag_, q, r);
  BigInt out;
  out.mag_ = std::move(q);
  out.sign_ = sign_ * o.sign_;
  out.trim();
  return out;
}

BigInt BigInt::operator%(const BigInt& o) const {
  std::vector<uint32_t> q, r;
  divmod_mag(mag_, o.mag_, q, r);
  BigInt out;
  out.mag_ = std::move(r);
  out.sign_ = sign_;
  out.trim();
  return out;
}

bool BigInt::operator<(const BigInt& o) const {
  if (sign_ != o.sign_) return sign_ < o.sign_;
  int c = cmp_mag(mag_, o.mag_);
  return sign_ >= 0 ? c < 0 : c > 0;
}

int BigInt::cmp_abs(const BigInt& o) const { return cmp_mag(mag_, o.mag_); }

bool BigInt::fits_int64() const {
  if (mag_.size() > 2) return false;
  unsigned long long v = 0;
  for (size_t i = mag_.size(); i-- > 0;) v = (v << 32) | mag_[i];
  if (sign_ >= 0) return v <= 0x7fffffffffffffffull;
  return v <= 0x8000000000000000ull;
}

long long BigInt::to_int64() const {
  if (!fits_int64()) throw std::overflow_error("BigInt does not fit in int64");
  unsigned long long v = 0;
  for (size_t i = mag_.size(); i-- > 0;) v = (v << 32) | mag_[i];
  return sign_ >= 0 ? static_cast<long long>(v) : -static_cast<long long>(v - 1) - 1;
}

std::string BigInt::str() const {
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
    for (int d = 0; d < 9; ++d) {
      digits.push_back(static_cast<char>('0' + rem % 10));
      rem /= 10;
    }
  }
  while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
  if (sign_ < 0) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

BigInt BigInt::gcd(BigInt a, BigInt b) {
  a = a.abs();
  b = b.abs();
  while (!b.is_zero()) {
    BigInt r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

}  // namespace had
