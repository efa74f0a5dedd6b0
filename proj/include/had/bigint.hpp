#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace had {

// Arbitrary-precision signed integer, sign + base-2^32 magnitude. Supports
// exactly what exact Smith-form elimination needs: ring arithmetic,
// truncated division, comparison, and decimal printing.
class BigInt {
 public:
  BigInt() = default;
  BigInt(long long v);  // NOLINT: implicit by design

  bool is_zero() const { return sign_ == 0; }
  int sign() const { return sign_; }

  BigInt operator-() const;
  BigInt abs() const;

  BigInt operator+(const BigInt& o) const;
  BigInt operator-(const BigInt& o) const;
  BigInt operator*(const BigInt& o) const;
  // Truncated toward zero; remainder carries the dividend's sign.
  BigInt operator/(const BigInt& o) const;
  BigInt operator%(const BigInt& o) const;

  BigInt& operator+=(const BigInt& o) { return *this = *this + o; }
  BigInt& operator-=(const BigInt& o) { return *this = *this - o; }
  BigInt& operator*=(const BigInt& o) { return *this = *this * o; }

  bool operator==(const BigInt& o) const { return sign_ == o.sign_ && mag_ == o.mag_; }
  bool operator!=(const BigInt& o) const { return !(*this == o); }
  bool operator<(const BigInt& o) const;
  bool operator<=(const BigInt& o) const { return *this < o || *this == o; }
  bool operator>(const BigInt& o) const { return o < *this; }
  bool operator>=(const BigInt& o) const { return o <= *this; }

  // Absolute-value comparison: -1, 0, +1.
  int cmp_abs(const BigInt& o) const;

  bool fits_int64() const;
  long long to_int64() const;  // throws when out of range
  std::string str() const;

  static BigInt gcd(BigInt a, BigInt b);

 private:
  static std::vector<uint32_t> add_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
  static std::vector<uint32_t> sub_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
  static int cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
  static void divmod_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                         std::vector<uint32_t>& q, std::vector<uint32_t>& r);
  void trim();

  int sign_ = 0;                // -1, 0, +1
  std::vector<uint32_t> mag_;   // little-endian limbs, no leading zeros
};

}  // namespace had
