#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "had/errors.hpp"

namespace had {

// Number of 64-bit words needed for n bits.
constexpr int words_for(int n) { return (n + 63) / 64; }

// Mask selecting the valid bits of the last word of an n-bit stripe.
constexpr uint64_t tail_mask(int n) {
  int r = n % 64;
  return r == 0 ? ~uint64_t{0} : (uint64_t{1} << r) - 1;
}

// A length-n vector over {-1,+1}, packed one bit per entry (bit 1 = +1).
// Bit i of word i/64 holds entry i.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(int n) : n_(n), w_(n, 0) {}
  BitVec(int n, std::vector<uint64_t> words);

  int size() const { return n_; }
  std::span<const uint64_t> words() const { return w_; }
  std::span<uint64_t> words() { return w_; }

  bool bit(int i) const { return (w_[static_cast<size_t>(i) / 64] >> (i % 64)) & 1; }
  int entry(int i) const { return bit(i) ? +1 : -1; }
  void set_bit(int i, bool v) {
    uint64_t m = uint64_t{1} << (i % 64);
    if (v)
      w_[static_cast<size_t>(i) / 64] |= m;
    else
      w_[static_cast<size_t>(i) / 64] &= ~m;
  }
  void flip(int i) { w_[static_cast<size_t>(i) / 64] ^= uint64_t{1} << (i % 64); }

  int popcount() const;
  // Entrywise product: +1*+1 = -1*-1 = +1, so bits combine by XNOR.
  BitVec hprod(const BitVec& o) const;
  BitVec complemented() const;

  bool operator==(const BitVec&) const = default;

 private:
  int n_ = 0;
  std::vector<uint64_t> w_;
};

// Square {-1,+1} matrix in bit-packed form, immutable after construction.
// Both the row plane and the column plane are stored so row and column
// operations cost the same. The orthogonality flag is computed once.
class HadamardMatrix {
 public:
  HadamardMatrix() = default;

  // rows: n stripes of words_for(n) words each, row-major.
  static HadamardMatrix from_packed(int n, std::vector<uint64_t> rows);
  // entries: row-major list of n*n values in {-1,+1}.
  static HadamardMatrix from_entries(int n, std::span<const int> entries);

  int order() const { return n_; }
  int row_words() const { return w_; }
  bool is_valid() const { return valid_; }

  bool bit(int r, int c) const {
    return (rows_[static_cast<size_t>(r) * w_ + static_cast<size_t>(c) / 64] >> (c % 64)) & 1;
  }
  int entry(int r, int c) const { return bit(r, c) ? +1 : -1; }

  std::span<const uint64_t> row_bits(int r) const {
    return {rows_.data() + static_cast<size_t>(r) * w_, static_cast<size_t>(w_)};
  }
  std::span<const uint64_t> col_bits(int c) const {
    return {cols_.data() + static_cast<size_t>(c) * w_, static_cast<size_t>(w_)};
  }

  BitVec row(int r) const;
  BitVec col(int c) const;

  HadamardMatrix transposed() const;

  bool operator==(const HadamardMatrix& o) const { return n_ == o.n_ && rows_ == o.rows_; }

 private:
  HadamardMatrix(int n, std::vector<uint64_t> rows, std::vector<uint64_t> cols, bool valid)
      : n_(n), w_(words_for(n)), rows_(std::move(rows)), cols_(std::move(cols)), valid_(valid) {}

  int n_ = 0;
  int w_ = 0;
  std::vector<uint64_t> rows_;
  std::vector<uint64_t> cols_;
  bool valid_ = false;
};

// A permutation of {0..n-1} together with a sign per index.
// Applying to rows: destination row i is source row perm[i], negated when
// sign[i] < 0.
class SignedPerm {
 public:
  SignedPerm() = default;
  SignedPerm(std::vector<int> perm, std::vector<int8_t> signs);

  static SignedPerm identity(int n);
  static SignedPerm random(int n, std::mt19937_64& rng);

  int size() const { return static_cast<int>(perm_.size()); }
  int perm(int i) const { return perm_[i]; }
  int sign(int i) const { return signs_[i]; }

  SignedPerm inverse() const;
  // Composite move equal to applying *this first, then `then`.
  SignedPerm then(const SignedPerm& then) const;

  bool is_identity() const;
  bool operator==(const SignedPerm&) const = default;

 private:
  std::vector<int> perm_;
  std::vector<int8_t> signs_;
};

// True iff every pair of distinct rows is orthogonal (XOR popcount = n/2).
bool verify(const HadamardMatrix& m);

// Entrywise product of the named rows, as a bit vector.
BitVec hadamard_product(const HadamardMatrix& m, std::span<const int> rows);

// Rows permuted/negated by rowMove, then columns by colMove.
HadamardMatrix apply(const HadamardMatrix& m, const SignedPerm& rowMove, const SignedPerm& colMove);

HadamardMatrix transpose(const HadamardMatrix& m);

// Text format: line 1 is the decimal order, then n lines of n characters
// from {+,-} ({1,0} also accepted on input). The writer emits {+,-} with LF
// line endings.
HadamardMatrix read_had(std::istream& in);
HadamardMatrix read_had_file(const std::string& path);
void write_had(std::ostream& out, const HadamardMatrix& m);
void write_had_file(const std::string& path, const HadamardMatrix& m);

}  // namespace had
