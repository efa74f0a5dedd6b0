#include "had/matrix.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace had {

BitVec::BitVec(int n, std::vector<uint64_t> words) : n_(n), w_(std::move(words)) {
  if (static_cast<int>(w_.size()) != words_for(n)) throw domain_error("BitVec: word count mismatch");
  if (!w_.empty()) w_.back() &= tail_mask(n_);
}

int BitVec::popcount() const {
  int c = 0;
  for (uint64_t w : w_) c += std::popcount(w);
  return c;
}

BitVec BitVec::hprod(const BitVec& o) const {
  if (o.n_ != n_) throw domain_error("BitVec: length mismatch");
  BitVec r(n_);
  for (size_t i = 0; i < w_.size(); ++i) r.w_[i] = ~(w_[i] ^ o.w_[i]);
  if (!r.w_.empty()) r.w_.back() &= tail_mask(n_);
  return r;
}

BitVec BitVec::complemented() const {
  BitVec r(n_);
  for (size_t i = 0; i < w_.size(); ++i) r.w_[i] = ~w_[i];
  if (!r.w_.empty()) r.w_.back() &= tail_mask(n_);
  return r;
}

namespace {

std::vector<uint64_t> transpose_plane(int n, const std::vector<uint64_t>& rows) {
  int w = words_for(n);
  std::vector<uint64_t> cols(static_cast<size_t>(n) * w, 0);
  for (int r = 0; r < n; ++r) {
    const uint64_t* src = rows.data() + static_cast<size_t>(r) * w;
    for (int c = 0; c < n; ++c) {
      if ((src[c / 64] >> (c % 64)) & 1)
        cols[static_cast<size_t>(c) * w + static_cast<size_t>(r) / 64] |= uint64_t{1} << (r % 64);
    }
  }
  return cols;
}

bool orthogonal_rows(int n, const std::vector<uint64_t>& rows) {
  if (n <= 1) return n >= 0;
  if (n % 2 != 0) return false;
  int w = words_for(n);
  for (int i = 0; i < n; ++i) {
    const uint64_t* a = rows.data() + static_cast<size_t>(i) * w;
    for (int j = i + 1; j < n; ++j) {
      const uint64_t* b = rows.data() + static_cast<size_t>(j) * w;
      int d = 0;
      for (int k = 0; k < w; ++k) d += std::popcount(a[k] ^ b[k]);
      if (d != n / 2) return false;
    }
  }
  return true;
}

}  // namespace

HadamardMatrix HadamardMatrix::from_packed(int n, std::vector<uint64_t> rows) {
  if (n < 1) throw domain_error("matrix order must be positive");
  int w = words_for(n);
  if (rows.size() != static_cast<size_t>(n) * w) throw domain_error("packed row data has wrong size");
  uint64_t tm = tail_mask(n);
  for (int r = 0; r < n; ++r) rows[static_cast<size_t>(r) * w + w - 1] &= tm;
  auto cols = transpose_plane(n, rows);
  bool valid = orthogonal_rows(n, rows);
  return HadamardMatrix(n, std::move(rows), std::move(cols), valid);
}

HadamardMatrix HadamardMatrix::from_entries(int n, std::span<const int> entries) {
  if (entries.size() != static_cast<size_t>(n) * n) throw domain_error("entry list has wrong size");
  int w = words_for(n);
  std::vector<uint64_t> rows(static_cast<size_t>(n) * w, 0);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      int e = entries[static_cast<size_t>(r) * n + c];
      if (e != 1 && e != -1) throw domain_error("entries must be +1 or -1");
      if (e == 1) rows[static_cast<size_t>(r) * w + static_cast<size_t>(c) / 64] |= uint64_t{1} << (c % 64);
    }
  return from_packed(n, std::move(rows));
}

BitVec HadamardMatrix::row(int r) const {
  auto s = row_bits(r);
  return BitVec(n_, std::vector<uint64_t>(s.begin(), s.end()));
}

BitVec HadamardMatrix::col(int c) const {
  auto s = col_bits(c);
  return BitVec(n_, std::vector<uint64_t>(s.begin(), s.end()));
}

HadamardMatrix HadamardMatrix::transposed() const {
  return HadamardMatrix(n_, cols_, rows_, valid_);
}

SignedPerm::SignedPerm(std::vector<int> perm, std::vector<int8_t> signs)
    : perm_(std::move(perm)), signs_(std::move(signs)) {
  if (perm_.size() != signs_.size()) throw domain_error("SignedPerm: size mismatch");
  std::vector<char> seen(perm_.size(), 0);
  for (size_t i = 0; i < perm_.size(); ++i) {
    int p = perm_[i];
    if (p < 0 || p >= static_cast<int>(perm_.size()) || seen[p]) throw domain_error("SignedPerm: not a permutation");
    seen[p] = 1;
    if (signs_[i] != 1 && signs_[i] != -1) throw domain_error("SignedPerm: signs must be +1 or -1");
  }
}

SignedPerm SignedPerm::identity(int n) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  return SignedPerm(std::move(p), std::vector<int8_t>(n, 1));
}

SignedPerm SignedPerm::random(int n, std::mt19937_64& rng) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  for (int i = n - 1; i > 0; --i) {
    int j = static_cast<int>(rng() % static_cast<uint64_t>(i + 1));
    std::swap(p[i], p[j]);
  }
  std::vector<int8_t> s(n);
  for (int i = 0; i < n; ++i) s[i] = (rng() & 1) ? 1 : -1;
  return SignedPerm(std::move(p), std::move(s));
}

SignedPerm SignedPerm::inverse() const {
  int n = size();
  std::vector<int> p(n);
  std::vector<int8_t> s(n);
  for (int i = 0; i < n; ++i) p[perm_[i]] = i;
  for (int i = 0; i < n; ++i) s[i] = signs_[p[i]];
  return SignedPerm(std::move(p), std::move(s));
}

SignedPerm SignedPerm::then(const SignedPerm& t) const {
  if (t.size() != size()) throw domain_error("SignedPerm: size mismatch");
  int n = size();
  std::vector<int> p(n);
  std::vector<int8_t> s(n);
  for (int i = 0; i < n; ++i) {
    p[i] = perm_[t.perm_[i]];
    s[i] = static_cast<int8_t>(t.signs_[i] * signs_[t.perm_[i]]);
  }
  return SignedPerm(std::move(p), std::move(s));
}

bool SignedPerm::is_identity() const {
  for (int i = 0; i < size(); ++i)
    if (perm_[i] != i || signs_[i] != 1) return false;
  return true;
}

bool verify(const HadamardMatrix& m) {
  int n = m.order();
  if (n <= 1) return n == 1;
  if (n % 2 != 0) return false;
  for (int i = 0; i < n; ++i) {
    auto a = m.row_bits(i);
    for (int j = i + 1; j < n; ++j) {
      auto b = m.row_bits(j);
      int d = 0;
      for (size_t k = 0; k < a.size(); ++k) d += std::popcount(a[k] ^ b[k]);
      if (d != n / 2) return false;
    }
  }
  return true;
}

BitVec hadamard_product(const HadamardMatrix& m, std::span<const int> rows) {
  int n = m.order();
  std::vector<char> seen(n, 0);
  for (int r : rows) {
    if (r < 0 || r >= n) throw domain_error("hadamard_product: row index out of range");
    if (seen[r]) throw domain_error("hadamard_product: duplicate row index");
    seen[r] = 1;
  }
  int w = m.row_words();
  std::vector<uint64_t> acc(w, 0);
  for (int r : rows) {
    auto b = m.row_bits(r);
    for (int k = 0; k < w; ++k) acc[k] ^= b[k];
  }
  // XOR of bits gives the product bit for an odd number of factors; even
  // counts need a complement (the empty product is the all +1 vector).
  if (rows.size() % 2 == 0)
    for (auto& x : acc) x = ~x;
  acc[w - 1] &= tail_mask(n);
  return BitVec(n, std::move(acc));
}

HadamardMatrix apply(const HadamardMatrix& m, const SignedPerm& rowMove, const SignedPerm& colMove) {
  int n = m.order();
  if (rowMove.size() != n || colMove.size() != n) throw domain_error("apply: move size mismatch");
  int w = m.row_words();
  std::vector<uint64_t> rows(static_cast<size_t>(n) * w, 0);
  for (int i = 0; i < n; ++i) {
    uint64_t* dst = rows.data() + static_cast<size_t>(i) * w;
    int src = rowMove.perm(i);
    bool rneg = rowMove.sign(i) < 0;
    for (int j = 0; j < n; ++j) {
      bool b = m.bit(src, colMove.perm(j));
      if (rneg) b = !b;
      if (colMove.sign(j) < 0) b = !b;
      if (b) dst[j / 64] |= uint64_t{1} << (j % 64);
    }
  }
  return HadamardMatrix::from_packed(n, std::move(rows));
}

HadamardMatrix transpose(const HadamardMatrix& m) { return m.transposed(); }

HadamardMatrix read_had(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw io_error("empty matrix file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  int n = 0;
  try {
    size_t pos = 0;
    n = std::stoi(line, &pos);
    if (pos != line.size()) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw io_error("bad order line: '" + line + "'");
  }
  if (n < 1) throw io_error("order must be positive");
  int w = words_for(n);
  std::vector<uint64_t> rows(static_cast<size_t>(n) * w, 0);
  for (int r = 0; r < n; ++r) {
    if (!std::getline(in, line)) throw io_error("unexpected end of file at row " + std::to_string(r));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (static_cast<int>(line.size()) != n)
      throw io_error("row " + std::to_string(r) + " has length " + std::to_string(line.size()) +
                     ", expected " + std::to_string(n));
    for (int c = 0; c < n; ++c) {
      char ch = line[c];
      if (ch == '+' || ch == '1')
        rows[static_cast<size_t>(r) * w + static_cast<size_t>(c) / 64] |= uint64_t{1} << (c % 64);
      else if (ch != '-' && ch != '0')
        throw io_error(std::string("bad character '") + ch + "' in matrix body");
    }
  }
  return HadamardMatrix::from_packed(n, std::move(rows));
}

HadamardMatrix read_had_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw io_error("cannot open " + path);
  return read_had(f);
}

void write_had(std::ostream& out, const HadamardMatrix& m) {
  int n = m.order();
  out << n << '\n';
  std::string line(n, '-');
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) line[c] = m.bit(r, c) ? '+' : '-';
    out << line << '\n';
  }
}

void write_had_file(const std::string& path, const HadamardMatrix& m) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw io_error("cannot open " + path + " for writing");
  write_had(f, m);
  f.flush();
  if (!f) throw io_error("write failed: " + path);
}

}  // namespace had
