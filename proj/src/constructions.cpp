#include "had/constructions.hpp"

#include <algorithm>
#include <bit>

namespace had {

namespace {

bool is_prime(int q) {
  if (q < 2) return false;
  for (int d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

// Finite field of order q as multiplication/subtraction tables over element
// indices 0..q-1. Prime powers use a polynomial basis with a fixed
// irreducible polynomial; the index encodes coefficients in base p.
struct FieldTables {
  int q;
  std::vector<int> mul;  // q*q
  std::vector<int> sub;  // q*q

  int at_mul(int a, int b) const { return mul[static_cast<size_t>(a) * q + b]; }
  int at_sub(int a, int b) const { return sub[static_cast<size_t>(a) * q + b]; }
};

FieldTables prime_field(int p) {
  FieldTables f;
  f.q = p;
  f.mul.resize(static_cast<size_t>(p) * p);
  f.sub.resize(static_cast<size_t>(p) * p);
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b) {
      f.mul[static_cast<size_t>(a) * p + b] = (a * b) % p;
      f.sub[static_cast<size_t>(a) * p + b] = ((a - b) % p + p) % p;
    }
  return f;
}

FieldTables extension_field(int p, int k, const std::vector<int>& irreducible) {
  int q = 1;
  for (int i = 0; i < k; ++i) q *= p;
  auto digits = [&](int x) {
    std::vector<int> d(k);
    for (int i = 0; i < k; ++i) {
      d[i] = x % p;
      x /= p;
    }
    return d;
  };
  auto pack = [&](const std::vector<int>& d) {
    int x = 0;
    for (int i = k - 1; i >= 0; --i) x = x * p + d[i];
    return x;
  };
  FieldTables f;
  f.q = q;
  f.mul.resize(static_cast<size_t>(q) * q);
  f.sub.resize(static_cast<size_t>(q) * q);
  for (int a = 0; a < q; ++a) {
    auto da = digits(a);
    for (int b = 0; b < q; ++b) {
      auto db = digits(b);
      // subtraction is coefficientwise
      std::vector<int> ds(k);
      for (int i = 0; i < k; ++i) ds[i] = ((da[i] - db[i]) % p + p) % p;
      f.sub[static_cast<size_t>(a) * q + b] = pack(ds);
      // polynomial product reduced by the irreducible polynomial
      std::vector<int> prod(2 * k - 1, 0);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
      for (int d = 2 * k - 2; d >= k; --d) {
        int c = prod[d];
        if (c == 0) continue;
        prod[d] = 0;
        // x^k = -(irreducible[0] + ... + irreducible[k-1] x^{k-1})
        for (int i = 0; i < k; ++i) prod[d - k + i] = ((prod[d - k + i] - c * irreducible[i]) % p + p) % p;
      }
      std::vector<int> dm(prod.begin(), prod.begin() + k);
      f.mul[static_cast<size_t>(a) * q + b] = pack(dm);
    }
  }
  return f;
}

FieldTables field_for(int q) {
  if (is_prime(q)) return prime_field(q);
  switch (q) {
    case 9:
      return extension_field(3, 2, {1, 0});     // x^2 + 1
    case 25:
      return extension_field(5, 2, {1, 1});     // x^2 + x + 1
    case 27:
      return extension_field(3, 3, {1, 2, 0});  // x^3 + 2x + 1
    case 49:
      return extension_field(7, 2, {3, 1});     // x^2 + x + 3
    default:
      throw domain_error("paley: unsupported prime power q=" + std::to_string(q));
  }
}

// chi[x]: 0 for x=0, +1 for nonzero squares, -1 otherwise.
std::vector<int> quadratic_character(const FieldTables& f) {
  std::vector<int> chi(f.q, -1);
  chi[0] = 0;
  for (int x = 1; x < f.q; ++x) chi[f.at_mul(x, x)] = 1;
  return chi;
}

}  // namespace

HadamardMatrix sylvester(int k) {
  if (k < 0 || k > 12) throw domain_error("sylvester: k must be in 0..12");
  int n = 1 << k;
  int w = words_for(n);
  std::vector<uint64_t> rows(static_cast<size_t>(n) * w, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!(std::popcount(static_cast<unsigned>(i & j)) & 1))
        rows[static_cast<size_t>(i) * w + static_cast<size_t>(j) / 64] |= uint64_t{1} << (j % 64);
  auto m = HadamardMatrix::from_packed(n, std::move(rows));
  if (!m.is_valid()) throw domain_error("sylvester: construction failed verification");
  return m;
}

HadamardMatrix paley(int q, int type) {
  if (type != 1 && type != 2) throw domain_error("paley: type must be 1 or 2");
  auto f = field_for(q);
  auto chi = quadratic_character(f);
  if (type == 1) {
    if (q % 4 != 3) throw domain_error("paley type 1 needs q = 3 (mod 4)");
    int n = q + 1;
    std::vector<int> e(static_cast<size_t>(n) * n, 1);
    for (int i = 1; i < n; ++i)
      for (int j = 1; j < n; ++j)
        e[static_cast<size_t>(i) * n + j] = (i == j) ? -1 : chi[f.at_sub(i - 1, j - 1)];
    auto m = HadamardMatrix::from_entries(n, e);
    if (!m.is_valid()) throw domain_error("paley type 1: construction failed verification");
    return m;
  }
  if (q % 4 != 1) throw domain_error("paley type 2 needs q = 1 (mod 4)");
  int s = q + 1;
  int n = 2 * s;
  // S = [[0, 1...1], [1...1, Q]] with Q the symmetric character matrix; each
  // entry s of S becomes the 2x2 block s*[[1,1],[1,-1]] + (s==0)*[[1,-1],[-1,-1]].
  std::vector<int> S(static_cast<size_t>(s) * s, 0);
  for (int j = 1; j < s; ++j) {
    S[j] = 1;
    S[static_cast<size_t>(j) * s] = 1;
  }
  for (int i = 1; i < s; ++i)
    for (int j = 1; j < s; ++j) S[static_cast<size_t>(i) * s + j] = chi[f.at_sub(i - 1, j - 1)];
  std::vector<int> e(static_cast<size_t>(n) * n, 0);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) {
      int v = S[static_cast<size_t>(i) * s + j];
      int b00, b01, b10, b11;
      if (v == 0) {
        b00 = 1, b01 = -1, b10 = -1, b11 = -1;
      } else {
        b00 = v, b01 = v, b10 = v, b11 = -v;
      }
      e[static_cast<size_t>(2 * i) * n + 2 * j] = b00;
      e[static_cast<size_t>(2 * i) * n + 2 * j + 1] = b01;
      e[static_cast<size_t>(2 * i + 1) * n + 2 * j] = b10;
      e[static_cast<size_t>(2 * i + 1) * n + 2 * j + 1] = b11;
    }
  auto m = HadamardMatrix::from_entries(n, e);
  if (!m.is_valid()) throw domain_error("paley type 2: construction failed verification");
  return m;
}

HadamardMatrix doubled(const HadamardMatrix& a, const HadamardMatrix& b,
                       const std::vector<int>& perm, bool tilde) {
  int n = a.order();
  if (b.order() != n) throw domain_error("doubled: order mismatch");
  if (static_cast<int>(perm.size()) != n) throw domain_error("doubled: permutation size mismatch");
  if (!a.is_valid() || !b.is_valid()) throw domain_error("doubled: inputs must be Hadamard");
  SignedPerm p(perm, std::vector<int8_t>(n, 1));

  int N = 2 * n;
  std::vector<int> e(static_cast<size_t>(N) * N, 0);
  auto put = [&](int r, int c, int v) { e[static_cast<size_t>(r) * N + c] = v; };
  if (!tilde) {
    // [[A, PB], [A, -PB]] with row i of PB = row perm[i] of B
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        int av = a.entry(i, j);
        int pb = b.entry(perm[i], j);
        put(i, j, av);
        put(i, j + n, pb);
        put(i + n, j, av);
        put(i + n, j + n, -pb);
      }
  } else {
    // [[A, A], [BP, -BP]] with column j of BP = column perm^{-1}(j)... built
    // from the same matrix P: (BP)(i,j) = B(i, pinv[j]).
    auto pinv = p.inverse();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        int av = a.entry(i, j);
        int bp = b.entry(i, pinv.perm(j));
        put(i, j, av);
        put(i, j + n, av);
        put(i + n, j, bp);
        put(i + n, j + n, -bp);
      }
  }
  auto m = HadamardMatrix::from_entries(N, e);
  if (!m.is_valid()) throw domain_error("doubled: construction failed verification");
  return m;
}

}  // namespace had
