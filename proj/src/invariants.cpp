#include "had/invariants.hpp"

#include <algorithm>
#include <bit>

#include "had/switching.hpp"

namespace had {

IntMatrix to_int_matrix(const HadamardMatrix& m) {
  int n = m.order();
  IntMatrix out = IntMatrix::zero(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) out.at(r, c) = BigInt(m.entry(r, c));
  return out;
}

std::vector<long long> SmithForm::factors_int64() const {
  std::vector<long long> v;
  v.reserve(factors.size());
  for (const auto& f : factors) v.push_back(f.to_int64());
  return v;
}

SmithForm smith_normal_form(const IntMatrix& input) {
  int n = input.n;
  IntMatrix m = input;
  SmithForm out;
  out.factors.assign(n, BigInt());

  auto swap_rows = [&](int a, int b) {
    if (a == b) return;
    for (int c = 0; c < n; ++c) std::swap(m.at(a, c), m.at(b, c));
  };
  auto swap_cols = [&](int a, int b) {
    if (a == b) return;
    for (int r = 0; r < n; ++r) std::swap(m.at(r, a), m.at(r, b));
  };

  // Division rounded to the nearest quotient, so remainders at most half the
  // divisor; keeps intermediate entries small.
  auto rounded_div = [](const BigInt& a, const BigInt& b) {
    BigInt q = a / b;
    BigInt r = a - q * b;
    BigInt twice = r + r;
    if (twice.abs() > b.abs() || (twice.abs() == b.abs() && !r.is_zero()))
      q += BigInt(r.sign() * b.sign());
    return q;
  };

  for (int k = 0; k < n; ++k) {
    for (;;) {
      // Smallest nonzero entry of the trailing submatrix becomes the pivot;
      // re-selected every pass to keep growth down.
      int pr = -1, pc = -1;
      for (int r = k; r < n; ++r)
        for (int c = k; c < n; ++c) {
          const BigInt& v = m.at(r, c);
          if (v.is_zero()) continue;
          if (pr < 0 || v.cmp_abs(m.at(pr, pc)) < 0) {
            pr = r;
            pc = c;
          }
        }
      if (pr < 0) {
        out.factors[k] = BigInt();
        break;
      }
      swap_rows(k, pr);
      swap_cols(k, pc);

      bool clean = true;
      for (int r = k + 1; r < n; ++r) {
        if (m.at(r, k).is_zero()) continue;
        BigInt q = rounded_div(m.at(r, k), m.at(k, k));
        if (!q.is_zero())
          for (int c = k; c < n; ++c) m.at(r, c) -= q * m.at(k, c);
        if (!m.at(r, k).is_zero()) clean = false;
      }
      for (int c = k + 1; c < n; ++c) {
        if (m.at(k, c).is_zero()) continue;
        BigInt q = rounded_div(m.at(k, c), m.at(k, k));
        if (!q.is_zero())
          for (int r = k; r < n; ++r) m.at(r, c) -= q * m.at(r, k);
        if (!m.at(k, c).is_zero()) clean = false;
      }
      if (!clean) continue;
      // Pivot must divide the whole trailing block; if not, fold the
      // offending row into row k and keep reducing.
      int br = -1;
      for (int r = k + 1; r < n && br < 0; ++r)
        for (int c = k + 1; c < n; ++c)
          if (!(m.at(r, c) % m.at(k, k)).is_zero()) {
            br = r;
            break;
          }
      if (br < 0) {
        if (m.at(k, k).sign() < 0)
          for (int c = k; c < n; ++c) m.at(k, c) = -m.at(k, c);
        out.factors[k] = m.at(k, k);
        break;
      }
      for (int c = k; c < n; ++c) m.at(k, c) += m.at(br, c);
    }
  }

  for (int i = 0; i + 1 < n; ++i) {
    const BigInt& a = out.factors[i];
    const BigInt& b = out.factors[i + 1];
    if (!a.is_zero() && !b.is_zero() && !(b % a).is_zero())
      throw domain_error("smith_normal_form: divisibility chain violated (internal error)");
    if (a.is_zero() && !b.is_zero())
      throw domain_error("smith_normal_form: zero factor ordering violated (internal error)");
  }
  return out;
}

int smith_class(const HadamardMatrix& m) {
  if (m.order() != 36) throw domain_error("smith_class: order must be 36");
  if (!m.is_valid()) throw domain_error("smith_class: matrix is not Hadamard");
  auto snf = smith_normal_form(to_int_matrix(m));
  auto f = snf.factors_int64();
  int alpha = static_cast<int>(std::count(f.begin(), f.end(), 2));
  std::vector<long long> expect;
  expect.push_back(1);
  expect.insert(expect.end(), alpha, 2);
  expect.insert(expect.end(), 34 - 2 * alpha, 6);
  expect.insert(expect.end(), alpha, 18);
  expect.push_back(36);
  if (alpha < 6 || alpha > 17 || f != expect)
    throw domain_error("smith_class: invariant factors violate the order-36 pattern");
  return alpha;
}

namespace {

// GF(2) row space of the normalized bit matrix; vectors are word stripes.
struct Gf2Basis {
  int n = 0;
  int words = 0;
  std::vector<std::vector<uint64_t>> rows;  // echelon basis
  std::vector<int> pivots;                  // pivot position per basis row

  // Reduce v against the basis in place; true when v lands in the span.
  bool reduce(std::vector<uint64_t>& v) const {
    for (size_t i = 0; i < rows.size(); ++i) {
      int p = pivots[i];
      if ((v[p / 64] >> (p % 64)) & 1)
        for (int k = 0; k < words; ++k) v[k] ^= rows[i][k];
    }
    for (int k = 0; k < words; ++k)
      if (v[k]) return false;
    return true;
  }

  // Keeps the basis fully reduced: every pivot position is set in exactly
  // one basis row. The low-weight search below relies on this.
  void insert(std::vector<uint64_t> v) {
    for (size_t i = 0; i < rows.size(); ++i) {
      int p = pivots[i];
      if ((v[p / 64] >> (p % 64)) & 1)
        for (int k = 0; k < words; ++k) v[k] ^= rows[i][k];
    }
    int pivot = -1;
    for (int b = 0; b < n && pivot < 0; ++b)
      if ((v[b / 64] >> (b % 64)) & 1) pivot = b;
    if (pivot < 0) return;
    for (auto& row : rows)
      if ((row[pivot / 64] >> (pivot % 64)) & 1)
        for (int k = 0; k < words; ++k) row[k] ^= v[k];
    rows.push_back(std::move(v));
    pivots.push_back(pivot);
  }
};

// Bits of the matrix after normalizing line 0 of the chosen axis to all +1.
// With +1 stored as bit 1, the normalized rows are exactly the GF(2) matrix.
std::vector<std::vector<uint64_t>> normalized_bits(const HadamardMatrix& m, Axis axis) {
  HadamardMatrix work = axis == Axis::rows ? m : m.transposed();
  int n = work.order(), w = work.row_words();
  auto r0 = work.row_bits(0);
  std::vector<uint64_t> flip(w);
  for (int k = 0; k < w; ++k) flip[k] = ~r0[k];
  flip[w - 1] &= tail_mask(n);
  std::vector<std::vector<uint64_t>> rows(n, std::vector<uint64_t>(w));
  for (int r = 0; r < n; ++r) {
    auto b = work.row_bits(r);
    for (int k = 0; k < w; ++k) rows[r][k] = b[k] ^ flip[k];
  }
  return rows;
}

Gf2Basis code_basis(const HadamardMatrix& m, Axis axis) {
  Gf2Basis basis;
  basis.n = m.order();
  basis.words = words_for(basis.n);
  for (auto& r : normalized_bits(m, axis)) basis.insert(std::move(r));
  return basis;
}

int weight_of(const std::vector<uint64_t>& v) {
  int c = 0;
  for (uint64_t x : v) c += std::popcount(x);
  return c;
}

// All codewords with at most `maxPicks` basis rows selected; used for low
// weight searches since a weight-4 word can select at most 4 pivots.
template <typename F>
void for_each_small_combination(const Gf2Basis& basis, int maxPicks, F&& fn) {
  int k = static_cast<int>(basis.rows.size());
  std::vector<uint64_t> acc(basis.words, 0);
  std::vector<int> picks;
  auto rec = [&](auto&& self, int start) -> void {
    if (!picks.empty()) fn(acc);
    if (static_cast<int>(picks.size()) == maxPicks) return;
    for (int i = start; i < k; ++i) {
      for (int t = 0; t < basis.words; ++t) acc[t] ^= basis.rows[i][t];
      picks.push_back(i);
      self(self, i + 1);
      picks.pop_back();
      for (int t = 0; t < basis.words; ++t) acc[t] ^= basis.rows[i][t];
    }
  };
  rec(rec, 0);
}

}  // namespace

CodeSummary binary_code_summary(const HadamardMatrix& m, Axis axis) {
  auto basis = code_basis(m, axis);
  int n = m.order();
  CodeSummary cs;
  cs.dimension = static_cast<int>(basis.rows.size());
  cs.self_orthogonal = true;
  for (size_t i = 0; i < basis.rows.size() && cs.self_orthogonal; ++i)
    for (size_t j = i; j < basis.rows.size(); ++j) {
      int dot = 0;
      for (int k = 0; k < basis.words; ++k)
        dot += std::popcount(basis.rows[i][k] & basis.rows[j][k]);
      if (dot & 1) {
        cs.self_orthogonal = false;
        break;
      }
    }
  cs.self_dual = cs.self_orthogonal && cs.dimension * 2 == n;

  if (cs.dimension <= 26) {
    // Gray-code walk over all codewords.
    std::map<int, long long> enumerator;
    std::vector<uint64_t> cur(basis.words, 0);
    enumerator[0] = 1;
    uint64_t total = uint64_t{1} << cs.dimension;
    for (uint64_t t = 1; t < total; ++t) {
      int b = std::countr_zero(t);
      for (int k = 0; k < basis.words; ++k) cur[k] ^= basis.rows[b][k];
      enumerator[weight_of(cur)]++;
    }
    auto it = enumerator.find(4);
    cs.weight4_count = it == enumerator.end() ? 0 : it->second;
    cs.weight_enumerator = std::move(enumerator);
  } else {
    long long count = 0;
    for_each_small_combination(basis, 4, [&](const std::vector<uint64_t>& v) {
      if (weight_of(v) == 4) count++;
    });
    cs.weight4_count = count;
  }
  return cs;
}

std::vector<std::array<int, 4>> weight4_supports(const HadamardMatrix& m, Axis axis) {
  auto basis = code_basis(m, axis);
  std::vector<std::array<int, 4>> out;
  for_each_small_combination(basis, 4, [&](const std::vector<uint64_t>& v) {
    if (weight_of(v) != 4) return;
    std::array<int, 4> s{};
    int t = 0;
    for (int b = 0; b < basis.n; ++b)
      if ((v[b / 64] >> (b % 64)) & 1) s[t++] = b;
    out.push_back(s);
  });
  std::sort(out.begin(), out.end());
  return out;
}

bool code_subspace_of(const HadamardMatrix& inner, const HadamardMatrix& outer, Axis axis) {
  if (inner.order() != outer.order()) throw domain_error("code_subspace_of: order mismatch");
  auto big = code_basis(outer, axis);
  for (auto& r : normalized_bits(inner, axis)) {
    auto v = r;
    if (!big.reduce(v)) return false;
  }
  return true;
}

bool weight4_vs_closed_quadruples(const HadamardMatrix& m) {
  if (m.order() % 8 != 0) throw domain_error("weight4_vs_closed_quadruples: order must be 0 (mod 8)");
  auto supports = weight4_supports(m, Axis::columns);
  auto quads = find_closed_quadruples(m, Axis::rows);
  if (supports.size() != quads.size()) return false;
  for (size_t i = 0; i < quads.size(); ++i)
    if (supports[i] != quads[i].indices) return false;
  return true;
}

CodeInclusion code_inclusion_check(const HadamardMatrix& h, const HadamardMatrix& hPrime) {
  auto cs = binary_code_summary(h, Axis::columns);
  if (!cs.self_dual) throw domain_error("code_inclusion_check: column code of h must be self-dual");
  auto outer = code_basis(h, Axis::columns);
  auto inner = code_basis(hPrime, Axis::columns);
  for (auto& r : normalized_bits(hPrime, Axis::columns)) {
    auto v = r;
    if (!outer.reduce(v))
      throw domain_error("code_inclusion_check: switched code is not contained in the original");
  }
  if (inner.rows.size() == outer.rows.size()) return CodeInclusion::equal;
  if (inner.rows.size() + 1 != outer.rows.size())
    throw domain_error("code_inclusion_check: dimension drop exceeds one");
  // The gap must be spanned by a weight-4 word of the outer code.
  for (const auto& s : weight4_supports(h, Axis::columns)) {
    std::vector<uint64_t> v(outer.words, 0);
    for (int b : s) v[b / 64] |= uint64_t{1} << (b % 64);
    auto probe = v;
    if (!inner.reduce(probe)) return CodeInclusion::proper_subspace_by_weight4_vector;
  }
  throw domain_error("code_inclusion_check: no weight-4 word spans the gap");
}

bool closed_quadruple_count_invariance_check(const HadamardMatrix& h) {
  if (h.order() % 16 != 8)
    throw domain_error("closed_quadruple_count_invariance_check: order must be 8 (mod 16)");
  auto quads = find_closed_quadruples(h, Axis::rows);
  if (quads.empty())
    throw domain_error("closed_quadruple_count_invariance_check: no closed row quadruples");
  size_t base = quads.size();
  for (const auto& q : quads) {
    auto switched = switch_closed_quadruple(h, q, 1, Axis::rows);
    if (find_closed_quadruples(switched, Axis::rows).size() != base) return false;
  }
  return true;
}

}  // namespace had
