#include "had/structure.hpp"

#include <algorithm>
#include <bit>
#include <map>

namespace had {

namespace {

void check_distinct_in_range(std::span<const int> idx, int n, const char* what) {
  for (size_t a = 0; a < idx.size(); ++a) {
    if (idx[a] < 0 || idx[a] >= n) throw domain_error(std::string(what) + ": index out of range");
    for (size_t b = a + 1; b < idx.size(); ++b)
      if (idx[a] == idx[b]) throw domain_error(std::string(what) + ": duplicate index");
  }
}

// Positions of set bits of an n-bit stripe.
void collect_positions(std::span<const uint64_t> bits, int n, std::vector<int>& out) {
  for (int k = 0; k < static_cast<int>(bits.size()); ++k) {
    uint64_t w = bits[k];
    while (w) {
      int b = std::countr_zero(w);
      int pos = k * 64 + b;
      if (pos < n) out.push_back(pos);
      w &= w - 1;
    }
  }
}

}  // namespace

std::pair<HadamardMatrix, std::vector<int8_t>> three_normalize(const HadamardMatrix& m,
                                                               std::array<int, 3> rows) {
  int n = m.order();
  check_distinct_in_range(rows, n, "three_normalize");
  int w = m.row_words();
  // Product bit of three rows is the XOR of their bits.
  std::vector<uint64_t> prod(w, 0);
  for (int r : rows) {
    auto b = m.row_bits(r);
    for (int k = 0; k < w; ++k) prod[k] ^= b[k];
  }
  prod[w - 1] |= ~tail_mask(n);  // leave padding bits alone
  std::vector<uint64_t> neg(w);
  for (int k = 0; k < w; ++k) neg[k] = ~prod[k];
  neg[w - 1] &= tail_mask(n);

  std::vector<uint64_t> out(static_cast<size_t>(n) * w);
  for (int r = 0; r < n; ++r) {
    auto b = m.row_bits(r);
    for (int k = 0; k < w; ++k) out[static_cast<size_t>(r) * w + k] = b[k] ^ neg[k];
  }
  std::vector<int8_t> signs(n, 1);
  for (int c = 0; c < n; ++c)
    if ((neg[c / 64] >> (c % 64)) & 1) signs[c] = -1;
  return {HadamardMatrix::from_packed(n, std::move(out)), std::move(signs)};
}

FieldPartition field_partition(const HadamardMatrix& m, std::array<int, 3> rows) {
  int n = m.order();
  check_distinct_in_range(rows, n, "field_partition");
  if (n % 4 != 0) throw domain_error("field_partition: order must be a multiple of 4");
  int w = m.row_words();
  auto bj = m.row_bits(rows[0]);
  auto bk = m.row_bits(rows[1]);
  auto bl = m.row_bits(rows[2]);

  FieldPartition fp;
  fp.defining_rows = rows;
  fp.field_of.assign(n, 0);
  for (int c = 0; c < n; ++c) {
    int k = c / 64, s = c % 64;
    // x = 1 means the pair product is -1 at this column.
    int x1 = static_cast<int>(((bj[k] ^ bk[k]) >> s) & 1);
    int x2 = static_cast<int>(((bj[k] ^ bl[k]) >> s) & 1);
    int f = x1 + 2 * x2;  // (+,+)=0, (-,+)=1, (+,-)=2, (-,-)=3
    fp.field_of[c] = static_cast<int8_t>(f);
    fp.fields[f].push_back(c);
  }
  for (const auto& f : fp.fields)
    if (static_cast<int>(f.size()) != n / 4)
      throw domain_error("field_partition: field sizes differ from n/4 (matrix is not Hadamard)");
  (void)w;
  return fp;
}

namespace {

Quadruple type_of_product(const HadamardMatrix& m, std::array<int, 4> idx, Axis axis,
                          std::span<const uint64_t> prod) {
  int n = m.order();
  int ones = 0;
  for (uint64_t x : prod) ones += std::popcount(x);
  int minority = std::min(ones, n - ones);
  if (minority % 4 != 0)
    throw domain_error("quadruple type: minority count not a multiple of 4 (matrix is not Hadamard)");
  Quadruple q;
  q.indices = idx;
  std::sort(q.indices.begin(), q.indices.end());
  q.axis = axis;
  q.type_r = minority / 4;
  if (q.type_r == 1) {
    // Minority positions; on a 4-4 tie (n = 8) take the -1 side.
    bool minority_is_ones = ones < n - ones;
    std::vector<int> pos;
    pos.reserve(4);
    if (minority_is_ones) {
      collect_positions(prod, n, pos);
    } else {
      std::vector<uint64_t> inv(prod.size());
      for (size_t k = 0; k < prod.size(); ++k) inv[k] = ~prod[k];
      inv.back() &= tail_mask(n);
      collect_positions(inv, n, pos);
    }
    std::array<int, 4> cross{pos[0], pos[1], pos[2], pos[3]};
    q.hall_cross = cross;
  }
  return q;
}

}  // namespace

Quadruple quadruple_type(const HadamardMatrix& m, std::array<int, 4> indices, Axis axis) {
  const HadamardMatrix work = axis == Axis::rows ? m : m.transposed();
  int n = work.order();
  check_distinct_in_range(indices, n, "quadruple_type");
  int w = work.row_words();
  std::vector<uint64_t> prod(w, 0);
  for (int r : indices) {
    auto b = work.row_bits(r);
    for (int k = 0; k < w; ++k) prod[k] ^= b[k];
  }
  for (auto& x : prod) x = ~x;  // even number of factors
  prod[w - 1] &= tail_mask(n);
  return type_of_product(work, indices, axis, prod);
}

std::vector<Quadruple> find_closed_quadruples(const HadamardMatrix& m, Axis axis) {
  return closed_quadruple_census(m, axis).closed;
}

QuadrupleCensus closed_quadruple_census(const HadamardMatrix& m, Axis axis) {
  const HadamardMatrix work = axis == Axis::rows ? m : m.transposed();
  int n = work.order();
  int w = work.row_words();
  QuadrupleCensus out;
  out.closed_per_line.assign(n, 0);
  out.hall_per_line.assign(n, 0);
  if (n < 4) return out;

  // Pair products up to global sign: (i,j,k,l) is closed iff the products of
  // rows (i,j) and (k,l) agree up to negation. Normalize each product so its
  // first bit is set, then join equal keys.
  std::map<std::vector<uint64_t>, std::vector<std::pair<int, int>>> groups;
  std::vector<uint64_t> key(w);
  for (int i = 0; i < n; ++i) {
    auto a = work.row_bits(i);
    for (int j = i + 1; j < n; ++j) {
      auto b = work.row_bits(j);
      for (int k = 0; k < w; ++k) key[k] = ~(a[k] ^ b[k]);
      key[w - 1] &= tail_mask(n);
      if (!(key[0] & 1)) {
        for (auto& x : key) x = ~x;
        key[w - 1] &= tail_mask(n);
      }
      groups[key].push_back({i, j});
    }
  }
  for (const auto& [k, pairs] : groups) {
    size_t g = pairs.size();
    if (g < 2) continue;
    for (size_t a = 0; a < g; ++a)
      for (size_t b = a + 1; b < g; ++b) {
        std::array<int, 4> q{pairs[a].first, pairs[a].second, pairs[b].first, pairs[b].second};
        std::sort(q.begin(), q.end());
        // Each closed quadruple matches under all three of its 2+2 pairings;
        // keep the pairing that couples the two smallest indices.
        bool smallest_coupled = (pairs[a].first == q[0] && pairs[a].second == q[1]) ||
                                (pairs[b].first == q[0] && pairs[b].second == q[1]);
        if (!smallest_coupled) continue;
        Quadruple cq;
        cq.indices = q;
        cq.axis = axis;
        cq.type_r = 0;
        out.closed.push_back(cq);
        for (int idx : q) out.closed_per_line[idx]++;
      }
  }
  std::sort(out.closed.begin(), out.closed.end(),
            [](const Quadruple& x, const Quadruple& y) { return x.indices < y.indices; });
  return out;
}

QuadrupleCensus quadruple_census(const HadamardMatrix& m, Axis axis) {
  const HadamardMatrix work = axis == Axis::rows ? m : m.transposed();
  int n = work.order();
  int w = work.row_words();
  QuadrupleCensus out;
  out.closed_per_line.assign(n, 0);
  out.hall_per_line.assign(n, 0);
  if (n < 4) return out;

  std::vector<uint64_t> pij(w), pijk(w), prod(w);
  for (int i = 0; i < n; ++i) {
    auto bi = work.row_bits(i);
    for (int j = i + 1; j < n; ++j) {
      auto bj = work.row_bits(j);
      for (int k = 0; k < w; ++k) pij[k] = bi[k] ^ bj[k];
      for (int k = j + 1; k < n; ++k) {
        auto bk = work.row_bits(k);
        for (int t = 0; t < w; ++t) pijk[t] = pij[t] ^ bk[t];
        for (int l = k + 1; l < n; ++l) {
          auto bl = work.row_bits(l);
          int ones = 0;
          for (int t = 0; t < w; ++t) {
            prod[t] = ~(pijk[t] ^ bl[t]);
            if (t == w - 1) prod[t] &= tail_mask(n);
            ones += std::popcount(prod[t]);
          }
          int minority = std::min(ones, n - ones);
          if (minority % 4 != 0)
            throw domain_error("quadruple census: matrix is not Hadamard");
          int r = minority / 4;
          if (r == 0) {
            Quadruple q;
            q.indices = {i, j, k, l};
            q.axis = axis;
            q.type_r = 0;
            out.closed.push_back(q);
            out.closed_per_line[i]++;
            out.closed_per_line[j]++;
            out.closed_per_line[k]++;
            out.closed_per_line[l]++;
          } else if (r == 1) {
            Quadruple q = type_of_product(work, {i, j, k, l}, axis, prod);
            out.hall.push_back(q);
            out.hall_per_line[i]++;
            out.hall_per_line[j]++;
            out.hall_per_line[k]++;
            out.hall_per_line[l]++;
          }
        }
      }
    }
  }
  return out;
}

std::vector<Quadruple> find_hall_sets(const HadamardMatrix& m, Axis axis) {
  auto census = quadruple_census(m, axis);
  // For n = 4 (mod 8) the four cross positions form a type-1 quadruple on the
  // other axis; a violation means the input is inconsistent.
  int n = m.order();
  if (n % 8 == 4) {
    Axis other = axis == Axis::rows ? Axis::columns : Axis::rows;
    for (const auto& q : census.hall) {
      if (!q.hall_cross) throw domain_error("find_hall_sets: missing cross positions");
      Quadruple dual = quadruple_type(m, *q.hall_cross, other);
      if (dual.type_r != 1)
        throw domain_error("find_hall_sets: cross positions do not form a type-1 quadruple");
    }
  }
  return std::move(census.hall);
}

std::vector<long long> type_histogram(const HadamardMatrix& m, Axis axis) {
  const HadamardMatrix work = axis == Axis::rows ? m : m.transposed();
  int n = work.order();
  int w = work.row_words();
  std::vector<long long> hist(n / 8 + 2, 0);
  if (n < 4) return hist;
  std::vector<uint64_t> pij(w), pijk(w);
  for (int i = 0; i < n; ++i) {
    auto bi = work.row_bits(i);
    for (int j = i + 1; j < n; ++j) {
      auto bj = work.row_bits(j);
      for (int k = 0; k < w; ++k) pij[k] = bi[k] ^ bj[k];
      for (int k = j + 1; k < n; ++k) {
        auto bk = work.row_bits(k);
        for (int t = 0; t < w; ++t) pijk[t] = pij[t] ^ bk[t];
        for (int l = k + 1; l < n; ++l) {
          auto bl = work.row_bits(l);
          int ones = 0;
          for (int t = 0; t < w; ++t) {
            uint64_t p = ~(pijk[t] ^ bl[t]);
            if (t == w - 1) p &= tail_mask(n);
            ones += std::popcount(p);
          }
          int minority = std::min(ones, n - ones);
          if (minority % 4 != 0) throw domain_error("type histogram: matrix is not Hadamard");
          hist[minority / 4]++;
        }
      }
    }
  }
  return hist;
}

}  // namespace had
