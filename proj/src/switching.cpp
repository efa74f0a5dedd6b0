#include "had/switching.hpp"

#include <algorithm>
#include <bit>

#include "had/constructions.hpp"

namespace had {

namespace {

std::vector<uint64_t> copy_rows(const HadamardMatrix& m) {
  int n = m.order(), w = m.row_words();
  std::vector<uint64_t> rows(static_cast<size_t>(n) * w);
  for (int r = 0; r < n; ++r) {
    auto b = m.row_bits(r);
    std::copy(b.begin(), b.end(), rows.begin() + static_cast<size_t>(r) * w);
  }
  return rows;
}

std::vector<uint64_t> column_mask(int n, std::span<const int> cols) {
  std::vector<uint64_t> mask(words_for(n), 0);
  for (int c : cols) mask[static_cast<size_t>(c) / 64] |= uint64_t{1} << (c % 64);
  return mask;
}

// Hall-set geometry in the raw matrix: the signs, cross pairing, and block
// classification that a signed permutation to the block normal form would
// produce. The 4x4 cross submatrix admits several sign frames (the pairing
// is only determined up to double transpositions); any one frame works, the
// block pairing between column fields and row groups comes out the same, so
// the solver keeps the first frame it finds.
struct HallFrame {
  std::array<int, 4> q;        // Hall rows, ascending
  std::array<int, 4> w;        // Hall columns, ordered so w[i] pairs q[i]
  std::array<int, 4> delta_q;  // row signs for the Hall rows
  std::array<int, 4> eps_w;    // column signs for the Hall columns
  std::array<int, 4> block_of_field;  // field f (0..3) -> block index (0..3)
  FieldPartition fields;
  std::vector<int8_t> row_group;  // per row: block index 0..3, or -1 for Hall rows
  std::vector<int8_t> delta_row;  // per row sign (Hall rows included)
  std::vector<int8_t> eps_col;    // per column sign
};

// Sign patterns of the row blocks on the ordered Hall columns in the normal
// form, block index 0..3.
constexpr std::array<std::array<int, 4>, 4> kGroupPattern = {{
    {+1, +1, +1, +1},
    {-1, +1, +1, -1},
    {-1, +1, -1, +1},
    {+1, +1, -1, -1},
}};

// Sign patterns of the column blocks on the Hall rows in the normal form.
constexpr std::array<std::array<int, 4>, 4> kFieldPattern = {{
    {+1, +1, +1, +1},
    {+1, -1, -1, +1},
    {+1, -1, +1, -1},
    {-1, -1, +1, +1},
}};

HallFrame hall_frame(const HadamardMatrix& m, const Quadruple& q) {
  int n = m.order();
  if (n % 8 != 4) throw domain_error("hall switch: order must be 4 (mod 8)");
  if (q.axis != Axis::rows) throw domain_error("hall switch: quadruple must be on rows");
  Quadruple checked = quadruple_type(m, q.indices, Axis::rows);
  if (checked.type_r != 1) throw domain_error("hall switch: quadruple is not a Hall set");
  if (!checked.hall_cross) throw domain_error("hall switch: missing Hall columns");

  HallFrame fr;
  fr.q = checked.indices;
  std::array<int, 4> cross = *checked.hall_cross;
  fr.fields = field_partition(m, {fr.q[0], fr.q[1], fr.q[2]});

  // Find a frame (row signs, column signs, pairing) taking the 4x4 cross
  // submatrix to the form with +1 on the paired diagonal and -1 elsewhere.
  bool solved = false;
  for (int w0 = 0; w0 < 4 && !solved; ++w0) {
    std::array<int, 4> perm{};  // perm[i] = index into cross paired with q[i]
    std::array<int, 4> eps{};
    std::array<int, 4> delta{};
    perm[0] = w0;
    delta[0] = 1;
    for (int c = 0; c < 4; ++c) eps[c] = m.entry(fr.q[0], cross[c]) * (c == w0 ? 1 : -1);
    std::array<bool, 4> used{};
    used[w0] = true;
    bool ok = true;
    for (int i = 1; i < 4 && ok; ++i) {
      int plus_count = 0, plus_pos = -1, minus_pos = -1;
      for (int c = 0; c < 4; ++c) {
        int v = eps[c] * m.entry(fr.q[i], cross[c]);
        if (v > 0) {
          plus_count++;
          plus_pos = c;
        } else {
          minus_pos = c;
        }
      }
      int pos;
      if (plus_count == 1) {
        delta[i] = 1;
        pos = plus_pos;
      } else if (plus_count == 3) {
        delta[i] = -1;
        pos = minus_pos;
      } else {
        ok = false;
        break;
      }
      if (used[pos]) {
        ok = false;
        break;
      }
      used[pos] = true;
      perm[i] = pos;
    }
    if (!ok) continue;
    solved = true;
    for (int i = 0; i < 4; ++i) {
      fr.w[i] = cross[perm[i]];
      fr.eps_w[i] = eps[perm[i]];
      fr.delta_q[i] = delta[i];
    }
  }
  if (!solved)
    throw domain_error("hall switch: Hall submatrix does not have the expected structure");

  // Classify the non-Hall rows by their signed pattern on the ordered Hall
  // columns, and record the row sign that realizes the pattern.
  fr.row_group.assign(n, -1);
  fr.delta_row.assign(n, 1);
  for (int i = 0; i < 4; ++i) fr.delta_row[fr.q[i]] = static_cast<int8_t>(fr.delta_q[i]);
  std::array<int, 4> group_size{};
  for (int r = 0; r < n; ++r) {
    if (r == fr.q[0] || r == fr.q[1] || r == fr.q[2] || r == fr.q[3]) continue;
    std::array<int, 4> x{};
    for (int i = 0; i < 4; ++i) x[i] = fr.eps_w[i] * m.entry(r, fr.w[i]);
    int hit = -1, sign = 0;
    for (int g = 0; g < 4; ++g) {
      bool pos = true, neg = true;
      for (int i = 0; i < 4; ++i) {
        if (x[i] != kGroupPattern[g][i]) pos = false;
        if (x[i] != -kGroupPattern[g][i]) neg = false;
      }
      if (pos || neg) {
        if (hit >= 0) throw domain_error("hall switch: ambiguous row pattern");
        hit = g;
        sign = pos ? 1 : -1;
      }
    }
    if (hit < 0) throw domain_error("hall switch: row pattern outside the Hall structure");
    fr.row_group[r] = static_cast<int8_t>(hit);
    fr.delta_row[r] = static_cast<int8_t>(sign);
    group_size[hit]++;
  }
  for (int g = 0; g < 4; ++g)
    if (group_size[g] != (n - 4) / 4)
      throw domain_error("hall switch: row groups have the wrong sizes");

  // Classify every non-cross column by the signed pattern of the Hall rows;
  // the block index must be constant inside each field and the field-block
  // correspondence a bijection.
  fr.eps_col.assign(n, 1);
  for (int i = 0; i < 4; ++i) fr.eps_col[fr.w[i]] = static_cast<int8_t>(fr.eps_w[i]);
  std::array<int, 4> blk{-1, -1, -1, -1};
  for (int c = 0; c < n; ++c) {
    if (c == fr.w[0] || c == fr.w[1] || c == fr.w[2] || c == fr.w[3]) continue;
    std::array<int, 4> y{};
    for (int i = 0; i < 4; ++i) y[i] = fr.delta_q[i] * m.entry(fr.q[i], c);
    int hit = -1, sign = 0;
    for (int p = 0; p < 4; ++p) {
      bool pos = true, neg = true;
      for (int i = 0; i < 4; ++i) {
        if (y[i] != kFieldPattern[p][i]) pos = false;
        if (y[i] != -kFieldPattern[p][i]) neg = false;
      }
      if (pos || neg) {
        if (hit >= 0) throw domain_error("hall switch: ambiguous column pattern");
        hit = p;
        sign = pos ? 1 : -1;
      }
    }
    if (hit < 0) throw domain_error("hall switch: column pattern outside the Hall structure");
    int f = fr.fields.field_of[c];
    if (blk[f] < 0)
      blk[f] = hit;
    else if (blk[f] != hit)
      throw domain_error("hall switch: field maps to two different blocks");
    fr.eps_col[c] = static_cast<int8_t>(sign);
  }
  bool bijective = true;
  std::array<bool, 4> seen{};
  for (int f = 0; f < 4; ++f) {
    if (blk[f] < 0 || seen[blk[f]]) bijective = false;
    else seen[blk[f]] = true;
  }
  if (!bijective) throw domain_error("hall switch: field/block pairing is not a bijection");
  for (int f = 0; f < 4; ++f) fr.block_of_field[f] = blk[f];
  return fr;
}

int cross_in_field(const HallFrame& fr, int f) {
  for (int i = 0; i < 4; ++i)
    if (fr.fields.field_of[fr.w[i]] == f) return fr.w[i];
  throw domain_error("hall switch: field has no Hall column");
}

}  // namespace

HadamardMatrix switch_closed_quadruple(const HadamardMatrix& m, const Quadruple& q, int field,
                                       Axis axis) {
  if (field < 1 || field > 4) throw domain_error("switch: field must be 1..4");
  const HadamardMatrix work = axis == Axis::rows ? m : m.transposed();
  Quadruple checked = quadruple_type(work, q.indices, Axis::rows);
  if (checked.type_r != 0) throw domain_error("switch: quadruple is not closed");
  auto fp = field_partition(work, {checked.indices[0], checked.indices[1], checked.indices[2]});
  auto mask = column_mask(work.order(), fp.fields[field - 1]);
  auto rows = copy_rows(work);
  int w = work.row_words();
  for (int r : checked.indices)
    for (int k = 0; k < w; ++k) rows[static_cast<size_t>(r) * w + k] ^= mask[k];
  auto out = HadamardMatrix::from_packed(work.order(), std::move(rows));
  if (!out.is_valid()) throw domain_error("switch: result failed verification");
  return axis == Axis::rows ? out : out.transposed();
}

HadamardMatrix switch_hall_set(const HadamardMatrix& m, const Quadruple& q, int field) {
  if (field < 1 || field > 4) throw domain_error("switch: field must be 1..4");
  auto fr = hall_frame(m, q);
  int f = field - 1;
  int n = m.order(), w = m.row_words();

  // Negate the chosen field's non-cross columns in the Hall rows.
  std::vector<int> fcols;
  int wf = cross_in_field(fr, f);
  for (int c : fr.fields.fields[f])
    if (c != wf) fcols.push_back(c);
  auto fmask = column_mask(n, fcols);
  // Negate the Hall columns in the paired row block.
  std::array<int, 4> warr = fr.w;
  auto wmask = column_mask(n, warr);

  auto rows = copy_rows(m);
  for (int r : fr.q)
    for (int k = 0; k < w; ++k) rows[static_cast<size_t>(r) * w + k] ^= fmask[k];
  int block = fr.block_of_field[f];
  for (int r = 0; r < n; ++r)
    if (fr.row_group[r] == block)
      for (int k = 0; k < w; ++k) rows[static_cast<size_t>(r) * w + k] ^= wmask[k];

  auto out = HadamardMatrix::from_packed(n, std::move(rows));
  if (!out.is_valid()) throw domain_error("hall switch: result failed verification");
  return out;
}

HadamardMatrix switch_hall_set_via_normal_form(const HadamardMatrix& m, const Quadruple& q,
                                               int field) {
  if (field < 1 || field > 4) throw domain_error("switch: field must be 1..4");
  auto fr = hall_frame(m, q);
  int n = m.order();
  int k = (n - 4) / 4;
  const auto& eps = fr.eps_col;

  // Row and column orders: Hall lines first, then blocks in order, ascending
  // inside each block. Column blocks follow the row-block pairing.
  std::vector<int> row_order(fr.q.begin(), fr.q.end());
  for (int g = 0; g < 4; ++g)
    for (int r = 0; r < n; ++r)
      if (fr.row_group[r] == g) row_order.push_back(r);
  std::vector<int> col_order(fr.w.begin(), fr.w.end());
  std::array<int, 4> field_of_block{};
  for (int f = 0; f < 4; ++f) field_of_block[fr.block_of_field[f]] = f;
  for (int g = 0; g < 4; ++g) {
    int f = field_of_block[g];
    int wf = cross_in_field(fr, f);
    for (int c : fr.fields.fields[f])
      if (c != wf) col_order.push_back(c);
  }

  // Build the normalized matrix and check the block shape it must have.
  std::vector<int> norm(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int r = row_order[i], c = col_order[j];
      norm[static_cast<size_t>(i) * n + j] = fr.delta_row[r] * eps[c] * m.entry(r, c);
    }
  auto nm = [&](int i, int j) -> int& { return norm[static_cast<size_t>(i) * n + j]; };
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (nm(i, j) != (i == j ? 1 : -1)) throw domain_error("hall switch: normal form check failed (corner)");
  for (int i = 0; i < 4; ++i)
    for (int g = 0; g < 4; ++g)
      for (int t = 0; t < k; ++t) {
        if (nm(i, 4 + g * k + t) != kFieldPattern[g][i])
          throw domain_error("hall switch: normal form check failed (column blocks)");
        if (nm(4 + g * k + t, i) != kGroupPattern[g][i])
          throw domain_error("hall switch: normal form check failed (row blocks)");
      }
  for (int gi = 0; gi < 4; ++gi)
    for (int gj = 0; gj < 4; ++gj) {
      int expect = gi == gj ? 2 : 0;
      for (int t = 0; t < k; ++t) {
        int rs = 0, cs = 0;
        for (int u = 0; u < k; ++u) {
          rs += nm(4 + gi * k + t, 4 + gj * k + u);
          cs += nm(4 + gi * k + u, 4 + gj * k + t);
        }
        if (rs != expect || cs != expect)
          throw domain_error("hall switch: normal form check failed (inner sums)");
      }
    }

  // Negate the F and G blocks of the chosen field's block index.
  int g = fr.block_of_field[field - 1];
  for (int i = 0; i < 4; ++i)
    for (int t = 0; t < k; ++t) nm(i, 4 + g * k + t) = -nm(i, 4 + g * k + t);
  for (int t = 0; t < k; ++t)
    for (int j = 0; j < 4; ++j) nm(4 + g * k + t, j) = -nm(4 + g * k + t, j);

  // Map back through the signed permutation.
  std::vector<int> e(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int r = row_order[i], c = col_order[j];
      e[static_cast<size_t>(r) * n + c] = fr.delta_row[r] * eps[c] * nm(i, j);
    }
  auto out = HadamardMatrix::from_entries(n, e);
  if (!out.is_valid()) throw domain_error("hall switch: result failed verification");
  return out;
}

HadamardMatrix substitute_block(const HadamardMatrix& m, std::span<const int> rowSet,
                                const SignBlock& replacement) {
  int n = m.order();
  int k = static_cast<int>(rowSet.size());
  std::vector<char> seen(n, 0);
  for (int r : rowSet) {
    if (r < 0 || r >= n) throw domain_error("substitute_block: row index out of range");
    if (seen[r]) throw domain_error("substitute_block: duplicate row index");
    seen[r] = 1;
  }
  if (replacement.rows != k || replacement.cols != n)
    throw domain_error("substitute_block: replacement dimension mismatch");
  for (int8_t v : replacement.entries)
    if (v != 1 && v != -1) throw domain_error("substitute_block: entries must be +1 or -1");

  // Gram condition B^T B = A^T A, exact.
  for (int c1 = 0; c1 < n; ++c1)
    for (int c2 = c1; c2 < n; ++c2) {
      int ga = 0, gb = 0;
      for (int t = 0; t < k; ++t) {
        ga += m.entry(rowSet[t], c1) * m.entry(rowSet[t], c2);
        gb += replacement.at(t, c1) * replacement.at(t, c2);
      }
      if (ga != gb) throw domain_error("substitute_block: Gram condition B^T B = A^T A fails");
    }

  auto rows = copy_rows(m);
  int w = m.row_words();
  for (int t = 0; t < k; ++t) {
    uint64_t* dst = rows.data() + static_cast<size_t>(rowSet[t]) * w;
    std::fill(dst, dst + w, 0);
    for (int c = 0; c < n; ++c)
      if (replacement.at(t, c) > 0) dst[c / 64] |= uint64_t{1} << (c % 64);
  }
  auto out = HadamardMatrix::from_packed(n, std::move(rows));
  if (m.is_valid() && !out.is_valid())
    throw domain_error("substitute_block: result failed verification");
  return out;
}

bool doubled_swap_equivalence_check(const HadamardMatrix& a, const HadamardMatrix& b, int i, int j) {
  int n = a.order();
  if (b.order() != n) throw domain_error("doubled_swap_equivalence_check: order mismatch");
  if (i == j || i < 0 || j < 0 || i >= n || j >= n)
    throw domain_error("doubled_swap_equivalence_check: need two distinct row indices");
  if (!a.is_valid() || !b.is_valid())
    throw domain_error("doubled_swap_equivalence_check: inputs must be Hadamard");

  std::vector<int> id(n);
  for (int t = 0; t < n; ++t) id[t] = t;
  auto h = doubled(a, b, id, false);

  Quadruple q;
  q.indices = {i, j, i + n, j + n};
  std::sort(q.indices.begin(), q.indices.end());
  q.axis = Axis::rows;

  // The field to negate is the set of columns where rows i and j of B differ.
  auto fp = field_partition(h, {q.indices[0], q.indices[1], q.indices[2]});
  int probe = -1;
  for (int c = 0; c < n && probe < 0; ++c)
    if (b.entry(i, c) != b.entry(j, c)) probe = n + c;
  if (probe < 0) return false;
  int f = fp.field_of[probe];
  for (int c = 0; c < n; ++c) {
    bool differs = b.entry(i, c) != b.entry(j, c);
    if ((fp.field_of[n + c] == f) != differs) return false;
    if (fp.field_of[c] == f) return false;
  }

  auto switched = switch_closed_quadruple(h, q, f + 1, Axis::rows);

  std::vector<int> swapped(n);
  for (int t = 0; t < n; ++t) swapped[t] = t;
  std::swap(swapped[i], swapped[j]);
  auto expected = doubled(a, b, swapped, false);
  return switched == expected;
}

HadamardMatrix apply_switch(const HadamardMatrix& m, const SwitchMove& move) {
  Quadruple q;
  q.indices = move.indices;
  std::sort(q.indices.begin(), q.indices.end());
  switch (move.kind) {
    case SwitchKind::closed_row_quad:
      q.axis = Axis::rows;
      return switch_closed_quadruple(m, q, move.field, Axis::rows);
    case SwitchKind::closed_col_quad:
      q.axis = Axis::columns;
      return switch_closed_quadruple(m, q, move.field, Axis::columns);
    case SwitchKind::hall_set:
      q.axis = Axis::rows;
      return switch_hall_set(m, q, move.field);
  }
  throw domain_error("apply_switch: unknown kind");
}

}  // namespace had
