#pragma once

#include <array>
#include <map>
#include <optional>
#include <vector>

#include "had/bigint.hpp"
#include "had/structure.hpp"

namespace had {

struct IntMatrix {
  int n = 0;
  std::vector<BigInt> a;  // row-major n*n

  static IntMatrix zero(int n) {
    IntMatrix m;
    m.n = n;
    m.a.assign(static_cast<size_t>(n) * n, BigInt());
    return m;
  }
  BigInt& at(int r, int c) { return a[static_cast<size_t>(r) * n + c]; }
  const BigInt& at(int r, int c) const { return a[static_cast<size_t>(r) * n + c]; }
};

IntMatrix to_int_matrix(const HadamardMatrix& m);

// Ordered invariant factors s_1..s_n; for order 36 Hadamard matrices the
// derived Smith class alpha is populated.
struct SmithForm {
  std::vector<BigInt> factors;
  std::optional<int> smith_alpha;

  std::vector<long long> factors_int64() const;
};

// Exact elimination with smallest-nonzero-entry pivoting; factors satisfy the
// divisibility chain and diag(factors) is integer equivalent to the input.
SmithForm smith_normal_form(const IntMatrix& m);

// alpha = number of invariant factors equal to 2 for an order-36 Hadamard
// matrix; checks the full factor pattern (1, 2^a, 6^(34-2a), 18^a, 36).
int smith_class(const HadamardMatrix& m);

struct CodeSummary {
  int dimension = 0;
  bool self_orthogonal = false;
  bool self_dual = false;
  long long weight4_count = 0;
  std::optional<std::map<int, long long>> weight_enumerator;  // when dimension <= 26
};

// Binary code: normalize so line 0 is all +1, map -1 -> 0, span over GF(2).
// axis selects row span (rows) or the span of the columns (computed on the
// transpose).
CodeSummary binary_code_summary(const HadamardMatrix& m, Axis axis);

// Supports of all weight-4 codewords, ascending index quadruples, sorted.
std::vector<std::array<int, 4>> weight4_supports(const HadamardMatrix& m, Axis axis);

// span of the axis-code of `inner` contained in the span for `outer`.
bool code_subspace_of(const HadamardMatrix& inner, const HadamardMatrix& outer, Axis axis);

// True iff the weight-4 supports of the column code equal the closed row
// quadruples; requires n = 0 (mod 8).
bool weight4_vs_closed_quadruples(const HadamardMatrix& m);

enum class CodeInclusion { equal, proper_subspace_by_weight4_vector };

// For h with self-dual column code and hPrime a one-quadruple switch of h:
// verifies C' subset of C and classifies the inclusion.
CodeInclusion code_inclusion_check(const HadamardMatrix& h, const HadamardMatrix& hPrime);

// n = 8 (mod 16): switches every closed row quadruple and reports whether all
// results have the same closed-row-quadruple count as the input.
bool closed_quadruple_count_invariance_check(const HadamardMatrix& h);

}  // namespace had
