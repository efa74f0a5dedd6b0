#pragma once

#include <array>
#include <vector>

#include "had/structure.hpp"

namespace had {

enum class SwitchKind { closed_row_quad, closed_col_quad, hall_set };

struct SwitchMove {
  SwitchKind kind = SwitchKind::closed_row_quad;
  std::array<int, 4> indices{};
  int field = 1;  // 1..4 in the deterministic field order
};

// Dense {-1,+1} block used as a replacement in substitute_block.
struct SignBlock {
  int rows = 0;
  int cols = 0;
  std::vector<int8_t> entries;  // row-major

  int at(int r, int c) const { return entries[static_cast<size_t>(r) * cols + c]; }
};

// Negates the entries of the four quadruple lines inside the chosen field
// (field is 1..4). Column quadruples delegate through the transpose.
HadamardMatrix switch_closed_quadruple(const HadamardMatrix& m, const Quadruple& q, int field,
                                       Axis axis);

// Hall-set switching for n = 4 (mod 8): negates the off-cross block of the
// chosen field in the Hall rows, and the cross columns in the paired row
// group. Produces the same matrix as the normal-form reference below.
HadamardMatrix switch_hall_set(const HadamardMatrix& m, const Quadruple& q, int field);

// Slow reference: signed-permute into the block normal form with the Hall
// rows/columns leading, negate the F/G blocks there, and permute back. Kept
// for differential testing of switch_hall_set.
HadamardMatrix switch_hall_set_via_normal_form(const HadamardMatrix& m, const Quadruple& q,
                                               int field);

// Replaces the named rows with the given block after checking the defining
// Gram condition B^T B = A^T A in exact integer arithmetic.
HadamardMatrix substitute_block(const HadamardMatrix& m, std::span<const int> rowSet,
                                const SignBlock& replacement);

// Builds [[A,B],[A,-B]], switches the closed quadruple (i, j, i+n, j+n) on
// the field where rows i and j of B differ, and reports whether the result
// equals [[A,B'],[A,-B']] with rows i and j of B swapped.
bool doubled_swap_equivalence_check(const HadamardMatrix& a, const HadamardMatrix& b, int i, int j);

HadamardMatrix apply_switch(const HadamardMatrix& m, const SwitchMove& move);

}  // namespace had
