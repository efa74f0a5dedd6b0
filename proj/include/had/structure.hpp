#pragma once

#include <array>
#include <optional>
#include <vector>

#include "had/matrix.hpp"

namespace had {

enum class Axis { rows, columns };

// Partition of the columns into four classes of size n/4, induced by three
// rows. Class membership is decided by the sign pattern of the two pair
// products (h_j*h_k, h_j*h_l) per column, which does not change under column
// negation, in the fixed order (+,+), (-,+), (+,-), (-,-).
struct FieldPartition {
  std::array<std::vector<int>, 4> fields;  // ascending column indices
  std::vector<int8_t> field_of;            // n entries in 0..3
  std::array<int, 3> defining_rows;
};

// A set of four row (or column) indices with its type r. A quadruple is of
// type r when the entrywise product of the four lines carries the minority
// sign exactly 4r times. Type 0 = closed, type 1 = Hall set; a Hall set's
// four minority positions (one per field) are recorded in hall_cross.
struct Quadruple {
  std::array<int, 4> indices{};  // ascending
  Axis axis = Axis::rows;
  int type_r = 0;
  // For a row Hall set these are the Hall columns; for a column Hall set,
  // the Hall rows.
  std::optional<std::array<int, 4>> hall_cross;
};

// Incidence counts used by invariants and the canonical-form pre-split.
struct QuadrupleCensus {
  std::vector<Quadruple> closed;      // type 0, lexicographic
  std::vector<Quadruple> hall;        // type 1, lexicographic
  std::vector<int> closed_per_line;   // per row (or column) incidence
  std::vector<int> hall_per_line;
};

// Negates columns so that the product of the three chosen rows is the all +1
// vector. Returns the normalized matrix and the per-column signs applied.
std::pair<HadamardMatrix, std::vector<int8_t>> three_normalize(const HadamardMatrix& m,
                                                               std::array<int, 3> rows);

FieldPartition field_partition(const HadamardMatrix& m, std::array<int, 3> rows);

Quadruple quadruple_type(const HadamardMatrix& m, std::array<int, 4> indices, Axis axis);

// All type-0 quadruples on the chosen axis, found by hashing the pair
// products h_i*h_j up to global sign and joining equal pairs.
std::vector<Quadruple> find_closed_quadruples(const HadamardMatrix& m, Axis axis);

// All type-1 quadruples on the chosen axis, by exhaustive typing, with
// hall_cross populated.
std::vector<Quadruple> find_hall_sets(const HadamardMatrix& m, Axis axis);

// Closed quadruples together with per-line incidence counts (cheap path).
QuadrupleCensus closed_quadruple_census(const HadamardMatrix& m, Axis axis);

// Full census by exhaustive typing: closed and Hall quadruples plus
// incidences. Intended for n <= 40 or so.
QuadrupleCensus quadruple_census(const HadamardMatrix& m, Axis axis);

// hist[r] = number of quadruples of type r on the chosen axis.
std::vector<long long> type_histogram(const HadamardMatrix& m, Axis axis);

}  // namespace had
