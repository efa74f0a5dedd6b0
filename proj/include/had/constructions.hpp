#pragma once

#include <vector>

#include "had/matrix.hpp"

namespace had {

// Sylvester matrix of order 2^k: entry (i,j) = (-1)^popcount(i AND j).
HadamardMatrix sylvester(int k);

// Paley constructions. Type 1 needs a prime power q = 3 (mod 4) and yields
// order q+1 with an all +1 border row/column and quadratic-character core.
// Type 2 needs q = 1 (mod 4) and yields order 2(q+1).
// Prime powers are supported for any prime q and for q in {9, 25, 27, 49}.
HadamardMatrix paley(int q, int type);

// Doubling: plain shape [[A, PB], [A, -PB]] or tilde shape [[A, A], [BP, -BP]],
// where P is the permutation matrix with row i of PB equal to row perm[i] of B.
HadamardMatrix doubled(const HadamardMatrix& a, const HadamardMatrix& b,
                       const std::vector<int>& perm, bool tilde);

}  // namespace had
