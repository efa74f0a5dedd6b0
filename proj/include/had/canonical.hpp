#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "had/matrix.hpp"

namespace had {

// The 4n-vertex colored graph whose isomorphism class captures Hadamard
// equivalence. Vertices 0..n-1 are r_i^+, n..2n-1 are r_i^-, 2n..3n-1 are
// c_j^+, 3n..4n-1 are c_j^-. A +1 entry joins like signs, a -1 entry joins
// opposite signs, and each +/- pair is joined by a pairing edge. Row
// vertices and column vertices form separate color classes.
struct EquivalenceGraph {
  int n = 0;
  int vcount = 0;
  int words = 0;
  std::vector<uint64_t> adj;   // vcount stripes of `words` words
  std::vector<int> color;     // initial color per vertex
  // Closed-quadruple / Hall-set incidence per pair of lines, used as a
  // refinement invariant once single lines get pinned. Indexed i*n+j for
  // rows and columns separately; cross_pair_inv couples row i with column j
  // through Hall-set cross positions.
  std::vector<int64_t> row_pair_inv;
  std::vector<int64_t> col_pair_inv;
  std::vector<int64_t> cross_pair_inv;
  // Bit-packed matrix lines for quadruple-type lookups during refinement.
  int line_words = 0;
  std::vector<uint64_t> row_lines;
  std::vector<uint64_t> col_lines;

  bool adjacent(int u, int v) const {
    return (adj[static_cast<size_t>(u) * words + static_cast<size_t>(v) / 64] >> (v % 64)) & 1;
  }
  // Pair invariant between the lines of two vertices.
  int64_t pair_invariant(int u, int v) const {
    bool ucol = u >= 2 * n, vcol = v >= 2 * n;
    if (ucol != vcol) {
      int r = ucol ? v % n : u % n;
      int c = ucol ? u % n : v % n;
      return cross_pair_inv[static_cast<size_t>(r) * n + c];
    }
    const auto& m = ucol ? col_pair_inv : row_pair_inv;
    return m[static_cast<size_t>(u % n) * n + (v % n)];
  }
  long long edge_count() const;
};

EquivalenceGraph to_graph(const HadamardMatrix& m);

// Byte string equal for two matrices iff they are Hadamard equivalent:
// two big-endian bytes of n, then the bit-packed rows of the canonical
// representative, one row per ceil(n/8) bytes, most significant bit first.
class CanonicalKey {
 public:
  CanonicalKey() = default;
  explicit CanonicalKey(std::string bytes) : bytes_(std::move(bytes)) {}

  const std::string& bytes() const { return bytes_; }
  int order() const;
  std::string hex() const;
  static CanonicalKey from_hex(const std::string& hex);
  uint64_t fingerprint() const;  // FNV-1a over the bytes

  auto operator<=>(const CanonicalKey&) const = default;

 private:
  std::string bytes_;
};

CanonicalKey canonical_key(const HadamardMatrix& m);

// The canonical representative encoded by a key; passes verify() and,
// re-encoded, reproduces the same key.
HadamardMatrix decode_key(const CanonicalKey& key);

bool equivalent(const HadamardMatrix& a, const HadamardMatrix& b);

// equivalent(m, transpose(m)).
bool is_self_dual_class(const HadamardMatrix& m);

}  // namespace had
