#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "had/canonical.hpp"
#include "had/constructions.hpp"
#include "had/invariants.hpp"
#include "had/switching.hpp"

using namespace had;

namespace {

HadamardMatrix random_transform(const HadamardMatrix& m, std::mt19937_64& rng) {
  return apply(m, SignedPerm::random(m.order(), rng), SignedPerm::random(m.order(), rng));
}

}  // namespace

TEST_CASE("graph encoding shape") {
  auto one = HadamardMatrix::from_entries(1, std::vector<int>{1});
  auto g1 = to_graph(one);
  CHECK(g1.vcount == 4);
  CHECK(g1.edge_count() == 4);  // 2 per entry + 2 pairings

  for (auto m : {sylvester(3), paley(11, 1)}) {
    auto g = to_graph(m);
    long long n = m.order();
    CHECK(g.vcount == 4 * n);
    CHECK(g.edge_count() == 2 * n * n + 2 * n);
    // Every vertex sees its antipode plus one endpoint per line of the
    // other side.
    for (int v = 0; v < g.vcount; ++v) {
      int deg = 0;
      for (int u = 0; u < g.vcount; ++u)
        if (g.adjacent(v, u)) deg++;
      CHECK(deg == n + 1);
    }
    // Colors separate rows from columns.
    for (int v = 0; v < 2 * n; ++v)
      for (int u = 2 * n; u < 4 * n; ++u) CHECK(g.color[v] != g.color[u]);
  }
}

TEST_CASE("negating a row gives an isomorphic graph, keys agree") {
  auto m = paley(11, 1);
  std::vector<int> p(12);
  std::iota(p.begin(), p.end(), 0);
  std::vector<int8_t> signs(12, 1);
  signs[5] = -1;
  auto negated = apply(m, SignedPerm(p, signs), SignedPerm::identity(12));
  CHECK(canonical_key(negated) == canonical_key(m));
}

TEST_CASE("canonical keys are invariant over random equivalence moves") {
  // The acceptance suite runs the full thousand-transform soundness battery;
  // this is the quick version.
  std::mt19937_64 rng(101);
  auto run = [&](const HadamardMatrix& seed, int iterations) {
    auto base = canonical_key(seed);
    CHECK(base.order() == seed.order());
    for (int t = 0; t < iterations; ++t)
      CHECK(canonical_key(random_transform(seed, rng)) == base);
  };
  run(sylvester(4), 250);
  run(paley(19, 1), 250);
  run(paley(23, 1), 40);
  run(paley(13, 2), 150);
  // Order 8 exercises the balanced type-1 products whose cross positions
  // must stay out of the refinement invariant.
  run(sylvester(3), 400);
  run(sylvester(2), 200);
  run(paley(11, 1), 200);
}

TEST_CASE("canonical keys separate inequivalent matrices") {
  auto s16 = sylvester(4);
  auto quads = find_closed_quadruples(s16, Axis::rows);
  auto sw = switch_closed_quadruple(s16, quads[0], 1, Axis::rows);
  CHECK(canonical_key(sw) != canonical_key(s16));
  CHECK(!equivalent(sw, s16));
  // Matrices of the same order from different families.
  std::vector<int> id12(12);
  std::iota(id12.begin(), id12.end(), 0);
  auto d24 = doubled(paley(11, 1), paley(11, 1), id12, false);
  CHECK(!equivalent(d24, paley(23, 1)));
}

TEST_CASE("different quadruple counts force different keys") {
  // The pre-filter consistency direction: two matrices with different
  // closed-quadruple counts cannot share a key.
  std::mt19937_64 rng(103);
  auto a = sylvester(4);
  auto b = switch_closed_quadruple(a, find_closed_quadruples(a, Axis::rows)[3], 1, Axis::rows);
  size_t ca = find_closed_quadruples(a, Axis::rows).size();
  size_t cb = find_closed_quadruples(b, Axis::rows).size();
  REQUIRE(ca != cb);
  CHECK(canonical_key(a) != canonical_key(b));
}

TEST_CASE("decode round trips and the decoded representative is canonical") {
  std::mt19937_64 rng(107);
  for (auto seed : {sylvester(4), paley(19, 1), paley(13, 2)}) {
    auto key = canonical_key(seed);
    auto rep = decode_key(key);
    CHECK(verify(rep));
    CHECK(rep.order() == seed.order());
    CHECK(canonical_key(rep) == key);
    CHECK(equivalent(rep, seed));
  }
}

TEST_CASE("key encoding details") {
  auto key = canonical_key(sylvester(2));
  CHECK(key.bytes().size() == 2 + 4 * 1);  // two-byte order + 4 one-byte rows
  CHECK(key.order() == 4);
  CHECK(CanonicalKey::from_hex(key.hex()) == key);
  CHECK(key.hex().substr(0, 4) == "0004");
  CHECK_THROWS_AS(CanonicalKey::from_hex("zz"), domain_error);
  CHECK_THROWS_AS(decode_key(CanonicalKey(std::string("\x00\x05", 2))), domain_error);
  CHECK(key.fingerprint() == CanonicalKey(key.bytes()).fingerprint());
}

TEST_CASE("equivalent and self-duality") {
  std::mt19937_64 rng(109);
  auto s16 = sylvester(4);
  CHECK(equivalent(s16, random_transform(s16, rng)));
  CHECK(is_self_dual_class(s16));
  CHECK(is_self_dual_class(sylvester(3)));
  CHECK(is_self_dual_class(paley(23, 1)));  // the order-24 Paley class is self-dual
  CHECK_THROWS_AS(equivalent(s16, sylvester(3)), domain_error);
}

TEST_CASE("transpose of a symmetric matrix shares the key") {
  auto s16 = sylvester(4);
  CHECK(canonical_key(transpose(s16)) == canonical_key(s16));
}

TEST_CASE("order-1 and order-2 keys") {
  auto one = HadamardMatrix::from_entries(1, std::vector<int>{1});
  auto minus = HadamardMatrix::from_entries(1, std::vector<int>{-1});
  CHECK(canonical_key(one) == canonical_key(minus));
  auto s2 = sylvester(1);
  std::vector<int> e{-1, 1, 1, 1};
  CHECK(canonical_key(HadamardMatrix::from_entries(2, e)) == canonical_key(s2));
}

TEST_CASE("keys of switched hall sets are sound") {
  std::mt19937_64 rng(113);
  auto p20 = paley(19, 1);
  auto halls = find_hall_sets(p20, Axis::rows);
  auto sw = switch_hall_set(p20, halls[7], 1);
  auto key = canonical_key(sw);
  for (int t = 0; t < 50; ++t) CHECK(canonical_key(random_transform(sw, rng)) == key);
}

TEST_CASE("canonical_key rejects invalid matrices") {
  CHECK_THROWS_AS(canonical_key(HadamardMatrix::from_entries(4, std::vector<int>(16, 1))),
                  domain_error);
}
