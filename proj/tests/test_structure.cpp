#include <algorithm>
#include <bit>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "had/constructions.hpp"
#include "had/structure.hpp"

using namespace had;

namespace {

long long binom4(int n) {
  return static_cast<long long>(n) * (n - 1) * (n - 2) * (n - 3) / 24;
}

HadamardMatrix random_transform(const HadamardMatrix& m, std::mt19937_64& rng) {
  return apply(m, SignedPerm::random(m.order(), rng), SignedPerm::random(m.order(), rng));
}

// Exhaustive typing through the public quadruple_type call; independent of
// the census loops used by the finders.
std::vector<Quadruple> brute_force_of_type(const HadamardMatrix& m, Axis axis, int r) {
  std::vector<Quadruple> out;
  int n = m.order();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        for (int l = k + 1; l < n; ++l) {
          auto q = quadruple_type(m, {i, j, k, l}, axis);
          if (q.type_r == r) out.push_back(q);
        }
  return out;
}

}  // namespace

TEST_CASE("three_normalize on character rows") {
  auto s8 = sylvester(3);
  // 1^2^3 = 0, so rows (1,2,3) multiply to the all +1 row: already normalized.
  auto [same, signs1] = three_normalize(s8, {1, 2, 3});
  CHECK(same == s8);
  CHECK(std::all_of(signs1.begin(), signs1.end(), [](int8_t s) { return s == 1; }));
  // 0^1^2 = 3: the product is character row 3 and normalization undoes it.
  auto [normed, signs3] = three_normalize(s8, {0, 1, 2});
  for (int c = 0; c < 8; ++c) CHECK(signs3[c] == s8.entry(3, c));
  auto p = hadamard_product(normed, std::vector<int>{0, 1, 2});
  CHECK(p.popcount() == 8);
}

TEST_CASE("three_normalize is idempotent and inverts single column flips") {
  std::mt19937_64 rng(99);
  auto m = random_transform(paley(11, 1), rng);
  auto [n1, s1] = three_normalize(m, {2, 5, 7});
  auto [n2, s2] = three_normalize(n1, {2, 5, 7});
  CHECK(n1 == n2);
  CHECK(std::all_of(s2.begin(), s2.end(), [](int8_t s) { return s == 1; }));

  // Negating one column of a normalized matrix is undone exactly.
  std::vector<int> e(12 * 12);
  for (int r = 0; r < 12; ++r)
    for (int c = 0; c < 12; ++c) e[r * 12 + c] = n1.entry(r, c) * (c == 4 ? -1 : 1);
  auto flipped = HadamardMatrix::from_entries(12, e);
  auto [back, s3] = three_normalize(flipped, {2, 5, 7});
  CHECK(back == n1);
  for (int c = 0; c < 12; ++c) CHECK(s3[c] == (c == 4 ? -1 : 1));
}

TEST_CASE("three_normalize rejects bad indices") {
  auto s8 = sylvester(3);
  CHECK_THROWS_AS(three_normalize(s8, {0, 0, 1}), domain_error);
  CHECK_THROWS_AS(three_normalize(s8, {0, 1, 8}), domain_error);
}

TEST_CASE("field partition of Sylvester 16 follows the character masks") {
  auto s16 = sylvester(4);
  auto fp = field_partition(s16, {1, 2, 3});
  // Pair products of rows (1,2) and (1,3) are character rows 3 and 2; the
  // field of column c is read off those two characters.
  for (int c = 0; c < 16; ++c) {
    int p1 = (std::popcount(static_cast<unsigned>(3 & c)) & 1) ? 1 : 0;
    int p2 = (std::popcount(static_cast<unsigned>(2 & c)) & 1) ? 1 : 0;
    CHECK(fp.field_of[c] == p1 + 2 * p2);
  }
  for (const auto& f : fp.fields) CHECK(f.size() == 4);
}

TEST_CASE("field partition basics") {
  auto s4 = sylvester(2);
  auto fp4 = field_partition(s4, {1, 2, 3});
  for (const auto& f : fp4.fields) CHECK(f.size() == 1);  // four singletons

  // Column negation leaves the partition alone.
  std::mt19937_64 rng(5);
  auto m = paley(19, 1);
  auto fp = field_partition(m, {0, 3, 9});
  std::vector<int> p(20);
  std::iota(p.begin(), p.end(), 0);
  std::vector<int8_t> colsigns(20);
  for (auto& s : colsigns) s = (rng() & 1) ? 1 : -1;
  auto negated = apply(m, SignedPerm::identity(20), SignedPerm(p, colsigns));
  auto fp2 = field_partition(negated, {0, 3, 9});
  CHECK(fp.field_of == fp2.field_of);

  CHECK_THROWS_AS(
      field_partition(HadamardMatrix::from_entries(4, std::vector<int>(16, 1)), {0, 1, 2}),
      domain_error);
}

TEST_CASE("fields of a closed quadruple carry constant sign patterns") {
  auto s16 = sylvester(4);
  auto quads = find_closed_quadruples(s16, Axis::rows);
  REQUIRE(!quads.empty());
  for (int t = 0; t < 3; ++t) {
    const auto& q = quads[t * 7 % quads.size()];
    auto fp = field_partition(s16, {q.indices[0], q.indices[1], q.indices[2]});
    for (const auto& field : fp.fields) {
      // Within a field every column shows the same pattern on the quadruple
      // rows, up to column negation.
      for (size_t i = 1; i < field.size(); ++i) {
        int rel = s16.entry(q.indices[0], field[0]) * s16.entry(q.indices[0], field[i]);
        for (int a = 1; a < 4; ++a)
          CHECK(s16.entry(q.indices[a], field[0]) * s16.entry(q.indices[a], field[i]) == rel);
      }
    }
  }
}

TEST_CASE("quadruple types on Sylvester 16") {
  auto s16 = sylvester(4);
  for (int i = 0; i < 16; ++i)
    for (int j = i + 1; j < 16; ++j)
      for (int k = j + 1; k < 16; ++k)
        for (int l = k + 1; l < 16; ++l) {
          auto q = quadruple_type(s16, {i, j, k, l}, Axis::rows);
          if ((i ^ j ^ k ^ l) == 0)
            CHECK(q.type_r == 0);
          else
            CHECK(q.type_r == 2);  // 2^(k-3) for k = 4
          CHECK(q.hall_cross.has_value() == (q.type_r == 1));
        }
}

TEST_CASE("hall sets carry one cross per field") {
  auto p20 = paley(19, 1);
  auto halls = find_hall_sets(p20, Axis::rows);
  CHECK(halls.size() == 285);  // exhaustive-typing oracle value
  for (const auto& h : halls) {
    CHECK(h.type_r == 1);
    REQUIRE(h.hall_cross.has_value());
    auto fp = field_partition(p20, {h.indices[0], h.indices[1], h.indices[2]});
    std::set<int> fields_hit;
    for (int c : *h.hall_cross) fields_hit.insert(fp.field_of[c]);
    CHECK(fields_hit.size() == 4);
  }
}

TEST_CASE("hall set finder matches exhaustive typing") {
  auto p20 = paley(19, 1);
  auto brute = brute_force_of_type(p20, Axis::rows, 1);
  auto halls = find_hall_sets(p20, Axis::rows);
  REQUIRE(halls.size() == brute.size());
  std::set<std::array<int, 4>> a, b;
  for (const auto& q : halls) a.insert(q.indices);
  for (const auto& q : brute) b.insert(q.indices);
  CHECK(a == b);
}

TEST_CASE("closed quadruple counts for Sylvester matrices") {
  CHECK(find_closed_quadruples(sylvester(3), Axis::rows).size() == 14);
  CHECK(find_closed_quadruples(sylvester(4), Axis::rows).size() == 140);
  CHECK(find_closed_quadruples(sylvester(5), Axis::rows).size() == 1240);
  CHECK(find_closed_quadruples(sylvester(4), Axis::columns).size() == 140);
}

TEST_CASE("no closed quadruples or Hall sets where excluded") {
  CHECK(find_closed_quadruples(paley(23, 1), Axis::rows).empty());
  CHECK(find_closed_quadruples(paley(23, 1), Axis::columns).empty());
  CHECK(find_hall_sets(sylvester(4), Axis::rows).empty());
  CHECK(find_hall_sets(sylvester(5), Axis::rows).empty());
  CHECK(find_hall_sets(paley(27, 1), Axis::rows).empty());
  CHECK(find_hall_sets(paley(27, 1), Axis::columns).empty());
}

TEST_CASE("closed quadruples forbidden for order 4 (mod 8) above 4") {
  std::mt19937_64 rng(31);
  for (int q : {11, 19, 27}) {
    auto m = random_transform(paley(q, 1), rng);
    CHECK(find_closed_quadruples(m, Axis::rows).empty());
    CHECK(find_closed_quadruples(m, Axis::columns).empty());
  }
}

TEST_CASE("type histogram partitions all quadruples") {
  for (auto m : {sylvester(3), paley(11, 1), sylvester(4), paley(19, 1)}) {
    auto hist = type_histogram(m, Axis::rows);
    long long total = std::accumulate(hist.begin(), hist.end(), 0LL);
    CHECK(total == binom4(m.order()));
  }
}

TEST_CASE("pair-product join equals brute force under random transforms") {
  std::mt19937_64 rng(7);
  for (auto seed : {sylvester(3), sylvester(4), paley(19, 1)}) {
    for (int t = 0; t < 17; ++t) {
      auto m = random_transform(seed, rng);
      auto fast = find_closed_quadruples(m, Axis::rows);
      auto brute = brute_force_of_type(m, Axis::rows, 0);
      REQUIRE(fast.size() == brute.size());
      for (size_t i = 0; i < fast.size(); ++i) CHECK(fast[i].indices == brute[i].indices);
    }
  }
}

TEST_CASE("hall cross sign property for order 4 (mod 8)") {
  // After 3-normalizing on three Hall-set rows, the product of the four
  // cross entries in a row outside the set is the negative of the product
  // inside the set.
  auto p20 = paley(19, 1);
  auto halls = find_hall_sets(p20, Axis::rows);
  for (size_t t = 0; t < halls.size(); t += 37) {
    const auto& h = halls[t];
    auto [nm, signs] = three_normalize(p20, {h.indices[0], h.indices[1], h.indices[2]});
    auto cross = *h.hall_cross;
    auto prod_on_cross = [&](int row) {
      int p = 1;
      for (int c : cross) p *= nm.entry(row, c);
      return p;
    };
    int inside = prod_on_cross(h.indices[0]);
    for (int i = 1; i < 4; ++i) CHECK(prod_on_cross(h.indices[i]) == inside);
    for (int r = 0; r < 20; ++r) {
      if (r == h.indices[0] || r == h.indices[1] || r == h.indices[2] || r == h.indices[3])
        continue;
      CHECK(prod_on_cross(r) == -inside);
    }
  }
}

TEST_CASE("census incidence counts are consistent") {
  auto p28 = paley(13, 2);
  auto census = quadruple_census(p28, Axis::rows);
  CHECK(census.hall.size() == 91);
  long long total = 0;
  for (int c : census.hall_per_line) total += c;
  CHECK(total == 4 * static_cast<long long>(census.hall.size()));
  auto closed = closed_quadruple_census(sylvester(4), Axis::rows);
  long long closed_total = 0;
  for (int c : closed.closed_per_line) closed_total += c;
  CHECK(closed_total == 4 * 140);
}
