#include <numeric>
#include <random>

#include "doctest.h"
#include "had/canonical.hpp"
#include "had/constructions.hpp"
#include "had/structure.hpp"
#include "had/switching.hpp"

using namespace had;

TEST_CASE("sylvester basics") {
  auto s2 = sylvester(1);
  CHECK(s2.order() == 2);
  CHECK(s2.entry(0, 0) == 1);
  CHECK(s2.entry(0, 1) == 1);
  CHECK(s2.entry(1, 0) == 1);
  CHECK(s2.entry(1, 1) == -1);
  CHECK(sylvester(0).order() == 1);
  for (int k = 0; k <= 7; ++k) CHECK(verify(sylvester(k)));
  CHECK_THROWS_AS(sylvester(-1), domain_error);
}

TEST_CASE("sylvester closed quadruple counts follow the binomial formula") {
  for (int k : {3, 4, 5}) {
    long long n = 1 << k;
    long long expect = n * (n - 1) * (n - 2) / 6 / 4;  // C(2^k,3)/4
    CHECK(static_cast<long long>(find_closed_quadruples(sylvester(k), Axis::rows).size()) ==
          expect);
  }
}

TEST_CASE("sylvester 8 is symmetric and self-dual") {
  auto s8 = sylvester(3);
  CHECK(transpose(s8) == s8);
  CHECK(is_self_dual_class(s8));
}

TEST_CASE("paley constructions verify for every supported parameter") {
  for (int q : {3, 7, 11, 19, 23, 27}) {
    auto m = paley(q, 1);
    CHECK(m.order() == q + 1);
    CHECK(verify(m));
  }
  for (int q : {5, 13, 17, 25}) {
    auto m = paley(q, 2);
    CHECK(m.order() == 2 * (q + 1));
    CHECK(verify(m));
  }
}

TEST_CASE("paley rejects invalid parameters") {
  CHECK_THROWS_AS(paley(19, 2), domain_error);  // 19 = 3 (mod 4)
  CHECK_THROWS_AS(paley(13, 1), domain_error);  // 13 = 1 (mod 4)
  CHECK_THROWS_AS(paley(15, 1), domain_error);  // not a prime power
  CHECK_THROWS_AS(paley(21, 2), domain_error);
  CHECK_THROWS_AS(paley(7, 3), domain_error);
}

TEST_CASE("paley structure facts used by the census runs") {
  auto p24 = paley(23, 1);
  CHECK(find_closed_quadruples(p24, Axis::rows).empty());
  CHECK(find_closed_quadruples(p24, Axis::columns).empty());
  auto p28 = paley(27, 1);
  CHECK(find_hall_sets(p28, Axis::rows).empty());
  auto p20 = paley(19, 1);
  CHECK(!find_hall_sets(p20, Axis::rows).empty());
}

TEST_CASE("doubling produces valid matrices with the block layout") {
  auto a = sylvester(3);
  auto b = paley(7, 1);
  std::vector<int> perm{3, 1, 4, 0, 2, 7, 6, 5};
  for (bool tilde : {false, true}) {
    auto h = doubled(a, b, perm, tilde);
    CHECK(h.order() == 16);
    CHECK(verify(h));
  }
  // Plain shape: rows i and i+n agree on the left half.
  auto h = doubled(a, b, perm, false);
  for (int i = 0; i < 8; ++i)
    for (int c = 0; c < 8; ++c) {
      CHECK(h.entry(i, c) == h.entry(i + 8, c));
      CHECK(h.entry(i, c + 8) == -h.entry(i + 8, c + 8));
      CHECK(h.entry(i, c + 8) == b.entry(perm[i], c));
    }
}

TEST_CASE("doubled Sylvester 8 lands in the Sylvester 16 class") {
  std::vector<int> id(8);
  std::iota(id.begin(), id.end(), 0);
  auto h = doubled(sylvester(3), sylvester(3), id, false);
  CHECK(equivalent(h, sylvester(4)));
  auto ht = doubled(sylvester(3), sylvester(3), id, true);
  CHECK(equivalent(ht, sylvester(4)));
}

TEST_CASE("doubling error paths") {
  std::vector<int> id4(4);
  std::iota(id4.begin(), id4.end(), 0);
  CHECK_THROWS_AS(doubled(sylvester(2), sylvester(3), std::vector<int>(4, 0), false),
                  domain_error);
  CHECK_THROWS_AS(doubled(sylvester(2), sylvester(2), std::vector<int>{0, 1}, false),
                  domain_error);
}

TEST_CASE("doublings with different permutations differ by quadruple switches") {
  // Spot check through the row-swap identity: changing the permutation by a
  // transposition is one closed-quadruple switch.
  std::mt19937_64 rng(13);
  auto a = sylvester(3);
  for (int t = 0; t < 20; ++t) {
    auto b = apply(sylvester(3), SignedPerm::random(8, rng), SignedPerm::random(8, rng));
    int i = static_cast<int>(rng() % 8), j = static_cast<int>(rng() % 8);
    if (i == j) continue;
    CHECK(doubled_swap_equivalence_check(a, b, i, j));
  }
}
