#include <algorithm>
#include <random>
#include <sstream>

#include "doctest.h"
#include "had/constructions.hpp"
#include "had/matrix.hpp"

using namespace had;

namespace {

// Independent orthogonality check by plain integer inner products.
bool slow_verify(const HadamardMatrix& m) {
  int n = m.order();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      int dot = 0;
      for (int c = 0; c < n; ++c) dot += m.entry(i, c) * m.entry(j, c);
      if (dot != 0) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("verify on the definitional examples") {
  CHECK(verify(sylvester(1)));
  CHECK(verify(HadamardMatrix::from_entries(2, std::vector<int>{1, 1, 1, -1})));
  CHECK_FALSE(verify(HadamardMatrix::from_entries(4, std::vector<int>(16, 1))));
  auto s16 = sylvester(4);
  CHECK(verify(s16));
  CHECK(slow_verify(s16));
  CHECK(verify(s16) == slow_verify(s16));
}

TEST_CASE("verify matches the slow oracle on assorted inputs") {
  std::mt19937_64 rng(11);
  for (int k = 1; k <= 4; ++k) {
    auto m = apply(sylvester(k), SignedPerm::random(1 << k, rng), SignedPerm::random(1 << k, rng));
    CHECK(verify(m));
    CHECK(slow_verify(m));
  }
  // A broken matrix: flip one entry of a valid one.
  auto s8 = sylvester(3);
  std::vector<int> e(64);
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) e[r * 8 + c] = s8.entry(r, c);
  e[9] = -e[9];
  auto broken = HadamardMatrix::from_entries(8, e);
  CHECK_FALSE(verify(broken));
  CHECK_FALSE(slow_verify(broken));
  CHECK_FALSE(broken.is_valid());
}

TEST_CASE("hadamard_product identities") {
  auto s8 = sylvester(3);
  // Row 0 of a Sylvester matrix is all +1, the product identity.
  std::vector<int> rows{0, 3};
  CHECK(hadamard_product(s8, rows) == s8.row(3));
  // Character rows multiply by XOR of indices.
  std::vector<int> rows123{1, 2, 3};
  CHECK(hadamard_product(s8, rows123) == s8.row(0));
  for (int a = 1; a < 8; ++a)
    for (int b = a + 1; b < 8; ++b) {
      std::vector<int> pair{a, b};
      CHECK(hadamard_product(s8, pair) == s8.row(a ^ b));
    }
  // Brute force on order 4: rows (1,2) -> row 3.
  auto s4 = sylvester(2);
  std::vector<int> rows12{1, 2};
  auto p = hadamard_product(s4, rows12);
  for (int c = 0; c < 4; ++c) CHECK(p.entry(c) == s4.entry(1, c) * s4.entry(2, c));
  CHECK(p == s4.row(3));
}

TEST_CASE("hadamard_product rejects bad indices") {
  auto s4 = sylvester(2);
  std::vector<int> dup{1, 1};
  CHECK_THROWS_AS(hadamard_product(s4, dup), domain_error);
  std::vector<int> oob{0, 7};
  CHECK_THROWS_AS(hadamard_product(s4, oob), domain_error);
}

TEST_CASE("hadamard_product is order independent") {
  auto s16 = sylvester(4);
  std::mt19937_64 rng(3);
  std::vector<int> set{2, 5, 7, 11, 14};
  auto ref = hadamard_product(s16, set);
  for (int t = 0; t < 20; ++t) {
    std::shuffle(set.begin(), set.end(), rng);
    CHECK(hadamard_product(s16, set) == ref);
  }
}

TEST_CASE("apply: identity, involution, validity preservation") {
  auto s16 = sylvester(4);
  auto id = SignedPerm::identity(16);
  CHECK(apply(s16, id, id) == s16);

  std::vector<int> p(16);
  for (int i = 0; i < 16; ++i) p[i] = i;
  SignedPerm negate_rows(p, std::vector<int8_t>(16, -1));
  CHECK(apply(apply(s16, negate_rows, id), negate_rows, id) == s16);

  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    auto m = apply(s16, SignedPerm::random(16, rng), SignedPerm::random(16, rng));
    CHECK(verify(m));
  }
}

TEST_CASE("apply with inverse moves composes to the identity") {
  std::mt19937_64 rng(17);
  auto s8 = sylvester(3);
  for (int t = 0; t < 1000; ++t) {
    auto rm = SignedPerm::random(8, rng);
    auto cm = SignedPerm::random(8, rng);
    CHECK(apply(apply(s8, rm, cm), rm.inverse(), cm.inverse()) == s8);
  }
}

TEST_CASE("signed permutation algebra") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 100; ++t) {
    auto a = SignedPerm::random(12, rng);
    auto b = SignedPerm::random(12, rng);
    CHECK(a.then(a.inverse()).is_identity());
    CHECK(a.inverse().then(a).is_identity());
    auto m = paley(11, 1);
    CHECK(apply(apply(m, a, b), a.inverse(), b.inverse()) == m);
    // Composition agrees with sequential application.
    auto seq = apply(apply(m, a, SignedPerm::identity(12)), b, SignedPerm::identity(12));
    auto comp = apply(m, a.then(b), SignedPerm::identity(12));
    CHECK(seq == comp);
  }
}

TEST_CASE("transpose") {
  auto s16 = sylvester(4);
  CHECK(transpose(s16) == s16);  // Sylvester matrices are symmetric
  auto p = paley(11, 1);
  CHECK(transpose(transpose(p)) == p);
  CHECK(verify(transpose(p)));
  for (int r = 0; r < 12; ++r)
    for (int c = 0; c < 12; ++c) CHECK(p.entry(r, c) == transpose(p).entry(c, r));
}

TEST_CASE("row and column planes agree") {
  auto m = paley(19, 1);
  for (int r = 0; r < 20; ++r)
    for (int c = 0; c < 20; ++c) {
      CHECK(m.bit(r, c) == ((m.col_bits(c)[r / 64] >> (r % 64)) & 1));
    }
}

TEST_CASE("multiword stripes behave like the single-word path") {
  auto big = sylvester(7);  // order 128, two words per row
  CHECK(big.order() == 128);
  CHECK(big.row_words() == 2);
  CHECK(verify(big));
  CHECK(transpose(big) == big);
  std::mt19937_64 rng(29);
  auto moved = apply(big, SignedPerm::random(128, rng), SignedPerm::random(128, rng));
  CHECK(verify(moved));
}

TEST_CASE("had text format round trip") {
  auto m = paley(11, 1);
  std::ostringstream out;
  write_had(out, m);
  std::string text = out.str();
  CHECK(text.substr(0, 3) == "12\n");
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.back() == '\n');
  std::istringstream in(text);
  CHECK(read_had(in) == m);
}

TEST_CASE("had reader accepts 1/0 and rejects junk") {
  std::istringstream ok("2\n11\n10\n");
  auto m = read_had(ok);
  CHECK(m.entry(0, 0) == 1);
  CHECK(m.entry(1, 1) == -1);
  CHECK(verify(m));

  std::istringstream bad_char("2\n++\n+x\n");
  CHECK_THROWS_AS(read_had(bad_char), io_error);
  std::istringstream bad_len("2\n++\n+\n");
  CHECK_THROWS_AS(read_had(bad_len), io_error);
  std::istringstream truncated("4\n++++\n");
  CHECK_THROWS_AS(read_had(truncated), io_error);
  std::istringstream bad_order("zebra\n");
  CHECK_THROWS_AS(read_had(bad_order), io_error);
}

TEST_CASE("every constructed matrix in this suite verifies") {
  for (int k = 0; k <= 6; ++k) CHECK(verify(sylvester(k)));
  for (int q : {3, 7, 11, 19, 23, 27}) CHECK(verify(paley(q, 1)));
  for (int q : {5, 13, 17, 25}) CHECK(verify(paley(q, 2)));
}
