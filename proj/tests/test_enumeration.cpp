#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

#include "doctest.h"
#include "had/constructions.hpp"
#include "had/enumeration.hpp"
#include "had/switching.hpp"

using namespace had;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("hadstore-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

std::set<std::string> key_set(const ClassStore& store) {
  std::set<std::string> out;
  for (size_t i = 0; i < store.size(); ++i) out.insert(store.key_at(i).hex());
  return out;
}

}  // namespace

TEST_CASE("small orders each form a single class") {
  auto run = [](const HadamardMatrix& seed, EnumerationMode mode, const std::string& tag) {
    TempDir dir(tag);
    auto store = ClassStore::create(dir.str(), mode, seed.order());
    EnumerationOptions opts;
    opts.collect_stats = false;
    auto rep = enumerate_classes(seed, mode, store, opts);
    CHECK(rep.class_count == 1);
    CHECK(rep.exhausted);
  };
  run(sylvester(2), EnumerationMode::Q, "q4");
  run(sylvester(3), EnumerationMode::Q, "q8");
  run(sylvester(3), EnumerationMode::QR, "qr8");
  run(sylvester(3), EnumerationMode::QC, "qc8");
  run(paley(11, 1), EnumerationMode::Q, "q12");
}

TEST_CASE("order-16 QR census from Sylvester") {
  TempDir dir("qr16");
  auto store = ClassStore::create(dir.str(), EnumerationMode::QR, 16);
  EnumerationOptions opts;
  opts.collect_stats = true;
  auto rep = enumerate_classes(sylvester(4), EnumerationMode::QR, store, opts);
  CHECK(rep.class_count == 5);
  CHECK(rep.exhausted);
  std::multiset<long long> counts;
  for (const auto& st : rep.per_class) counts.insert(st.closed_rows);
  CHECK(counts == std::multiset<long long>{28, 28, 44, 76, 140});
  CHECK(rep.dual_pairing.empty());  // QR mode records no transposes

  // Closure audit: every switch from every class lands inside the store.
  for (size_t i = 0; i < store.size(); ++i) {
    auto m = decode_key(store.key_at(i));
    for (const auto& q : find_closed_quadruples(m, Axis::rows)) {
      auto sw = switch_closed_quadruple(m, q, 1, Axis::rows);
      CHECK(store.contains(canonical_key(sw)));
    }
  }
}

TEST_CASE("order-16 Q census equals the QR census set") {
  TempDir d1("q16"), d2("qr16b");
  auto qstore = ClassStore::create(d1.str(), EnumerationMode::Q, 16);
  auto rep = enumerate_classes(sylvester(4), EnumerationMode::Q, qstore);
  CHECK(rep.class_count == 5);
  CHECK(rep.exhausted);
  CHECK(rep.dual_pairing.size() == 5);

  auto qrstore = ClassStore::create(d2.str(), EnumerationMode::QR, 16);
  enumerate_classes(sylvester(4), EnumerationMode::QR, qrstore);
  CHECK(key_set(qstore) == key_set(qrstore));
}

TEST_CASE("QC census mirrors QR through transposition") {
  TempDir d1("qc16");
  auto store = ClassStore::create(d1.str(), EnumerationMode::QC, 16);
  auto rep = enumerate_classes(sylvester(4), EnumerationMode::QC, store);
  CHECK(rep.class_count == 5);
  CHECK(rep.exhausted);
}

TEST_CASE("order-20 Q census finds the three classes") {
  TempDir dir("q20");
  auto store = ClassStore::create(dir.str(), EnumerationMode::Q, 20);
  auto rep = enumerate_classes(paley(19, 1), EnumerationMode::Q, store);
  CHECK(rep.class_count == 3);
  CHECK(rep.exhausted);
  // Every key's dual is in the store (Q mode inserts transposes).
  for (const auto& [k, d] : rep.dual_pairing)
    CHECK(store.contains(CanonicalKey::from_hex(d)));
}

TEST_CASE("the skip shortcut does not change the final class set") {
  TempDir d1("q20skip"), d2("q20noskip");
  auto s1 = ClassStore::create(d1.str(), EnumerationMode::Q, 20);
  auto s2 = ClassStore::create(d2.str(), EnumerationMode::Q, 20);
  EnumerationOptions noskip;
  noskip.no_skip = true;
  enumerate_classes(paley(19, 1), EnumerationMode::Q, s1);
  enumerate_classes(paley(19, 1), EnumerationMode::Q, s2, noskip);
  CHECK(key_set(s1) == key_set(s2));
}

TEST_CASE("limit stops a run without exhausting it") {
  TempDir dir("q16lim");
  auto store = ClassStore::create(dir.str(), EnumerationMode::QR, 16);
  EnumerationOptions opts;
  opts.limit = 2;
  opts.collect_stats = false;
  auto rep = enumerate_classes(sylvester(4), EnumerationMode::QR, store, opts);
  CHECK(rep.class_count >= 2);
  CHECK(!rep.exhausted);
}

TEST_CASE("resume reproduces the uninterrupted final set") {
  TempDir d1("res-a"), d2("res-b");
  auto full = ClassStore::create(d1.str(), EnumerationMode::Q, 20);
  enumerate_classes(paley(19, 1), EnumerationMode::Q, full);

  {
    auto partial = ClassStore::create(d2.str(), EnumerationMode::Q, 20);
    EnumerationOptions opts;
    opts.limit = 2;  // interrupt early
    opts.collect_stats = false;
    auto rep = enumerate_classes(paley(19, 1), EnumerationMode::Q, partial, opts);
    CHECK(!rep.exhausted);
  }  // store closes

  auto resumed = resume(d2.str());
  CHECK(resumed.size() >= 2);
  auto rep = enumerate_classes(paley(19, 1), EnumerationMode::Q, resumed);
  CHECK(rep.exhausted);
  CHECK(key_set(resumed) == key_set(full));
}

TEST_CASE("resume of an exhausted store returns immediately") {
  TempDir dir("res-done");
  auto store = ClassStore::create(dir.str(), EnumerationMode::QR, 16);
  enumerate_classes(sylvester(4), EnumerationMode::QR, store);
  size_t n = store.size();
  auto again = resume(dir.str());
  CHECK(again.exhausted());
  auto rep = enumerate_classes(sylvester(4), EnumerationMode::QR, again);
  CHECK(rep.class_count == n);
  CHECK(rep.exhausted);
}

TEST_CASE("store and mode mismatches are rejected") {
  TempDir dir("mismatch");
  {
    auto store = ClassStore::create(dir.str(), EnumerationMode::QR, 16);
    enumerate_classes(sylvester(4), EnumerationMode::QR, store);
  }
  auto reopened = resume(dir.str());
  CHECK_THROWS_AS(enumerate_classes(sylvester(4), EnumerationMode::Q, reopened), domain_error);
  auto reopened2 = resume(dir.str());
  CHECK_THROWS_AS(enumerate_classes(sylvester(3), EnumerationMode::QR, reopened2), domain_error);
  CHECK_THROWS_AS(resume(dir.str() + "-nonexistent"), io_error);
  // A different seed of the right order but outside the stored classes.
  auto reopened3 = resume(dir.str());
  CHECK_THROWS_AS(enumerate_classes(paley(13, 2), EnumerationMode::QR, reopened3), domain_error);
}

TEST_CASE("wrong order class for the switching kind") {
  TempDir dir("badmode");
  auto store = ClassStore::create(dir.str(), EnumerationMode::QR, 20);
  CHECK_THROWS_AS(enumerate_classes(paley(19, 1), EnumerationMode::QR, store), domain_error);
}

TEST_CASE("multithreaded run produces the same class set") {
  TempDir d1("mt1"), d2("mt4");
  auto s1 = ClassStore::create(d1.str(), EnumerationMode::Q, 20);
  auto s4 = ClassStore::create(d2.str(), EnumerationMode::Q, 20);
  EnumerationOptions one, four;
  one.threads = 1;
  four.threads = 4;
  enumerate_classes(paley(19, 1), EnumerationMode::Q, s1, one);
  enumerate_classes(paley(19, 1), EnumerationMode::Q, s4, four);
  CHECK(key_set(s1) == key_set(s4));
}

TEST_CASE("dual pairing partitions a completed store") {
  TempDir dir("duals");
  auto store = ClassStore::create(dir.str(), EnumerationMode::Q, 16);
  enumerate_classes(sylvester(4), EnumerationMode::Q, store);
  auto pairs = partition_dual_pairs(store);
  CHECK(pairs.size() == store.size());
  // Sylvester is symmetric: its class pairs with itself.
  auto sylKey = canonical_key(sylvester(4)).hex();
  bool found = false;
  for (const auto& [k, d] : pairs)
    if (k == sylKey) {
      CHECK(d == sylKey);
      found = true;
    }
  CHECK(found);
  // Duality is an involution inside the store.
  std::map<std::string, std::string> dual(pairs.begin(), pairs.end());
  for (const auto& [k, d] : pairs) {
    REQUIRE(dual.count(d));
    CHECK(dual[d] == k);
  }
}

TEST_CASE("store files survive a reload byte for byte") {
  TempDir dir("reload");
  std::vector<std::string> order;
  {
    auto store = ClassStore::create(dir.str(), EnumerationMode::QR, 16);
    enumerate_classes(sylvester(4), EnumerationMode::QR, store);
    for (size_t i = 0; i < store.size(); ++i) order.push_back(store.key_at(i).hex());
  }
  auto re = resume(dir.str());
  REQUIRE(re.size() == order.size());
  for (size_t i = 0; i < re.size(); ++i) CHECK(re.key_at(i).hex() == order[i]);
  CHECK(re.exhausted());
  CHECK(re.mode() == EnumerationMode::QR);
  CHECK(re.order() == 16);
}

TEST_CASE("corrupt stores are rejected") {
  TempDir dir("corrupt");
  {
    auto store = ClassStore::create(dir.str(), EnumerationMode::QR, 16);
    enumerate_classes(sylvester(4), EnumerationMode::QR, store);
  }
  {
    std::ofstream bad(dir.path / "state.json");
    bad << "{\"explored\": 99}\n";
  }
  CHECK_THROWS_AS(resume(dir.str()), io_error);
}
