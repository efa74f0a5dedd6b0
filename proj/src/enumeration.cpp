#include "had/enumeration.hpp"

#include <atomic>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <thread>

#include <unistd.h>

#include "had/switching.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace had {

std::string mode_name(EnumerationMode mode) {
  switch (mode) {
    case EnumerationMode::Q:
      return "q";
    case EnumerationMode::QR:
      return "qr";
    case EnumerationMode::QC:
      return "qc";
  }
  return "?";
}

EnumerationMode mode_from_name(const std::string& name) {
  if (name == "q" || name == "Q") return EnumerationMode::Q;
  if (name == "qr" || name == "QR") return EnumerationMode::QR;
  if (name == "qc" || name == "QC") return EnumerationMode::QC;
  throw domain_error("unknown enumeration mode: " + name);
}

namespace {

constexpr int kStoreVersion = 1;
constexpr size_t kSnapshotEvery = 64;

void write_file_synced(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  std::FILE* f = std::fopen(tmp.c_str(), "wb");
  if (!f) throw io_error("cannot write " + tmp);
  if (std::fwrite(content.data(), 1, content.size(), f) != content.size()) {
    std::fclose(f);
    throw io_error("short write to " + tmp);
  }
  std::fflush(f);
  ::fsync(fileno(f));
  std::fclose(f);
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw io_error("cannot replace " + path + ": " + ec.message());
}

json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw io_error("cannot open " + path);
  json j;
  try {
    f >> j;
  } catch (const std::exception& e) {
    throw io_error("corrupt json in " + path + ": " + e.what());
  }
  return j;
}

}  // namespace

ClassStore::~ClassStore() = default;

void ClassStore::open_log(bool truncate) {
  std::string path = dir_ + "/keys.log";
  log_.reset(std::fopen(path.c_str(), truncate ? "wb" : "ab"));
  if (!log_) throw io_error("cannot open " + path);
}

ClassStore ClassStore::create(const std::string& dir, EnumerationMode mode, int order) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw io_error("cannot create store directory " + dir + ": " + ec.message());
  if (fs::exists(dir + "/meta.json"))
    throw io_error("store already exists at " + dir + " (use resume)");
  ClassStore s;
  s.dir_ = dir;
  s.mode_ = mode;
  s.order_ = order;
  json meta{{"version", kStoreVersion}, {"mode", mode_name(mode)}, {"order", order}};
  write_file_synced(dir + "/meta.json", meta.dump(2) + "\n");
  write_file_synced(dir + "/state.json", json{{"explored", 0}}.dump(2) + "\n");
  s.open_log(true);
  return s;
}

ClassStore ClassStore::open(const std::string& dir) {
  if (!fs::exists(dir + "/meta.json")) throw io_error("no store at " + dir);
  json meta = read_json_file(dir + "/meta.json");
  if (!meta.contains("version") || meta["version"].get<int>() != kStoreVersion)
    throw io_error("store version mismatch at " + dir);
  ClassStore s;
  s.dir_ = dir;
  s.mode_ = mode_from_name(meta["mode"].get<std::string>());
  s.order_ = meta["order"].get<int>();

  std::ifstream keys(dir + "/keys.log");
  if (keys) {
    std::string line;
    while (std::getline(keys, line)) {
      if (line.empty()) continue;
      CanonicalKey k = CanonicalKey::from_hex(line);
      if (k.order() != s.order_) throw io_error("key order mismatch in " + dir);
      if (s.contains(k)) throw io_error("duplicate key in store log " + dir);
      s.keys_.push_back(k);
      s.index_[k.fingerprint()].push_back(static_cast<uint32_t>(s.keys_.size() - 1));
    }
  }
  json state = read_json_file(dir + "/state.json");
  s.explored_ = state["explored"].get<size_t>();
  if (s.explored_ > s.keys_.size()) throw io_error("store cursor past end in " + dir);
  s.open_log(false);
  return s;
}

bool ClassStore::contains(const CanonicalKey& k) const {
  auto it = index_.find(k.fingerprint());
  if (it == index_.end()) return false;
  for (uint32_t id : it->second)
    if (keys_[id] == k) return true;
  return false;
}

bool ClassStore::insert(const CanonicalKey& k) {
  if (contains(k)) return false;
  keys_.push_back(k);
  index_[k.fingerprint()].push_back(static_cast<uint32_t>(keys_.size() - 1));
  append_log(k);
  return true;
}

void ClassStore::append_log(const CanonicalKey& k) {
  std::string line = k.hex() + "\n";
  if (std::fwrite(line.data(), 1, line.size(), log_.get()) != line.size())
    throw io_error("short write to key log in " + dir_);
}

void ClassStore::advance_explored() {
  explored_++;
  if (++explored_since_snapshot_ >= kSnapshotEvery) snapshot();
}

void ClassStore::snapshot() {
  std::fflush(log_.get());
  ::fsync(fileno(log_.get()));
  write_file_synced(dir_ + "/state.json", json{{"explored", explored_}}.dump(2) + "\n");
  explored_since_snapshot_ = 0;
}

namespace {

std::vector<Quadruple> switchables(const HadamardMatrix& m, EnumerationMode mode) {
  int n = m.order();
  switch (mode) {
    case EnumerationMode::QR:
      return find_closed_quadruples(m, Axis::rows);
    case EnumerationMode::QC:
      return find_closed_quadruples(m, Axis::columns);
    case EnumerationMode::Q:
      if (n % 8 == 0) return find_closed_quadruples(m, Axis::rows);
      return find_hall_sets(m, Axis::rows);
  }
  return {};
}

HadamardMatrix apply_mode_switch(const HadamardMatrix& m, const Quadruple& q,
                                 EnumerationMode mode) {
  if (mode == EnumerationMode::QC) return switch_closed_quadruple(m, q, 1, Axis::columns);
  if (mode == EnumerationMode::QR || m.order() % 8 == 0)
    return switch_closed_quadruple(m, q, 1, Axis::rows);
  return switch_hall_set(m, q, 1);
}

void validate_mode_order(EnumerationMode mode, int n) {
  if (n < 4 || n % 4 != 0)
    throw domain_error("enumerate: order must be a positive multiple of 4");
  if ((mode == EnumerationMode::QR || mode == EnumerationMode::QC) && n % 8 != 0 && n != 4)
    throw domain_error("enumerate: QR/QC modes need order 0 (mod 8)");
}

ClassStats stats_for(const HadamardMatrix& m, const CanonicalKey& key) {
  ClassStats st;
  st.key_hex = key.hex();
  int n = m.order();
  st.closed_rows = static_cast<long long>(find_closed_quadruples(m, Axis::rows).size());
  st.closed_cols = static_cast<long long>(find_closed_quadruples(m, Axis::columns).size());
  if (n <= 48) {
    st.hall_rows = static_cast<long long>(quadruple_census(m, Axis::rows).hall.size());
    st.hall_cols = static_cast<long long>(quadruple_census(m, Axis::columns).hall.size());
  }
  return st;
}

}  // namespace

EnumerationReport enumerate_classes(const HadamardMatrix& seed, EnumerationMode mode,
                                    ClassStore& store, const EnumerationOptions& opts) {
  int n = seed.order();
  validate_mode_order(mode, n);
  if (!seed.is_valid()) throw domain_error("enumerate: seed is not a Hadamard matrix");
  if (store.order() != n) throw domain_error("enumerate: store order mismatch");
  if (store.mode() != mode) throw domain_error("enumerate: store mode mismatch");

  // Step 5 shortcut applies to Hall-set switching runs with transposition.
  bool use_skip = mode == EnumerationMode::Q && n % 8 == 4 && !opts.no_skip;
  bool with_transposes = mode == EnumerationMode::Q;

  std::unordered_map<std::string, std::string> dual;  // key bytes -> dual key bytes

  CanonicalKey seedKey = canonical_key(seed);
  if (store.size() == 0) {
    store.insert(seedKey);
    if (with_transposes) {
      CanonicalKey seedDual = canonical_key(seed.transposed());
      dual[seedKey.bytes()] = seedDual.bytes();
      dual[seedDual.bytes()] = seedKey.bytes();
      if (seedDual != seedKey) store.insert(seedDual);
    }
  } else if (!store.contains(seedKey)) {
    throw domain_error("enumerate: store does not contain the seed's class");
  }

  int threads = std::max(1, opts.threads);
  bool limit_hit = false;

  while (!store.exhausted()) {
    if (opts.limit && store.size() >= *opts.limit) {
      limit_hit = true;
      break;
    }
    size_t cursor = store.explored();
    const CanonicalKey cur = store.key_at(cursor);
    if (use_skip && cursor >= 1) {
      const CanonicalKey& prev = store.key_at(cursor - 1);
      auto it = dual.find(prev.bytes());
      std::string prevDual;
      if (it != dual.end()) {
        prevDual = it->second;
      } else {
        prevDual = canonical_key(decode_key(prev).transposed()).bytes();
        dual[prev.bytes()] = prevDual;
        dual[prevDual] = prev.bytes();
      }
      if (prevDual == cur.bytes()) {
        store.advance_explored();
        continue;
      }
    }

    HadamardMatrix m = decode_key(cur);
    auto quads = switchables(m, mode);
    std::vector<CanonicalKey> newKeys(quads.size());
    std::vector<CanonicalKey> newDuals(with_transposes ? quads.size() : 0);

    auto work = [&](size_t i) {
      HadamardMatrix switched = apply_mode_switch(m, quads[i], mode);
      newKeys[i] = canonical_key(switched);
      if (with_transposes) newDuals[i] = canonical_key(switched.transposed());
    };
    if (threads == 1 || quads.size() < 2) {
      for (size_t i = 0; i < quads.size(); ++i) work(i);
    } else {
      std::atomic<size_t> next{0};
      std::vector<std::thread> pool;
      int tcount = std::min<size_t>(threads, quads.size());
      pool.reserve(tcount);
      for (int t = 0; t < tcount; ++t)
        pool.emplace_back([&] {
          for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= quads.size()) return;
            work(i);
          }
        });
      for (auto& th : pool) th.join();
    }

    for (size_t i = 0; i < quads.size(); ++i) {
      store.insert(newKeys[i]);
      if (with_transposes) {
        dual[newKeys[i].bytes()] = newDuals[i].bytes();
        dual[newDuals[i].bytes()] = newKeys[i].bytes();
        if (newDuals[i] != newKeys[i]) store.insert(newDuals[i]);
      }
      if (opts.limit && store.size() >= *opts.limit) break;
    }
    store.advance_explored();
    if (opts.verbose)
      std::fprintf(stderr, "explored %zu / %zu classes\n", store.explored(), store.size());
  }
  store.snapshot();

  EnumerationReport report;
  report.class_count = store.size();
  report.exhausted = store.exhausted() && !limit_hit;
  if (with_transposes) {
    for (size_t i = 0; i < store.size(); ++i) {
      const auto& k = store.key_at(i);
      auto it = dual.find(k.bytes());
      if (it != dual.end())
        report.dual_pairing.push_back({k.hex(), CanonicalKey(it->second).hex()});
    }
  }
  if (opts.collect_stats)
    for (size_t i = 0; i < store.size(); ++i)
      report.per_class.push_back(stats_for(decode_key(store.key_at(i)), store.key_at(i)));
  return report;
}

EnumerationReport report_store(const ClassStore& store, bool collect_stats, bool with_duals) {
  EnumerationReport report;
  report.class_count = store.size();
  report.exhausted = store.exhausted();
  if (with_duals) report.dual_pairing = partition_dual_pairs(store);
  if (collect_stats)
    for (size_t i = 0; i < store.size(); ++i)
      report.per_class.push_back(stats_for(decode_key(store.key_at(i)), store.key_at(i)));
  return report;
}

std::vector<std::pair<std::string, std::string>> partition_dual_pairs(const ClassStore& store) {
  std::vector<std::pair<std::string, std::string>> out;
  for (size_t i = 0; i < store.size(); ++i) {
    const auto& k = store.key_at(i);
    CanonicalKey d = canonical_key(decode_key(k).transposed());
    out.push_back({k.hex(), d.hex()});
  }
  return out;
}

ClassStore resume(const std::string& storePath) { return ClassStore::open(storePath); }

}  // namespace had
