#pragma once

#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "had/canonical.hpp"
#include "had/structure.hpp"

namespace had {

enum class EnumerationMode { Q, QR, QC };

std::string mode_name(EnumerationMode mode);
EnumerationMode mode_from_name(const std::string& name);

// Directory-backed set of canonical keys in insertion order plus the index
// of the next unexplored key. insert-if-absent is the only mutation; the
// append-only log and a periodically synced cursor make runs resumable.
class ClassStore {
 public:
  ClassStore() = default;
  ClassStore(const ClassStore&) = delete;
  ClassStore& operator=(const ClassStore&) = delete;
  ClassStore(ClassStore&&) = default;
  ClassStore& operator=(ClassStore&&) = default;
  ~ClassStore();

  // Creates the directory (or adopts an empty one).
  static ClassStore create(const std::string& dir, EnumerationMode mode, int order);
  // Loads an existing store; reconstructs keys and the explored cursor.
  static ClassStore open(const std::string& dir);

  const std::string& dir() const { return dir_; }
  EnumerationMode mode() const { return mode_; }
  int order() const { return order_; }

  size_t size() const { return keys_.size(); }
  size_t explored() const { return explored_; }
  bool exhausted() const { return explored_ >= keys_.size(); }
  const CanonicalKey& key_at(size_t i) const { return keys_[i]; }

  bool contains(const CanonicalKey& k) const;
  bool insert(const CanonicalKey& k);  // true when the key is new
  void advance_explored();
  void snapshot();  // persist the cursor; fsyncs the log first

 private:
  struct FileCloser {
    void operator()(std::FILE* f) const {
      if (f) std::fclose(f);
    }
  };

  std::string dir_;
  EnumerationMode mode_ = EnumerationMode::Q;
  int order_ = 0;
  std::vector<CanonicalKey> keys_;
  std::unordered_map<uint64_t, std::vector<uint32_t>> index_;  // fingerprint -> key ids
  size_t explored_ = 0;
  size_t explored_since_snapshot_ = 0;
  std::unique_ptr<std::FILE, FileCloser> log_;

  void open_log(bool truncate);
  void append_log(const CanonicalKey& k);
};

struct ClassStats {
  std::string key_hex;
  long long closed_rows = 0;
  long long closed_cols = 0;
  long long hall_rows = 0;
  long long hall_cols = 0;
};

struct EnumerationReport {
  size_t class_count = 0;
  bool exhausted = false;
  std::vector<std::pair<std::string, std::string>> dual_pairing;  // (key, dual key) hex
  std::vector<ClassStats> per_class;
};

struct EnumerationOptions {
  std::optional<size_t> limit;  // stop once this many classes exist
  int threads = 1;
  bool no_skip = false;          // disable the transpose-of-previous shortcut
  bool collect_stats = true;     // per-class quadruple counts in the report
  bool verbose = false;
};

// The breadth-first closure of the seed under the mode's switching kind,
// deduplicated through canonical keys. Q mode also inserts transposes.
EnumerationReport enumerate_classes(const HadamardMatrix& seed, EnumerationMode mode,
                                    ClassStore& store, const EnumerationOptions& opts = {});

// Report for an existing store without exploring further.
EnumerationReport report_store(const ClassStore& store, bool collect_stats, bool with_duals);

// Groups the store's keys with the keys of their transposes; self-dual
// classes pair with themselves.
std::vector<std::pair<std::string, std::string>> partition_dual_pairs(const ClassStore& store);

// Re-opens a store for continuation; validates structure.
ClassStore resume(const std::string& storePath);

}  // namespace had
