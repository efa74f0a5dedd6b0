// Command-line front end: generate seed matrices, analyze invariants, apply
// switches, canonicalize, and run the class enumeration.

#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "had/canonical.hpp"
#include "had/constructions.hpp"
#include "had/enumeration.hpp"
#include "had/invariants.hpp"
#include "had/switching.hpp"

using nlohmann::json;

namespace {

had::HadamardMatrix load_input(const std::string& path) {
  if (path.empty() || path == "-") return had::read_had(std::cin);
  return had::read_had_file(path);
}

void emit_output(const std::string& path, const had::HadamardMatrix& m) {
  if (path.empty() || path == "-")
    had::write_had(std::cout, m);
  else
    had::write_had_file(path, m);
}

std::vector<int> parse_index_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

void print_config_header(int argc, char** argv) {
  std::ostringstream line;
  line << "# hadtool";
  for (int i = 1; i < argc; ++i) line << ' ' << argv[i];
  std::cerr << line.str() << "\n";
}

json analyze_json(const had::HadamardMatrix& m) {
  int n = m.order();
  json out;
  out["order"] = n;
  out["closedQuadruples"] = {
      {"rows", had::find_closed_quadruples(m, had::Axis::rows).size()},
      {"columns", had::find_closed_quadruples(m, had::Axis::columns).size()}};
  if (n <= 48) {
    auto rc = had::quadruple_census(m, had::Axis::rows);
    auto cc = had::quadruple_census(m, had::Axis::columns);
    out["hallSets"] = {{"rows", rc.hall.size()}, {"columns", cc.hall.size()}};
  }
  if (n >= 4 && n <= 28) {
    auto hist = had::type_histogram(m, had::Axis::rows);
    json h = json::object();
    for (size_t r = 0; r < hist.size(); ++r)
      if (hist[r]) h[std::to_string(r)] = hist[r];
    out["typeHistogram"] = h;
  }
  auto snf = had::smith_normal_form(had::to_int_matrix(m));
  json factors = json::array();
  for (const auto& f : snf.factors) factors.push_back(f.to_int64());
  out["smithFactors"] = factors;
  if (n == 36) out["smithClass"] = had::smith_class(m);
  auto rows = had::binary_code_summary(m, had::Axis::rows);
  auto cols = had::binary_code_summary(m, had::Axis::columns);
  auto codeJson = [](const had::CodeSummary& cs) {
    json j{{"dimension", cs.dimension},
           {"selfOrthogonal", cs.self_orthogonal},
           {"selfDual", cs.self_dual},
           {"weight4Count", cs.weight4_count}};
    return j;
  };
  out["rowCode"] = codeJson(rows);
  out["columnCode"] = codeJson(cols);
  return out;
}

void print_analysis_text(const json& a) {
  std::cout << "order: " << a["order"].get<int>() << "\n";
  std::cout << "closed quadruples (rows): " << a["closedQuadruples"]["rows"].get<long long>()
            << "\n";
  std::cout << "closed quadruples (columns): "
            << a["closedQuadruples"]["columns"].get<long long>() << "\n";
  if (a.contains("hallSets")) {
    std::cout << "hall sets (rows): " << a["hallSets"]["rows"].get<long long>() << "\n";
    std::cout << "hall sets (columns): " << a["hallSets"]["columns"].get<long long>() << "\n";
  }
  if (a.contains("typeHistogram")) {
    std::cout << "type histogram (rows):";
    for (auto& [r, c] : a["typeHistogram"].items())
      std::cout << " r=" << r << ":" << c.get<long long>();
    std::cout << "\n";
  }
  std::cout << "smith factors:";
  for (auto& f : a["smithFactors"]) std::cout << " " << f.get<long long>();
  std::cout << "\n";
  if (a.contains("smithClass"))
    std::cout << "smith class: " << a["smithClass"].get<int>() << "\n";
  for (const char* which : {"rowCode", "columnCode"}) {
    const auto& c = a[which];
    std::cout << which << ": dimension " << c["dimension"].get<int>()
              << (c["selfDual"].get<bool>()
                      ? ", self-dual"
                      : (c["selfOrthogonal"].get<bool>() ? ", self-orthogonal" : ""))
              << ", weight-4 count " << c["weight4Count"].get<long long>() << "\n";
  }
}

json report_json(const had::EnumerationReport& rep) {
  json out;
  out["classCount"] = rep.class_count;
  out["exhausted"] = rep.exhausted;
  json classes = json::array();
  auto sorted = rep.per_class;
  std::sort(sorted.begin(), sorted.end(),
            [](const had::ClassStats& a, const had::ClassStats& b) { return a.key_hex < b.key_hex; });
  for (const auto& st : sorted)
    classes.push_back(json{{"key", st.key_hex},
                           {"closedRows", st.closed_rows},
                           {"closedCols", st.closed_cols},
                           {"hallRows", st.hall_rows},
                           {"hallCols", st.hall_cols}});
  out["classes"] = classes;
  json pairs = json::array();
  auto sortedPairs = rep.dual_pairing;
  std::sort(sortedPairs.begin(), sortedPairs.end());
  for (const auto& [k, d] : sortedPairs) pairs.push_back(json::array({k, d}));
  out["dualPairs"] = pairs;
  return out;
}

void print_report_text(const json& r) {
  std::cout << "classes: " << r["classCount"].get<size_t>() << "\n";
  std::cout << "exhausted: " << (r["exhausted"].get<bool>() ? "yes" : "no") << "\n";
  for (const auto& c : r["classes"])
    std::cout << "  " << c["key"].get<std::string>() << " closed(r/c) "
              << c["closedRows"].get<long long>() << "/" << c["closedCols"].get<long long>()
              << " hall(r/c) " << c["hallRows"].get<long long>() << "/"
              << c["hallCols"].get<long long>() << "\n";
  if (!r["dualPairs"].empty()) {
    std::cout << "dual pairs:\n";
    for (const auto& p : r["dualPairs"])
      std::cout << "  " << p[0].get<std::string>() << " <-> " << p[1].get<std::string>() << "\n";
  }
}

int run_selftest() {
  int failures = 0;
  auto check = [&](const char* name, bool ok) {
    std::cout << (ok ? "PASS" : "FAIL") << " " << name << "\n";
    if (!ok) failures++;
  };
  using namespace had;
  auto s2 = sylvester(1);
  check("sylvester order 2 verifies", verify(s2));
  check("all-ones 4x4 is not Hadamard",
        !verify(HadamardMatrix::from_entries(4, std::vector<int>(16, 1))));
  auto s8 = sylvester(3);
  check("identity moves leave the matrix unchanged",
        apply(s8, SignedPerm::identity(8), SignedPerm::identity(8)) == s8);
  check("transpose is an involution", transpose(transpose(s8)) == s8);
  {
    std::vector<int> rows{0, 3};
    check("row 0 is the product identity", hadamard_product(s8, rows) == s8.row(3));
  }
  {
    auto [normed, signs] = three_normalize(s8, {1, 2, 3});
    check("sylvester 8 is already 3-normalized on (1,2,3)",
          normed == s8 && std::all_of(signs.begin(), signs.end(), [](int8_t s) { return s == 1; }));
  }
  check("sylvester 8 has 14 closed quadruples",
        find_closed_quadruples(s8, Axis::rows).size() == 14);
  {
    auto quads = find_closed_quadruples(s8, Axis::rows);
    auto sw = switch_closed_quadruple(s8, quads[0], 1, Axis::rows);
    auto back = switch_closed_quadruple(sw, quads[0], 1, Axis::rows);
    check("closed-quadruple switching is an involution", back == s8);
  }
  check("paley(7,1) verifies", verify(paley(7, 1)));
  check("paley(13,2) verifies", verify(paley(13, 2)));
  {
    auto k1 = canonical_key(s8);
    std::mt19937_64 rng(7);
    auto moved = apply(s8, SignedPerm::random(8, rng), SignedPerm::random(8, rng));
    check("canonical key is equivalence-invariant", canonical_key(moved) == k1);
    check("canonical key decodes to its own class", canonical_key(decode_key(k1)) == k1);
  }
  {
    auto f = smith_normal_form(to_int_matrix(sylvester(2))).factors_int64();
    check("smith form of an order-4 matrix is (1,2,2,4)",
          (f == std::vector<long long>{1, 2, 2, 4}));
  }
  std::cout << (failures == 0 ? "selftest: all checks passed\n"
                              : "selftest: " + std::to_string(failures) + " check(s) failed\n");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hadamard matrix switching, invariants, and class enumeration"};
  app.require_subcommand(1);
  app.fallthrough();

  bool global_json = false;
  bool global_verbose = false;
  int global_threads = 1;
  app.add_flag("--json", global_json, "emit JSON where supported");
  app.add_flag("--verbose", global_verbose, "progress output on stderr");
  app.add_option("--threads", global_threads, "worker threads (enumeration only)");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a seed matrix");
  gen->require_subcommand(1);
  std::string gen_out;
  int syl_k = 0;
  auto* gen_syl = gen->add_subcommand("sylvester", "Sylvester matrix of order 2^k");
  gen_syl->add_option("k", syl_k, "exponent")->required();
  gen_syl->add_option("--out", gen_out, "output file (default stdout)");
  int paley_q1 = 0, paley_q2 = 0;
  auto* gen_p1 = gen->add_subcommand("paley1", "Paley type I matrix of order q+1");
  gen_p1->add_option("q", paley_q1, "prime power, 3 (mod 4)")->required();
  gen_p1->add_option("--out", gen_out, "output file (default stdout)");
  auto* gen_p2 = gen->add_subcommand("paley2", "Paley type II matrix of order 2(q+1)");
  gen_p2->add_option("q", paley_q2, "prime power, 1 (mod 4)")->required();
  gen_p2->add_option("--out", gen_out, "output file (default stdout)");
  std::string dbl_a, dbl_b, dbl_perm;
  bool dbl_tilde = false;
  auto* gen_dbl = gen->add_subcommand("double", "doubling construction from two matrices");
  gen_dbl->add_option("a", dbl_a, "first input .had")->required();
  gen_dbl->add_option("b", dbl_b, "second input .had")->required();
  gen_dbl->add_option("--perm", dbl_perm, "permutation file (one index per line)");
  gen_dbl->add_flag("--tilde", dbl_tilde, "use the [[A,A],[BP,-BP]] shape");
  gen_dbl->add_option("--out", gen_out, "output file (default stdout)");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "print structure and invariants");
  std::string analyze_in;
  analyze->add_option("--in", analyze_in, "input .had (default stdin)");

  // switch
  auto* sw = app.add_subcommand("switch", "switch a closed quadruple or Hall set");
  std::string sw_in, sw_out, sw_rows;
  int sw_field = 1;
  bool sw_hall = false;
  sw->add_option("--in", sw_in, "input .had (default stdin)");
  sw->add_option("--rows", sw_rows, "four row indices i,j,k,l")->required();
  sw->add_option("--field", sw_field, "field choice 1..4");
  sw->add_flag("--hall", sw_hall, "switch a Hall set instead of a closed quadruple");
  sw->add_option("--out", sw_out, "output file (default stdout)");

  // canon
  auto* canon = app.add_subcommand("canon", "canonical key of a matrix");
  std::string canon_in, canon_decode, canon_out;
  canon->add_option("--in", canon_in, "input .had (default stdin)");
  canon->add_option("--decode", canon_decode, "decode a hex key to its representative");
  canon->add_option("--out", canon_out, "output for --decode (default stdout)");

  // enumerate
  auto* enumer = app.add_subcommand("enumerate", "breadth-first class enumeration");
  std::string en_seed, en_mode = "q", en_store;
  size_t en_limit = 0;
  bool en_noskip = false;
  enumer->add_option("--seed", en_seed, "seed .had file")->required();
  enumer->add_option("--mode", en_mode, "q, qr, or qc");
  enumer->add_option("--store", en_store, "store directory")->required();
  enumer->add_option("--limit", en_limit, "stop after this many classes");
  enumer->add_flag("--no-skip", en_noskip, "disable the transpose-of-previous shortcut");

  // report
  auto* report = app.add_subcommand("report", "summarize an existing store");
  std::string rep_store;
  bool rep_skip_duals = false;
  report->add_option("--store", rep_store, "store directory")->required();
  report->add_flag("--skip-duals", rep_skip_duals, "omit dual pairing (faster)");

  auto* selftest = app.add_subcommand("selftest", "run the built-in quick checks");

  CLI11_PARSE(app, argc, argv);
  print_config_header(argc, argv);

  try {
    if (gen_syl->parsed()) {
      emit_output(gen_out, had::sylvester(syl_k));
    } else if (gen_p1->parsed()) {
      emit_output(gen_out, had::paley(paley_q1, 1));
    } else if (gen_p2->parsed()) {
      emit_output(gen_out, had::paley(paley_q2, 2));
    } else if (gen_dbl->parsed()) {
      auto a = had::read_had_file(dbl_a);
      auto b = had::read_had_file(dbl_b);
      if (!a.is_valid() || !b.is_valid())
        throw had::domain_error("doubling inputs must be Hadamard matrices");
      std::vector<int> perm(a.order());
      for (int i = 0; i < a.order(); ++i) perm[i] = i;
      if (!dbl_perm.empty()) {
        std::ifstream pf(dbl_perm);
        if (!pf) throw had::io_error("cannot open " + dbl_perm);
        for (int i = 0; i < a.order(); ++i)
          if (!(pf >> perm[i])) throw had::io_error("permutation file too short");
      }
      emit_output(gen_out, had::doubled(a, b, perm, dbl_tilde));
    } else if (analyze->parsed()) {
      auto m = load_input(analyze_in);
      if (!m.is_valid())
        throw had::domain_error("input of order " + std::to_string(m.order()) +
                                " is not a Hadamard matrix (rows are not mutually orthogonal)");
      json a = analyze_json(m);
      if (global_json)
        std::cout << a.dump(2) << "\n";
      else
        print_analysis_text(a);
    } else if (sw->parsed()) {
      auto m = load_input(sw_in);
      if (!m.is_valid()) throw had::domain_error("switch input is not a Hadamard matrix");
      auto idx = parse_index_list(sw_rows);
      if (idx.size() != 4) throw had::domain_error("--rows needs exactly four indices");
      had::SwitchMove move;
      move.kind = sw_hall ? had::SwitchKind::hall_set : had::SwitchKind::closed_row_quad;
      std::copy(idx.begin(), idx.end(), move.indices.begin());
      move.field = sw_field;
      emit_output(sw_out, had::apply_switch(m, move));
    } else if (canon->parsed()) {
      if (!canon_decode.empty()) {
        auto m = had::decode_key(had::CanonicalKey::from_hex(canon_decode));
        emit_output(canon_out, m);
      } else {
        auto m = load_input(canon_in);
        if (!m.is_valid()) throw had::domain_error("canon input is not a Hadamard matrix");
        std::cout << had::canonical_key(m).hex() << "\n";
      }
    } else if (enumer->parsed()) {
      auto seed = had::read_had_file(en_seed);
      if (!seed.is_valid()) throw had::domain_error("seed is not a Hadamard matrix");
      auto mode = had::mode_from_name(en_mode);
      had::ClassStore store = std::filesystem::exists(en_store + "/meta.json")
                                  ? had::ClassStore::open(en_store)
                                  : had::ClassStore::create(en_store, mode, seed.order());
      had::EnumerationOptions opts;
      if (en_limit > 0) opts.limit = en_limit;
      opts.threads = global_threads;
      opts.no_skip = en_noskip;
      opts.verbose = global_verbose;
      opts.collect_stats = false;
      auto rep = had::enumerate_classes(seed, mode, store, opts);
      std::cout << rep.class_count << " classes, "
                << (rep.exhausted ? "exhausted" : "not exhausted") << "\n";
    } else if (report->parsed()) {
      auto store = had::resume(rep_store);
      auto rep = had::report_store(store, true, !rep_skip_duals);
      json r = report_json(rep);
      if (global_json)
        std::cout << r.dump(2) << "\n";
      else
        print_report_text(r);
    } else if (selftest->parsed()) {
      return run_selftest();
    }
  } catch (const had::io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const had::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
