#include "had/canonical.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstdlib>

#include "had/structure.hpp"

namespace had {

namespace {

uint64_t mix(uint64_t h, uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h * 0xff51afd7ed558ccdull;
}

constexpr int kCensusLimit = 48;  // full typing census for the pre-split up to here

}  // namespace

long long EquivalenceGraph::edge_count() const {
  long long deg = 0;
  for (int v = 0; v < vcount; ++v) {
    auto* row = adj.data() + static_cast<size_t>(v) * words;
    for (int k = 0; k < words; ++k) deg += std::popcount(row[k]);
  }
  return deg / 2;
}

EquivalenceGraph to_graph(const HadamardMatrix& m) {
  int n = m.order();
  EquivalenceGraph g;
  g.n = n;
  g.vcount = 4 * n;
  g.words = words_for(g.vcount);
  g.adj.assign(static_cast<size_t>(g.vcount) * g.words, 0);
  auto link = [&](int u, int v) {
    g.adj[static_cast<size_t>(u) * g.words + static_cast<size_t>(v) / 64] |= uint64_t{1} << (v % 64);
    g.adj[static_cast<size_t>(v) * g.words + static_cast<size_t>(u) / 64] |= uint64_t{1} << (u % 64);
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (m.bit(i, j)) {
        link(i, 2 * n + j);          // r+ c+
        link(n + i, 3 * n + j);      // r- c-
      } else {
        link(i, 3 * n + j);          // r+ c-
        link(n + i, 2 * n + j);      // r- c+
      }
    }
  for (int i = 0; i < n; ++i) link(i, n + i);
  for (int j = 0; j < n; ++j) link(2 * n + j, 3 * n + j);

  g.line_words = m.row_words();
  g.row_lines.assign(static_cast<size_t>(n) * g.line_words, 0);
  g.col_lines.assign(static_cast<size_t>(n) * g.line_words, 0);
  for (int i = 0; i < n; ++i) {
    auto r = m.row_bits(i);
    auto c = m.col_bits(i);
    std::copy(r.begin(), r.end(), g.row_lines.begin() + static_cast<size_t>(i) * g.line_words);
    std::copy(c.begin(), c.end(), g.col_lines.begin() + static_cast<size_t>(i) * g.line_words);
  }

  // Initial colors: rows before columns, pre-split by an equivalence
  // invariant (closed-quadruple and Hall-set incidence per line). The same
  // census also fills the per-pair invariant used during refinement.
  std::vector<long long> rowInv(n, 0), colInv(n, 0);
  g.row_pair_inv.assign(static_cast<size_t>(n) * n, 0);
  g.col_pair_inv.assign(static_cast<size_t>(n) * n, 0);
  g.cross_pair_inv.assign(static_cast<size_t>(n) * n, 0);
  if (n >= 4 && n % 4 == 0) {
    auto fill = [&](const QuadrupleCensus& census, std::vector<long long>& lineInv,
                    std::vector<int64_t>& pairInv, bool rows) {
      for (int i = 0; i < n; ++i)
        lineInv[i] =
            static_cast<long long>(census.closed_per_line[i]) * 100000 + census.hall_per_line[i];
      auto bump = [&](const Quadruple& q, int64_t delta) {
        for (int a = 0; a < 4; ++a)
          for (int b = a + 1; b < 4; ++b) {
            pairInv[static_cast<size_t>(q.indices[a]) * n + q.indices[b]] += delta;
            pairInv[static_cast<size_t>(q.indices[b]) * n + q.indices[a]] += delta;
          }
      };
      for (const auto& q : census.closed) bump(q, 1 << 16);
      for (const auto& q : census.hall) {
        bump(q, 1);
        // Cross positions are sign-invariant only when the minority is
        // strict; at n = 8 a type-1 product is balanced and negating a line
        // flips the tie-broken side, so crosses stay out of the invariant.
        if (q.hall_cross && n > 8) {
          int64_t delta = rows ? 1 : 1 << 20;
          for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
              int r = rows ? q.indices[a] : (*q.hall_cross)[b];
              int c = rows ? (*q.hall_cross)[b] : q.indices[a];
              g.cross_pair_inv[static_cast<size_t>(r) * n + c] += delta;
            }
        }
      }
    };
    if (n <= kCensusLimit) {
      fill(quadruple_census(m, Axis::rows), rowInv, g.row_pair_inv, true);
      fill(quadruple_census(m, Axis::columns), colInv, g.col_pair_inv, false);
    } else {
      fill(closed_quadruple_census(m, Axis::rows), rowInv, g.row_pair_inv, true);
      fill(closed_quadruple_census(m, Axis::columns), colInv, g.col_pair_inv, false);
    }
  }
  std::vector<std::pair<long long, long long>> keys;
  keys.reserve(static_cast<size_t>(g.vcount));
  for (int v = 0; v < g.vcount; ++v) {
    bool isCol = v >= 2 * n;
    long long inv = isCol ? colInv[v % n] : rowInv[v % n];
    keys.push_back({isCol ? 1 : 0, inv});
  }
  auto sorted = keys;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  g.color.resize(g.vcount);
  for (int v = 0; v < g.vcount; ++v)
    g.color[v] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), keys[v]) - sorted.begin());
  return g;
}

namespace {

// Ordered partition of the vertices: lab lists vertices, cells are
// contiguous runs. cell_start[p] gives the start position of the cell
// containing position p; cell_len is valid at start positions.
struct Partition {
  std::vector<int32_t> lab, pos, cell_start, cell_len;
  int cell_count = 0;

  void init(const std::vector<int>& color) {
    int v = static_cast<int>(color.size());
    lab.resize(v);
    pos.resize(v);
    cell_start.assign(v, 0);
    cell_len.assign(v, 0);
    for (int i = 0; i < v; ++i) lab[i] = i;
    std::sort(lab.begin(), lab.end(), [&](int a, int b) {
      return color[a] != color[b] ? color[a] < color[b] : a < b;
    });
    cell_count = 0;
    int s = 0;
    for (int i = 0; i < v; ++i) {
      pos[lab[i]] = i;
      if (i + 1 == v || color[lab[i + 1]] != color[lab[i]]) {
        for (int t = s; t <= i; ++t) cell_start[t] = s;
        cell_len[s] = i - s + 1;
        cell_count++;
        s = i + 1;
      }
    }
  }

  bool discrete() const { return cell_count == static_cast<int>(lab.size()); }
};

// Automorphisms organized along a fixed base (the first leaf's path).
// Sifting through the transversals turns arbitrary discovered automorphisms
// into products that fix base prefixes pointwise, which is what candidate
// pruning needs. The chain makes no completeness claim; pruning only uses
// orbits of subgroups generated by elements verified to fix the required
// points, so an incomplete chain merely prunes less.
struct StabChain {
  int V = 0;
  std::vector<int32_t> base;
  std::vector<std::vector<std::vector<int32_t>>> gens_at;     // level k: fixes base[0..k)
  std::vector<std::vector<std::vector<int32_t>>> transversal;  // [k][x]: base[k] -> x
  std::vector<uint8_t> orbit_dirty;
  size_t gen_count = 0;
  size_t gen_cap = 512;

  void init(int v) {
    V = v;
    base.clear();
    gens_at.assign(1, {});
    transversal.clear();
    orbit_dirty.clear();
    gen_count = 0;
  }

  static std::vector<int32_t> compose(const std::vector<int32_t>& f,
                                      const std::vector<int32_t>& g) {
    std::vector<int32_t> r(f.size());
    for (size_t v = 0; v < f.size(); ++v) r[v] = f[g[v]];
    return r;
  }
  static std::vector<int32_t> inverse_of(const std::vector<int32_t>& f) {
    std::vector<int32_t> r(f.size());
    for (size_t v = 0; v < f.size(); ++v) r[f[v]] = static_cast<int32_t>(v);
    return r;
  }

  void set_base(const std::vector<int32_t>& b) {
    std::vector<std::vector<int32_t>> old;
    for (auto& lvl : gens_at)
      for (auto& p : lvl) old.push_back(std::move(p));
    base = b;
    gens_at.assign(base.size() + 1, {});
    transversal.assign(base.size(), {});
    orbit_dirty.assign(base.size(), 1);
    gen_count = 0;
    for (auto& p : old) add(std::move(p));
  }

  void ensure_orbit(size_t k) {
    if (!orbit_dirty[k]) return;
    orbit_dirty[k] = 0;
    auto& tv = transversal[k];
    tv.assign(V, {});
    std::vector<int32_t> id(V);
    for (int v = 0; v < V; ++v) id[v] = v;
    tv[base[k]] = id;
    std::vector<int32_t> queue{base[k]};
    for (size_t head = 0; head < queue.size(); ++head) {
      int y = queue[head];
      for (size_t j = k; j < gens_at.size(); ++j)
        for (const auto& g : gens_at[j]) {
          int x = g[y];
          if (tv[x].empty()) {
            tv[x] = compose(g, tv[y]);
            queue.push_back(x);
          }
        }
    }
  }

  // Sift an automorphism starting at the given level; returns the level the
  // residue was deposited at, or -1 when it reduced to the identity.
  int sift_from(size_t level, std::vector<int32_t> g) {
    if (gen_count >= gen_cap) return -1;
    for (size_t k = level; k < base.size(); ++k) {
      int x = g[base[k]];
      if (x == base[k]) continue;
      ensure_orbit(k);
      if (!transversal[k][x].empty()) {
        g = compose(inverse_of(transversal[k][x]), g);
      } else {
        gens_at[k].push_back(std::move(g));
        for (size_t t = 0; t <= k; ++t) orbit_dirty[t] = 1;
        gen_count++;
        return static_cast<int>(k);
      }
    }
    bool identity = true;
    for (int v = 0; v < V && identity; ++v)
      if (g[v] != v) identity = false;
    if (identity) return -1;
    gens_at[base.size()].push_back(std::move(g));
    for (auto& d : orbit_dirty) d = 1;
    gen_count++;
    return static_cast<int>(base.size());
  }

  // Bottom-up Schreier completion from the given level: makes the stored
  // generator sets at each level actually generate the pointwise stabilizers
  // of the base prefixes (within the discovered group). Work is bounded so a
  // pathological case degrades to weaker pruning instead of stalling.
  long long completion_budget = 4'000'000;

  void complete_from(int start) {
    int k = std::min<int>(start, static_cast<int>(base.size()) - 1);
    while (k >= 0 && completion_budget > 0 && gen_count < gen_cap) {
      ensure_orbit(k);
      int deposit = -1;
      for (int x = 0; x < V && deposit < 0; ++x) {
        if (transversal[k][x].empty()) continue;
        const std::vector<int32_t> uy = transversal[k][x];  // copy: sifting rebuilds orbits
        for (size_t j = k; j < gens_at.size() && deposit < 0; ++j)
          for (size_t gi = 0; gi < gens_at[j].size(); ++gi) {
            completion_budget -= V;
            if (completion_budget <= 0) return;
            ensure_orbit(k);
            std::vector<int32_t> g = gens_at[j][gi];
            if (transversal[k][g[x]].empty()) {  // orbit grew underneath; redo level
              deposit = k;
              break;
            }
            auto schreier = compose(inverse_of(transversal[k][g[x]]), compose(g, uy));
            int at = sift_from(k + 1, std::move(schreier));
            if (at >= 0) {
              deposit = at;
              break;
            }
          }
      }
      if (deposit >= 0)
        k = std::min<int>(deposit, static_cast<int>(base.size()) - 1);
      else
        k--;
    }
  }

  void add(std::vector<int32_t> g) {
    int at = sift_from(0, std::move(g));
    if (at < 0) return;
    complete_from(at);
  }

  // Union-find of vertex orbits under every stored element that fixes the
  // given path pointwise.
  template <typename UF>
  void build_path_orbits(const std::vector<int32_t>& path, UF& uf) const {
    size_t common = 0;
    while (common < path.size() && common < base.size() && path[common] == base[common]) common++;
    for (size_t j = common; j < gens_at.size(); ++j)
      for (const auto& g : gens_at[j]) {
        bool ok = true;
        for (size_t t = common; t < path.size() && ok; ++t)
          if (g[path[t]] != path[t]) ok = false;
        if (!ok) continue;
        for (int v = 0; v < V; ++v) uf.unite(v, g[v]);
      }
  }
};

struct Searcher {
  const EquivalenceGraph& g;
  int V, W;

  StabChain chain;
  std::vector<std::vector<int32_t>> raw_gens;  // as discovered, for pointwise filtering
  size_t gens_at_build = 0;

  std::vector<uint64_t> cur_trace, best_trace, first_trace;
  std::vector<uint64_t> best_cert, first_cert;
  std::vector<int32_t> best_lab, first_lab;
  bool have_first = false;
  std::vector<int32_t> path;  // individualized vertices, root downward

  std::vector<uint64_t> splitter_mask;  // scratch
  long long node_budget_used = 0;
  long long leaves_seen = 0;

  explicit Searcher(const EquivalenceGraph& graph)
      : g(graph), V(graph.vcount), W(graph.words), splitter_mask(graph.words) {
    chain.init(V);
  }

  int count_in_splitter(int v) const {
    auto* row = g.adj.data() + static_cast<size_t>(v) * W;
    int c = 0;
    for (int k = 0; k < W; ++k) c += std::popcount(row[k] & splitter_mask[k]);
    return c;
  }

  // Equitable refinement; seeds are cell start positions. Returns the trace.
  // Singleton splitters additionally separate by the pair invariant against
  // the pinned line, which is what gives the search traction on the very
  // regular graphs this family produces.
  uint64_t refine(Partition& p, std::vector<int32_t> queue, uint64_t h) {
    std::vector<uint8_t> queued(V, 0);
    for (int s : queue) queued[s] = 1;
    std::vector<std::pair<int64_t, int32_t>> buf;
    size_t qhead = 0;
    while (qhead < queue.size()) {
      int sp = queue[qhead++];
      queued[sp] = 0;
      int sl = cell_of_len(p, sp);
      std::fill(splitter_mask.begin(), splitter_mask.end(), 0);
      for (int t = sp; t < sp + sl; ++t) {
        int v = p.lab[t];
        splitter_mask[static_cast<size_t>(v) / 64] |= uint64_t{1} << (v % 64);
      }
      int single_u = sl == 1 ? p.lab[sp] : -1;
      // With three lines of one side pinned, the quadruple type against the
      // pinned triple separates the remaining lines; this is what cracks the
      // graphs whose groups are 3-transitive on lines.
      int n = g.n;
      bool quad_ready = false;
      bool u_is_col = false;
      int pin1 = -1, pin2 = -1;
      std::vector<uint64_t> partial(g.line_words);
      if (single_u >= 0 && n >= 8) {
        u_is_col = single_u >= 2 * n;
        int uline = single_u % n;
        for (int cs = 0; cs < V && pin2 < 0; cs += p.cell_len[cs]) {
          if (p.cell_len[cs] != 1) continue;
          int v = p.lab[cs];
          if ((v >= 2 * n) != u_is_col) continue;
          int lv = v % n;
          if (lv == uline || lv == pin1) continue;
          (pin1 < 0 ? pin1 : pin2) = lv;
        }
        if (pin2 >= 0) {
          quad_ready = true;
          const auto& lines = u_is_col ? g.col_lines : g.row_lines;
          for (int k = 0; k < g.line_words; ++k)
            partial[k] = lines[static_cast<size_t>(uline) * g.line_words + k] ^
                         lines[static_cast<size_t>(pin1) * g.line_words + k] ^
                         lines[static_cast<size_t>(pin2) * g.line_words + k];
        }
      }
      auto value_of = [&](int v) -> int64_t {
        int64_t c = count_in_splitter(v);
        if (single_u >= 0) {
          c |= g.pair_invariant(single_u, v) << 1;
          if (quad_ready && ((v >= 2 * n) == u_is_col)) {
            int lv = v % n;
            int64_t weight = -1;
            if (lv != single_u % n && lv != pin1 && lv != pin2) {
              const auto& lines = u_is_col ? g.col_lines : g.row_lines;
              int ones = 0;
              for (int k = 0; k < g.line_words; ++k) {
                uint64_t x = ~(partial[k] ^ lines[static_cast<size_t>(lv) * g.line_words + k]);
                if (k == g.line_words - 1) x &= tail_mask(n);
                ones += std::popcount(x);
              }
              weight = std::min(ones, n - ones);
            }
            c ^= static_cast<int64_t>((weight + 2) * 0x9E3779B97F4A7C15ull) &
                 0x7fffffffffff0000ll;
          }
        }
        return c;
      };
      h = mix(h, 0x5350 + sp);
      for (int cs = 0; cs < V;) {
        int cl = p.cell_len[cs];
        if (cl == 1) {
          cs += 1;
          continue;
        }
        buf.clear();
        int64_t first = value_of(p.lab[cs]);
        bool uniform = true;
        buf.push_back({first, p.lab[cs]});
        for (int t = cs + 1; t < cs + cl; ++t) {
          int64_t c = value_of(p.lab[t]);
          if (c != first) uniform = false;
          buf.push_back({c, p.lab[t]});
        }
        if (!uniform) {
          std::stable_sort(buf.begin(), buf.end(),
                           [](const auto& a, const auto& b) { return a.first < b.first; });
          h = mix(h, 0xC311 + cs);
          int frag = cs;
          for (int t = 0; t < cl; ++t) {
            p.lab[cs + t] = buf[t].second;
            p.pos[buf[t].second] = cs + t;
          }
          for (int t = 0; t < cl;) {
            int u = t;
            while (u < cl && buf[u].first == buf[t].first) ++u;
            int fs = cs + t, fl = u - t;
            for (int x = fs; x < fs + fl; ++x) p.cell_start[x] = fs;
            p.cell_len[fs] = fl;
            if (frag != cs) p.cell_count++;  // the first fragment reuses the old cell
            h = mix(h, (static_cast<uint64_t>(buf[t].first) << 20) ^ static_cast<uint64_t>(fl));
            if (!queued[fs]) {
              queued[fs] = 1;
              queue.push_back(fs);
            }
            frag = fs + fl;
            t = u;
          }
        }
        cs += cl;
      }
    }
    h = mix(h, 0xE0F + p.cell_count);
    return h;
  }

  static int cell_of_len(const Partition& p, int start) { return p.cell_len[start]; }

  // Moves v to the front of its cell as a new singleton; returns its position.
  static int individualize(Partition& p, int v) {
    int q = p.pos[v];
    int s = p.cell_start[q];
    int l = p.cell_len[s];
    std::swap(p.lab[s], p.lab[q]);
    p.pos[p.lab[q]] = q;
    p.pos[p.lab[s]] = s;
    p.cell_len[s] = 1;
    p.cell_start[s] = s;
    for (int t = s + 1; t < s + l; ++t) p.cell_start[t] = s + 1;
    p.cell_len[s + 1] = l - 1;
    p.cell_count++;
    return s;
  }

  std::vector<uint64_t> leaf_certificate(const Partition& p) const {
    std::vector<uint64_t> cert(static_cast<size_t>(V) * W, 0);
    for (int q = 0; q < V; ++q) {
      int v = p.lab[q];
      auto* row = g.adj.data() + static_cast<size_t>(v) * W;
      uint64_t* dst = cert.data() + static_cast<size_t>(q) * W;
      for (int k = 0; k < W; ++k) {
        uint64_t w = row[k];
        while (w) {
          int b = std::countr_zero(w);
          int u = k * 64 + b;
          int up = p.pos[u];
          dst[up / 64] |= uint64_t{1} << (up % 64);
          w &= w - 1;
        }
      }
    }
    return cert;
  }

  // -1, 0, +1 comparison of (trace, cert) pairs; shorter equal-prefix trace
  // sorts below.
  static int leaf_cmp(const std::vector<uint64_t>& t1, const std::vector<uint64_t>& c1,
                      const std::vector<uint64_t>& t2, const std::vector<uint64_t>& c2) {
    size_t k = std::min(t1.size(), t2.size());
    for (size_t i = 0; i < k; ++i)
      if (t1[i] != t2[i]) return t1[i] < t2[i] ? -1 : 1;
    if (t1.size() != t2.size()) return t1.size() < t2.size() ? -1 : 1;
    for (size_t i = 0; i < c1.size(); ++i)
      if (c1[i] != c2[i]) return c1[i] < c2[i] ? -1 : 1;
    return 0;
  }

  bool is_automorphism(const std::vector<int32_t>& perm) const {
    for (int v = 0; v < V; ++v) {
      auto* row = g.adj.data() + static_cast<size_t>(v) * W;
      for (int k = 0; k < W; ++k) {
        uint64_t w = row[k];
        while (w) {
          int b = std::countr_zero(w);
          int u = k * 64 + b;
          if (!g.adjacent(perm[v], perm[u])) return false;
          w &= w - 1;
        }
      }
    }
    return true;
  }

  // Set when a discovered automorphism proves the rest of the current
  // subtree redundant; explore() unwinds to this depth.
  int unwind_to = -1;
  std::vector<const std::vector<int32_t>*> frame_processed;

  void record_automorphism(const std::vector<int32_t>& leafLab, const std::vector<int32_t>& refLab) {
    // perm(v) = refLab[position of v in the current leaf]
    std::vector<int32_t> inv(V), perm(V);
    for (int i = 0; i < V; ++i) inv[leafLab[i]] = i;
    bool identity = true;
    for (int v = 0; v < V; ++v) {
      perm[v] = refLab[inv[v]];
      if (perm[v] != v) identity = false;
    }
    if (identity || !is_automorphism(perm)) return;

    // If the automorphism maps the first diverging vertex of the current
    // path onto a sibling whose subtree is already complete, everything
    // still pending below that level is an image of explored ground:
    // abandon it.
    for (size_t l = 0; l < path.size() && l < frame_processed.size(); ++l) {
      int image = perm[path[l]];
      if (image == path[l]) continue;
      const auto& done = *frame_processed[l];
      if (std::find(done.begin(), done.end(), image) != done.end())
        unwind_to = unwind_to < 0 ? static_cast<int>(l) : std::min(unwind_to, static_cast<int>(l));
      break;
    }

    if (raw_gens.size() < 256) raw_gens.push_back(perm);
    chain.add(std::move(perm));
  }

  struct OrbitUF {
    std::vector<int32_t> parent;
    void init(int v) {
      parent.resize(v);
      for (int i = 0; i < v; ++i) parent[i] = i;
    }
    int find(int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    }
    void unite(int a, int b) {
      a = find(a);
      b = find(b);
      if (a != b) parent[b] = a;
    }
  };

  void build_orbits(OrbitUF& uf) {
    uf.init(V);
    chain.build_path_orbits(path, uf);
    for (const auto& gperm : raw_gens) {
      bool fixes_path = true;
      for (int v : path)
        if (gperm[v] != v) {
          fixes_path = false;
          break;
        }
      if (!fixes_path) continue;
      for (int v = 0; v < V; ++v) uf.unite(v, gperm[v]);
    }
    gens_at_build = chain.gen_count + raw_gens.size();
  }

  // Lexicographic status of the current path trace against a reference
  // trace: -1 below, 0 equal so far, +1 above.
  static int prefix_cmp(const std::vector<uint64_t>& cur, const std::vector<uint64_t>& ref) {
    size_t k = std::min(cur.size(), ref.size());
    for (size_t i = 0; i < k; ++i)
      if (cur[i] != ref[i]) return cur[i] < ref[i] ? -1 : 1;
    if (cur.size() > ref.size()) return 1;  // deeper with equal prefix ranks above
    return 0;
  }

  void explore(Partition& p) {
    node_budget_used++;
    if (have_first) {
      int vs_best = prefix_cmp(cur_trace, best_trace);
      int vs_first = prefix_cmp(cur_trace, first_trace);
      if (vs_best < 0 && vs_first != 0) return;  // cannot win, cannot meet the first leaf
    }
    if (p.discrete()) {
      leaves_seen++;
      auto cert = leaf_certificate(p);
      std::vector<int32_t> lab(p.lab.begin(), p.lab.end());
      if (!have_first) {
        first_trace = cur_trace;
        first_cert = cert;
        first_lab = lab;
        best_trace = cur_trace;
        best_cert = std::move(cert);
        best_lab = std::move(lab);
        have_first = true;
        chain.set_base(path);
        return;
      }
      if (cur_trace == first_trace && cert == first_cert) record_automorphism(lab, first_lab);
      int c = leaf_cmp(cur_trace, cert, best_trace, best_cert);
      if (c > 0) {
        best_trace = cur_trace;
        best_cert = std::move(cert);
        best_lab = std::move(lab);
      } else if (c == 0) {
        record_automorphism(lab, best_lab);
      }
      return;
    }

    // Target: first smallest non-singleton cell.
    int ts = -1, tl = V + 1;
    for (int cs = 0; cs < V;) {
      int cl = p.cell_len[cs];
      if (cl > 1 && cl < tl) {
        ts = cs;
        tl = cl;
      }
      cs += cl;
    }
    std::vector<int32_t> candidates(p.lab.begin() + ts, p.lab.begin() + ts + tl);

    OrbitUF uf;
    bool have_uf = false;
    std::vector<int32_t> processed;
    frame_processed.push_back(&processed);
    int depth = static_cast<int>(path.size());
    for (int32_t v : candidates) {
      if (!processed.empty()) {
        if (!have_uf || gens_at_build != chain.gen_count + raw_gens.size()) {
          build_orbits(uf);
          have_uf = true;
        }
        bool skip = false;
        int rv = uf.find(v);
        for (int32_t u : processed)
          if (uf.find(u) == rv) {
            skip = true;
            break;
          }
        if (skip) continue;
      }
      if (have_first) {
        int vs_best = prefix_cmp(cur_trace, best_trace);
        int vs_first = prefix_cmp(cur_trace, first_trace);
        if (vs_best < 0 && vs_first != 0) break;
      }
      Partition child = p;
      int s = individualize(child, v);
      uint64_t h = refine(child, {s}, mix(cur_trace.back(), 0x1D + s));
      path.push_back(v);
      cur_trace.push_back(h);
      explore(child);
      cur_trace.pop_back();
      path.pop_back();
      processed.push_back(v);
      if (unwind_to >= 0) {
        if (unwind_to < depth) break;  // propagate to an outer frame
        unwind_to = -1;                // this frame owns the jump; next candidate
      }
    }
    frame_processed.pop_back();
  }

  std::vector<uint64_t> run() {
    Partition root;
    root.init(g.color);
    std::vector<int32_t> seeds;
    for (int cs = 0; cs < V; cs += root.cell_len[cs]) seeds.push_back(cs);
    uint64_t h = refine(root, std::move(seeds), mix(0x9a7, V));
    cur_trace.assign(1, h);
    explore(root);
    if (std::getenv("HAD_CANON_STATS"))
      std::fprintf(stderr, "canon stats: V=%d nodes=%lld leaves=%lld gens=%zu+%zu depth=%zu\n", V,
                   node_budget_used, leaves_seen, chain.gen_count, raw_gens.size(),
                   chain.base.size());
    return best_cert;
  }
};

HadamardMatrix matrix_from_canonical_cert(int n, const std::vector<uint64_t>& cert, int W) {
  auto certbit = [&](int p, int q) {
    return (cert[static_cast<size_t>(p) * W + static_cast<size_t>(q) / 64] >> (q % 64)) & 1;
  };
  // Antipodal mates: the unique same-side neighbor.
  auto mate = [&](int p, int lo, int hi) {
    int m = -1;
    for (int q = lo; q < hi; ++q)
      if (q != p && certbit(p, q)) {
        if (m >= 0) throw domain_error("canonical decode: multiple pairing edges");
        m = q;
      }
    if (m < 0) throw domain_error("canonical decode: missing pairing edge");
    return m;
  };
  std::vector<int> rowPlus, colPlus;
  std::vector<char> seen(4 * n, 0);
  for (int p = 0; p < 2 * n; ++p) {
    if (seen[p]) continue;
    int q = mate(p, 0, 2 * n);
    seen[p] = seen[q] = 1;
    rowPlus.push_back(p);
  }
  for (int p = 2 * n; p < 4 * n; ++p) {
    if (seen[p]) continue;
    int q = mate(p, 2 * n, 4 * n);
    seen[p] = seen[q] = 1;
    colPlus.push_back(p);
  }
  if (static_cast<int>(rowPlus.size()) != n || static_cast<int>(colPlus.size()) != n)
    throw domain_error("canonical decode: pairing structure broken");
  std::vector<int> e(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      e[static_cast<size_t>(i) * n + j] = certbit(rowPlus[i], colPlus[j]) ? 1 : -1;
  return HadamardMatrix::from_entries(n, e);
}

std::string pack_key_bytes(const HadamardMatrix& m) {
  int n = m.order();
  int rowBytes = (n + 7) / 8;
  std::string bytes;
  bytes.reserve(2 + static_cast<size_t>(n) * rowBytes);
  bytes.push_back(static_cast<char>((n >> 8) & 0xff));
  bytes.push_back(static_cast<char>(n & 0xff));
  for (int r = 0; r < n; ++r)
    for (int b = 0; b < rowBytes; ++b) {
      unsigned byte = 0;
      for (int t = 0; t < 8; ++t) {
        int c = 8 * b + t;
        if (c < n && m.bit(r, c)) byte |= 0x80u >> t;
      }
      bytes.push_back(static_cast<char>(byte));
    }
  return bytes;
}

}  // namespace

int CanonicalKey::order() const {
  if (bytes_.size() < 2) throw domain_error("canonical key too short");
  return (static_cast<unsigned char>(bytes_[0]) << 8) | static_cast<unsigned char>(bytes_[1]);
}

std::string CanonicalKey::hex() const {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes_.size() * 2);
  for (unsigned char c : bytes_) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 0xf]);
  }
  return out;
}

CanonicalKey CanonicalKey::from_hex(const std::string& hex) {
  if (hex.size() % 2 != 0) throw domain_error("hex key must have even length");
  auto nib = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw domain_error("bad hex digit in key");
  };
  std::string bytes;
  bytes.reserve(hex.size() / 2);
  for (size_t i = 0; i < hex.size(); i += 2)
    bytes.push_back(static_cast<char>((nib(hex[i]) << 4) | nib(hex[i + 1])));
  return CanonicalKey(std::move(bytes));
}

uint64_t CanonicalKey::fingerprint() const {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes_) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

CanonicalKey canonical_key(const HadamardMatrix& m) {
  if (!m.is_valid()) throw domain_error("canonical_key: matrix is not Hadamard");
  auto g = to_graph(m);
  Searcher s(g);
  auto cert = s.run();
  auto rep = matrix_from_canonical_cert(m.order(), cert, g.words);
  if (!rep.is_valid()) throw domain_error("canonical_key: representative failed verification");
  return CanonicalKey(pack_key_bytes(rep));
}

HadamardMatrix decode_key(const CanonicalKey& key) {
  int n = key.order();
  int rowBytes = (n + 7) / 8;
  const std::string& b = key.bytes();
  if (b.size() != 2 + static_cast<size_t>(n) * rowBytes)
    throw domain_error("canonical key has wrong length");
  int w = words_for(n);
  std::vector<uint64_t> rows(static_cast<size_t>(n) * w, 0);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      unsigned byte = static_cast<unsigned char>(b[2 + static_cast<size_t>(r) * rowBytes + c / 8]);
      if (byte & (0x80u >> (c % 8)))
        rows[static_cast<size_t>(r) * w + static_cast<size_t>(c) / 64] |= uint64_t{1} << (c % 64);
    }
  return HadamardMatrix::from_packed(n, std::move(rows));
}

bool equivalent(const HadamardMatrix& a, const HadamardMatrix& b) {
  if (a.order() != b.order()) throw domain_error("equivalent: order mismatch");
  return canonical_key(a) == canonical_key(b);
}

bool is_self_dual_class(const HadamardMatrix& m) { return equivalent(m, m.transposed()); }

}  // namespace had
