#include "fna/canonical.hpp"

#include <algorithm>
#include <bit>

namespace fna {

Permutation Permutation::identity(int n) {
  Permutation p;
  p.n_ = n;
  for (int v = 1; v <= n; ++v) p.img_[v] = static_cast<std::uint8_t>(v);
  return p;
}

Permutation Permutation::from_images(int n, const std::array<std::uint8_t, kMaxVertices + 1>& img) {
  Permutation p;
  p.n_ = n;
  VertexMask seen = 0;
  for (int v = 1; v <= n; ++v) {
    int w = img[v];
    if (w < 1 || w > n || (seen & vertex_bit(w)))
      throw std::invalid_argument("permutation images are not a bijection");
    seen |= vertex_bit(w);
    p.img_[v] = static_cast<std::uint8_t>(w);
  }
  return p;
}

Permutation Permutation::of(std::initializer_list<Vertex> images) {
  std::array<std::uint8_t, kMaxVertices + 1> img{};
  int n = static_cast<int>(images.size());
  int v = 1;
  for (Vertex w : images) img[v++] = static_cast<std::uint8_t>(w);
  return from_images(n, img);
}

VertexMask Permutation::apply(VertexMask m) const {
  VertexMask out = 0;
  while (m != 0) {
    int v = std::countr_zero(m) + 1;
    m &= static_cast<VertexMask>(m - 1);
    out |= vertex_bit(img_[v]);
  }
  return out;
}

EdgeSet Permutation::apply(const EdgeSet& e) const {
  EdgeSet out(e.n());
  e.for_each_edge([&](Edge ed) {
    Vertex a = img_[ed.x], b = img_[ed.y];
    if (a > b) std::swap(a, b);
    out.add(Edge{a, b});
  });
  return out;
}

Permutation Permutation::inverse() const {
  Permutation p;
  p.n_ = n_;
  for (int v = 1; v <= n_; ++v) p.img_[img_[v]] = static_cast<std::uint8_t>(v);
  return p;
}

Permutation Permutation::then(const Permutation& b) const {
  Permutation p;
  p.n_ = n_;
  for (int v = 1; v <= n_; ++v) p.img_[v] = b.img_[img_[v]];
  return p;
}

bool Permutation::lex_less(const Permutation& o) const {
  for (int v = 1; v <= n_; ++v) {
    if (img_[v] != o.img_[v]) return img_[v] < o.img_[v];
  }
  return false;
}

bool OrderedPartition::valid() const {
  if (n < 1 || n > kMaxVertices || cells.empty()) return false;
  VertexMask seen = 0;
  for (VertexMask c : cells) {
    if (c == 0) return false;
    if ((seen & c) != 0) return false;
    seen |= c;
  }
  return seen == full_vertex_mask(n);
}

bool OrderedPartition::discrete() const {
  for (VertexMask c : cells)
    if (std::popcount(c) != 1) return false;
  return true;
}

OrderedPartition OrderedPartition::apply(const Permutation& g) const {
  OrderedPartition out;
  out.n = n;
  out.cells.reserve(cells.size());
  for (VertexMask c : cells) out.cells.push_back(g.apply(c));
  return out;
}

namespace {

// Ordered partition in array form: vertices listed by position, with a flag
// marking the first position of each cell. Refinement and individualization
// split cells in place, so every cell occupies a contiguous span and the
// original cell order is preserved all the way to the leaves.
struct Cells {
  int n = 0;
  std::array<std::uint8_t, kMaxVertices> order{};
  std::array<bool, kMaxVertices + 1> starts{};

  bool discrete() const {
    for (int i = 0; i < n; ++i)
      if (!starts[i]) return false;
    return true;
  }
};

Cells cells_from_partition(const OrderedPartition& pi) {
  Cells c;
  c.n = pi.n;
  int pos = 0;
  for (VertexMask cell : pi.cells) {
    c.starts[pos] = true;
    VertexMask m = cell;
    while (m != 0) {
      int v = std::countr_zero(m) + 1;
      m &= static_cast<VertexMask>(m - 1);
      c.order[pos++] = static_cast<std::uint8_t>(v);
    }
  }
  c.starts[pi.n] = true;
  return c;
}

struct Searcher {
  int n = 0;
  int layer_count = 1;
  // adjacency mask per layer per vertex
  std::array<std::array<VertexMask, kMaxVertices + 1>, 2> adj{};
  std::array<std::vector<Edge>, 2> layer_edges;

  bool have_best = false;
  std::array<std::uint64_t, 2> best_enc{};
  std::array<std::uint8_t, kMaxVertices + 1> best_img{};
  std::vector<std::array<std::uint8_t, kMaxVertices + 1>> auts;

  void init(int nn, const EdgeSet* layers, int count) {
    n = nn;
    layer_count = count;
    for (int l = 0; l < count; ++l) {
      layer_edges[l] = layers[l].edges();
      for (const Edge& e : layer_edges[l]) {
        adj[l][e.x] |= vertex_bit(e.y);
        adj[l][e.y] |= vertex_bit(e.x);
      }
    }
  }

  // Coarsest equitable refinement compatible with the cell order: repeatedly
  // split the first cell whose members disagree on their per-cell, per-layer
  // neighbour counts, ordering subcells by ascending count vector.
  void refine(Cells& c) const {
    for (;;) {
      // collect current cell masks
      std::array<VertexMask, kMaxVertices> cell_mask{};
      std::array<int, kMaxVertices> cell_start{};
      int cell_num = 0;
      for (int i = 0; i < n; ++i) {
        if (c.starts[i]) cell_start[cell_num++] = i;
        cell_mask[cell_num - 1] |= vertex_bit(c.order[i]);
      }

      bool split = false;
      for (int ci = 0; ci < cell_num && !split; ++ci) {
        int s = cell_start[ci];
        int e = ci + 1 < cell_num ? cell_start[ci + 1] : n;
        if (e - s < 2) continue;
        // neighbour-count signature; 4 bits per (cell, layer) pair
        std::array<unsigned __int128, kMaxVertices> key{};
        for (int i = s; i < e; ++i) {
          unsigned __int128 k = 0;
          for (int cj = 0; cj < cell_num; ++cj) {
            for (int l = 0; l < layer_count; ++l)
              k = (k << 4) | static_cast<unsigned>(std::popcount(
                                 static_cast<VertexMask>(adj[l][c.order[i]] & cell_mask[cj])));
          }
          key[i - s] = k;
        }
        bool uniform = true;
        for (int i = 1; i < e - s; ++i)
          if (key[i] != key[0]) {
            uniform = false;
            break;
          }
        if (uniform) continue;

        std::array<int, kMaxVertices> idx{};
        for (int i = 0; i < e - s; ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.begin() + (e - s),
                         [&](int a, int b) { return key[a] < key[b]; });
        std::array<std::uint8_t, kMaxVertices> tmp{};
        for (int i = 0; i < e - s; ++i) tmp[i] = c.order[s + idx[i]];
        for (int i = 0; i < e - s; ++i) c.order[s + i] = tmp[i];
        for (int i = s + 1; i < e; ++i)
          c.starts[i] = key[idx[i - s]] != key[idx[i - s - 1]];
        split = true;
      }
      if (!split) return;
    }
  }

  static Cells individualize(const Cells& c, int cell_start, Vertex v) {
    Cells out = c;
    int p = cell_start;
    while (out.order[p] != v) ++p;
    for (int i = p; i > cell_start; --i) out.order[i] = out.order[i - 1];
    out.order[cell_start] = static_cast<std::uint8_t>(v);
    out.starts[cell_start + 1] = true;
    return out;
  }

  void leaf(const Cells& c) {
    std::array<std::uint8_t, kMaxVertices + 1> img{};
    for (int i = 0; i < n; ++i) img[c.order[i]] = static_cast<std::uint8_t>(i + 1);
    std::array<std::uint64_t, 2> enc{};
    for (int l = 0; l < layer_count; ++l) {
      for (const Edge& e : layer_edges[l]) {
        int a = img[e.x], b = img[e.y];
        if (a > b) std::swap(a, b);
        enc[l] |= std::uint64_t{1} << edge_rank(n, a, b);
      }
    }
    if (!have_best) {
      have_best = true;
      best_enc = enc;
      best_img = img;
      return;
    }
    if (enc < best_enc) {
      best_enc = enc;
      best_img = img;
      // previously found automorphisms remain genuine
      return;
    }
    if (enc == best_enc) {
      // two labelings of the same canonical graph differ by an automorphism
      std::array<std::uint8_t, kMaxVertices + 1> inv{};
      for (int v = 1; v <= n; ++v) inv[img[v]] = static_cast<std::uint8_t>(v);
      std::array<std::uint8_t, kMaxVertices + 1> g{};
      bool ident = true;
      for (int v = 1; v <= n; ++v) {
        g[v] = inv[best_img[v]];
        ident &= g[v] == v;
      }
      if (!ident && std::find(auts.begin(), auts.end(), g) == auts.end()) auts.push_back(g);
      // deterministic tie-break for the emitted permutation
      for (int v = 1; v <= n; ++v) {
        if (img[v] != best_img[v]) {
          if (img[v] < best_img[v]) best_img = img;
          break;
        }
      }
    }
  }

  VertexMask orbit_closure(VertexMask seed, VertexMask base) const {
    VertexMask orbit = seed;
    bool grew = true;
    while (grew) {
      grew = false;
      for (const auto& g : auts) {
        bool fixes_base = true;
        for (VertexMask m = base; m != 0; m &= static_cast<VertexMask>(m - 1)) {
          int v = std::countr_zero(m) + 1;
          if (g[v] != v) {
            fixes_base = false;
            break;
          }
        }
        if (!fixes_base) continue;
        VertexMask image = 0;
        for (VertexMask m = orbit; m != 0; m &= static_cast<VertexMask>(m - 1))
          image |= vertex_bit(g[std::countr_zero(m) + 1]);
        if ((image & ~orbit) != 0) {
          orbit |= image;
          grew = true;
        }
      }
    }
    return orbit;
  }

  void dfs(const Cells& c, VertexMask base) {
    if (c.discrete()) {
      leaf(c);
      return;
    }
    // first non-singleton cell is the branching target
    int cell_start = -1, cell_end = -1;
    for (int i = 0; i < n; ++i) {
      if (!c.starts[i]) continue;
      int e = i + 1;
      while (e < n && !c.starts[e]) ++e;
      if (e - i > 1) {
        cell_start = i;
        cell_end = e;
        break;
      }
    }

    std::array<Vertex, kMaxVertices> branch{};
    int count = cell_end - cell_start;
    for (int i = 0; i < count; ++i) branch[i] = c.order[cell_start + i];
    std::sort(branch.begin(), branch.begin() + count);

    VertexMask explored = 0;
    for (int i = 0; i < count; ++i) {
      Vertex v = branch[i];
      if (explored != 0 && (orbit_closure(explored, base) & vertex_bit(v)) != 0) continue;
      Cells child = individualize(c, cell_start, v);
      refine(child);
      dfs(child, static_cast<VertexMask>(base | vertex_bit(v)));
      explored |= vertex_bit(v);
    }
  }

  void run(const OrderedPartition& pi) {
    Cells c = cells_from_partition(pi);
    refine(c);
    dfs(c, 0);
  }
};

void check_partition(const OrderedPartition& pi, int n) {
  if (pi.n != n || !pi.valid()) throw std::invalid_argument("invalid ordered partition");
}

}  // namespace

CanonicalResult canonical_form(const EdgeSet& g, const OrderedPartition& pi) {
  check_partition(pi, g.n());
  Searcher s;
  EdgeSet layers[1] = {g};
  s.init(g.n(), layers, 1);
  s.run(pi);
  return CanonicalResult{EdgeSet(g.n(), s.best_enc[0]),
                         Permutation::from_images(g.n(), s.best_img)};
}

PairCanonicalResult canonical_form_pair(const EdgeSet& a, const EdgeSet& b,
                                        const OrderedPartition& pi) {
  if (a.n() != b.n()) throw std::invalid_argument("pair layers disagree on n");
  check_partition(pi, a.n());
  Searcher s;
  EdgeSet layers[2] = {a, b};
  s.init(a.n(), layers, 2);
  s.run(pi);
  return PairCanonicalResult{EdgeSet(a.n(), s.best_enc[0]), EdgeSet(a.n(), s.best_enc[1]),
                             Permutation::from_images(a.n(), s.best_img)};
}

VertexMask interface_vertices(const EdgeSet& a, const EdgeSet& b) {
  return static_cast<VertexMask>(a.vertex_support() & b.vertex_support());
}

OrderedPartition interface_partition(const EdgeSet& x, const EdgeSet& r,
                                     const Permutation& delta) {
  int n = x.n();
  VertexMask iface = interface_vertices(x, r);
  OrderedPartition pi;
  pi.n = n;
  VertexMask v0 = static_cast<VertexMask>(full_vertex_mask(n) & ~iface);
  if (v0 != 0) pi.cells.push_back(v0);

  std::array<Vertex, kMaxVertices> vs{};
  int count = 0;
  for (VertexMask m = iface; m != 0; m &= static_cast<VertexMask>(m - 1))
    vs[count++] = std::countr_zero(m) + 1;
  std::sort(vs.begin(), vs.begin() + count,
            [&](Vertex a, Vertex b) { return delta.image(a) < delta.image(b); });
  for (int i = 0; i < count; ++i) pi.cells.push_back(vertex_bit(vs[i]));
  return pi;
}

IndexKey index_j(const EdgeSet& d, const EdgeSet& x) {
  if (!x.subset_of(d)) throw std::invalid_argument("index key: constraints not inside edge set");
  int n = d.n();
  EdgeSet r = d - x;
  VertexMask iface = interface_vertices(x, r);
  IndexKey key;
  key.n = static_cast<std::uint8_t>(n);
  key.k = static_cast<std::uint8_t>(std::popcount(iface));
  if (iface == 0) {
    // the interface partition degenerates to the unit partition
    key.cx = x.empty() ? 0 : canonical_form(x, OrderedPartition::unit(n)).canon.bits();
    key.cr = r.empty() ? 0 : canonical_form(r, OrderedPartition::unit(n)).canon.bits();
    return key;
  }
  // Interface colours come from the joint canonical labelling of the pair
  // (x, r); a colouring per the labelling of d alone is not invariant under
  // relabelling when Aut(d) moves the interface.
  Permutation delta = canonical_form_pair(x, r, OrderedPartition::unit(n)).delta;
  OrderedPartition pi = interface_partition(x, r, delta);
  key.cx = canonical_form(x, pi).canon.bits();
  key.cr = canonical_form(r, pi).canon.bits();
  return key;
}

IndexKey index_i(const EdgeSet& edges, const EdgeSet& contain, const EdgeSet& avoid) {
  if (!contain.subset_of(edges) || !avoid.subset_of(edges) || !contain.disjoint_with(avoid))
    throw std::invalid_argument("index key: malformed counting problem");
  return index_j(edges - avoid, contain);
}

namespace {

constexpr std::uint8_t kKeyVersion = 1;

void pack_bits(std::string& out, std::uint64_t bits, int bit_count) {
  int bytes = (bit_count + 7) / 8;
  for (int b = 0; b < bytes; ++b) {
    std::uint8_t byte = 0;
    for (int i = 0; i < 8; ++i) {
      int rank = b * 8 + i;
      if (rank < bit_count && (bits >> rank & 1)) byte |= static_cast<std::uint8_t>(0x80u >> i);
    }
    out.push_back(static_cast<char>(byte));
  }
}

std::uint64_t unpack_bits(std::string_view in, std::size_t offset, int bit_count) {
  std::uint64_t bits = 0;
  for (int rank = 0; rank < bit_count; ++rank) {
    std::uint8_t byte = static_cast<std::uint8_t>(in[offset + rank / 8]);
    if (byte & (0x80u >> (rank % 8))) bits |= std::uint64_t{1} << rank;
  }
  return bits;
}

}  // namespace

std::string encode_key(const IndexKey& key) {
  int n = key.n;
  int k = key.k;
  std::string out;
  out.push_back(static_cast<char>(kKeyVersion));
  out.push_back(static_cast<char>(n));
  out.push_back(static_cast<char>(k));
  // cell sizes of the interface partition: V0 (when non-empty) then k ones
  int cells = (n > k ? 1 : 0) + k;
  out.push_back(static_cast<char>(cells));
  if (n > k) out.push_back(static_cast<char>(n - k));
  for (int i = 0; i < k; ++i) out.push_back(1);
  pack_bits(out, key.cx, edge_count(n));
  pack_bits(out, key.cr, edge_count(n));
  return out;
}

IndexKey decode_key(std::string_view bytes) {
  if (bytes.size() < 4) throw ParseError("index key record too short");
  if (static_cast<std::uint8_t>(bytes[0]) != kKeyVersion)
    throw ParseError("index key version mismatch");
  int n = static_cast<std::uint8_t>(bytes[1]);
  int k = static_cast<std::uint8_t>(bytes[2]);
  int cells = static_cast<std::uint8_t>(bytes[3]);
  if (n < 1 || n > kMaxVertices || k > n) throw ParseError("index key header out of range");
  if (cells != (n > k ? 1 : 0) + k) throw ParseError("index key cell count mismatch");
  std::size_t off = 4;
  if (n > k) {
    if (off >= bytes.size() || static_cast<std::uint8_t>(bytes[off]) != n - k)
      throw ParseError("index key cell sizes corrupt");
    ++off;
  }
  for (int i = 0; i < k; ++i) {
    if (off >= bytes.size() || bytes[off] != 1) throw ParseError("index key cell sizes corrupt");
    ++off;
  }
  int graph_bytes = (edge_count(n) + 7) / 8;
  if (bytes.size() != off + 2 * static_cast<std::size_t>(graph_bytes))
    throw ParseError("index key record length mismatch");
  IndexKey key;
  key.n = static_cast<std::uint8_t>(n);
  key.k = static_cast<std::uint8_t>(k);
  key.cx = unpack_bits(bytes, off, edge_count(n));
  key.cr = unpack_bits(bytes, off + graph_bytes, edge_count(n));
  return key;
}

}  // namespace fna
