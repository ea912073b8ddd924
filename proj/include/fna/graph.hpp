#ifndef FNA_GRAPH_HPP
#define FNA_GRAPH_HPP

#include <array>
#include <bit>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fna/errors.hpp"

namespace fna {

// Vertices are labelled 1..n. The cap keeps every edge subset of the
// complete graph inside one 64-bit word (n = 11 gives 55 edge bits), so all
// set algebra on millions of edge sets stays O(1).
using Vertex = int;
inline constexpr int kMaxVertices = 11;

inline constexpr int edge_count(int n) { return n * (n - 1) / 2; }

struct Edge {
  Vertex x = 0, y = 0;  // x < y
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;  // lexicographic
};

// Lexicographic rank of <x,y> within the complete edge set on n vertices:
// <1,2> -> 0, <1,3> -> 1, ..., <n-1,n> -> n(n-1)/2 - 1.
int edge_rank(int n, Vertex x, Vertex y);
inline int edge_rank(int n, Edge e) { return edge_rank(n, e.x, e.y); }
Edge edge_unrank(int n, int rank);

// Vertex subsets as bit masks; bit (v-1) stands for vertex v.
using VertexMask = std::uint16_t;
inline VertexMask vertex_bit(Vertex v) { return static_cast<VertexMask>(1u << (v - 1)); }
inline VertexMask full_vertex_mask(int n) { return static_cast<VertexMask>((1u << n) - 1); }

// Subset of the complete-graph edge set, bit-packed by lexicographic rank.
class EdgeSet {
 public:
  EdgeSet() : n_(0), bits_(0) {}
  explicit EdgeSet(int n, std::uint64_t bits = 0);
  static EdgeSet complete(int n);
  static EdgeSet of(int n, std::initializer_list<Edge> edges);

  int n() const { return n_; }
  std::uint64_t bits() const { return bits_; }
  int size() const { return std::popcount(bits_); }
  bool empty() const { return bits_ == 0; }

  bool contains(int rank) const { return bits_ >> rank & 1; }
  bool contains(Edge e) const { return contains(edge_rank(n_, e)); }
  void add(Edge e) { bits_ |= std::uint64_t{1} << edge_rank(n_, e); }
  void add_rank(int rank) { bits_ |= std::uint64_t{1} << rank; }
  void remove(Edge e) { bits_ &= ~(std::uint64_t{1} << edge_rank(n_, e)); }

  EdgeSet with(Edge e) const {
    EdgeSet r = *this;
    r.add(e);
    return r;
  }
  EdgeSet without(Edge e) const {
    EdgeSet r = *this;
    r.remove(e);
    return r;
  }

  bool subset_of(const EdgeSet& o) const { return (bits_ & ~o.bits_) == 0; }
  bool disjoint_with(const EdgeSet& o) const { return (bits_ & o.bits_) == 0; }

  friend EdgeSet operator|(EdgeSet a, const EdgeSet& b) { return EdgeSet(a.n_, a.bits_ | b.bits_); }
  friend EdgeSet operator&(EdgeSet a, const EdgeSet& b) { return EdgeSet(a.n_, a.bits_ & b.bits_); }
  friend EdgeSet operator-(EdgeSet a, const EdgeSet& b) { return EdgeSet(a.n_, a.bits_ & ~b.bits_); }
  friend bool operator==(const EdgeSet&, const EdgeSet&) = default;

  std::vector<Edge> edges() const;
  // Least set rank, or -1 when empty.
  int min_rank() const { return bits_ == 0 ? -1 : std::countr_zero(bits_); }

  // Vertices incident to at least one edge.
  VertexMask vertex_support() const;

  template <typename F>
  void for_each_edge(F&& f) const {
    for (std::uint64_t b = bits_; b != 0; b &= b - 1)
      f(edge_unrank(n_, std::countr_zero(b)));
  }

 private:
  int n_;
  std::uint64_t bits_;
};

// Union-find over vertex labels 1..n.
class UnionFind {
 public:
  explicit UnionFind(int n) : n_(n) {
    for (int v = 0; v <= n; ++v) parent_[v] = static_cast<std::uint8_t>(v);
  }
  int find(int v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }
  // False when x and y were already connected (a cycle would close).
  bool unite(int x, int y) {
    int rx = find(x), ry = find(y);
    if (rx == ry) return false;
    parent_[rx] = static_cast<std::uint8_t>(ry);
    return true;
  }
  void add_edges(const EdgeSet& e) {
    e.for_each_edge([&](Edge ed) { unite(ed.x, ed.y); });
  }

 private:
  int n_;
  std::array<std::uint8_t, kMaxVertices + 1> parent_{};
};

struct ComponentView {
  std::array<std::int8_t, kMaxVertices + 1> component_of{};  // 1..k, index by vertex
  int k = 0;
  VertexMask isolated = 0;
};

ComponentView components(const EdgeSet& e);

struct Classification {
  bool is_forest = false;
  bool is_connected = false;
  VertexMask isolated = 0;
  // Least isolated vertex; n when no vertex is isolated.
  Vertex first_isolated = 0;
  // True when the isolated vertices are exactly a terminal suffix of the
  // label order (vacuously true when none are isolated).
  bool isolated_tail = false;
};

Classification classify(const EdgeSet& e);

inline bool is_forest(const EdgeSet& e) { return classify(e).is_forest; }
inline bool is_connected_spanning(const EdgeSet& e) { return components(e).k == 1; }

// CLI edge-list format: comma-separated "x-y" tokens with x < y; whitespace
// ignored; duplicate or malformed tokens rejected.
EdgeSet parse_edge_list(int n, std::string_view text);
std::string format_edge_list(const EdgeSet& e);
std::string format_edge(Edge e);
Edge parse_edge(int n, std::string_view token);

}  // namespace fna

#endif
