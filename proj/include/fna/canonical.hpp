#ifndef FNA_CANONICAL_HPP
#define FNA_CANONICAL_HPP

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fna/graph.hpp"

namespace fna {

// Bijection of {1..n} onto itself, acting on vertices, vertex sets, edges
// and edge sets.
class Permutation {
 public:
  Permutation() : n_(0) {}
  static Permutation identity(int n);
  static Permutation from_images(int n, const std::array<std::uint8_t, kMaxVertices + 1>& img);
  static Permutation of(std::initializer_list<Vertex> images);  // images of 1..n in order

  int n() const { return n_; }
  Vertex image(Vertex v) const { return img_[v]; }
  VertexMask apply(VertexMask m) const;
  EdgeSet apply(const EdgeSet& e) const;
  Permutation inverse() const;
  // a.then(b): first a, then b.
  Permutation then(const Permutation& b) const;
  // Lexicographic order on image vectors (1^g, ..., n^g).
  friend bool operator==(const Permutation&, const Permutation&) = default;
  bool lex_less(const Permutation& o) const;

 private:
  int n_;
  std::array<std::uint8_t, kMaxVertices + 1> img_{};
};

// Sequence of disjoint non-empty vertex sets covering 1..n. Cell order is
// significant; order within a cell is not.
struct OrderedPartition {
  int n = 0;
  std::vector<VertexMask> cells;

  static OrderedPartition unit(int n) { return {n, {full_vertex_mask(n)}}; }
  bool valid() const;
  bool discrete() const;
  OrderedPartition apply(const Permutation& g) const;
  friend bool operator==(const OrderedPartition&, const OrderedPartition&) = default;
};

struct CanonicalResult {
  EdgeSet canon;      // the distinguished isomorph
  Permutation delta;  // canon = g^delta
};

// Canonical labelling of a partitioned graph: equitable-partition refinement
// with backtracking over target cells, candidate encodings minimised over
// the leaves, duplicate subtrees pruned with discovered automorphisms.
// Satisfies, for every permutation g:
//   (C1) canon is isomorphic to the input,
//   (C2) canonical_form(G^g, pi^g).canon == canonical_form(G, pi).canon,
//   (C3) canonical_form(G, pi^g) == canonical_form(G, pi) implies pi^g is an
//        automorphic image of pi.
CanonicalResult canonical_form(const EdgeSet& g, const OrderedPartition& pi);

// Joint canonical labelling of an ordered pair of edge sets on the same
// vertex set (a two-colour-edge graph); both layers are permuted by the one
// emitted permutation. Same axioms with "graph" read as "pair".
struct PairCanonicalResult {
  EdgeSet canon_first;
  EdgeSet canon_second;
  Permutation delta;
};
PairCanonicalResult canonical_form_pair(const EdgeSet& a, const EdgeSet& b,
                                        const OrderedPartition& pi);

// Vertices incident to an edge of a and an edge of b.
VertexMask interface_vertices(const EdgeSet& a, const EdgeSet& b);

// Partition (V0, {c1}, ..., {ck}): V0 = non-interface vertices (omitted when
// empty), then one singleton per interface vertex v, ordered by increasing
// colour v^delta.
OrderedPartition interface_partition(const EdgeSet& x, const EdgeSet& r,
                                     const Permutation& delta);

// Identifier of a class of counting problems with a common count: interface
// cardinality plus the canonical forms of the two constraint layers under
// the interface partition. Equal keys imply equal forest (and connected)
// counts; keys are invariant under relabelling of the whole problem.
struct IndexKey {
  std::uint8_t n = 0;
  std::uint8_t k = 0;       // interface cardinality
  std::uint64_t cx = 0;     // canonical bits of the "contain" layer
  std::uint64_t cr = 0;     // canonical bits of the remainder layer
  friend bool operator==(const IndexKey&, const IndexKey&) = default;
};

// Key of the counting problem (edges, contain, avoid).
IndexKey index_i(const EdgeSet& edges, const EdgeSet& contain, const EdgeSet& avoid);
// index_j(d, x) = index_i(d, x, {}).
IndexKey index_j(const EdgeSet& d, const EdgeSet& x);

// Deterministic injective byte encoding: version, n, k, cell count, cell
// sizes, then the upper-triangular adjacency bits of each canonical layer,
// row-major, MSB-first, zero-padded to a byte boundary. Byte-identical
// across runs and platforms.
std::string encode_key(const IndexKey& key);
IndexKey decode_key(std::string_view bytes);

}  // namespace fna

#endif
