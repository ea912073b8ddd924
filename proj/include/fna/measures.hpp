#ifndef FNA_MEASURES_HPP
#define FNA_MEASURES_HPP

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "fna/count.hpp"
#include "fna/counting.hpp"
#include "fna/graph.hpp"
#include "fna/rational.hpp"

namespace fna {

// Multigraph on vertices 1..m: loops and parallel edges allowed, and the
// edge list order is identity-preserving so contraction can track edges.
struct Multigraph {
  int m = 0;
  std::vector<std::pair<int, int>> edges;

  static Multigraph from_edge_set(const EdgeSet& e);
  void validate() const;
  bool connected() const;
};

// Exact spanning-tree count by fraction-free determinant elimination on the
// reduced Laplacian. Loops are ignored, parallel edges contribute
// multiplicity, disconnected graphs count zero.
Count spanning_tree_count(const Multigraph& g);

// Contract the given (non-loop) edge: endpoints merge, the edge disappears,
// its remaining parallel copies become loops, everything else is redirected
// with identities preserved.
Multigraph contract(const Multigraph& g, int edge_index);

// Merge two distinct vertices without removing any edge.
Multigraph identify_vertices(const Multigraph& g, int x, int y);

// Image of a vertex under contraction of the edge at `edge_index`.
int contraction_image(const Multigraph& g, int edge_index, int v);

// Unit-resistance effective resistance between x and y, computed as the
// ratio of spanning-tree counts t(G with x,y identified) / t(G).
Rational effective_resistance(const Multigraph& g, int x, int y);

struct TreeNaResult {
  Count t, t_e, t_f, t_ef;
  bool holds = false;  // t_ef * t <= t_e * t_f
};
TreeNaResult tree_na_check(const Multigraph& g, int e_index, int f_index);

// Effective resistance between the endpoints of e never rises when f is
// contracted.
bool rayleigh_check(const Multigraph& g, int e_index, int f_index);

struct RCParams {
  Rational p;  // in [0,1]
  Rational q;  // > 0
  void validate() const;
};

struct RCResult {
  Rational z;
  std::vector<Rational> marginal;                 // P(edge open), per edge index
  std::vector<std::vector<Rational>> pair_open;   // P(both open), indexed [i][j], i < j
};

// Exact random-cluster evaluation by enumeration of all configurations:
// each weighted by its Bernoulli factor times q^(number of components).
RCResult rc_exact(const Multigraph& g, const RCParams& params, int max_edges = 20);

// P(e open, f open) <= P(e open) P(f open), exactly.
bool rc_na_check(const Multigraph& g, const RCParams& params, int e_index, int f_index);

enum class LimitTarget { connected, forest, spanning_tree };

// Exact total-variation distance between the random-cluster measure and the
// corresponding small-parameter limit measure on the subsets of a simple
// graph: connected subgraphs weighted by (p/(1-p))^|s|, forests weighted by
// (p/q)^|s|, or the uniform spanning tree.
Rational rc_limit_distance(const EdgeSet& g, const RCParams& params, LimitTarget target,
                           int max_edges = 20);

// Dual multigraph plus the edge pairing: dual edge i corresponds to the i-th
// primal edge in increasing rank order.
struct DualSpec {
  Multigraph dual;
};

struct DualCheckResult {
  Count lhs;  // forests of g containing X, avoiding Y
  Count rhs;  // connected spanning subgraphs of the dual containing Y*, avoiding X*
  bool equal = false;
};

DualCheckResult dual_complement_check(const EdgeSet& g, const DualSpec& spec,
                                      const EdgeSet& contain, const EdgeSet& avoid);

// File format: header "m=<int> edges=<int>", then one "u v" line per dual
// edge in pairing order.
DualSpec parse_dual_spec(std::istream& in);
DualSpec load_dual_spec(const std::string& path);

// Graph file: "n=<int>" line followed by "edges=<edge list>".
EdgeSet parse_graph_file(std::istream& in);
EdgeSet load_graph_file(const std::string& path);

}  // namespace fna

#endif
