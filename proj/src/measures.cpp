#include "fna/measures.hpp"

#include <bit>
#include <fstream>
#include <istream>
#include <sstream>

namespace fna {

Multigraph Multigraph::from_edge_set(const EdgeSet& e) {
  Multigraph g;
  g.m = e.n();
  e.for_each_edge([&](Edge ed) { g.edges.emplace_back(ed.x, ed.y); });
  return g;
}

void Multigraph::validate() const {
  if (m < 1) throw std::invalid_argument("multigraph needs at least one vertex");
  for (auto [u, v] : edges)
    if (u < 1 || u > m || v < 1 || v > m)
      throw std::invalid_argument("multigraph edge endpoint out of range");
}

bool Multigraph::connected() const {
  std::vector<int> parent(static_cast<std::size_t>(m) + 1);
  for (int v = 0; v <= m; ++v) parent[static_cast<std::size_t>(v)] = v;
  auto find = [&](int v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      v = parent[static_cast<std::size_t>(v)];
    }
    return v;
  };
  int k = m;
  for (auto [u, v] : edges) {
    int ru = find(u), rv = find(v);
    if (ru != rv) {
      parent[static_cast<std::size_t>(ru)] = rv;
      --k;
    }
  }
  return k == 1;
}

Count spanning_tree_count(const Multigraph& g) {
  g.validate();
  int m = g.m;
  if (m == 1) return 1;

  // reduced Laplacian (last vertex dropped), exact integers
  std::vector<std::vector<BigInt>> a(static_cast<std::size_t>(m - 1),
                                     std::vector<BigInt>(static_cast<std::size_t>(m - 1), 0));
  for (auto [u, v] : g.edges) {
    if (u == v) continue;  // loops never enter a tree
    int iu = u - 1, iv = v - 1;
    if (iu < m - 1) a[iu][iu] += 1;
    if (iv < m - 1) a[iv][iv] += 1;
    if (iu < m - 1 && iv < m - 1) {
      a[iu][iv] -= 1;
      a[iv][iu] -= 1;
    }
  }

  // Bareiss fraction-free elimination; the Laplacian minor is positive
  // semidefinite, so a vanishing pivot already forces determinant zero.
  BigInt prev = 1;
  int dim = m - 1;
  for (int k = 0; k < dim; ++k) {
    if (a[k][k] == 0) return 0;
    for (int i = k + 1; i < dim; ++i) {
      for (int j = k + 1; j < dim; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  BigInt det = a[dim - 1][dim - 1];
  if (det < 0) throw OverflowError("spanning tree determinant negative");
  if (det >> 127 != 0) throw OverflowError("spanning tree count exceeds 128 bits");
  BigInt hi = det >> 64;
  BigInt lo = det - (hi << 64);
  Count out(hi.convert_to<std::uint64_t>());
  out *= Count::pow2(64);
  out += Count(lo.convert_to<std::uint64_t>());
  return out;
}

namespace {

int merge_image(int v, int from, int into) {
  // vertices above `from` shift down after the merge
  if (v == from) v = into;
  return v > from ? v - 1 : v;
}

}  // namespace

Multigraph contract(const Multigraph& g, int edge_index) {
  g.validate();
  if (edge_index < 0 || edge_index >= static_cast<int>(g.edges.size()))
    throw std::out_of_range("contract: edge index out of range");
  auto [u, v] = g.edges[static_cast<std::size_t>(edge_index)];
  if (u == v) throw std::invalid_argument("contract: cannot contract a loop");
  if (u > v) std::swap(u, v);

  Multigraph out;
  out.m = g.m - 1;
  for (int i = 0; i < static_cast<int>(g.edges.size()); ++i) {
    if (i == edge_index) continue;
    auto [a, b] = g.edges[static_cast<std::size_t>(i)];
    out.edges.emplace_back(merge_image(a, v, u), merge_image(b, v, u));
  }
  return out;
}

Multigraph identify_vertices(const Multigraph& g, int x, int y) {
  g.validate();
  if (x == y) throw std::invalid_argument("identify: vertices must differ");
  if (x > y) std::swap(x, y);
  Multigraph out;
  out.m = g.m - 1;
  for (auto [a, b] : g.edges) out.edges.emplace_back(merge_image(a, y, x), merge_image(b, y, x));
  return out;
}

int contraction_image(const Multigraph& g, int edge_index, int v) {
  auto [a, b] = g.edges[static_cast<std::size_t>(edge_index)];
  if (a > b) std::swap(a, b);
  return merge_image(v, b, a);
}

Rational effective_resistance(const Multigraph& g, int x, int y) {
  g.validate();
  if (x == y) return 0;
  if (!g.connected()) throw std::invalid_argument("effective resistance needs a connected graph");
  Count merged = spanning_tree_count(identify_vertices(g, x, y));
  Count total = spanning_tree_count(g);
  return rational_from_count(merged) / rational_from_count(total);
}

TreeNaResult tree_na_check(const Multigraph& g, int e_index, int f_index) {
  g.validate();
  if (e_index == f_index) throw std::invalid_argument("tree check needs distinct edges");
  if (!g.connected()) throw std::invalid_argument("tree check needs a connected graph");

  auto is_loop = [&](const Multigraph& h, int idx) {
    return h.edges[static_cast<std::size_t>(idx)].first == h.edges[static_cast<std::size_t>(idx)].second;
  };
  auto trees_containing = [&](int idx) -> Count {
    return is_loop(g, idx) ? Count(0) : spanning_tree_count(contract(g, idx));
  };

  TreeNaResult r;
  r.t = spanning_tree_count(g);
  r.t_e = trees_containing(e_index);
  r.t_f = trees_containing(f_index);
  if (is_loop(g, e_index) || is_loop(g, f_index)) {
    r.t_ef = 0;
  } else {
    Multigraph ge = contract(g, e_index);
    int f_after = f_index > e_index ? f_index - 1 : f_index;
    r.t_ef = is_loop(ge, f_after) ? Count(0) : spanning_tree_count(contract(ge, f_after));
  }
  r.holds = r.t_ef * r.t <= r.t_e * r.t_f;
  return r;
}

bool rayleigh_check(const Multigraph& g, int e_index, int f_index) {
  g.validate();
  if (e_index == f_index) throw std::invalid_argument("rayleigh check needs distinct edges");
  if (!g.connected()) throw std::invalid_argument("rayleigh check needs a connected graph");
  auto [x, y] = g.edges[static_cast<std::size_t>(e_index)];
  Rational before = effective_resistance(g, x, y);
  if (g.edges[static_cast<std::size_t>(f_index)].first ==
      g.edges[static_cast<std::size_t>(f_index)].second)
    throw std::invalid_argument("rayleigh check: cannot contract a loop");
  Multigraph gf = contract(g, f_index);
  int xi = contraction_image(g, f_index, x);
  int yi = contraction_image(g, f_index, y);
  Rational after = xi == yi ? Rational(0) : effective_resistance(gf, xi, yi);
  return after <= before;
}

void RCParams::validate() const {
  if (p < 0 || p > 1) throw std::invalid_argument("random-cluster p must lie in [0,1]");
  if (q <= 0) throw std::invalid_argument("random-cluster q must be positive");
}

RCResult rc_exact(const Multigraph& g, const RCParams& params, int max_edges) {
  g.validate();
  params.validate();
  int ec = static_cast<int>(g.edges.size());
  if (ec > max_edges) throw BudgetError("random-cluster enumeration budget exceeded");

  // power tables
  std::vector<Rational> pw(static_cast<std::size_t>(ec) + 1), cw(static_cast<std::size_t>(ec) + 1),
      qw(static_cast<std::size_t>(g.m) + 1);
  pw[0] = cw[0] = qw[0] = 1;
  for (int i = 1; i <= ec; ++i) pw[static_cast<std::size_t>(i)] = pw[static_cast<std::size_t>(i - 1)] * params.p;
  for (int i = 1; i <= ec; ++i)
    cw[static_cast<std::size_t>(i)] = cw[static_cast<std::size_t>(i - 1)] * (Rational(1) - params.p);
  for (int i = 1; i <= g.m; ++i) qw[static_cast<std::size_t>(i)] = qw[static_cast<std::size_t>(i - 1)] * params.q;

  RCResult out;
  out.z = 0;
  out.marginal.assign(static_cast<std::size_t>(ec), Rational(0));
  out.pair_open.assign(static_cast<std::size_t>(ec),
                       std::vector<Rational>(static_cast<std::size_t>(ec), Rational(0)));

  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << ec); ++mask) {
    int open = std::popcount(mask);
    // component count of the open subgraph over all m vertices
    std::vector<int> parent(static_cast<std::size_t>(g.m) + 1);
    for (int v = 0; v <= g.m; ++v) parent[static_cast<std::size_t>(v)] = v;
    auto find = [&](int v) {
      while (parent[static_cast<std::size_t>(v)] != v) {
        parent[static_cast<std::size_t>(v)] =
            parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
        v = parent[static_cast<std::size_t>(v)];
      }
      return v;
    };
    int k = g.m;
    for (int i = 0; i < ec; ++i) {
      if (!(mask >> i & 1)) continue;
      auto [u, v] = g.edges[static_cast<std::size_t>(i)];
      int ru = find(u), rv = find(v);
      if (ru != rv) {
        parent[static_cast<std::size_t>(ru)] = rv;
        --k;
      }
    }
    Rational w = pw[static_cast<std::size_t>(open)] * cw[static_cast<std::size_t>(ec - open)] *
                 qw[static_cast<std::size_t>(k)];
    out.z += w;
    for (int i = 0; i < ec; ++i) {
      if (!(mask >> i & 1)) continue;
      out.marginal[static_cast<std::size_t>(i)] += w;
      for (int j = i + 1; j < ec; ++j)
        if (mask >> j & 1) out.pair_open[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] += w;
    }
  }

  if (out.z == 0) throw Error("random-cluster partition function vanished");
  for (auto& r : out.marginal) r /= out.z;
  for (auto& row : out.pair_open)
    for (auto& r : row) r /= out.z;
  for (int i = 0; i < ec; ++i)
    for (int j = i + 1; j < ec; ++j)
      out.pair_open[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
          out.pair_open[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return out;
}

bool rc_na_check(const Multigraph& g, const RCParams& params, int e_index, int f_index) {
  if (e_index == f_index) throw std::invalid_argument("association check needs distinct edges");
  RCResult r = rc_exact(g, params);
  return r.pair_open[static_cast<std::size_t>(e_index)][static_cast<std::size_t>(f_index)] <=
         r.marginal[static_cast<std::size_t>(e_index)] * r.marginal[static_cast<std::size_t>(f_index)];
}

Rational rc_limit_distance(const EdgeSet& g, const RCParams& params, LimitTarget target,
                           int max_edges) {
  params.validate();
  int n = g.n();
  int ec = g.size();
  if (ec > max_edges) throw BudgetError("limit-distance enumeration budget exceeded");

  Multigraph mg = Multigraph::from_edge_set(g);
  RCResult rc = rc_exact(mg, params, max_edges);

  // limit measure weight of a subset, unnormalized
  Rational beta = 0, alpha = 0;
  if (target == LimitTarget::connected) {
    if (params.p >= 1) throw std::invalid_argument("connected limit needs p < 1");
    beta = params.p / (Rational(1) - params.p);
  } else if (target == LimitTarget::forest) {
    alpha = params.p / params.q;
  }

  CountingProblem whole{g, EdgeSet(n), EdgeSet(n)};
  Rational normalizer = 0;
  switch (target) {
    case LimitTarget::connected:
      normalizer = weighted_sum(whole, Property::connected, WeightVector::uniform(n, beta), max_edges);
      break;
    case LimitTarget::forest:
      normalizer = weighted_sum(whole, Property::forest, WeightVector::uniform(n, alpha), max_edges);
      break;
    case LimitTarget::spanning_tree:
      normalizer = rational_from_count(spanning_tree_count(mg));
      break;
  }
  if (normalizer == 0) throw std::invalid_argument("limit target measure is empty");

  std::vector<Edge> edge_list = g.edges();
  Rational tv = 0;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << ec); ++mask) {
    EdgeSet subset(n);
    for (int i = 0; i < ec; ++i)
      if (mask >> i & 1) subset.add(edge_list[static_cast<std::size_t>(i)]);

    int open = std::popcount(mask);
    Rational mu = 0;
    switch (target) {
      case LimitTarget::connected:
        if (is_connected_spanning(subset)) {
          Rational w = 1;
          for (int i = 0; i < open; ++i) w *= beta;
          mu = w / normalizer;
        }
        break;
      case LimitTarget::forest:
        if (is_forest(subset)) {
          Rational w = 1;
          for (int i = 0; i < open; ++i) w *= alpha;
          mu = w / normalizer;
        }
        break;
      case LimitTarget::spanning_tree: {
        Classification c = classify(subset);
        if (c.is_forest && c.is_connected) mu = Rational(1) / normalizer;
        break;
      }
    }

    // random-cluster probability of this configuration
    Rational phi = 1;
    for (int i = 0; i < open; ++i) phi *= params.p;
    for (int i = 0; i < ec - open; ++i) phi *= Rational(1) - params.p;
    Rational qpow = 1;
    int k = components(subset).k;
    for (int i = 0; i < k; ++i) qpow *= params.q;
    phi = phi * qpow / rc.z;

    Rational diff = phi - mu;
    if (diff < 0) diff = -diff;
    tv += diff;
  }
  return tv / 2;
}

DualCheckResult dual_complement_check(const EdgeSet& g, const DualSpec& spec,
                                      const EdgeSet& contain, const EdgeSet& avoid) {
  spec.dual.validate();
  int ec = g.size();
  if (static_cast<int>(spec.dual.edges.size()) != ec)
    throw std::invalid_argument("dual edge count does not match primal edge count");
  if (!contain.subset_of(g) || !avoid.subset_of(g) || !contain.disjoint_with(avoid))
    throw std::invalid_argument("malformed constraint pair");

  DualCheckResult out;
  out.lhs = count_forests_oracle(CountingProblem{g, contain, avoid});

  // dual constraints swap: avoided primal edges must appear, contained ones
  // must not (dual edge i pairs with the i-th primal edge in rank order)
  std::vector<Edge> primal = g.edges();
  std::uint64_t required = 0, forbidden = 0;
  for (int i = 0; i < ec; ++i) {
    if (avoid.contains(primal[static_cast<std::size_t>(i)])) required |= std::uint64_t{1} << i;
    if (contain.contains(primal[static_cast<std::size_t>(i)])) forbidden |= std::uint64_t{1} << i;
  }
  if (ec - contain.size() - avoid.size() > 24)
    throw BudgetError("dual subset enumeration budget exceeded");

  Count rhs = 0;
  std::uint64_t free = (~(required | forbidden)) & ((std::uint64_t{1} << ec) - 1);
  std::uint64_t sub = 0;
  for (;;) {
    std::uint64_t mask = required | sub;
    // connectivity of the dual subgraph over all dual vertices
    std::vector<int> parent(static_cast<std::size_t>(spec.dual.m) + 1);
    for (int v = 0; v <= spec.dual.m; ++v) parent[static_cast<std::size_t>(v)] = v;
    auto find = [&](int v) {
      while (parent[static_cast<std::size_t>(v)] != v) {
        parent[static_cast<std::size_t>(v)] =
            parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
        v = parent[static_cast<std::size_t>(v)];
      }
      return v;
    };
    int k = spec.dual.m;
    for (int i = 0; i < ec; ++i) {
      if (!(mask >> i & 1)) continue;
      auto [u, v] = spec.dual.edges[static_cast<std::size_t>(i)];
      int ru = find(u), rv = find(v);
      if (ru != rv) {
        parent[static_cast<std::size_t>(ru)] = rv;
        --k;
      }
    }
    if (k == 1) rhs += 1;
    if (sub == free) break;
    sub = (sub - free) & free;
  }
  out.rhs = rhs;
  out.equal = out.lhs == out.rhs;
  return out;
}

DualSpec parse_dual_spec(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ParseError("dual spec: missing header");
  int m = -1, ec = -1;
  {
    std::istringstream hs(header);
    std::string tok;
    while (hs >> tok) {
      if (tok.rfind("m=", 0) == 0)
        m = std::stoi(tok.substr(2));
      else if (tok.rfind("edges=", 0) == 0)
        ec = std::stoi(tok.substr(6));
      else
        throw ParseError("dual spec: unexpected header token '" + tok + "'");
    }
  }
  if (m < 1 || ec < 0) throw ParseError("dual spec: header must give m and edges");
  DualSpec spec;
  spec.dual.m = m;
  for (int i = 0; i < ec; ++i) {
    std::string line;
    do {
      if (!std::getline(in, line)) throw ParseError("dual spec: fewer edge lines than declared");
    } while (line.find_first_not_of(" \t\r") == std::string::npos);
    std::istringstream ls(line);
    int u = 0, v = 0;
    if (!(ls >> u >> v)) throw ParseError("dual spec: malformed edge line '" + line + "'");
    std::string rest;
    if (ls >> rest) throw ParseError("dual spec: trailing tokens on edge line");
    spec.dual.edges.emplace_back(u, v);
  }
  spec.dual.validate();
  return spec;
}

DualSpec load_dual_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dual spec file: " + path);
  return parse_dual_spec(in);
}

EdgeSet parse_graph_file(std::istream& in) {
  int n = -1;
  std::string edges_text;
  bool have_edges = false;
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto trimmed = line.substr(first);
    while (!trimmed.empty() && (trimmed.back() == '\r' || trimmed.back() == ' ')) trimmed.pop_back();
    if (trimmed.rfind("n=", 0) == 0)
      n = std::stoi(trimmed.substr(2));
    else if (trimmed.rfind("edges=", 0) == 0) {
      edges_text = trimmed.substr(6);
      have_edges = true;
    } else
      throw ParseError("graph file: unexpected line '" + trimmed + "'");
  }
  if (n < 1 || !have_edges) throw ParseError("graph file: need n= and edges= lines");
  return parse_edge_list(n, edges_text);
}

EdgeSet load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open graph file: " + path);
  return parse_graph_file(in);
}

}  // namespace fna
