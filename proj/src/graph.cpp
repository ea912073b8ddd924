#include "fna/graph.hpp"

#include <charconv>

namespace fna {

namespace {

void check_n(int n) {
  if (n < 1 || n > kMaxVertices)
    throw std::invalid_argument("vertex count out of range: " + std::to_string(n));
}

}  // namespace

int edge_rank(int n, Vertex x, Vertex y) {
  check_n(n);
  if (x < 1 || y <= x || y > n)
    throw std::out_of_range("edge <" + std::to_string(x) + "," + std::to_string(y) +
                            "> invalid for n=" + std::to_string(n));
  return (x - 1) * n - x * (x + 1) / 2 + y - 1;
}

Edge edge_unrank(int n, int rank) {
  check_n(n);
  if (rank < 0 || rank >= edge_count(n))
    throw std::out_of_range("edge rank out of range: " + std::to_string(rank));
  int x = 1, r = rank;
  while (r >= n - x) {
    r -= n - x;
    ++x;
  }
  return Edge{x, x + 1 + r};
}

EdgeSet::EdgeSet(int n, std::uint64_t bits) : n_(n), bits_(bits) {
  check_n(n);
  if (n < kMaxVertices && bits >> edge_count(n) != 0)
    throw std::invalid_argument("edge bits beyond rank range for n=" + std::to_string(n));
}

EdgeSet EdgeSet::complete(int n) {
  check_n(n);
  int nn = edge_count(n);
  return EdgeSet(n, nn == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << nn) - 1);
}

EdgeSet EdgeSet::of(int n, std::initializer_list<Edge> edges) {
  EdgeSet s(n);
  for (Edge e : edges) s.add(e);
  return s;
}

std::vector<Edge> EdgeSet::edges() const {
  std::vector<Edge> out;
  out.reserve(static_cast<std::size_t>(size()));
  for_each_edge([&](Edge e) { out.push_back(e); });
  return out;
}

VertexMask EdgeSet::vertex_support() const {
  VertexMask m = 0;
  for_each_edge([&](Edge e) { m |= vertex_bit(e.x) | vertex_bit(e.y); });
  return m;
}

ComponentView components(const EdgeSet& e) {
  int n = e.n();
  UnionFind uf(n);
  e.for_each_edge([&](Edge ed) { uf.unite(ed.x, ed.y); });

  ComponentView view;
  std::array<std::int8_t, kMaxVertices + 1> id_of_root{};
  int next = 0;
  VertexMask support = e.vertex_support();
  for (Vertex v = 1; v <= n; ++v) {
    int r = uf.find(v);
    if (id_of_root[r] == 0) id_of_root[r] = static_cast<std::int8_t>(++next);
    view.component_of[v] = id_of_root[r];
    if ((support & vertex_bit(v)) == 0) view.isolated |= vertex_bit(v);
  }
  view.k = next;
  return view;
}

Classification classify(const EdgeSet& e) {
  ComponentView view = components(e);
  int n = e.n();
  Classification c;
  c.is_forest = e.size() + view.k == n;
  c.is_connected = view.k == 1;
  c.isolated = view.isolated;
  c.first_isolated = view.isolated == 0 ? n : std::countr_zero(view.isolated) + 1;
  // every vertex from first_isolated through n isolated, or none at all
  if (view.isolated == 0) {
    c.isolated_tail = true;
  } else {
    VertexMask tail = static_cast<VertexMask>(full_vertex_mask(n) & ~(vertex_bit(c.first_isolated) - 1));
    c.isolated_tail = view.isolated == tail;
  }
  return c;
}

Edge parse_edge(int n, std::string_view token) {
  auto dash = token.find('-');
  if (dash == std::string_view::npos || dash == 0 || dash + 1 == token.size())
    throw ParseError("malformed edge token '" + std::string(token) + "'");
  int x = 0, y = 0;
  auto r1 = std::from_chars(token.data(), token.data() + dash, x);
  auto r2 = std::from_chars(token.data() + dash + 1, token.data() + token.size(), y);
  if (r1.ec != std::errc{} || r1.ptr != token.data() + dash || r2.ec != std::errc{} ||
      r2.ptr != token.data() + token.size())
    throw ParseError("malformed edge token '" + std::string(token) + "'");
  if (x < 1 || y <= x || y > n)
    throw ParseError("edge '" + std::string(token) + "' out of range for n=" + std::to_string(n));
  return Edge{x, y};
}

EdgeSet parse_edge_list(int n, std::string_view text) {
  EdgeSet out(n);
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    Edge e = parse_edge(n, token);
    if (out.contains(e)) throw ParseError("duplicate edge token '" + token + "'");
    out.add(e);
    token.clear();
  };
  for (char c : text) {
    if (c == ',') {
      if (token.empty()) throw ParseError("empty edge token");
      flush();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      token.push_back(c);
    }
  }
  flush();
  return out;
}

std::string format_edge(Edge e) { return std::to_string(e.x) + "-" + std::to_string(e.y); }

std::string format_edge_list(const EdgeSet& e) {
  std::string out;
  e.for_each_edge([&](Edge ed) {
    if (!out.empty()) out += ",";
    out += format_edge(ed);
  });
  return out;
}

}  // namespace fna
