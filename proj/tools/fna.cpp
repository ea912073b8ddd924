// Command-line surface: verification runs, one-off counts, spanning-tree and
// random-cluster checks, and planar-duality count comparisons.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "fna/measures.hpp"
#include "fna/verifier.hpp"

namespace {

constexpr int kExitHolds = 0;
constexpr int kExitViolation = 1;
constexpr int kExitError = 2;

fna::Property parse_property(const std::string& s) {
  if (s == "forest") return fna::Property::forest;
  if (s == "connected") return fna::Property::connected;
  throw CLI::ValidationError("--property", "must be 'forest' or 'connected'");
}

fna::WeightVector load_weights(int n, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw fna::IoError("cannot open weights file: " + path);
  std::vector<fna::Rational> by_rank(static_cast<std::size_t>(fna::edge_count(n)), fna::Rational(1));
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::string token, value;
    if (!(ls >> token >> value)) throw fna::ParseError("weights line needs 'x-y value': " + line);
    fna::Edge e = fna::parse_edge(n, token);
    by_rank[static_cast<std::size_t>(fna::edge_rank(n, e))] = fna::parse_rational(value);
  }
  return fna::WeightVector::per_edge(n, std::move(by_rank));
}

std::pair<fna::Edge, fna::Edge> parse_pair(int n, const std::string& text) {
  auto comma = text.find(',');
  if (comma == std::string::npos)
    throw fna::ParseError("pair must look like 'x-y,u-v': " + text);
  fna::Edge e = fna::parse_edge(n, text.substr(0, comma));
  fna::Edge f = fna::parse_edge(n, text.substr(comma + 1));
  if (e == f) throw fna::ParseError("pair edges must differ");
  return {e, f};
}

int edge_index_of(const fna::Multigraph& g, fna::Edge e) {
  for (int i = 0; i < static_cast<int>(g.edges.size()); ++i) {
    auto [u, v] = g.edges[static_cast<std::size_t>(i)];
    if (u > v) std::swap(u, v);
    if (u == e.x && v == e.y) return i;
  }
  throw fna::ParseError("edge " + fna::format_edge(e) + " not present in the graph");
}

int run_verify(int n, int max_edges, const std::string& property, bool no_prune,
               const std::string& memo, const std::string& db_path, const std::string& report_path,
               const std::string& checkpoint, int jobs) {
  fna::RunConfig cfg;
  cfg.n = n;
  cfg.max_edges = max_edges;
  cfg.property = parse_property(property);
  cfg.prune = !no_prune;
  cfg.memo_mode = memo == "exact" ? fna::MemoMode::exact_key : fna::MemoMode::index_key;
  cfg.db_path = db_path;
  cfg.report_path = report_path;
  cfg.checkpoint_path = checkpoint;
  cfg.parallel_width = jobs;

  fna::Report report = fna::run_verification(cfg);
  for (const fna::LevelStats& st : report.levels)
    std::printf("level s=%d size=%llu generated=%llu checked=%llu skipped=%llu db=%llu\n", st.s,
                static_cast<unsigned long long>(st.level_size),
                static_cast<unsigned long long>(st.generated),
                static_cast<unsigned long long>(st.checked),
                static_cast<unsigned long long>(st.skipped),
                static_cast<unsigned long long>(st.db_size));
  std::printf("totals: generated=%llu checked=%llu skipped=%llu wall=%.2fs\n",
              static_cast<unsigned long long>(report.total_generated),
              static_cast<unsigned long long>(report.total_checked),
              static_cast<unsigned long long>(report.total_skipped), report.wall_seconds);
  if (!report.all_hold()) {
    std::printf("VIOLATIONS: %zu\n", report.violations.size());
    for (const fna::InstanceResult& r : report.violations)
      std::printf("  edges=%s e=%s f=%s lhs=%s rhs=%s\n",
                  fna::format_edge_list(r.instance.edges).c_str(),
                  fna::format_edge(r.instance.e).c_str(), fna::format_edge(r.instance.f).c_str(),
                  r.lhs.str().c_str(), r.rhs.str().c_str());
    return kExitViolation;
  }
  std::printf("all %llu checked instances hold\n",
              static_cast<unsigned long long>(report.total_checked));
  return kExitHolds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact negative-association verifier for uniform forests and connected subgraphs"};
  app.require_subcommand(1);

  // verify
  auto* verify = app.add_subcommand("verify", "run the full inequality verification");
  int v_n = 5, v_max_edges = -1, v_jobs = 1;
  std::string v_property = "forest", v_memo = "index", v_db, v_report, v_checkpoint;
  bool v_no_prune = false;
  verify->add_option("--n", v_n, "vertex count")->required();
  verify->add_option("--max-edges", v_max_edges, "largest edge-set size to reach");
  verify->add_option("--property", v_property, "forest|connected")->capture_default_str();
  verify->add_flag("--no-prune", v_no_prune, "disable index-database pruning");
  verify->add_option("--memo", v_memo, "exact|index memo keys")->capture_default_str();
  verify->add_option("--db", v_db, "index database path (loaded when present, saved per level)");
  verify->add_option("--report", v_report, "write a JSON report here");
  verify->add_option("--checkpoint", v_checkpoint, "progress marker path for resumable runs");
  verify->add_option("--jobs", v_jobs, "parallel instance checkers")->capture_default_str();

  // count
  auto* count = app.add_subcommand("count", "count constrained forests or connected subgraphs");
  int c_n = 0;
  std::string c_edges, c_contain, c_avoid, c_property = "forest", c_alpha, c_weights;
  count->add_option("--n", c_n, "vertex count")->required();
  count->add_option("--edges", c_edges, "edge list, e.g. 1-2,1-3")->required();
  count->add_option("--contain", c_contain, "edges every subset must contain");
  count->add_option("--avoid", c_avoid, "edges every subset must avoid");
  count->add_option("--property", c_property, "forest|connected")->capture_default_str();
  count->add_option("--alpha", c_alpha, "scalar weight per edge (rational)");
  count->add_option("--weights", c_weights, "per-edge weights file ('x-y value' lines)");

  // tree-na
  auto* treena = app.add_subcommand("tree-na", "spanning-tree edge association check");
  int t_n = 0;
  std::string t_edges, t_pair;
  treena->add_option("--n", t_n, "vertex count")->required();
  treena->add_option("--edges", t_edges, "edge list")->required();
  treena->add_option("--pair", t_pair, "edge pair 'x-y,u-v' (default: all pairs)");

  // resistance
  auto* resist = app.add_subcommand("resistance", "effective resistance between two vertices");
  int r_n = 0, r_source = 0, r_sink = 0;
  std::string r_edges;
  resist->add_option("--n", r_n, "vertex count")->required();
  resist->add_option("--edges", r_edges, "edge list")->required();
  resist->add_option("--source", r_source, "source vertex")->required();
  resist->add_option("--sink", r_sink, "sink vertex")->required();

  // rc
  auto* rc = app.add_subcommand("rc", "exact random-cluster evaluation");
  int rc_n = 0;
  std::string rc_edges, rc_p, rc_q, rc_limit, rc_pair;
  rc->add_option("--n", rc_n, "vertex count")->required();
  rc->add_option("--edges", rc_edges, "edge list")->required();
  rc->add_option("--p", rc_p, "edge density (rational)")->required();
  rc->add_option("--q", rc_q, "cluster weight (rational)")->required();
  rc->add_option("--limit", rc_limit, "connected|forest|ust: distance to the limit measure");
  rc->add_option("--pair", rc_pair, "edge pair for the association check");

  // dual-check
  auto* dual = app.add_subcommand("dual-check", "forest/connected duality count identity");
  std::string d_graph, d_dual, d_contain, d_avoid;
  dual->add_option("--graph", d_graph, "primal graph file")->required();
  dual->add_option("--dual", d_dual, "dual spec file")->required();
  dual->add_option("--contain", d_contain, "primal edges to contain");
  dual->add_option("--avoid", d_avoid, "primal edges to avoid");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify)
      return run_verify(v_n, v_max_edges, v_property, v_no_prune, v_memo, v_db, v_report,
                        v_checkpoint, v_jobs);

    if (*count) {
      fna::EdgeSet edges = fna::parse_edge_list(c_n, c_edges);
      fna::CountingProblem p{edges, fna::parse_edge_list(c_n, c_contain),
                             fna::parse_edge_list(c_n, c_avoid)};
      fna::Property prop = parse_property(c_property);
      if (!c_alpha.empty() && !c_weights.empty())
        throw fna::ParseError("--alpha and --weights are mutually exclusive");
      if (!c_alpha.empty() || !c_weights.empty()) {
        fna::WeightVector w = !c_alpha.empty()
                                  ? fna::WeightVector::uniform(c_n, fna::parse_rational(c_alpha))
                                  : load_weights(c_n, c_weights);
        std::printf("%s\n", fna::format_rational(fna::weighted_sum(p, prop, w)).c_str());
      } else if (prop == fna::Property::forest) {
        fna::MemoStore store;
        std::printf("%s\n", fna::count_forests_memo(p, fna::MemoMode::index_key, store).str().c_str());
      } else {
        std::printf("%s\n", fna::count_connected(p).str().c_str());
      }
      return kExitHolds;
    }

    if (*treena) {
      fna::EdgeSet edges = fna::parse_edge_list(t_n, t_edges);
      fna::Multigraph g = fna::Multigraph::from_edge_set(edges);
      auto check_one = [&](fna::Edge e, fna::Edge f) {
        fna::TreeNaResult r = fna::tree_na_check(g, edge_index_of(g, e), edge_index_of(g, f));
        std::printf("e=%s f=%s t=%s t_e=%s t_f=%s t_ef=%s %s\n", fna::format_edge(e).c_str(),
                    fna::format_edge(f).c_str(), r.t.str().c_str(), r.t_e.str().c_str(),
                    r.t_f.str().c_str(), r.t_ef.str().c_str(), r.holds ? "holds" : "VIOLATED");
        return r.holds;
      };
      bool all = true;
      if (!t_pair.empty()) {
        auto [e, f] = parse_pair(t_n, t_pair);
        all = check_one(e, f);
      } else {
        std::vector<fna::Edge> es = edges.edges();
        for (std::size_t i = 0; i < es.size(); ++i)
          for (std::size_t j = i + 1; j < es.size(); ++j) all &= check_one(es[i], es[j]);
      }
      return all ? kExitHolds : kExitViolation;
    }

    if (*resist) {
      fna::EdgeSet edges = fna::parse_edge_list(r_n, r_edges);
      fna::Rational r =
          fna::effective_resistance(fna::Multigraph::from_edge_set(edges), r_source, r_sink);
      std::printf("%s\n", fna::format_rational(r).c_str());
      return kExitHolds;
    }

    if (*rc) {
      fna::EdgeSet edges = fna::parse_edge_list(rc_n, rc_edges);
      fna::Multigraph g = fna::Multigraph::from_edge_set(edges);
      fna::RCParams params{fna::parse_rational(rc_p), fna::parse_rational(rc_q)};
      if (!rc_limit.empty()) {
        fna::LimitTarget target;
        if (rc_limit == "connected")
          target = fna::LimitTarget::connected;
        else if (rc_limit == "forest")
          target = fna::LimitTarget::forest;
        else if (rc_limit == "ust")
          target = fna::LimitTarget::spanning_tree;
        else
          throw fna::ParseError("--limit must be connected|forest|ust");
        fna::Rational d = fna::rc_limit_distance(edges, params, target);
        std::printf("tv_distance=%s (~%.6f)\n", fna::format_rational(d).c_str(),
                    d.convert_to<double>());
        return kExitHolds;
      }
      if (!rc_pair.empty()) {
        auto [e, f] = parse_pair(rc_n, rc_pair);
        bool holds = fna::rc_na_check(g, params, edge_index_of(g, e), edge_index_of(g, f));
        std::printf("%s\n", holds ? "holds" : "VIOLATED");
        return holds ? kExitHolds : kExitViolation;
      }
      fna::RCResult r = fna::rc_exact(g, params);
      std::printf("Z=%s\n", fna::format_rational(r.z).c_str());
      std::vector<fna::Edge> es = edges.edges();
      for (std::size_t i = 0; i < es.size(); ++i)
        std::printf("P(%s open)=%s\n", fna::format_edge(es[i]).c_str(),
                    fna::format_rational(r.marginal[i]).c_str());
      return kExitHolds;
    }

    if (*dual) {
      fna::EdgeSet g = fna::load_graph_file(d_graph);
      fna::DualSpec spec = fna::load_dual_spec(d_dual);
      fna::DualCheckResult r = fna::dual_complement_check(
          g, spec, fna::parse_edge_list(g.n(), d_contain), fna::parse_edge_list(g.n(), d_avoid));
      std::printf("forests=%s dual_connected=%s %s\n", r.lhs.str().c_str(), r.rhs.str().c_str(),
                  r.equal ? "equal" : "DIFFER");
      return r.equal ? kExitHolds : kExitViolation;
    }
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return kExitError;
  }
  return kExitError;
}
