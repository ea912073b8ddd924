#ifndef FNA_VERIFIER_HPP
#define FNA_VERIFIER_HPP

#include <memory>
#include <string>
#include <vector>

#include "fna/counting.hpp"
#include "fna/instances.hpp"

#include "json.hpp"

namespace fna {

// Shared state for a batch of inequality checks: the memoization tables and
// the key mode they run under.
struct CountingContext {
  MemoMode mode = MemoMode::index_key;
  MemoStore store;
  MemoStore front;

  explicit CountingContext(MemoMode m = MemoMode::index_key,
                           std::size_t capacity = MemoStore::kDefaultCapacity)
      : mode(m), store(capacity), front(capacity) {}
  MemoStore* front_cache() { return mode == MemoMode::index_key ? &front : nullptr; }
};

struct InstanceResult {
  ConjectureInstance instance;
  Count with_both;     // subsets containing e and f
  Count with_neither;  // subsets avoiding e and f
  Count only_e;        // containing e, avoiding f
  Count only_f;        // containing f, avoiding e
  Count lhs, rhs;      // with_both*with_neither vs only_e*only_f
  bool holds = false;
  std::string key;  // encoded index key of (edges, {e,f})
  double elapsed_seconds = 0.0;
};

InstanceResult check_instance(const EdgeSet& edges, Edge e, Edge f, Property property,
                              CountingContext& ctx);

struct RunConfig {
  int n = 5;
  int max_edges = -1;  // -1 means the full complete-graph edge count
  Property property = Property::forest;
  bool prune = true;
  MemoMode memo_mode = MemoMode::index_key;
  std::string db_path;
  std::string report_path;
  std::string checkpoint_path;
  int parallel_width = 1;
  std::size_t memo_capacity = MemoStore::kDefaultCapacity;

  int effective_max_edges() const { return max_edges < 0 ? edge_count(n) : max_edges; }
  void validate() const;
};

struct Report {
  RunConfig config;
  std::vector<LevelStats> levels;
  std::vector<InstanceResult> violations;
  std::uint64_t total_generated = 0;
  std::uint64_t total_checked = 0;
  std::uint64_t total_skipped = 0;
  double wall_seconds = 0.0;

  bool all_hold() const { return violations.empty(); }
  nlohmann::json to_json() const;
};

// Level-by-level verification of the inequality over every edge set that
// contains a seed pair, with optional index-database pruning. Violations
// never abort the run; the report lists each with its full counts.
Report run_verification(const RunConfig& config);

// Database file: magic "FNA-IDXDB", version byte, n, record count, then
// length-prefixed key records sorted bytewise. Bit-exact across platforms.
void db_save(const IndexDatabase& db, const std::string& path);
IndexDatabase db_load(const std::string& path, int expected_n = -1);
IndexDatabase db_merge(const IndexDatabase& a, const IndexDatabase& b);

}  // namespace fna

#endif
