#ifndef FNA_INSTANCES_HPP
#define FNA_INSTANCES_HPP

#include <cstdint>
#include <functional>
#include <mutex>
#include <string>
#include <unordered_set>
#include <vector>

#include "fna/canonical.hpp"
#include "fna/graph.hpp"

namespace fna {

// One inequality check: the edge set together with its distinguished pair.
// Category 1 pairs share a vertex (seed {<1,2>,<1,3>}); category 2 pairs are
// disjoint (seed {<1,2>,<3,4>}).
struct ConjectureInstance {
  EdgeSet edges;
  Edge e;
  Edge f;
  int category = 0;
};

// Ordered family of edge sets of one cardinality, every member containing a
// seed and carrying the isolated-tail property.
struct Level {
  int s = 0;
  std::vector<EdgeSet> members;
};

// Set of encoded index keys with atomic check-and-insert. Full keys are
// stored; membership answers are exact. The optional capacity bound is a
// hard error, never an eviction: a key's presence must always mean the
// corresponding instance was checked.
class IndexDatabase {
 public:
  explicit IndexDatabase(int n, std::size_t capacity = 0);  // 0 = unbounded

  int n() const { return n_; }
  std::size_t size() const;
  bool contains(const std::string& key) const;
  // True when the key was new.
  bool check_and_insert(const std::string& key);
  void insert(const std::string& key);
  std::vector<std::string> sorted_keys() const;

 private:
  int n_;
  std::size_t capacity_;
  mutable std::mutex mu_;
  std::unordered_set<std::string> keys_;
};

EdgeSet seed_edges(int n, int category);
std::vector<ConjectureInstance> instances_of(const EdgeSet& e);

// [E1] for n = 3; [E1, E2] for n >= 4.
Level seed_level(int n);

// The ordered growth set for an isolated-tail edge set e: all absent edges
// inside the first non-isolated block plus the single step edge into it.
std::vector<Edge> f_candidates(const EdgeSet& e);

struct LevelStats {
  int s = 0;
  std::uint64_t level_size = 0;
  std::uint64_t generated = 0;  // applicable instances among the candidates
  std::uint64_t checked = 0;
  std::uint64_t skipped = 0;
  std::uint64_t db_size = 0;
};

using InstanceSink = std::function<void(const ConjectureInstance&, const std::string& key)>;

// Gate the applicable instances of one edge set through the database.
// Every applicable key is inserted at decision time; the sink receives the
// instances that must be checked. Returns true when the set stays alive
// (some key was new, or pruning is off).
bool gate_instances(const EdgeSet& e, IndexDatabase& db, bool prune, const InstanceSink& sink,
                    LevelStats& stats);

// Grow a level by one edge. Unpruned, the next level is every f + E in
// (parent, candidate) order; pruned, a candidate survives only if one of its
// applicable instance keys is absent from the database, and surviving sets
// keep the same order. The sink is invoked for each instance to check, in
// sequence; decisions depend on the database as of that point.
Level next_level(const Level& level, IndexDatabase& db, bool prune, const InstanceSink& sink,
                 LevelStats* stats = nullptr);

}  // namespace fna

#endif
