#ifndef FNA_COUNTING_HPP
#define FNA_COUNTING_HPP

#include <cstdint>
#include <list>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "fna/canonical.hpp"
#include "fna/count.hpp"
#include "fna/graph.hpp"
#include "fna/rational.hpp"

namespace fna {

enum class Property { forest, connected };

// A constrained subgraph-counting question: how many subsets s with
// contain <= s <= edges - avoid have the property.
struct CountingProblem {
  EdgeSet edges;
  EdgeSet contain;
  EdgeSet avoid;

  int n() const { return edges.n(); }
  EdgeSet reduced() const { return edges - avoid; }
  void validate() const;
};

// Per-edge non-negative weights; a scalar applies to every edge.
class WeightVector {
 public:
  static WeightVector uniform(int n, const Rational& alpha);
  static WeightVector per_edge(int n, std::vector<Rational> by_rank);
  const Rational& weight(int rank) const { return weights_[static_cast<std::size_t>(rank)]; }

 private:
  std::vector<Rational> weights_;
};

// All forests of one cardinality that extend the "contain" constraint.
struct Layer {
  int s = 0;
  std::vector<EdgeSet> members;
};

// Shared memoization table mapping encoded problem keys to counts. Eviction
// is least-recently-used once the capacity is hit; losing an entry only
// costs recomputation. get/put are individually atomic, so concurrent
// counters may duplicate work but never corrupt results.
class MemoStore {
 public:
  static constexpr std::size_t kDefaultCapacity = 1u << 22;
  explicit MemoStore(std::size_t capacity = kDefaultCapacity);

  std::optional<Count> get(const std::string& key);
  void put(const std::string& key, const Count& value);
  std::size_t size() const;
  void clear();

 private:
  mutable std::mutex mu_;
  std::size_t capacity_;
  std::list<std::string> lru_;  // front = most recently used
  struct Entry {
    Count value;
    std::list<std::string>::iterator pos;
  };
  std::unordered_map<std::string, Entry> map_;
};

enum class MemoMode { exact_key, index_key };

// Brute-force reference: enumerate every subset of the free edges.
Count count_forests_oracle(const CountingProblem& p, int max_free = 24);

// Layer-by-layer enumeration: start from the constraint forest and grow one
// edge at a time, admitting only free edges of rank above the largest free
// edge already present so each forest appears exactly once.
std::vector<Layer> forest_layers(const CountingProblem& p, std::size_t member_cap = 1u << 23);
Count count_forests_layered(const CountingProblem& p, std::size_t member_cap = 1u << 23);

// Recursive expansion over the free edges in ascending rank order, with
// sub-results cached in `store` under the chosen key. An optional front
// cache keyed by the exact edge bits short-circuits repeated subproblems
// before any canonical labelling is attempted (index mode only).
Count count_forests_memo(const CountingProblem& p, MemoMode mode, MemoStore& store,
                         MemoStore* front_cache = nullptr);

// Spanning-connected analogue: subsets s, contain <= s <= edges - avoid,
// with (V, s) connected over all n vertices.
Count count_connected(const CountingProblem& p, int max_free = 24);
Count count_connected_memo(const CountingProblem& p, MemoMode mode, MemoStore& store,
                           MemoStore* front_cache = nullptr);

// Sum of products of edge weights over the qualifying subsets (the empty
// product is 1); with unit weights this equals the plain count.
Rational weighted_sum(const CountingProblem& p, Property property, const WeightVector& weights,
                      int max_free = 24);

Count count_by_property(const CountingProblem& p, Property property, MemoMode mode,
                        MemoStore& store, MemoStore* front_cache = nullptr);

}  // namespace fna

#endif
