#include "fna/counting.hpp"

#include <algorithm>

namespace fna {

void CountingProblem::validate() const {
  if (edges.n() < 1) throw std::invalid_argument("counting problem: empty graph");
  if (contain.n() != edges.n() || avoid.n() != edges.n())
    throw std::invalid_argument("counting problem: vertex counts disagree");
  if (!contain.subset_of(edges) || !avoid.subset_of(edges))
    throw std::invalid_argument("counting problem: constraints outside edge set");
  if (!contain.disjoint_with(avoid))
    throw std::invalid_argument("counting problem: overlapping constraints");
}

WeightVector WeightVector::uniform(int n, const Rational& alpha) {
  if (alpha < 0) throw std::invalid_argument("negative edge weight");
  WeightVector w;
  w.weights_.assign(static_cast<std::size_t>(edge_count(n)), alpha);
  return w;
}

WeightVector WeightVector::per_edge(int n, std::vector<Rational> by_rank) {
  if (by_rank.size() != static_cast<std::size_t>(edge_count(n)))
    throw std::invalid_argument("weight vector size mismatch");
  for (const Rational& r : by_rank)
    if (r < 0) throw std::invalid_argument("negative edge weight");
  WeightVector w;
  w.weights_ = std::move(by_rank);
  return w;
}

MemoStore::MemoStore(std::size_t capacity) : capacity_(capacity == 0 ? 1 : capacity) {}

std::optional<Count> MemoStore::get(const std::string& key) {
  std::lock_guard lock(mu_);
  auto it = map_.find(key);
  if (it == map_.end()) return std::nullopt;
  lru_.splice(lru_.begin(), lru_, it->second.pos);
  return it->second.value;
}

void MemoStore::put(const std::string& key, const Count& value) {
  std::lock_guard lock(mu_);
  auto it = map_.find(key);
  if (it != map_.end()) {
    lru_.splice(lru_.begin(), lru_, it->second.pos);
    it->second.value = value;
    return;
  }
  if (map_.size() >= capacity_) {
    map_.erase(lru_.back());
    lru_.pop_back();
  }
  lru_.push_front(key);
  map_.emplace(key, Entry{value, lru_.begin()});
}

std::size_t MemoStore::size() const {
  std::lock_guard lock(mu_);
  return map_.size();
}

void MemoStore::clear() {
  std::lock_guard lock(mu_);
  map_.clear();
  lru_.clear();
}

namespace {

void append_mask56(std::string& s, std::uint64_t bits) {
  for (int b = 0; b < 7; ++b) s.push_back(static_cast<char>(bits >> (8 * b) & 0xff));
}

std::string exact_memo_key(const EdgeSet& d, const EdgeSet& x) {
  std::string s;
  s.reserve(14);
  append_mask56(s, d.bits());
  append_mask56(s, x.bits());
  return s;
}

std::string index_memo_key(const EdgeSet& d, const EdgeSet& x) {
  IndexKey k = index_j(d, x);
  std::string s;
  s.reserve(15);
  s.push_back(static_cast<char>(k.k));
  append_mask56(s, k.cx);
  append_mask56(s, k.cr);
  return s;
}

int free_budget_or_throw(const CountingProblem& p, int max_free) {
  EdgeSet free = p.reduced() - p.contain;
  if (free.size() > max_free)
    throw BudgetError("subset enumeration budget exceeded: " + std::to_string(free.size()) +
                      " free edges > " + std::to_string(max_free));
  return free.size();
}

struct ForestCounter {
  int n;
  MemoMode mode;
  MemoStore& store;
  MemoStore* front;

  // Precondition: x is a forest contained in d.
  Count count(const EdgeSet& d, const EdgeSet& x) {
    std::string fkey;
    if (front != nullptr && mode == MemoMode::index_key) {
      fkey = exact_memo_key(d, x);
      if (auto hit = front->get(fkey)) return *hit;
    }
    std::string key =
        mode == MemoMode::exact_key ? exact_memo_key(d, x) : index_memo_key(d, x);
    if (auto hit = store.get(key)) {
      if (front != nullptr && !fkey.empty()) front->put(fkey, *hit);
      return *hit;
    }

    Count total = 0;
    UnionFind uf(n);
    x.for_each_edge([&](Edge e) { uf.unite(e.x, e.y); });
    EdgeSet grown = x;
    bool acyclic_throughout = true;
    EdgeSet free = d - x;
    for (std::uint64_t b = free.bits(); b != 0; b &= b - 1) {
      Edge pivot = edge_unrank(n, std::countr_zero(b));
      total += count(d.without(pivot), grown);
      if (!uf.unite(pivot.x, pivot.y)) {
        // every later branch would carry this cycle in its constraints
        acyclic_throughout = false;
        break;
      }
      grown.add(pivot);
    }
    if (acyclic_throughout) total += 1;  // d itself is a forest

    store.put(key, total);
    if (front != nullptr && !fkey.empty()) front->put(fkey, total);
    return total;
  }
};

struct ConnectedCounter {
  int n;
  MemoMode mode;
  MemoStore& store;
  MemoStore* front;

  Count count(const EdgeSet& d, const EdgeSet& x) {
    if (!is_connected_spanning(d)) return 0;
    if (is_connected_spanning(x)) return Count::pow2(static_cast<unsigned>((d - x).size()));

    std::string fkey;
    if (front != nullptr && mode == MemoMode::index_key) {
      fkey = exact_memo_key(d, x);
      if (auto hit = front->get(fkey)) return *hit;
    }
    std::string key =
        mode == MemoMode::exact_key ? exact_memo_key(d, x) : index_memo_key(d, x);
    if (auto hit = store.get(key)) {
      if (front != nullptr && !fkey.empty()) front->put(fkey, *hit);
      return *hit;
    }

    Count total = 0;
    EdgeSet grown = x;
    EdgeSet free = d - x;
    for (std::uint64_t b = free.bits(); b != 0; b &= b - 1) {
      Edge pivot = edge_unrank(n, std::countr_zero(b));
      total += count(d.without(pivot), grown);
      grown.add(pivot);
    }
    total += 1;  // d itself is connected (checked on entry)

    store.put(key, total);
    if (front != nullptr && !fkey.empty()) front->put(fkey, total);
    return total;
  }
};

}  // namespace

Count count_forests_oracle(const CountingProblem& p, int max_free) {
  p.validate();
  free_budget_or_throw(p, max_free);
  if (!is_forest(p.contain)) return 0;
  int n = p.n();
  std::uint64_t free = (p.reduced() - p.contain).bits();
  Count total = 0;
  std::uint64_t sub = 0;
  for (;;) {
    UnionFind uf(n);
    bool acyclic = true;
    for (std::uint64_t b = p.contain.bits() | sub; b != 0; b &= b - 1) {
      Edge e = edge_unrank(n, std::countr_zero(b));
      if (!uf.unite(e.x, e.y)) {
        acyclic = false;
        break;
      }
    }
    if (acyclic) total += 1;
    if (sub == free) break;
    sub = (sub - free) & free;  // next submask
  }
  return total;
}

std::vector<Layer> forest_layers(const CountingProblem& p, std::size_t member_cap) {
  p.validate();
  std::vector<Layer> layers;
  if (!is_forest(p.contain)) return layers;
  int n = p.n();
  EdgeSet d = p.reduced();
  EdgeSet free_all = d - p.contain;

  struct Member {
    std::uint64_t bits;
    int max_free_rank;  // -1 when no free edge added yet
  };
  std::vector<Member> current{{p.contain.bits(), -1}};
  layers.push_back(Layer{p.contain.size(), {p.contain}});

  while (!current.empty()) {
    std::vector<Member> next;
    Layer layer;
    layer.s = layers.back().s + 1;
    for (const Member& m : current) {
      UnionFind uf(n);
      EdgeSet forest(n, m.bits);
      forest.for_each_edge([&](Edge e) { uf.unite(e.x, e.y); });
      std::uint64_t candidates = free_all.bits() & ~m.bits;
      if (m.max_free_rank >= 0) candidates &= ~((std::uint64_t{2} << m.max_free_rank) - 1);
      for (std::uint64_t b = candidates; b != 0; b &= b - 1) {
        int rank = std::countr_zero(b);
        Edge e = edge_unrank(n, rank);
        UnionFind copy = uf;
        if (!copy.unite(e.x, e.y)) continue;  // joins two components or closes a cycle
        if (next.size() >= member_cap)
          throw BudgetError("forest layer exceeds member cap");
        next.push_back(Member{m.bits | (std::uint64_t{1} << rank), rank});
        layer.members.push_back(EdgeSet(n, m.bits | (std::uint64_t{1} << rank)));
      }
    }
    if (layer.members.empty()) break;
    layers.push_back(std::move(layer));
    current = std::move(next);
  }
  return layers;
}

Count count_forests_layered(const CountingProblem& p, std::size_t member_cap) {
  Count total = 0;
  for (const Layer& layer : forest_layers(p, member_cap))
    total += Count(static_cast<std::uint64_t>(layer.members.size()));
  return total;
}

Count count_forests_memo(const CountingProblem& p, MemoMode mode, MemoStore& store,
                         MemoStore* front_cache) {
  p.validate();
  if (!is_forest(p.contain)) return 0;
  ForestCounter counter{p.n(), mode, store, front_cache};
  return counter.count(p.reduced(), p.contain);
}

Count count_connected(const CountingProblem& p, int max_free) {
  p.validate();
  free_budget_or_throw(p, max_free);
  int n = p.n();
  std::uint64_t free = (p.reduced() - p.contain).bits();
  Count total = 0;
  std::uint64_t sub = 0;
  for (;;) {
    if (is_connected_spanning(EdgeSet(n, p.contain.bits() | sub))) total += 1;
    if (sub == free) break;
    sub = (sub - free) & free;
  }
  return total;
}

Count count_connected_memo(const CountingProblem& p, MemoMode mode, MemoStore& store,
                           MemoStore* front_cache) {
  p.validate();
  ConnectedCounter counter{p.n(), mode, store, front_cache};
  return counter.count(p.reduced(), p.contain);
}

Rational weighted_sum(const CountingProblem& p, Property property, const WeightVector& weights,
                      int max_free) {
  p.validate();
  free_budget_or_throw(p, max_free);
  int n = p.n();
  Rational base_product = 1;
  p.contain.for_each_edge(
      [&](Edge e) { base_product *= weights.weight(edge_rank(n, e)); });

  std::uint64_t free = (p.reduced() - p.contain).bits();
  Rational total = 0;
  std::uint64_t sub = 0;
  for (;;) {
    EdgeSet candidate(n, p.contain.bits() | sub);
    bool ok = property == Property::forest ? is_forest(candidate)
                                           : is_connected_spanning(candidate);
    if (ok) {
      Rational term = base_product;
      for (std::uint64_t b = sub; b != 0; b &= b - 1) term *= weights.weight(std::countr_zero(b));
      total += term;
    }
    if (sub == free) break;
    sub = (sub - free) & free;
  }
  return total;
}

Count count_by_property(const CountingProblem& p, Property property, MemoMode mode,
                        MemoStore& store, MemoStore* front_cache) {
  return property == Property::forest ? count_forests_memo(p, mode, store, front_cache)
                                      : count_connected_memo(p, mode, store, front_cache);
}

}  // namespace fna
