#include "fna/instances.hpp"

#include <algorithm>

namespace fna {

IndexDatabase::IndexDatabase(int n, std::size_t capacity) : n_(n), capacity_(capacity) {
  if (n < 1 || n > kMaxVertices)
    throw std::invalid_argument("index database: vertex count out of range");
}

std::size_t IndexDatabase::size() const {
  std::lock_guard lock(mu_);
  return keys_.size();
}

bool IndexDatabase::contains(const std::string& key) const {
  std::lock_guard lock(mu_);
  return keys_.contains(key);
}

bool IndexDatabase::check_and_insert(const std::string& key) {
  std::lock_guard lock(mu_);
  if (keys_.contains(key)) return false;
  if (capacity_ != 0 && keys_.size() >= capacity_)
    throw BudgetError("index database capacity exhausted");
  keys_.insert(key);
  return true;
}

void IndexDatabase::insert(const std::string& key) { check_and_insert(key); }

std::vector<std::string> IndexDatabase::sorted_keys() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out(keys_.begin(), keys_.end());
  std::sort(out.begin(), out.end());
  return out;
}

EdgeSet seed_edges(int n, int category) {
  if (category == 1) {
    if (n < 3) throw std::invalid_argument("adjacent seed needs n >= 3");
    return EdgeSet::of(n, {Edge{1, 2}, Edge{1, 3}});
  }
  if (category == 2) {
    if (n < 4) throw std::invalid_argument("disjoint seed needs n >= 4");
    return EdgeSet::of(n, {Edge{1, 2}, Edge{3, 4}});
  }
  throw std::invalid_argument("seed category must be 1 or 2");
}

std::vector<ConjectureInstance> instances_of(const EdgeSet& e) {
  std::vector<ConjectureInstance> out;
  int n = e.n();
  if (n >= 3 && seed_edges(n, 1).subset_of(e))
    out.push_back(ConjectureInstance{e, Edge{1, 2}, Edge{1, 3}, 1});
  if (n >= 4 && seed_edges(n, 2).subset_of(e))
    out.push_back(ConjectureInstance{e, Edge{1, 2}, Edge{3, 4}, 2});
  return out;
}

Level seed_level(int n) {
  if (n < 3) throw std::invalid_argument("seed level needs n >= 3");
  Level level;
  level.s = 2;
  level.members.push_back(seed_edges(n, 1));
  if (n >= 4) level.members.push_back(seed_edges(n, 2));
  return level;
}

std::vector<Edge> f_candidates(const EdgeSet& e) {
  Classification c = classify(e);
  if (!c.isolated_tail)
    throw std::invalid_argument("growth candidates need the isolated-tail property");
  int n = e.n();
  Vertex v = c.first_isolated;
  EdgeSet pool(n);
  for (Vertex i = 1; i < v; ++i)
    for (Vertex j = i + 1; j <= v; ++j) pool.add(Edge{i, j});
  if (v < n) pool.add(Edge{v, v + 1});
  return (pool - e).edges();  // ascending rank = lexicographic
}

bool gate_instances(const EdgeSet& e, IndexDatabase& db, bool prune, const InstanceSink& sink,
                    LevelStats& stats) {
  bool alive = !prune;
  for (const ConjectureInstance& inst : instances_of(e)) {
    ++stats.generated;
    EdgeSet pair = EdgeSet::of(e.n(), {inst.e, inst.f});
    std::string key = encode_key(index_j(inst.edges, pair));
    bool novel = db.check_and_insert(key);
    if (prune && !novel) {
      ++stats.skipped;
      continue;
    }
    alive = alive || novel;
    ++stats.checked;
    if (sink) sink(inst, key);
  }
  return alive;
}

Level next_level(const Level& level, IndexDatabase& db, bool prune, const InstanceSink& sink,
                 LevelStats* stats) {
  LevelStats local;
  LevelStats& st = stats != nullptr ? *stats : local;
  st.s = level.s + 1;
  Level next;
  next.s = level.s + 1;
  for (const EdgeSet& e : level.members) {
    for (Edge f : f_candidates(e)) {
      EdgeSet grown = e.with(f);
      if (gate_instances(grown, db, prune, sink, st)) next.members.push_back(grown);
    }
  }
  st.level_size = next.members.size();
  st.db_size = db.size();
  return next;
}

}  // namespace fna
