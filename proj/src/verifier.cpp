#include "fna/verifier.hpp"

#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <queue>
#include <thread>

namespace fna {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Minimal worker pool; tasks are closures, wait_idle() is the level barrier.
class TaskPool {
 public:
  explicit TaskPool(int width) {
    for (int i = 0; i < width; ++i)
      workers_.emplace_back([this] { work(); });
  }
  ~TaskPool() {
    {
      std::unique_lock lock(mu_);
      done_ = true;
    }
    cv_.notify_all();
    for (auto& w : workers_) w.join();
  }

  void submit(std::function<void()> task) {
    {
      std::unique_lock lock(mu_);
      tasks_.push(std::move(task));
      ++pending_;
    }
    cv_.notify_one();
  }

  void wait_idle() {
    std::unique_lock lock(mu_);
    idle_cv_.wait(lock, [this] { return pending_ == 0; });
    if (first_error_) {
      std::exception_ptr e = first_error_;
      first_error_ = nullptr;
      std::rethrow_exception(e);
    }
  }

 private:
  void work() {
    for (;;) {
      std::function<void()> task;
      {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [this] { return done_ || !tasks_.empty(); });
        if (done_ && tasks_.empty()) return;
        task = std::move(tasks_.front());
        tasks_.pop();
      }
      try {
        task();
      } catch (...) {
        std::unique_lock lock(mu_);
        if (!first_error_) first_error_ = std::current_exception();
      }
      {
        std::unique_lock lock(mu_);
        if (--pending_ == 0) idle_cv_.notify_all();
      }
    }
  }

  std::mutex mu_;
  std::condition_variable cv_, idle_cv_;
  std::queue<std::function<void()>> tasks_;
  std::size_t pending_ = 0;
  bool done_ = false;
  std::exception_ptr first_error_;
  std::vector<std::thread> workers_;
};

nlohmann::json instance_result_json(const InstanceResult& r) {
  return nlohmann::json{
      {"edges", format_edge_list(r.instance.edges)},
      {"e", format_edge(r.instance.e)},
      {"f", format_edge(r.instance.f)},
      {"category", r.instance.category},
      {"counts",
       {{"with_both", r.with_both.str()},
        {"with_neither", r.with_neither.str()},
        {"only_e", r.only_e.str()},
        {"only_f", r.only_f.str()}}},
      {"lhs", r.lhs.str()},
      {"rhs", r.rhs.str()},
      {"holds", r.holds},
      {"elapsed_seconds", r.elapsed_seconds},
  };
}

std::string property_name(Property p) {
  return p == Property::forest ? "forest" : "connected";
}

std::string memo_name(MemoMode m) { return m == MemoMode::index_key ? "index" : "exact"; }

void write_checkpoint(const RunConfig& cfg, const Level& level,
                      const std::vector<LevelStats>& stats) {
  if (cfg.checkpoint_path.empty()) return;
  nlohmann::json j;
  j["format"] = "fna-checkpoint";
  j["version"] = 1;
  j["n"] = cfg.n;
  j["property"] = property_name(cfg.property);
  j["prune"] = cfg.prune;
  j["memo"] = memo_name(cfg.memo_mode);
  j["max_edges"] = cfg.effective_max_edges();
  j["s"] = level.s;
  std::vector<std::uint64_t> members;
  members.reserve(level.members.size());
  for (const EdgeSet& e : level.members) members.push_back(e.bits());
  j["members"] = members;
  nlohmann::json st = nlohmann::json::array();
  for (const LevelStats& s : stats)
    st.push_back({{"s", s.s},
                  {"level_size", s.level_size},
                  {"generated", s.generated},
                  {"checked", s.checked},
                  {"skipped", s.skipped},
                  {"db_size", s.db_size}});
  j["levels"] = st;
  std::ofstream out(cfg.checkpoint_path, std::ios::trunc);
  if (!out) throw IoError("cannot write checkpoint: " + cfg.checkpoint_path);
  out << j.dump();
}

bool load_checkpoint(const RunConfig& cfg, Level& level, std::vector<LevelStats>& stats) {
  if (cfg.checkpoint_path.empty() || !std::filesystem::exists(cfg.checkpoint_path)) return false;
  std::ifstream in(cfg.checkpoint_path);
  if (!in) throw IoError("cannot read checkpoint: " + cfg.checkpoint_path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, true, true);
  if (j.value("format", "") != "fna-checkpoint" || j.value("version", 0) != 1)
    throw ParseError("unrecognized checkpoint file");
  if (j.value("n", -1) != cfg.n || j.value("property", "") != property_name(cfg.property) ||
      j.value("prune", !cfg.prune) != cfg.prune ||
      j.value("memo", "") != memo_name(cfg.memo_mode) ||
      j.value("max_edges", -1) != cfg.effective_max_edges())
    throw ParseError("checkpoint does not match the requested configuration");
  level.s = j.at("s").get<int>();
  level.members.clear();
  for (std::uint64_t bits : j.at("members")) level.members.emplace_back(cfg.n, bits);
  stats.clear();
  for (const auto& s : j.at("levels")) {
    LevelStats st;
    st.s = s.at("s").get<int>();
    st.level_size = s.at("level_size").get<std::uint64_t>();
    st.generated = s.at("generated").get<std::uint64_t>();
    st.checked = s.at("checked").get<std::uint64_t>();
    st.skipped = s.at("skipped").get<std::uint64_t>();
    st.db_size = s.at("db_size").get<std::uint64_t>();
    stats.push_back(st);
  }
  return true;
}

}  // namespace

InstanceResult check_instance(const EdgeSet& edges, Edge e, Edge f, Property property,
                              CountingContext& ctx) {
  if (e == f) throw std::invalid_argument("instance needs two distinct edges");
  if (!edges.contains(e) || !edges.contains(f))
    throw std::invalid_argument("instance pair must lie inside the edge set");
  auto start = Clock::now();
  int n = edges.n();
  EdgeSet both = EdgeSet::of(n, {e, f});
  EdgeSet only_e = EdgeSet::of(n, {e});
  EdgeSet only_f = EdgeSet::of(n, {f});
  EdgeSet none(n);

  InstanceResult r;
  r.instance = ConjectureInstance{edges, e, f, e.x == f.x || e.x == f.y || e.y == f.x || e.y == f.y ? 1 : 2};
  auto count = [&](const EdgeSet& contain, const EdgeSet& avoid) {
    return count_by_property(CountingProblem{edges, contain, avoid}, property, ctx.mode,
                             ctx.store, ctx.front_cache());
  };
  r.with_both = count(both, none);
  r.with_neither = count(none, both);
  r.only_e = count(only_e, only_f);
  r.only_f = count(only_f, only_e);
  r.lhs = r.with_both * r.with_neither;
  r.rhs = r.only_e * r.only_f;
  r.holds = r.lhs <= r.rhs;
  r.key = encode_key(index_j(edges, both));
  r.elapsed_seconds = seconds_since(start);
  return r;
}

void RunConfig::validate() const {
  if (n < 3 || n > kMaxVertices)
    throw std::invalid_argument("verification needs 3 <= n <= " + std::to_string(kMaxVertices));
  int me = effective_max_edges();
  if (me < 2 || me > edge_count(n))
    throw std::invalid_argument("max_edges out of range");
  if (parallel_width < 1) throw std::invalid_argument("parallel width must be positive");
}

Report run_verification(const RunConfig& config) {
  config.validate();
  auto start = Clock::now();

  IndexDatabase db = !config.db_path.empty() && std::filesystem::exists(config.db_path)
                         ? db_load(config.db_path, config.n)
                         : IndexDatabase(config.n);
  CountingContext ctx(config.memo_mode, config.memo_capacity);

  Report report;
  report.config = config;

  // results of the level in flight, indexed by submission order
  std::vector<InstanceResult> results;
  std::mutex results_mu;
  std::unique_ptr<TaskPool> pool;
  if (config.parallel_width > 1) pool = std::make_unique<TaskPool>(config.parallel_width);

  std::size_t seq = 0;
  InstanceSink sink = [&](const ConjectureInstance& inst, const std::string&) {
    std::size_t slot = seq++;
    auto job = [&, inst, slot] {
      InstanceResult r = check_instance(inst.edges, inst.e, inst.f, config.property, ctx);
      std::lock_guard lock(results_mu);
      if (results.size() <= slot) results.resize(slot + 1);
      results[slot] = std::move(r);
    };
    if (pool)
      pool->submit(job);
    else
      job();
  };

  auto drain_level = [&] {
    if (pool) pool->wait_idle();
    for (auto& r : results)
      if (!r.holds && !r.instance.edges.empty()) report.violations.push_back(r);
    results.clear();
    seq = 0;
  };

  auto flush = [&](const Level& level) {
    if (!config.db_path.empty()) db_save(db, config.db_path);
    write_checkpoint(config, level, report.levels);
  };

  Level level;
  bool resumed = load_checkpoint(config, level, report.levels);
  if (!resumed) {
    level = seed_level(config.n);
    LevelStats st;
    st.s = 2;
    st.level_size = level.members.size();
    for (const EdgeSet& e : level.members) gate_instances(e, db, config.prune, sink, st);
    drain_level();
    st.db_size = db.size();
    report.levels.push_back(st);
    flush(level);
  }

  int max_edges = config.effective_max_edges();
  while (level.s < max_edges && !level.members.empty()) {
    LevelStats st;
    Level next = next_level(level, db, config.prune, sink, &st);
    drain_level();
    st.db_size = db.size();
    report.levels.push_back(st);
    level = std::move(next);
    flush(level);
  }

  for (const LevelStats& st : report.levels) {
    report.total_generated += st.generated;
    report.total_checked += st.checked;
    report.total_skipped += st.skipped;
  }
  report.wall_seconds = seconds_since(start);

  if (!config.report_path.empty()) {
    std::ofstream out(config.report_path, std::ios::trunc);
    if (!out) throw IoError("cannot write report: " + config.report_path);
    out << report.to_json().dump(2) << "\n";
  }
  return report;
}

nlohmann::json Report::to_json() const {
  nlohmann::json levels_json = nlohmann::json::array();
  for (const LevelStats& st : levels)
    levels_json.push_back({{"s", st.s},
                           {"level_size", st.level_size},
                           {"generated", st.generated},
                           {"checked", st.checked},
                           {"skipped", st.skipped},
                           {"db_size", st.db_size}});
  nlohmann::json violations_json = nlohmann::json::array();
  for (const InstanceResult& r : violations) violations_json.push_back(instance_result_json(r));
  return nlohmann::json{
      {"config",
       {{"n", config.n},
        {"max_edges", config.effective_max_edges()},
        {"property", property_name(config.property)},
        {"prune", config.prune},
        {"memo", memo_name(config.memo_mode)},
        {"jobs", config.parallel_width},
        {"db_path", config.db_path}}},
      {"levels", levels_json},
      {"violations", violations_json},
      {"totals",
       {{"generated", total_generated},
        {"checked", total_checked},
        {"skipped", total_skipped},
        {"violations", violations.size()}}},
      {"wall_time_seconds", wall_seconds},
  };
}

namespace {
constexpr char kDbMagic[] = "FNA-IDXDB";
constexpr std::size_t kDbMagicLen = 9;
constexpr std::uint8_t kDbVersion = 1;

void put_u64(std::ostream& out, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>(v >> (8 * i) & 0xff);
  out.write(buf, 8);
}

std::uint64_t get_u64(std::istream& in) {
  char buf[8];
  in.read(buf, 8);
  if (!in) throw ParseError("index database truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(buf[i])) << (8 * i);
  return v;
}
}  // namespace

void db_save(const IndexDatabase& db, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write index database: " + path);
  out.write(kDbMagic, kDbMagicLen);
  out.put(static_cast<char>(kDbVersion));
  out.put(static_cast<char>(db.n()));
  std::vector<std::string> keys = db.sorted_keys();
  put_u64(out, keys.size());
  for (const std::string& k : keys) {
    if (k.size() > 0xffff) throw IoError("index key record too long");
    out.put(static_cast<char>(k.size() & 0xff));
    out.put(static_cast<char>(k.size() >> 8 & 0xff));
    out.write(k.data(), static_cast<std::streamsize>(k.size()));
  }
  if (!out) throw IoError("write failure on index database: " + path);
}

IndexDatabase db_load(const std::string& path, int expected_n) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open index database: " + path);
  char magic[kDbMagicLen];
  in.read(magic, kDbMagicLen);
  if (!in || std::string_view(magic, kDbMagicLen) != kDbMagic)
    throw ParseError("not an index database file: " + path);
  int version = in.get();
  if (version != kDbVersion) throw ParseError("index database version mismatch");
  int n = in.get();
  if (n < 1 || n > kMaxVertices) throw ParseError("index database vertex count corrupt");
  if (expected_n >= 0 && n != expected_n)
    throw ParseError("index database is for n=" + std::to_string(n) + ", expected n=" +
                     std::to_string(expected_n));
  std::uint64_t count = get_u64(in);
  IndexDatabase db(n);
  std::string prev;
  for (std::uint64_t i = 0; i < count; ++i) {
    int lo = in.get(), hi = in.get();
    if (lo < 0 || hi < 0) throw ParseError("index database truncated");
    std::size_t len = static_cast<std::size_t>(lo) | static_cast<std::size_t>(hi) << 8;
    std::string key(len, '\0');
    in.read(key.data(), static_cast<std::streamsize>(len));
    if (!in) throw ParseError("index database truncated");
    decode_key(key);  // structural validation
    if (i > 0 && !(prev < key)) throw ParseError("index database records out of order");
    db.insert(key);
    prev = std::move(key);
  }
  if (in.peek() != std::char_traits<char>::eof())
    throw ParseError("index database has trailing bytes");
  return db;
}

IndexDatabase db_merge(const IndexDatabase& a, const IndexDatabase& b) {
  if (a.n() != b.n()) throw std::invalid_argument("cannot merge databases with different n");
  IndexDatabase out(a.n());
  for (const std::string& k : a.sorted_keys()) out.insert(k);
  for (const std::string& k : b.sorted_keys()) out.insert(k);
  return out;
}

}  // namespace fna
