#include "uagraph/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "uagraph/error.hpp"

namespace uagraph {

Graph::Graph(std::size_t degree_cap) : cap_(degree_cap) {
  if (cap_ == 0) throw ValidationError("degree cap must be positive");
}

Vertex Graph::add_vertex() {
  degree_.push_back(0);
  adjacency_.resize(adjacency_.size() + cap_, 0);
  return static_cast<Vertex>(degree_.size());
}

bool Graph::has_edge(Vertex u, Vertex v) const {
  if (!contains(u) || !contains(v)) return false;
  if (degree(u) > degree(v)) std::swap(u, v);
  const auto nb = neighbors(u);
  return std::find(nb.begin(), nb.end(), v) != nb.end();
}

void Graph::add_edge(Vertex u, Vertex v) {
  if (!contains(u) || !contains(v)) throw ValidationError(fmt::format("edge ({}, {}) names an unknown vertex", u, v));
  if (u == v) throw ValidationError(fmt::format("loop at vertex {}", u));
  if (has_edge(u, v)) throw ValidationError(fmt::format("parallel edge ({}, {})", u, v));
  if (degree(u) >= cap_ || degree(v) >= cap_)
    throw ValidationError(fmt::format("edge ({}, {}) exceeds degree cap {}", u, v, cap_));
  adjacency_[(u - 1) * cap_ + degree_[u - 1]++] = v;
  adjacency_[(v - 1) * cap_ + degree_[v - 1]++] = u;
  ++edges_;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edges_);
  for (Vertex v = 1; v <= size(); ++v)
    for (Vertex u : neighbors(v))
      if (u < v) out.emplace_back(u, v);
  return out;
}

bool operator==(const Graph& a, const Graph& b) {
  if (a.size() != b.size() || a.edges_ != b.edges_) return false;
  for (Vertex v = 1; v <= a.size(); ++v) {
    const auto x = a.neighbors(v);
    const auto y = b.neighbors(v);
    if (!std::equal(x.begin(), x.end(), y.begin(), y.end())) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

UAGraph::UAGraph(int m, int d, std::uint64_t seed_value)
    : m_(m), d_(d), seed_value_(seed_value), graph_(static_cast<std::size_t>(d)) {}

UAGraph UAGraph::seed(int m, int d, std::uint64_t seed_value) {
  if (m < 1) throw ValidationError("m must be at least 1");
  if (d <= 2 * m)
    throw ValidationError(fmt::format(
        "d={} with m={} is outside the model: d > 2m is required (the d = 2m case is excluded)", d, m));
  UAGraph g(m, d, seed_value);
  for (int i = 0; i < m; ++i) {
    const Vertex v = g.graph_.add_vertex();
    g.open_pos_.push_back(0);
    g.open_insert(v);
  }
  for (Vertex u = 1; u <= static_cast<Vertex>(m); ++u)
    for (Vertex v = u + 1; v <= static_cast<Vertex>(m); ++v) g.graph_.add_edge(u, v);
  return g;
}

void UAGraph::open_insert(Vertex v) {
  open_.push_back(v);
  open_pos_[v - 1] = static_cast<std::uint32_t>(open_.size());
}

void UAGraph::open_remove(Vertex v) {
  const std::uint32_t idx = open_pos_[v - 1] - 1;
  const Vertex last = open_.back();
  open_[idx] = last;
  open_pos_[last - 1] = idx + 1;
  open_.pop_back();
  open_pos_[v - 1] = 0;
}

void UAGraph::attach(const std::vector<Vertex>& targets) {
  const Vertex w = graph_.add_vertex();
  open_pos_.push_back(0);
  for (Vertex t : targets) {
    graph_.add_edge(t, w);
    if (graph_.degree(t) >= static_cast<std::size_t>(d_) && is_open(t)) open_remove(t);
  }
  if (graph_.degree(w) < static_cast<std::size_t>(d_)) open_insert(w);
}

std::span<const Vertex> UAGraph::step(Rng& rng) {
  const std::size_t open = open_.size();
  const auto m = static_cast<std::size_t>(m_);
  if (open < m)
    throw ModelViolation(fmt::format("only {} open vertices at n={} but m={} are required", open, n(), m_));
  // Partial Fisher-Yates: the first m slots become a uniform m-subset.
  last_targets_.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + rng.below(open - i);
    std::swap(open_[i], open_[j]);
    open_pos_[open_[i] - 1] = static_cast<std::uint32_t>(i + 1);
    open_pos_[open_[j] - 1] = static_cast<std::uint32_t>(j + 1);
    last_targets_[i] = open_[i];
  }
  std::sort(last_targets_.begin(), last_targets_.end());
  attach(last_targets_);
  return last_targets_;
}

void UAGraph::grow(std::size_t steps, Rng& rng) {
  for (std::size_t s = 0; s < steps; ++s) step(rng);
}

std::vector<Vertex> UAGraph::targets(Vertex v) const {
  std::vector<Vertex> out;
  for (Vertex u : graph_.neighbors(v))
    if (u < v) out.push_back(u);
  std::sort(out.begin(), out.end());
  return out;
}

UAGraph UAGraph::from_arrivals(int m, int d, std::uint64_t seed_value,
                               const std::vector<std::vector<Vertex>>& arrivals) {
  UAGraph g = seed(m, d, seed_value);
  for (const auto& targets : arrivals) {
    const auto v = static_cast<Vertex>(g.n() + 1);
    if (targets.size() != static_cast<std::size_t>(m))
      throw ValidationError(fmt::format("arrival {} lists {} targets, expected {}", v, targets.size(), m));
    for (std::size_t i = 0; i < targets.size(); ++i) {
      if (targets[i] < 1 || targets[i] >= v)
        throw ValidationError(fmt::format("arrival {} targets vertex {} which does not precede it", v, targets[i]));
      for (std::size_t j = 0; j < i; ++j)
        if (targets[j] == targets[i]) throw ValidationError(fmt::format("arrival {} repeats target {}", v, targets[i]));
      if (g.graph_.degree(targets[i]) >= static_cast<std::size_t>(d))
        throw ValidationError(fmt::format("arrival {} pushes vertex {} past degree cap {}", v, targets[i], d));
    }
    g.attach(targets);
  }
  return g;
}

UAGraph generate(int m, int d, std::size_t n, std::uint64_t seed) {
  UAGraph g = UAGraph::seed(m, d, seed);
  if (n < g.n()) throw ValidationError(fmt::format("n={} is smaller than the seed graph K_{}", n, m));
  Rng rng(seed);
  g.grow(n - g.n(), rng);
  return g;
}

// ---------------------------------------------------------------------------

LocalBfs::LocalBfs(const Graph& g) : g_(&g), stamp_(g.size() + 1, 0), dist_(g.size() + 1, 0) {}

std::span<const Vertex> LocalBfs::run(std::span<const Vertex> sources, int radius, Vertex forbidden_below) {
  if (stamp_.size() < g_->size() + 1) {
    stamp_.resize(g_->size() + 1, 0);
    dist_.resize(g_->size() + 1, 0);
  }
  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    epoch_ = 1;
  }
  order_.clear();
  for (Vertex s : sources) {
    if (!g_->contains(s)) throw ValidationError(fmt::format("unknown vertex {}", s));
    if (stamp_[s] == epoch_) continue;
    stamp_[s] = epoch_;
    dist_[s] = 0;
    order_.push_back(s);
  }
  for (std::size_t head = 0; head < order_.size(); ++head) {
    const Vertex v = order_[head];
    if (dist_[v] >= radius) continue;
    for (Vertex u : g_->neighbors(v)) {
      if (stamp_[u] == epoch_ || u <= forbidden_below) continue;
      stamp_[u] = epoch_;
      dist_[u] = dist_[v] + 1;
      order_.push_back(u);
    }
  }
  return order_;
}

std::size_t LocalBfs::induced_edge_count() const {
  std::size_t twice = 0;
  for (Vertex v : order_)
    for (Vertex u : g_->neighbors(v))
      if (stamp_[u] == epoch_) ++twice;
  return twice / 2;
}

Ball ball(const Graph& g, std::span<const Vertex> centers, int radius) {
  if (centers.empty()) throw ValidationError("ball needs at least one center");
  if (radius < 0) throw ValidationError("ball radius must be non-negative");
  LocalBfs bfs(g);
  bfs.run(centers, radius);
  Ball b;
  b.centers.assign(centers.begin(), centers.end());
  b.radius = radius;
  b.vertices.assign(bfs.order().begin(), bfs.order().end());
  std::sort(b.vertices.begin(), b.vertices.end());
  for (Vertex v : b.vertices)
    for (Vertex u : g.neighbors(v))
      if (u > v && bfs.reached(u)) b.induced_edges.emplace_back(v, u);
  std::sort(b.induced_edges.begin(), b.induced_edges.end());
  return b;
}

Ball ball(const Graph& g, Vertex center, int radius) { return ball(g, std::span(&center, 1), radius); }

// ---------------------------------------------------------------------------

namespace {

// Parses `key=<value>` for the expected key.
std::uint64_t header_field(const std::string& token, const std::string& key) {
  const std::string prefix = key + "=";
  if (token.rfind(prefix, 0) != 0) throw ValidationError(fmt::format("malformed header: expected {}<value>, got '{}'", prefix, token));
  const std::string value = token.substr(prefix.size());
  if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos)
    throw ValidationError(fmt::format("malformed header value '{}'", token));
  return std::stoull(value);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError(fmt::format("cannot write '{}'", path));
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(fmt::format("cannot read '{}'", path));
  return in;
}

}  // namespace

void write_snapshot(const UAGraph& g, std::ostream& out) {
  out << fmt::format("ua m={} d={} n={} seed={}\n", g.m(), g.d(), g.n(), g.seed_value());
  for (Vertex v = static_cast<Vertex>(g.m()) + 1; v <= g.n(); ++v) {
    out << v << ':';
    for (Vertex t : g.targets(v)) out << ' ' << t;
    out << '\n';
  }
}

void write_snapshot(const UAGraph& g, const std::string& path) {
  auto out = open_out(path);
  write_snapshot(g, out);
}

UAGraph read_snapshot(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty snapshot");
  std::istringstream header(line);
  std::string magic, tm, td, tn, ts;
  header >> magic >> tm >> td >> tn >> ts;
  if (magic != "ua") throw ValidationError(fmt::format("malformed header '{}'", line));
  const auto m = header_field(tm, "m");
  const auto d = header_field(td, "d");
  const auto n = header_field(tn, "n");
  const auto seed = header_field(ts, "seed");
  if (m < 1 || m > 1'000'000 || d > 1'000'000) throw ValidationError("header parameters out of range");
  if (n < m) throw ValidationError("header n is smaller than m");
  std::vector<std::vector<Vertex>> arrivals;
  arrivals.reserve(n - m);
  Vertex expected = static_cast<Vertex>(m) + 1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw ValidationError(fmt::format("malformed arrival line '{}'", line));
    const std::string head = line.substr(0, colon);
    if (head.empty() || head.find_first_not_of("0123456789") != std::string::npos)
      throw ValidationError(fmt::format("malformed arrival line '{}'", line));
    const auto v = static_cast<Vertex>(std::stoul(head));
    if (v != expected) throw ValidationError(fmt::format("arrival {} out of order (expected {})", v, expected));
    std::istringstream rest(line.substr(colon + 1));
    std::vector<Vertex> targets;
    long long t = 0;
    while (rest >> t) {
      if (t < 1 || t >= static_cast<long long>(v))
        throw ValidationError(fmt::format("arrival {} lists target {} which does not precede it", v, t));
      targets.push_back(static_cast<Vertex>(t));
    }
    if (!rest.eof()) throw ValidationError(fmt::format("malformed arrival line '{}'", line));
    arrivals.push_back(std::move(targets));
    ++expected;
  }
  if (arrivals.size() != n - m)
    throw ValidationError(fmt::format("header promises n={} but file holds {} vertices", n, m + arrivals.size()));
  return UAGraph::from_arrivals(static_cast<int>(m), static_cast<int>(d), seed, arrivals);
}

UAGraph read_snapshot(const std::string& path) {
  auto in = open_in(path);
  return read_snapshot(in);
}

void write_generic(const Graph& g, std::ostream& out) {
  out << fmt::format("generic n={}\n", g.size());
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

Graph read_generic(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty graph file");
  std::istringstream header(line);
  std::string magic, tn;
  header >> magic >> tn;
  if (magic != "generic") throw ValidationError(fmt::format("malformed header '{}'", line));
  const auto n = header_field(tn, "n");
  std::vector<Edge> edges;
  std::vector<std::size_t> degree(n + 1, 0);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    long long u = 0, v = 0;
    if (!(row >> u >> v)) throw ValidationError(fmt::format("malformed edge line '{}'", line));
    if (u < 1 || v < 1 || static_cast<std::uint64_t>(u) > n || static_cast<std::uint64_t>(v) > n)
      throw ValidationError(fmt::format("edge ({}, {}) names an unknown vertex", u, v));
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
    ++degree[u];
    ++degree[v];
  }
  const std::size_t cap = std::max<std::size_t>(1, *std::max_element(degree.begin(), degree.end()));
  Graph g(cap);
  for (std::size_t i = 0; i < n; ++i) g.add_vertex();
  for (const auto& [u, v] : edges) g.add_edge(u, v);
  return g;
}

Graph read_any_graph(const std::string& path) {
  auto in = open_in(path);
  std::string magic;
  in >> magic;
  in.seekg(0);
  if (magic == "ua") return read_snapshot(in).graph();
  return read_generic(in);
}

}  // namespace uagraph
