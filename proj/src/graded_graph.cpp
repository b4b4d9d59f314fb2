#include "bratteli/graded_graph.hpp"

#include <algorithm>
#include <set>
#include <utility>

namespace bratteli {

GradedGraph::GradedGraph(std::vector<std::vector<std::string>> levels,
                         std::vector<std::vector<Edge>> edges)
    : labels_(std::move(levels)), edges_(std::move(edges)) {
  if (labels_.empty()) fail(Errc::InvalidArgument, "graph needs at least level 0");
  edges_.resize(labels_.size());
  if (edges_.size() != labels_.size())
    fail(Errc::InvalidArgument, "more edge levels than vertex levels");
  if (!edges_[0].empty()) fail(Errc::InvalidArgument, "level 0 cannot receive edges");

  index_.resize(labels_.size());
  for (std::size_t n = 0; n < labels_.size(); ++n) {
    for (std::size_t i = 0; i < labels_[n].size(); ++i) {
      auto [it, inserted] = index_[n].emplace(labels_[n][i], static_cast<int>(i));
      if (!inserted)
        fail(Errc::InvalidArgument, "duplicate label '" + labels_[n][i] + "' at level " +
                                        std::to_string(n));
    }
  }

  in_.resize(labels_.size());
  out_.resize(labels_.size());
  for (std::size_t n = 0; n < labels_.size(); ++n) {
    in_[n].resize(labels_[n].size());
    out_[n].resize(labels_[n].size());
  }
  for (std::size_t n = 1; n < edges_.size(); ++n) {
    for (std::size_t k = 0; k < edges_[n].size(); ++k) {
      const Edge& e = edges_[n][k];
      if (e.source < 0 || e.source >= level_size(static_cast<int>(n) - 1) ||
          e.target < 0 || e.target >= level_size(static_cast<int>(n)))
        fail(Errc::InvalidArgument, "edge endpoint out of range at level " + std::to_string(n));
      if (e.multiplicity < 1)
        fail(Errc::InvalidArgument, "multiplicity must be a positive integer");
      in_[n][e.target].push_back(static_cast<int>(k));
      out_[n - 1][e.source].push_back(static_cast<int>(k));
    }
  }
  for (std::size_t n = 0; n < labels_.size(); ++n) {
    for (auto& lst : in_[n])
      std::sort(lst.begin(), lst.end(), [&](int a, int b) {
        return edges_[n][a].source < edges_[n][b].source;
      });
    for (auto& lst : out_[n])
      std::sort(lst.begin(), lst.end(), [&](int a, int b) {
        return edges_[n + 1][a].target < edges_[n + 1][b].target;
      });
  }

  // dim H_z: one path of weight 1 at level 0, then the branching recursion.
  dim_.resize(labels_.size());
  for (std::size_t n = 0; n < labels_.size(); ++n) dim_[n].assign(labels_[n].size(), 0);
  for (auto& d : dim_[0]) d = 1;
  for (std::size_t n = 1; n < labels_.size(); ++n)
    for (const Edge& e : edges_[n]) dim_[n][e.target] += e.multiplicity * dim_[n - 1][e.source];
}

void GradedGraph::check_level(int n) const {
  if (n < 0 || n > depth())
    fail(Errc::LevelOutOfRange,
         "level " + std::to_string(n) + " not in [0," + std::to_string(depth()) + "]");
}

const std::vector<std::string>& GradedGraph::labels(int n) const {
  check_level(n);
  return labels_[n];
}

const std::string& GradedGraph::label(VertexRef v) const {
  if (!contains(v)) fail(Errc::VertexNotFound, "no vertex at that (level, index)");
  return labels_[v.level][v.index];
}

std::optional<int> GradedGraph::find(int level, std::string_view label) const noexcept {
  if (level < 0 || level > depth()) return std::nullopt;
  auto it = index_[level].find(label);
  if (it == index_[level].end()) return std::nullopt;
  return it->second;
}

VertexRef GradedGraph::vertex(int level, std::string_view label) const {
  auto idx = find(level, label);
  if (!idx)
    fail(Errc::VertexNotFound,
         "no vertex [" + std::to_string(level) + ",\"" + std::string(label) + "\"]");
  return VertexRef{level, *idx};
}

bool GradedGraph::contains(VertexRef v) const noexcept {
  return v.level >= 0 && v.level <= depth() && v.index >= 0 &&
         v.index < static_cast<int>(labels_[v.level].size());
}

const std::vector<Edge>& GradedGraph::edges_at(int n) const {
  check_level(n);
  if (n == 0) fail(Errc::LevelOutOfRange, "no edge set E_0");
  return edges_[n];
}

const std::vector<int>& GradedGraph::in_edges(VertexRef v) const {
  if (!contains(v)) fail(Errc::VertexNotFound, "no vertex at that (level, index)");
  return in_[v.level][v.index];
}

const std::vector<int>& GradedGraph::out_edges(VertexRef v) const {
  if (!contains(v)) fail(Errc::VertexNotFound, "no vertex at that (level, index)");
  return out_[v.level][v.index];
}

const BigInt& GradedGraph::dim(VertexRef v) const {
  if (!contains(v)) fail(Errc::VertexNotFound, "no vertex at that (level, index)");
  return dim_[v.level][v.index];
}

std::vector<std::vector<int>> GradedGraph::paths_to(VertexRef z, std::size_t max_paths) const {
  if (!contains(z)) fail(Errc::VertexNotFound, "no vertex at that (level, index)");

  // Backward reachability from z prunes the forward walk.
  std::vector<std::vector<char>> reach(z.level + 1);
  for (int n = 0; n <= z.level; ++n) reach[n].assign(labels_[n].size(), 0);
  reach[z.level][z.index] = 1;
  for (int n = z.level; n >= 1; --n)
    for (const Edge& e : edges_[n])
      if (reach[n][e.target]) reach[n - 1][e.source] = 1;

  std::vector<std::vector<int>> result;
  std::vector<int> current;

  // Depth-first from the root; out-edge lists are sorted by target index, so
  // completed paths appear in canonical (level-ascending vertex) order.
  auto walk = [&](auto&& self, VertexRef v) -> void {
    if (v.level == z.level) {
      if (v.index == z.index) {
        if (result.size() >= max_paths)
          fail(Errc::DimensionLimitExceeded,
               "more than " + std::to_string(max_paths) + " paths");
        result.push_back(current);
      }
      return;
    }
    for (int k : out_[v.level][v.index]) {
      const Edge& e = edges_[v.level + 1][k];
      if (!reach[v.level + 1][e.target]) continue;
      current.push_back(k);
      self(self, VertexRef{v.level + 1, e.target});
      current.pop_back();
    }
  };
  if (!labels_[0].empty()) {
    for (int r = 0; r < level_size(0); ++r)
      if (reach[0][r]) walk(walk, VertexRef{0, r});
  }
  return result;
}

std::vector<VertexRef> GradedGraph::path_vertices(VertexRef z, const std::vector<int>& path) const {
  if (static_cast<int>(path.size()) != z.level)
    fail(Errc::InvalidArgument, "path length does not match the vertex level");
  std::vector<VertexRef> vs;
  vs.reserve(path.size() + 1);
  int idx = z.index;
  vs.push_back(z);
  for (int n = z.level; n >= 1; --n) {
    const Edge& e = edges_[n][path[n - 1]];
    if (e.target != idx) fail(Errc::InvalidArgument, "edge-path is not chained to the vertex");
    idx = e.source;
    vs.push_back(VertexRef{n - 1, idx});
  }
  std::reverse(vs.begin(), vs.end());
  return vs;
}

bool GradedGraph::same_structure(const GradedGraph& other) const {
  if (labels_ != other.labels_) return false;
  if (edges_.size() != other.edges_.size()) return false;
  for (std::size_t n = 0; n < edges_.size(); ++n) {
    if (edges_[n].size() != other.edges_[n].size()) return false;
    for (std::size_t k = 0; k < edges_[n].size(); ++k) {
      const Edge& a = edges_[n][k];
      const Edge& b = other.edges_[n][k];
      if (a.source != b.source || a.target != b.target || a.multiplicity != b.multiplicity)
        return false;
    }
  }
  return true;
}

const char* violation_name(Violation::Kind k) noexcept {
  switch (k) {
    case Violation::Kind::RootCount: return "root-count";
    case Violation::Kind::RootLabel: return "root-label";
    case Violation::Kind::EmptyLevel: return "empty-level";
    case Violation::Kind::DuplicateEdge: return "duplicate-edge";
    case Violation::Kind::MissingOutgoing: return "missing-outgoing";
    case Violation::Kind::MissingIncoming: return "missing-incoming";
  }
  return "unknown";
}

std::vector<Violation> validate_graph(const GradedGraph& g) {
  std::vector<Violation> out;

  if (g.level_size(0) != 1)
    out.push_back({Violation::Kind::RootCount, 0,
                   "level 0 has " + std::to_string(g.level_size(0)) + " vertices"});
  if (g.level_size(0) >= 1 && g.labels(0)[0] != "1")
    out.push_back({Violation::Kind::RootLabel, 0, "root is labeled '" + g.labels(0)[0] + "'"});

  for (int n = 0; n <= g.depth(); ++n)
    if (g.level_size(n) == 0)
      out.push_back({Violation::Kind::EmptyLevel, n, "level set is empty"});

  for (int n = 1; n <= g.depth(); ++n) {
    std::set<std::pair<int, int>> seen;
    for (const Edge& e : g.edges_at(n)) {
      if (!seen.insert({e.target, e.source}).second)
        out.push_back({Violation::Kind::DuplicateEdge, n,
                       "second edge " + g.labels(n - 1)[e.source] + " -> " +
                           g.labels(n)[e.target]});
    }
  }

  for (int n = 0; n < g.depth(); ++n)
    for (int i = 0; i < g.level_size(n); ++i)
      if (g.out_edges(VertexRef{n, i}).empty())
        out.push_back({Violation::Kind::MissingOutgoing, n,
                       "vertex '" + g.labels(n)[i] + "' has no outgoing edge"});

  for (int n = 1; n <= g.depth(); ++n)
    for (int i = 0; i < g.level_size(n); ++i)
      if (g.in_edges(VertexRef{n, i}).empty())
        out.push_back({Violation::Kind::MissingIncoming, n,
                       "vertex '" + g.labels(n)[i] + "' has no incoming edge"});

  return out;
}

GradedGraph truncate(const GradedGraph& g, int n) {
  if (n < 0 || n > g.depth())
    fail(Errc::LevelOutOfRange,
         "truncation level " + std::to_string(n) + " not in [0," + std::to_string(g.depth()) + "]");
  std::vector<std::vector<std::string>> levels;
  std::vector<std::vector<Edge>> edges;
  levels.reserve(n + 1);
  edges.reserve(n + 1);
  for (int k = 0; k <= n; ++k) {
    levels.push_back(g.labels(k));
    edges.push_back(k == 0 ? std::vector<Edge>{} : g.edges_at(k));
  }
  return GradedGraph(std::move(levels), std::move(edges));
}

}  // namespace bratteli
