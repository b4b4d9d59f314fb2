#pragma once

// Graded branching graphs (Bratteli diagrams). Vertices are stratified into
// levels Z_0, Z_1, ..., Z_N with Z_0 = {root}; every edge e connects a source
// s(e) at level n-1 to a target r(e) at level n and carries a finite
// multiplicity m(e) >= 1. The axioms checked by validate_graph:
//
//   (i)   every level is a finite nonempty set, Z_0 = { "1" };
//   (ii)  at most one edge per (target, source) pair;
//   (iii) every vertex below the top level is the source of some edge
//         (waived at level N: stored graphs are finite truncations);
//   (iv)  every vertex at level >= 1 is the target of some edge.
//
// An edge-path to z at level n picks one edge per level 1..n, chained from
// the root. Paths are enumerated in a canonical order: sorted by the sequence
// of vertex indices they visit, level-ascending (within a level, the vertex
// order is insertion order). That order is load-bearing — the spectral
// modules index the "path (x) eigenvector" basis by it.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bratteli/error.hpp"
#include "bratteli/scalar.hpp"

namespace bratteli {

struct VertexRef {
  int level = 0;
  int index = 0;

  friend bool operator==(const VertexRef&, const VertexRef&) = default;
};

struct Edge {
  int source = 0;               // vertex index at level n-1
  int target = 0;               // vertex index at level n
  long long multiplicity = 1;   // m(e), finite and >= 1
};

class GradedGraph {
 public:
  // levels[n] lists the labels of Z_n in canonical order; edges[n] lists E_n
  // (the edges between levels n-1 and n) for n >= 1, edges[0] must be empty.
  // Throws invalid-argument for structurally unusable data (bad indices,
  // duplicate labels, multiplicity < 1); axiom violations that still yield a
  // usable object (duplicate edges, isolated vertices, wrong root) are left
  // for validate_graph to report.
  GradedGraph(std::vector<std::vector<std::string>> levels,
              std::vector<std::vector<Edge>> edges);

  int depth() const { return static_cast<int>(labels_.size()) - 1; }
  int level_size(int n) const { return static_cast<int>(labels(n).size()); }

  const std::vector<std::string>& labels(int n) const;
  const std::string& label(VertexRef v) const;

  // (level, label) -> vertex; the checked form throws vertex-not-found.
  std::optional<int> find(int level, std::string_view label) const noexcept;
  VertexRef vertex(int level, std::string_view label) const;

  bool contains(VertexRef v) const noexcept;

  const std::vector<Edge>& edges_at(int n) const;  // E_n, n in 1..depth

  // Adjacency, as indices into edges_at(...). in_edges(v) lives at level
  // v.level (sorted by source index); out_edges(v) at level v.level+1
  // (sorted by target index). out_edges at the top level is empty.
  const std::vector<int>& in_edges(VertexRef v) const;
  const std::vector<int>& out_edges(VertexRef v) const;

  // dim H_z = sum over paths of prod m(e_i), by level recursion.
  const BigInt& dim(VertexRef v) const;

  // All edge-paths from the root to z, in canonical order; each path is one
  // edge index per level 1..z.level. Throws dimension-limit-exceeded when
  // more than max_paths paths exist.
  static constexpr std::size_t kDefaultMaxPaths = std::size_t(1) << 20;
  std::vector<std::vector<int>> paths_to(VertexRef z,
                                         std::size_t max_paths = kDefaultMaxPaths) const;

  // The vertices visited by an edge-path to z: root, v_1, ..., v_n = z.
  std::vector<VertexRef> path_vertices(VertexRef z, const std::vector<int>& path) const;

  bool same_structure(const GradedGraph& other) const;

 private:
  void check_level(int n) const;

  std::vector<std::vector<std::string>> labels_;
  std::vector<std::map<std::string, int, std::less<>>> index_;
  std::vector<std::vector<Edge>> edges_;
  std::vector<std::vector<std::vector<int>>> in_;
  std::vector<std::vector<std::vector<int>>> out_;
  std::vector<std::vector<BigInt>> dim_;
};

struct Violation {
  enum class Kind {
    RootCount,        // level 0 must hold exactly one vertex
    RootLabel,        // the root must be labeled "1"
    EmptyLevel,       // axiom (i)
    DuplicateEdge,    // axiom (ii)
    MissingOutgoing,  // axiom (iii), levels < depth
    MissingIncoming,  // axiom (iv)
  };

  Kind kind;
  int level = 0;
  std::string detail;
};

const char* violation_name(Violation::Kind k) noexcept;

// Empty report == valid graph. Violations are data, not failures.
std::vector<Violation> validate_graph(const GradedGraph& g);

// Levels and edges above n removed. Throws level-out-of-range.
GradedGraph truncate(const GradedGraph& g, int n);

using GraphPtr = std::shared_ptr<const GradedGraph>;

// Most cross-module operations require their arguments to talk about the
// same graph; identity is by pointer or by structure.
inline bool same_graph(const GraphPtr& a, const GraphPtr& b) {
  return a == b || (a && b && a->same_structure(*b));
}

}  // namespace bratteli
