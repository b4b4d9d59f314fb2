#pragma once

// The central measure gamma_nu on the space of paths, at desk scale:
// cylinder probabilities, Markov samplers in both directions, and the
// ergodic-method convergence table kappa(z(m), .) along a growing path.
//
// Cylinder law: for a descending run z_n, z_{n-1}, ..., z_m of consecutive
// vertices,
//
//     gamma([z_n, ..., z_m]) = nu(z_n) kappa(z_n, z_{n-1}) ... kappa(z_{m+1}, z_m).
//
// Down-sampling reads this factorization directly (draw z_n from nu|Z_n,
// then step with kappa). Up-sampling uses the conditioned growth kernel
//
//     p_up(z' -> z) = nu(z) kappa(z, z') / nu(z'),
//
// which harmonicity normalizes; both samplers induce the same cylinder law.
//
// Randomness: SplitMix64 (Steele-Lea-Flood finalizer, gamma 0x9e3779b97f4a7c15)
// drives every draw. One 64-bit word is consumed per categorical draw; its
// top 53 bits scaled by 2^-53 give the uniform u, and the selected atom is
// the first index i with u * total < cumsum(w_0..w_i). Fixed seeds therefore
// reproduce bit-identical paths on any platform.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bratteli/error.hpp"
#include "bratteli/flow_spec.hpp"
#include "bratteli/graded_graph.hpp"
#include "bratteli/harmonic.hpp"
#include "bratteli/link_engine.hpp"
#include "bratteli/scalar.hpp"

namespace bratteli {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Snapshot/restore so a recorded state replays the exact same draws.
  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

struct CylinderSpec {
  std::vector<VertexRef> vertices;  // descending, consecutive levels
};

struct SampledPath {
  std::uint64_t seed = 0;           // RNG state immediately before the draws
  std::vector<VertexRef> vertices;  // one per level 1..N, ascending
};

namespace detail {

// First index i with u*total < w_0+...+w_i. Zero-weight atoms can never be
// selected; weights must not all vanish.
template <class S>
std::size_t categorical(Rng& rng, const std::vector<S>& weights) {
  S total = ScalarOps<S>::zero();
  for (const S& w : weights) total += w;
  if (!(ScalarOps<S>::to_double(total) > 0.0))
    fail(Errc::ZeroMassVertexReached, "no positive weight to sample from");
  S target = ScalarOps<S>::unit_from_bits(rng.next()) * total;
  S cum = ScalarOps<S>::zero();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    cum += weights[i];
    if (target < cum && !(weights[i] == ScalarOps<S>::zero())) return i;
  }
  // Rounding pushed u*total to the very top; return the last positive atom.
  for (std::size_t i = weights.size(); i-- > 0;)
    if (!(weights[i] == ScalarOps<S>::zero())) return i;
  fail(Errc::ZeroMassVertexReached, "no positive weight to sample from");
}

}  // namespace detail

// gamma_nu of a descending cylinder.
template <class S>
S cylinder_prob(const FlowSpec<S>& f, const CoherentSystem<S>& nu, const CylinderSpec& c) {
  const GradedGraph& g = f.graph();
  detail::require_same_graph(f, nu.graph);
  if (c.vertices.empty()) fail(Errc::InvalidCylinder, "empty cylinder");
  for (std::size_t i = 0; i < c.vertices.size(); ++i) {
    if (!g.contains(c.vertices[i])) fail(Errc::InvalidCylinder, "cylinder vertex not in graph");
    if (i > 0 && c.vertices[i].level != c.vertices[i - 1].level - 1)
      fail(Errc::InvalidCylinder, "cylinder levels must descend consecutively");
  }
  if (c.vertices.front().level > nu.depth())
    fail(Errc::LevelOutOfRange, "cylinder starts above the system depth");

  S p = nu.at(c.vertices.front());
  for (std::size_t i = 1; i < c.vertices.size(); ++i) {
    bool edge_exists = false;
    for (int k : g.in_edges(c.vertices[i - 1]))
      if (g.edges_at(c.vertices[i - 1].level)[k].source == c.vertices[i].index)
        edge_exists = true;
    if (!edge_exists) fail(Errc::InvalidCylinder, "consecutive cylinder vertices not adjacent");
    p = p * link_adjacent(f, c.vertices[i - 1], c.vertices[i]);
  }
  return p;
}

// Draw z_n ~ nu|Z_n, then descend with the link kernel.
template <class S>
SampledPath sample_down(const FlowSpec<S>& f, const CoherentSystem<S>& nu, int n, Rng& rng) {
  const GradedGraph& g = f.graph();
  detail::require_same_graph(f, nu.graph);
  if (n < 1 || n > nu.depth() || n > g.depth())
    fail(Errc::LevelOutOfRange, "sampling depth out of range");

  SampledPath path;
  path.seed = rng.state();
  path.vertices.resize(n);

  int current = static_cast<int>(detail::categorical(rng, nu.values[n]));
  path.vertices[n - 1] = VertexRef{n, current};
  for (int lvl = n; lvl >= 2; --lvl) {
    VertexRef z{lvl, current};
    const auto& in = g.in_edges(z);
    // Step weights Z(s(e)) * Z(e); the common denominator Z(z) drops out.
    std::vector<S> w(in.size(), ScalarOps<S>::zero());
    std::vector<int> src(in.size());
    for (std::size_t j = 0; j < in.size(); ++j) {
      const Edge& e = g.edges_at(lvl)[in[j]];
      src[j] = e.source;
      const ExtScalar<S>& zs = f.partition_table().vertexZ[lvl - 1][e.source];
      if (zs.infinite()) continue;
      w[j] = zs.finite() * f.edge_partition(lvl, in[j]).finite();
    }
    current = src[detail::categorical(rng, w)];
    path.vertices[lvl - 2] = VertexRef{lvl - 1, current};
  }
  return path;
}

// Grow a path upward with p_up(z' -> z) = nu(z) kappa(z, z') / nu(z').
template <class S>
SampledPath sample_up(const FlowSpec<S>& f, const CoherentSystem<S>& nu, int N, Rng& rng) {
  const GradedGraph& g = f.graph();
  detail::require_same_graph(f, nu.graph);
  if (N < 1 || N > nu.depth() || N > g.depth())
    fail(Errc::LevelOutOfRange, "sampling depth out of range");

  SampledPath path;
  path.seed = rng.state();
  path.vertices.resize(N);

  int current = 0;  // the root
  for (int lvl = 0; lvl < N; ++lvl) {
    VertexRef z{lvl, current};
    const auto& out = g.out_edges(z);
    const ExtScalar<S>& zz = f.partition_table().vertexZ[lvl][current];
    if (zz.infinite() || !(ScalarOps<S>::to_double(nu.values[lvl][current]) > 0.0))
      fail(Errc::ZeroMassVertexReached,
           "path reached a nu-null vertex at level " + std::to_string(lvl));
    // nu(r(e)) * kappa(r(e), z) with the common factor Z(z) dropped:
    // nu(r(e)) * Z(e) / Z(r(e)).
    std::vector<S> w(out.size(), ScalarOps<S>::zero());
    std::vector<int> dst(out.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
      const Edge& e = g.edges_at(lvl + 1)[out[j]];
      dst[j] = e.target;
      const ExtScalar<S>& zt = f.partition_table().vertexZ[lvl + 1][e.target];
      if (zt.infinite()) continue;  // nu vanishes there
      w[j] = nu.values[lvl + 1][e.target] * f.edge_partition(lvl + 1, out[j]).finite() /
             zt.finite();
    }
    current = dst[detail::categorical(rng, w)];
    path.vertices[lvl] = VertexRef{lvl + 1, current};
  }
  return path;
}

template <class S>
struct ErgodicTable {
  std::vector<VertexRef> targets;
  std::vector<int> levels;              // the m column
  std::vector<std::vector<S>> values;   // [row][target]: kappa(z(m), target)
  std::vector<S> final_deviation;       // |kappa(z(M), t) - nu(t)| per target
  std::vector<VertexRef> path;          // the path that was used
};

// Convergence table for an explicit strictly-ascending path: one row per
// path vertex above every target.
template <class S>
ErgodicTable<S> ergodic_experiment(const FlowSpec<S>& f, const CoherentSystem<S>& nu,
                                   const std::vector<VertexRef>& targets,
                                   const std::vector<VertexRef>& path) {
  const GradedGraph& g = f.graph();
  detail::require_same_graph(f, nu.graph);
  if (targets.empty()) fail(Errc::InvalidArgument, "no targets");
  int max_target_level = 0;
  for (const VertexRef& t : targets) {
    if (!g.contains(t)) fail(Errc::VertexNotFound, "target not in graph");
    max_target_level = std::max(max_target_level, t.level);
  }
  ErgodicTable<S> table;
  table.targets = targets;
  table.path = path;

  std::vector<std::vector<std::vector<S>>> cols;
  cols.reserve(targets.size());
  int top = 0;
  for (const VertexRef& v : path) {
    if (!g.contains(v)) fail(Errc::VertexNotFound, "path vertex not in graph");
    top = std::max(top, v.level);
  }
  if (top <= max_target_level)
    fail(Errc::LevelOrderViolation, "path never climbs above the targets");
  for (const VertexRef& t : targets) cols.push_back(link_column(f, t, top));

  for (const VertexRef& v : path) {
    if (v.level <= max_target_level) continue;
    table.levels.push_back(v.level);
    std::vector<S> row;
    row.reserve(targets.size());
    for (std::size_t t = 0; t < targets.size(); ++t)
      row.push_back(cols[t][v.level][v.index]);
    table.values.push_back(std::move(row));
  }
  if (!table.values.empty()) {
    for (std::size_t t = 0; t < targets.size(); ++t) {
      S dev = table.values.back()[t] - nu.at(targets[t]);
      table.final_deviation.push_back(ScalarOps<S>::absval(dev));
    }
  }
  return table;
}

// Same, over a path sampled upward through level M.
template <class S>
ErgodicTable<S> ergodic_experiment(const FlowSpec<S>& f, const CoherentSystem<S>& nu,
                                   const std::vector<VertexRef>& targets, int M, Rng& rng) {
  SampledPath p = sample_up(f, nu, M, rng);
  return ergodic_experiment(f, nu, targets, p.vertices);
}

}  // namespace bratteli
