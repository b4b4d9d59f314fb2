#pragma once

// Coherent systems: normalized positive kappa-harmonic functions nu on the
// vertices, stored extensionally to finite depth N. The defining relations:
//
//     nu(root) = 1,   nu >= 0,   nu(z) = 0 whenever Z(z) = +inf,
//     nu(z') = sum_{z in Z_{n+1}} nu(z) kappa(z, z')   for every level < N.
//
// Harmonicity plus the root normalization force every level mass to be 1,
// so nu restricted to Z_n is a probability measure; conversely any measure
// on Z_N supported on finite-Z vertices extends downward (uniquely) by the
// kappa-pushdown. These are the two halves of the finite-depth bijection
// between boundary data and coherent systems.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "bratteli/error.hpp"
#include "bratteli/flow_spec.hpp"
#include "bratteli/graded_graph.hpp"
#include "bratteli/link_engine.hpp"
#include "bratteli/scalar.hpp"

namespace bratteli {

template <class S>
struct CoherentSystem {
  GraphPtr graph;
  std::vector<std::vector<S>> values;  // [level][vertex index], levels 0..depth

  int depth() const { return static_cast<int>(values.size()) - 1; }

  const S& at(VertexRef v) const {
    if (v.level < 0 || v.level > depth() ||
        v.index >= static_cast<int>(values[v.level].size()))
      fail(Errc::VertexNotFound, "coherent system has no value there");
    return values[v.level][v.index];
  }
};

template <class S>
struct LevelMeasure {
  int level = 0;
  std::vector<S> weights;  // aligned with Z_level
};

namespace detail {

template <class S>
void require_same_graph(const FlowSpec<S>& f, const GraphPtr& g) {
  if (!same_graph(f.graph_ptr(), g))
    fail(Errc::GraphMismatch, "flow and coherent data describe different graphs");
}

// Probability-vector sanity for a level measure; exact mode demands an
// exact unit sum.
template <class S>
void require_probability(const FlowSpec<S>& f, const LevelMeasure<S>& mu) {
  const GradedGraph& g = f.graph();
  if (mu.level < 0 || mu.level > g.depth()) fail(Errc::LevelOutOfRange, "measure level");
  if (mu.weights.size() != static_cast<std::size_t>(g.level_size(mu.level)))
    fail(Errc::InvalidArgument, "measure is misaligned with its level");
  S sum = ScalarOps<S>::zero();
  for (const S& w : mu.weights) {
    if (ScalarOps<S>::to_double(w) < 0.0)
      fail(Errc::InvalidArgument, "measure has a negative weight");
    sum += w;
  }
  if (!ScalarOps<S>::equal_within(sum, ScalarOps<S>::one(), 1e-9))
    fail(Errc::InvalidArgument, "measure does not sum to 1");
}

}  // namespace detail

// The kappa-pushdown of a level-N measure, as a depth-N coherent system.
template <class S>
CoherentSystem<S> extend_down(const FlowSpec<S>& f, const LevelMeasure<S>& mu) {
  const GradedGraph& g = f.graph();
  detail::require_probability(f, mu);
  for (std::size_t i = 0; i < mu.weights.size(); ++i)
    if (f.partition_table().vertexZ[mu.level][i].infinite() &&
        ScalarOps<S>::to_double(mu.weights[i]) > 0.0)
      fail(Errc::MassOnInfiniteVertex,
           "measure charges x-classified vertex '" + g.labels(mu.level)[i] + "'");

  CoherentSystem<S> nu;
  nu.graph = f.graph_ptr();
  nu.values.resize(mu.level + 1);
  nu.values[mu.level] = mu.weights;
  for (int n = mu.level; n >= 1; --n) {
    const auto& edges = g.edges_at(n);
    nu.values[n - 1].assign(g.level_size(n - 1), ScalarOps<S>::zero());
    for (std::size_t k = 0; k < edges.size(); ++k) {
      VertexRef upper{n, edges[k].target};
      const ExtScalar<S>& zu = f.vertex_partition(upper);
      if (zu.infinite()) continue;  // nu vanishes there
      const S& val = nu.values[n][edges[k].target];
      // kappa(upper, source) * nu(upper)
      nu.values[n - 1][edges[k].source] +=
          val * f.partition_table().vertexZ[n - 1][edges[k].source].finite() *
          f.edge_partition(n, static_cast<int>(k)).finite() / zu.finite();
    }
  }
  return nu;
}

struct HarmonicReport {
  bool pass = true;
  double max_residual = 0.0;            // harmonicity defect, levels 0..N-1
  double root_deviation = 0.0;          // |nu(root) - 1|
  double max_level_mass_deviation = 0.0;
  double infinite_mass = 0.0;           // total nu-mass on x-classified vertices
  bool nonnegative = true;
  std::vector<std::vector<double>> residuals;  // [level][vertex], levels 0..N-1
};

// Residuals |nu(z') - sum_z nu(z) kappa(z,z')| plus the bookkeeping
// invariants. Exact mode requires exact zeros; tol applies in float mode.
template <class S>
HarmonicReport check_harmonic(const FlowSpec<S>& f, const CoherentSystem<S>& nu, double tol) {
  const GradedGraph& g = f.graph();
  detail::require_same_graph(f, nu.graph);
  int N = nu.depth();
  if (N < 0 || N > g.depth()) fail(Errc::LevelOutOfRange, "coherent system depth");
  for (int n = 0; n <= N; ++n)
    if (nu.values[n].size() != static_cast<std::size_t>(g.level_size(n)))
      fail(Errc::InvalidArgument, "coherent system misaligned at level " + std::to_string(n));

  HarmonicReport rep;
  rep.residuals.resize(std::max(N, 0));

  if (N >= 0) {
    S root = nu.values[0].empty() ? ScalarOps<S>::zero() : nu.values[0][0];
    rep.root_deviation = std::fabs(ScalarOps<S>::to_double(root) - 1.0);
    if (!ScalarOps<S>::equal_within(root, ScalarOps<S>::one(), tol)) rep.pass = false;
  }

  for (int n = 0; n <= N; ++n) {
    S mass = ScalarOps<S>::zero();
    for (int v = 0; v < g.level_size(n); ++v) {
      const S& val = nu.values[n][v];
      if (ScalarOps<S>::to_double(val) < 0.0) {
        rep.nonnegative = false;
        rep.pass = false;
      }
      mass += val;
      if (f.partition_table().vertexZ[n][v].infinite()) {
        rep.infinite_mass += std::fabs(ScalarOps<S>::to_double(val));
        if (!(val == ScalarOps<S>::zero())) rep.pass = false;
      }
    }
    double dev = std::fabs(ScalarOps<S>::to_double(mass) - 1.0);
    rep.max_level_mass_deviation = std::max(rep.max_level_mass_deviation, dev);
    if (!ScalarOps<S>::equal_within(mass, ScalarOps<S>::one(), tol)) rep.pass = false;
  }

  for (int n = 1; n <= N; ++n) {
    const auto& edges = g.edges_at(n);
    std::vector<S> pushed(g.level_size(n - 1), ScalarOps<S>::zero());
    for (std::size_t k = 0; k < edges.size(); ++k) {
      VertexRef upper{n, edges[k].target};
      const ExtScalar<S>& zu = f.vertex_partition(upper);
      if (zu.infinite()) continue;
      pushed[edges[k].source] += nu.values[n][edges[k].target] *
                                 f.partition_table().vertexZ[n - 1][edges[k].source].finite() *
                                 f.edge_partition(n, static_cast<int>(k)).finite() / zu.finite();
    }
    rep.residuals[n - 1].resize(g.level_size(n - 1));
    for (int v = 0; v < g.level_size(n - 1); ++v) {
      double r = std::fabs(ScalarOps<S>::to_double(pushed[v] - nu.values[n - 1][v]));
      rep.residuals[n - 1][v] = r;
      rep.max_residual = std::max(rep.max_residual, r);
      if (!ScalarOps<S>::equal_within(pushed[v], nu.values[n - 1][v], tol)) rep.pass = false;
    }
  }
  return rep;
}

// omega_nu evaluated on a level-n family of diagonal observables:
// sum_z nu(z) tau_z(a_z) over the finite-Z vertices of Z_n.
template <class S>
S state_eval(const FlowSpec<S>& f, const CoherentSystem<S>& nu, int n,
             const std::vector<DiagonalObservable<S>>& observables,
             std::size_t max_dim = FlowSpec<S>::kDenseDimLimit) {
  const GradedGraph& g = f.graph();
  detail::require_same_graph(f, nu.graph);
  if (n < 0 || n > nu.depth() || n > g.depth())
    fail(Errc::LevelOutOfRange, "evaluation level beyond the system depth");
  if (observables.size() != static_cast<std::size_t>(g.level_size(n)))
    fail(Errc::InvalidArgument, "need one observable per vertex of the level");
  S total = ScalarOps<S>::zero();
  for (int v = 0; v < g.level_size(n); ++v) {
    VertexRef z{n, v};
    if (!f.finite(z)) continue;
    if (!(observables[v].vertex == z))
      fail(Errc::InvalidArgument, "observable list misaligned with the level");
    total += nu.values[n][v] * tau_eval(f, z, observables[v], max_dim);
  }
  return total;
}

// Restriction of nu to Z_N; extend_down inverts it on levels <= N.
template <class S>
LevelMeasure<S> decompose_at_level(const FlowSpec<S>& f, const CoherentSystem<S>& nu, int N) {
  detail::require_same_graph(f, nu.graph);
  if (N < 0 || N > nu.depth()) fail(Errc::LevelOutOfRange, "decomposition level");
  return LevelMeasure<S>{N, nu.values[N]};
}

// kappa(z(m), z) along an ascending path, one value per path entry. The
// sequence is the finite-level shadow of the boundary kernel; no
// convergence is asserted here.
template <class S>
std::vector<S> boundary_kernel_approx(const FlowSpec<S>& f, const std::vector<VertexRef>& path,
                                      VertexRef z) {
  const GradedGraph& g = f.graph();
  if (path.empty()) return {};
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (!g.contains(path[i])) fail(Errc::VertexNotFound, "path vertex not in graph");
    if (i > 0 && path[i].level <= path[i - 1].level)
      fail(Errc::InvalidArgument, "path must be strictly level-increasing");
    if (f.partition_table().vertexZ[path[i].level][path[i].index].infinite())
      fail(Errc::InfinitePartitionFunction,
           "path visits an x-classified vertex at level " + std::to_string(path[i].level));
  }
  if (z.level >= path.front().level)
    fail(Errc::LevelOrderViolation, "target must lie strictly below the path");

  auto col = link_column(f, z, path.back().level);
  std::vector<S> out;
  out.reserve(path.size());
  for (const VertexRef& v : path) out.push_back(col[v.level][v.index]);
  return out;
}

}  // namespace bratteli
