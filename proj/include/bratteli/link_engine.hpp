#pragma once

// The Markov link between levels. For z at level n with Z(z) < inf and z'
// at level n-1,
//
//     kappa(z, z') = Z(z') * Z(e) / Z(z)   if an edge e = (z' -> z) exists,
//     kappa(z, z') = 0                     otherwise,
//
// and kappa(z, .) = 0 identically when Z(z) = +inf. The factor Z(z') is the
// trace of the lower tensor legs over H_{z'}; it is what makes the rows of
// finite-Z vertices sum to 1 (the level recursion telescopes) and what the
// trace oracle Tr(rho_z P_{z'}) / Z(z) produces. Multi-level links compose
// by Chapman-Kolmogorov and are computed by an O(edges) upward sweep.
//
// Local equilibrium states are evaluated against diagonal observables in
// the canonical path (x) eigenvector basis (see flow_spec.hpp for the basis
// order): tau_z(a) = sum_i rho_i a_i / sum_i rho_i.

#include <cmath>
#include <cstddef>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bratteli/error.hpp"
#include "bratteli/flow_spec.hpp"
#include "bratteli/graded_graph.hpp"
#include "bratteli/scalar.hpp"

namespace bratteli {

template <class S>
struct LinkMatrix {
  int upper = 0;
  int lower = 0;
  std::vector<std::vector<S>> rows;   // [upper index][lower index]
  std::vector<char> upper_infinite;   // x-classified upper vertices (zero rows)
};

// kappa(z, z') for adjacent levels.
template <class S>
S link_adjacent(const FlowSpec<S>& f, VertexRef z, VertexRef zp) {
  if (z.level != zp.level + 1)
    fail(Errc::NonAdjacentLevels, "levels " + std::to_string(z.level) + " and " +
                                      std::to_string(zp.level) + " are not adjacent");
  const GradedGraph& g = f.graph();
  if (!g.contains(zp)) fail(Errc::VertexNotFound, "lower vertex not in graph");
  const ExtScalar<S>& zz = f.vertex_partition(z);
  if (zz.infinite()) return ScalarOps<S>::zero();
  for (int k : g.in_edges(z)) {
    if (g.edges_at(z.level)[k].source == zp.index) {
      return f.vertex_partition(zp).finite() * f.edge_partition(z.level, k).finite() /
             zz.finite();
    }
  }
  return ScalarOps<S>::zero();
}

// One column of the multi-level link: out[n][v] = kappa((n,v), lower) for
// every level lower.level <= n <= top. Chapman-Kolmogorov upward sweep.
template <class S>
std::vector<std::vector<S>> link_column(const FlowSpec<S>& f, VertexRef lower, int top) {
  const GradedGraph& g = f.graph();
  if (!g.contains(lower)) fail(Errc::VertexNotFound, "lower vertex not in graph");
  if (top < lower.level || top > g.depth())
    fail(Errc::LevelOrderViolation, "sweep range [" + std::to_string(lower.level) + "," +
                                        std::to_string(top) + "] is not increasing in-graph");
  std::vector<std::vector<S>> out(top + 1);
  out[lower.level].assign(g.level_size(lower.level), ScalarOps<S>::zero());
  out[lower.level][lower.index] = ScalarOps<S>::one();
  for (int n = lower.level + 1; n <= top; ++n) {
    const auto& edges = g.edges_at(n);
    std::vector<S> acc(g.level_size(n), ScalarOps<S>::zero());
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const S& below = out[n - 1][edges[k].source];
      const ExtScalar<S>& zs = f.partition_table().vertexZ[n - 1][edges[k].source];
      const ExtScalar<S>& ze = f.edge_partition(n, static_cast<int>(k));
      // An infinite source or edge makes the target x-classified, and the
      // link out of an x-vertex is identically zero; skip the term.
      if (zs.infinite() || ze.infinite()) continue;
      acc[edges[k].target] += zs.finite() * ze.finite() * below;
    }
    out[n].assign(g.level_size(n), ScalarOps<S>::zero());
    for (int v = 0; v < g.level_size(n); ++v) {
      const ExtScalar<S>& zv = f.partition_table().vertexZ[n][v];
      if (!zv.infinite()) out[n][v] = acc[v] / zv.finite();
    }
  }
  return out;
}

// kappa(z, zpp) across any number of levels.
template <class S>
S link_multi(const FlowSpec<S>& f, VertexRef z, VertexRef zpp) {
  if (zpp.level >= z.level)
    fail(Errc::LevelOrderViolation, "target level must lie strictly below");
  if (!f.graph().contains(z)) fail(Errc::VertexNotFound, "upper vertex not in graph");
  if (z.level == zpp.level + 1) return link_adjacent(f, z, zpp);
  auto col = link_column(f, zpp, z.level);
  return col[z.level][z.index];
}

template <class S>
LinkMatrix<S> link_matrix(const FlowSpec<S>& f, int upper, int lower) {
  const GradedGraph& g = f.graph();
  if (upper < 0 || upper > g.depth() || lower < 0 || lower > g.depth())
    fail(Errc::LevelOutOfRange, "link levels out of range");
  if (lower >= upper) fail(Errc::LevelOrderViolation, "need upper > lower");
  LinkMatrix<S> m;
  m.upper = upper;
  m.lower = lower;
  m.rows.assign(g.level_size(upper), std::vector<S>(g.level_size(lower), ScalarOps<S>::zero()));
  m.upper_infinite.assign(g.level_size(upper), 0);
  for (int u = 0; u < g.level_size(upper); ++u)
    m.upper_infinite[u] = f.partition_table().vertexZ[upper][u].infinite() ? 1 : 0;
  for (int l = 0; l < g.level_size(lower); ++l) {
    auto col = link_column(f, VertexRef{lower, l}, upper);
    for (int u = 0; u < g.level_size(upper); ++u) m.rows[u][l] = col[upper][u];
  }
  return m;
}

struct MarkovReport {
  bool pass = true;
  double max_row_deviation = 0.0;   // |row sum - 1| over finite-Z rows
  double max_composition_deviation = 0.0;
  long negative_entries = 0;
  long infinite_rows = 0;           // informational: zero rows at x-vertices
  std::vector<std::string> notes;
};

// Kernel laws for the links out of level n: non-negativity, row
// normalization on finite-Z rows, zero rows on x-vertices, and composition
// consistency through every intermediate level.
template <class S>
MarkovReport verify_markov(const FlowSpec<S>& f, int n, double tol) {
  const GradedGraph& g = f.graph();
  if (n < 1 || n > g.depth()) fail(Errc::LevelOutOfRange, "level out of range");
  MarkovReport rep;

  std::vector<LinkMatrix<S>> K;  // K[m] = link n -> m, for m < n
  K.reserve(n);
  for (int m = 0; m < n; ++m) K.push_back(link_matrix(f, n, m));

  for (int m = 0; m < n; ++m) {
    for (int u = 0; u < g.level_size(n); ++u) {
      S sum = ScalarOps<S>::zero();
      for (const S& v : K[m].rows[u]) {
        if (ScalarOps<S>::to_double(v) < 0.0) ++rep.negative_entries;
        sum += v;
      }
      if (K[m].upper_infinite[u]) {
        if (m == 0) ++rep.infinite_rows;
        if (!(sum == ScalarOps<S>::zero())) {
          rep.pass = false;
          rep.notes.push_back("nonzero row at an x-classified vertex");
        }
        continue;
      }
      double dev = std::fabs(ScalarOps<S>::to_double(sum) - 1.0);
      rep.max_row_deviation = std::max(rep.max_row_deviation, dev);
      if (!ScalarOps<S>::equal_within(sum, ScalarOps<S>::one(), tol)) rep.pass = false;
    }
  }

  // K[l] vs K[m] * link(m -> l) for every l < m < n.
  for (int m = 1; m < n; ++m) {
    for (int l = 0; l < m; ++l) {
      LinkMatrix<S> lower = link_matrix(f, m, l);
      for (int u = 0; u < g.level_size(n); ++u) {
        for (int c = 0; c < g.level_size(l); ++c) {
          S composed = ScalarOps<S>::zero();
          for (int v = 0; v < g.level_size(m); ++v)
            composed += K[m].rows[u][v] * lower.rows[v][c];
          double dev =
              std::fabs(ScalarOps<S>::to_double(composed) -
                        ScalarOps<S>::to_double(K[l].rows[u][c]));
          rep.max_composition_deviation = std::max(rep.max_composition_deviation, dev);
          if (!ScalarOps<S>::equal_within(composed, K[l].rows[u][c], tol)) rep.pass = false;
        }
      }
    }
  }

  if (rep.negative_entries > 0) {
    rep.pass = false;
    rep.notes.push_back("negative link entries");
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Diagonal observables and local states.

template <class S>
struct DiagonalObservable {
  VertexRef vertex;
  std::vector<S> values;  // one per canonical basis index of H_z
};

template <class S>
DiagonalObservable<S> constant_observable(const FlowSpec<S>& f, VertexRef z, const S& value,
                                          std::size_t max_dim = FlowSpec<S>::kDenseDimLimit) {
  return DiagonalObservable<S>{z, std::vector<S>(f.checked_dim(z, max_dim), value)};
}

// tau_z(a): the normalized local equilibrium state at z.
template <class S>
S tau_eval(const FlowSpec<S>& f, VertexRef z, const DiagonalObservable<S>& a,
           std::size_t max_dim = FlowSpec<S>::kDenseDimLimit) {
  if (!(a.vertex == z)) fail(Errc::InvalidArgument, "observable lives at a different vertex");
  if (!f.finite(z))
    fail(Errc::InfinitePartitionFunction, "no equilibrium state at an x-classified vertex");
  std::vector<S> rho = f.rho_spectrum(z, max_dim);
  if (rho.size() != a.values.size())
    fail(Errc::InvalidArgument, "observable length differs from dim H_z");
  S num = ScalarOps<S>::zero();
  S den = ScalarOps<S>::zero();
  for (std::size_t i = 0; i < rho.size(); ++i) {
    num += rho[i] * a.values[i];
    den += rho[i];
  }
  return num / den;
}

// E_n applied to a level-n family of diagonal observables: the central
// coefficient z -> tau_z(a_z), zero at x-classified vertices. observables
// must be aligned with Z_n by index.
template <class S>
std::vector<S> conditional_expectation(const FlowSpec<S>& f, int n,
                                       const std::vector<DiagonalObservable<S>>& observables,
                                       std::size_t max_dim = FlowSpec<S>::kDenseDimLimit) {
  const GradedGraph& g = f.graph();
  if (n < 0 || n > g.depth()) fail(Errc::LevelOutOfRange, "level out of range");
  if (observables.size() != static_cast<std::size_t>(g.level_size(n)))
    fail(Errc::InvalidArgument, "need one observable per vertex of the level");
  std::vector<S> coeff(g.level_size(n), ScalarOps<S>::zero());
  for (int v = 0; v < g.level_size(n); ++v) {
    VertexRef z{n, v};
    if (!f.finite(z)) continue;
    if (!(observables[v].vertex == z))
      fail(Errc::InvalidArgument, "observable list misaligned with the level");
    coeff[v] = tau_eval(f, z, observables[v], max_dim);
  }
  return coeff;
}

// iota_{z, a.vertex}(a): embed a lower diagonal observable into H_z by
// replicating it across the upward tensor factors; basis elements whose
// path misses a.vertex map to 0.
template <class S>
DiagonalObservable<S> embed_observable(const FlowSpec<S>& f, const DiagonalObservable<S>& a,
                                       VertexRef z,
                                       std::size_t max_dim = FlowSpec<S>::kDenseDimLimit) {
  const GradedGraph& g = f.graph();
  VertexRef zp = a.vertex;
  if (zp.level >= z.level) fail(Errc::LevelOrderViolation, "can only embed upward");
  std::size_t dim_upper = f.checked_dim(z, max_dim);
  if (a.values.size() != g.dim(zp).convert_to<std::size_t>())
    fail(Errc::InvalidArgument, "observable length differs from dim H_{z'}");

  // Offsets of each path-block of H_{z'} in the canonical basis.
  std::unordered_map<std::string, std::size_t> offset_of;
  {
    std::size_t offset = 0;
    for (const auto& p : g.paths_to(zp)) {
      std::string key;
      std::size_t block = 1;
      for (int lvl = 1; lvl <= zp.level; ++lvl) {
        key += std::to_string(p[lvl - 1]);
        key += ',';
        block *= static_cast<std::size_t>(g.edges_at(lvl)[p[lvl - 1]].multiplicity);
      }
      offset_of.emplace(std::move(key), offset);
      offset += block;
    }
  }

  DiagonalObservable<S> out{z, std::vector<S>(dim_upper, ScalarOps<S>::zero())};
  std::size_t base = 0;
  for (const auto& p : g.paths_to(z)) {
    std::size_t block = 1, prefix_block = 1;
    std::string key;
    for (int lvl = 1; lvl <= z.level; ++lvl) {
      auto mult = static_cast<std::size_t>(g.edges_at(lvl)[p[lvl - 1]].multiplicity);
      block *= mult;
      if (lvl <= zp.level) {
        prefix_block *= mult;
        key += std::to_string(p[lvl - 1]);
        key += ',';
      }
    }
    auto it = offset_of.find(key);
    if (it != offset_of.end()) {
      // Digits beyond the prefix vary fastest: basis index base + j has
      // prefix digit-rank j / suffix_block.
      std::size_t suffix_block = block / prefix_block;
      for (std::size_t j = 0; j < block; ++j)
        out.values[base + j] = a.values[it->second + j / suffix_block];
    }
    base += block;
  }
  return out;
}

// Indicator of the paths through zp, as a diagonal observable on H_z.
template <class S>
DiagonalObservable<S> indicator_through(const FlowSpec<S>& f, VertexRef z, VertexRef zp,
                                        std::size_t max_dim = FlowSpec<S>::kDenseDimLimit) {
  DiagonalObservable<S> ones{
      zp, std::vector<S>(f.graph().dim(zp).template convert_to<std::size_t>(),
                         ScalarOps<S>::one())};
  return embed_observable(f, ones, z, max_dim);
}

// Compatibility of local states along the embedding (the factorization
// tau_z o iota_{zz'} = kappa(z,z') tau_{z'}).
template <class S>
bool verify_compatibility(const FlowSpec<S>& f, VertexRef z, VertexRef zp,
                          const DiagonalObservable<S>& a, double tol,
                          std::size_t max_dim = FlowSpec<S>::kDenseDimLimit) {
  if (!(a.vertex == zp)) fail(Errc::InvalidArgument, "observable lives at a different vertex");
  if (!f.finite(z) || !f.finite(zp))
    fail(Errc::InfinitePartitionFunction, "compatibility needs finite partition functions");
  S lhs = tau_eval(f, z, embed_observable(f, a, z, max_dim), max_dim);
  S rhs = link_multi(f, z, zp) * tau_eval(f, zp, a, max_dim);
  return ScalarOps<S>::equal_within(lhs, rhs, tol);
}

}  // namespace bratteli
