#pragma once

// The inverse problem: given an abstract link — a weight kappa(e) in (0,1]
// per edge with sum_{e : r(e)=z} kappa(e) = 1 at every non-root vertex —
// and beta != 0, build edge spectra whose Boltzmann weights sum to kappa(e)
// per edge. Then every vertex partition function telescopes to 1 and the
// induced link is exactly the prescribed kappa (the normalized picture in
// which kappa(z, z') = Z(e)).
//
// Two canonical spectrum shapes expose the freedom in the choice of rho_e:
//   Uniform       — m(e) equal weights kappa(e)/m(e), i.e. equal eigenvalues
//                   -(1/beta) log(kappa(e)/m(e));
//   Geometric(r)  — weights proportional to r^j, j = 0..m(e)-1, normalized
//                   to sum kappa(e).
// Both keep kappa(e) rational when the inputs are (the weights are built in
// S; eigenvalues exist only as the double-precision view).

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
struct AbstractLink {
  GraphPtr graph;
  EdgeValues<S> weights;  // [level][edge index], aligned with graph edges
};

// Row sums and positivity; returns human-readable violations (empty = valid).
template <class S>
std::vector<std::string> validate_link(const AbstractLink<S>& k, double tol = 1e-9) {
  std::vector<std::string> out;
  if (!k.graph) {
    out.push_back("null graph");
    return out;
  }
  const GradedGraph& g = *k.graph;
  if (k.weights.size() != static_cast<std::size_t>(g.depth()) + 1) {
    out.push_back("weights misaligned with levels");
    return out;
  }
  for (int n = 1; n <= g.depth(); ++n) {
    const auto& edges = g.edges_at(n);
    if (k.weights[n].size() != edges.size()) {
      out.push_back("weights misaligned at level " + std::to_string(n));
      continue;
    }
    std::vector<S> row(g.level_size(n), ScalarOps<S>::zero());
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (!(ScalarOps<S>::to_double(k.weights[n][e]) > 0.0))
        out.push_back("non-positive weight at level " + std::to_string(n));
      row[edges[e].target] += k.weights[n][e];
    }
    for (int v = 0; v < g.level_size(n); ++v)
      if (!ScalarOps<S>::equal_within(row[v], ScalarOps<S>::one(), tol))
        out.push_back("incoming weights at [" + std::to_string(n) + ",\"" + g.labels(n)[v] +
                      "\"] sum to " + ScalarOps<S>::str(row[v]));
  }
  return out;
}

enum class SpectrumStyle { Uniform, Geometric };

// Build the flow realizing k. ratio parameterizes the Geometric style and
// must be positive (1 degenerates to Uniform).
template <class S>
FlowSpec<S> realize_link(const AbstractLink<S>& k, double beta,
                         SpectrumStyle style = SpectrumStyle::Uniform,
                         const S& ratio = ScalarOps<S>::one()) {
  if (beta == 0.0)
    fail(Errc::BetaZero,
         "beta = 0 pins every edge partition value to the multiplicity; "
         "a general link is not realizable");
  auto problems = validate_link(k);
  if (!problems.empty()) fail(Errc::InvalidLink, problems.front());
  if (style == SpectrumStyle::Geometric && !(ScalarOps<S>::to_double(ratio) > 0.0))
    fail(Errc::ParameterOutOfRange, "geometric ratio must be positive");

  const GradedGraph& g = *k.graph;
  std::vector<std::vector<EdgeThermal<S>>> thermal(g.depth() + 1);
  for (int n = 1; n <= g.depth(); ++n) {
    const auto& edges = g.edges_at(n);
    thermal[n].reserve(edges.size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
      auto m = static_cast<std::size_t>(edges[e].multiplicity);
      const S& kap = k.weights[n][e];
      std::vector<S> w(m, ScalarOps<S>::zero());
      if (style == SpectrumStyle::Uniform) {
        S share = kap / ScalarOps<S>::from_int(static_cast<long long>(m));
        for (auto& x : w) x = share;
      } else {
        // w_j = kappa * r^j / (1 + r + ... + r^{m-1})
        S geom = ScalarOps<S>::one();
        S norm = ScalarOps<S>::zero();
        for (std::size_t j = 0; j < m; ++j) {
          w[j] = geom;
          norm += geom;
          geom = geom * ratio;
        }
        for (auto& x : w) x = kap * x / norm;
      }
      thermal[n].push_back(EdgeThermal<S>::from_weights(beta, std::move(w)));
    }
  }
  return FlowSpec<S>(k.graph, beta, std::move(thermal));
}

struct RealizationReport {
  bool z_pass = true;     // vertexZ identically 1
  bool link_pass = true;  // induced adjacent link equals the prescription
  double max_z_deviation = 0.0;
  double max_link_deviation = 0.0;

  bool pass() const { return z_pass && link_pass; }
};

// Does f realize k?  Checks Z == 1 everywhere and the per-edge link values.
template <class S>
RealizationReport verify_realization(const FlowSpec<S>& f, const AbstractLink<S>& k,
                                     double tol) {
  if (!same_graph(f.graph_ptr(), k.graph))
    fail(Errc::GraphMismatch, "flow and link describe different graphs");
  auto problems = validate_link(k);
  if (!problems.empty()) fail(Errc::InvalidLink, problems.front());

  const GradedGraph& g = f.graph();
  RealizationReport rep;
  for (int n = 0; n <= g.depth(); ++n) {
    for (int v = 0; v < g.level_size(n); ++v) {
      const ExtScalar<S>& zv = f.partition_table().vertexZ[n][v];
      if (zv.infinite()) {
        rep.z_pass = false;
        rep.max_z_deviation = std::numeric_limits<double>::infinity();
        continue;
      }
      double dev = std::fabs(zv.to_double() - 1.0);
      rep.max_z_deviation = std::max(rep.max_z_deviation, dev);
      if (!ScalarOps<S>::equal_within(zv.finite(), ScalarOps<S>::one(), tol))
        rep.z_pass = false;
    }
  }
  for (int n = 1; n <= g.depth(); ++n) {
    const auto& edges = g.edges_at(n);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      S got = link_adjacent(f, VertexRef{n, edges[e].target},
                            VertexRef{n - 1, edges[e].source});
      double dev = std::fabs(ScalarOps<S>::to_double(got - k.weights[n][e]));
      rep.max_link_deviation = std::max(rep.max_link_deviation, dev);
      if (!ScalarOps<S>::equal_within(got, k.weights[n][e], tol)) rep.link_pass = false;
    }
  }
  return rep;
}

}  // namespace bratteli
