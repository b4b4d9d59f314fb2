#pragma once

// Concrete graphs and coherent systems used throughout the test surface and
// the CLI:
//
//   pascal(N)             — vertices (n,k), 0 <= k <= n, labeled by k (root
//                           "1"); edges (n-1,k) -> (n,k) and (n-1,k-1) -> (n,k),
//                           all multiplicity 1. dim(n,k) = C(n,k).
//   pascal_flow(N, beta)  — spectra {0} everywhere: every weight is 1 at any
//                           beta, so Z(n,k) = C(n,k) and the link is the
//                           classical one, kappa((n,k),(n-1,k)) = (n-k)/n.
//   bernoulli_system(N,p) — nu_p(n,k) = C(n,k) p^k (1-p)^{n-k}, the extreme
//                           coherent family on the Pascal graph.
//   q_pascal(N, q, beta)  — Pascal graph with one-point spectra whose weights
//                           are 1 on the k-preserving edge into (n,k) and q^k
//                           on the k-incrementing edge; Z(n,k) becomes the
//                           Gaussian binomial recursion Z(n,k) = Z(n-1,k) +
//                           q^k Z(n-1,k-1), and q = 1 degenerates to the
//                           classical link.
//   young(N)              — integer partitions of n, reverse-lexicographic,
//                           labeled "a+b+c"; add-a-box edges, multiplicity 1;
//                           dim(lambda) counts standard tableaux.
//   plancherel_system(N)  — nu(lambda) = dim(lambda)^2 / n!.

#include <memory>
#include <string>
#include <vector>

#include "bratteli/error.hpp"
#include "bratteli/flow_spec.hpp"
#include "bratteli/graded_graph.hpp"
#include "bratteli/harmonic.hpp"
#include "bratteli/scalar.hpp"

namespace bratteli {

GraphPtr pascal(int N);

// Young graph depth cap: partition counts stay desk-scale through 12.
inline constexpr int kYoungMaxDepth = 12;
GraphPtr young(int N);

// The partitions of n in the catalog's canonical (reverse-lexicographic)
// order; exposed because labels alone don't reveal the parts.
std::vector<std::vector<int>> partitions_of(int n);

// Every edge gets the flat spectrum {0, ..., 0} (multiplicity copies), so
// all Boltzmann weights are 1 at any beta and Z(z) counts the paths to z.
template <class S>
FlowSpec<S> counting_flow(GraphPtr g, double beta = 0.0) {
  std::vector<std::vector<EdgeThermal<S>>> thermal(g->depth() + 1);
  for (int n = 1; n <= g->depth(); ++n) {
    const auto& edges = g->edges_at(n);
    thermal[n].reserve(edges.size());
    for (const Edge& e : edges)
      thermal[n].push_back(EdgeThermal<S>::from_spectrum(
          beta, std::vector<double>(static_cast<std::size_t>(e.multiplicity), 0.0)));
  }
  return FlowSpec<S>(std::move(g), beta, std::move(thermal));
}

template <class S>
FlowSpec<S> pascal_flow(int N, double beta) {
  return counting_flow<S>(pascal(N), beta);
}

template <class S>
CoherentSystem<S> bernoulli_system(int N, const S& p) {
  double pd = ScalarOps<S>::to_double(p);
  if (!(pd > 0.0 && pd < 1.0))
    fail(Errc::ParameterOutOfRange, "bernoulli parameter must satisfy 0 < p < 1");
  CoherentSystem<S> nu;
  nu.graph = pascal(N);
  nu.values.resize(N + 1);
  S q = ScalarOps<S>::one() - p;
  // nu(n, .) built by the convolution step nu(n,k) = q*nu(n-1,k) + p*nu(n-1,k-1),
  // which reproduces C(n,k) p^k q^{n-k} and stays exact in rational mode.
  nu.values[0] = {ScalarOps<S>::one()};
  for (int n = 1; n <= N; ++n) {
    nu.values[n].assign(n + 1, ScalarOps<S>::zero());
    for (int k = 0; k < n; ++k) {
      nu.values[n][k] += q * nu.values[n - 1][k];
      nu.values[n][k + 1] += p * nu.values[n - 1][k];
    }
  }
  return nu;
}

template <class S>
FlowSpec<S> q_pascal(int N, const S& q, double beta) {
  double qd = ScalarOps<S>::to_double(q);
  if (!(qd > 0.0 && qd <= 1.0))
    fail(Errc::ParameterOutOfRange, "q must satisfy 0 < q <= 1");
  if (beta == 0.0)
    fail(Errc::BetaZero, "q-weights need beta != 0 to live in one-point spectra");
  GraphPtr g = pascal(N);
  std::vector<std::vector<EdgeThermal<S>>> thermal(g->depth() + 1);
  for (int n = 1; n <= g->depth(); ++n) {
    const auto& edges = g->edges_at(n);
    thermal[n].reserve(edges.size());
    for (const Edge& e : edges) {
      if (e.target == e.source) {
        // k-preserving step: weight 1, i.e. eigenvalue 0.
        thermal[n].push_back(EdgeThermal<S>::from_spectrum(beta, {0.0}));
      } else {
        // k-incrementing step into (n, k): weight q^k.
        S w = ScalarOps<S>::one();
        for (int j = 0; j < e.target; ++j) w = w * q;
        thermal[n].push_back(EdgeThermal<S>::from_weights(beta, {w}));
      }
    }
  }
  return FlowSpec<S>(std::move(g), beta, std::move(thermal));
}

template <class S>
CoherentSystem<S> plancherel_system(int N) {
  GraphPtr g = young(N);
  CoherentSystem<S> nu;
  nu.graph = g;
  nu.values.resize(N + 1);
  BigInt factorial = 1;
  for (int n = 0; n <= N; ++n) {
    if (n > 0) factorial *= n;
    nu.values[n].reserve(g->level_size(n));
    for (int v = 0; v < g->level_size(n); ++v) {
      const BigInt& d = g->dim(VertexRef{n, v});
      nu.values[n].push_back(ScalarOps<S>::from_rational(Rational(d * d, factorial)));
    }
  }
  return nu;
}

}  // namespace bratteli
