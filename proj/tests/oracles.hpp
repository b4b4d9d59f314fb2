#pragma once

// Independent reference computations for the tests. These deliberately use
// different algorithms from the library: path enumeration walks *in*-edges
// by recursive descent (the library DFS walks out-edges), partition values
// are brute-force path sums, and links are computed in trace form
//
//     kappa(z, z') = Tr(rho_z P_{z'}) / Z(z)
//                  = sum_{paths through z'} prod_i Z(e_i) / sum_{paths} prod_i Z(e_i).

#include <vector>

#include "bratteli/flow_spec.hpp"
#include "bratteli/graded_graph.hpp"
#include "bratteli/scalar.hpp"

namespace oracle {

using bratteli::BigInt;
using bratteli::Edge;
using bratteli::FlowSpec;
using bratteli::GradedGraph;
using bratteli::ScalarOps;
using bratteli::VertexRef;

// All monotone edge-index paths root -> z, built backwards over in-edges.
inline void paths_rec(const GradedGraph& g, VertexRef v, std::vector<int>& stack,
                      std::vector<std::vector<int>>& out) {
  if (v.level == 0) {
    out.emplace_back(stack.rbegin(), stack.rend());
    return;
  }
  for (int k : g.in_edges(v)) {
    stack.push_back(k);
    paths_rec(g, VertexRef{v.level - 1, g.edges_at(v.level)[k].source}, stack, out);
    stack.pop_back();
  }
}

inline std::vector<std::vector<int>> paths(const GradedGraph& g, VertexRef z) {
  std::vector<std::vector<int>> out;
  std::vector<int> stack;
  paths_rec(g, z, stack, out);
  return out;
}

// dim H_z as a multiplicity-weighted path count.
inline BigInt dim(const GradedGraph& g, VertexRef z) {
  BigInt total = 0;
  for (const auto& p : paths(g, z)) {
    BigInt d = 1;
    for (int n = 1; n <= z.level; ++n) d *= g.edges_at(n)[p[n - 1]].multiplicity;
    total += d;
  }
  return total;
}

// Brute-force path sum for Z(z). Only valid on flows without infinite edges.
template <class S>
S partition(const FlowSpec<S>& f, VertexRef z) {
  S total = ScalarOps<S>::zero();
  for (const auto& p : paths(f.graph(), z)) {
    S prod = ScalarOps<S>::one();
    for (int n = 1; n <= z.level; ++n) prod = prod * f.edge_partition(n, p[n - 1]).finite();
    total += prod;
  }
  return total;
}

// Trace-form link: the rho_z mass of the paths passing through zp, over the
// total. Works across any number of levels.
template <class S>
S link_trace(const FlowSpec<S>& f, VertexRef z, VertexRef zp) {
  const GradedGraph& g = f.graph();
  S num = ScalarOps<S>::zero();
  S den = ScalarOps<S>::zero();
  for (const auto& p : paths(g, z)) {
    S prod = ScalarOps<S>::one();
    VertexRef at{0, 0};
    bool through = zp.level == 0 && zp.index == 0;
    for (int n = 1; n <= z.level; ++n) {
      prod = prod * f.edge_partition(n, p[n - 1]).finite();
      at = VertexRef{n, g.edges_at(n)[p[n - 1]].target};
      if (at == zp) through = true;
    }
    den += prod;
    if (through) num += prod;
  }
  return num / den;
}

// Binomial coefficients by the additive recurrence.
inline BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::vector<BigInt> row(static_cast<std::size_t>(n) + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int j = i; j >= 1; --j) row[j] += row[j - 1];
  return row[k];
}

// Integer partition counts p(0..12).
inline constexpr int kPartitionCounts[13] = {1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77};

}  // namespace oracle
