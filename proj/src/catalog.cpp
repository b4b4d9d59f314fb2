#include "bratteli/catalog.hpp"

#include <algorithm>
#include <map>
#include <utility>

namespace bratteli {

GraphPtr pascal(int N) {
  if (N < 1) fail(Errc::ParameterOutOfRange, "depth must be >= 1");
  std::vector<std::vector<std::string>> levels(N + 1);
  std::vector<std::vector<Edge>> edges(N + 1);
  levels[0] = {"1"};
  for (int n = 1; n <= N; ++n) {
    levels[n].reserve(n + 1);
    for (int k = 0; k <= n; ++k) levels[n].push_back(std::to_string(k));
    edges[n].reserve(2 * n);
    for (int k = 0; k <= n; ++k) {
      if (k <= n - 1) edges[n].push_back({k, k, 1});          // keep k
      if (k >= 1) edges[n].push_back({k - 1, k, 1});          // increment k
    }
  }
  return std::make_shared<const GradedGraph>(std::move(levels), std::move(edges));
}

std::vector<std::vector<int>> partitions_of(int n) {
  // Reverse-lexicographic: first part descending, then the remainder
  // recursively with parts capped by the first.
  std::vector<std::vector<int>> out;
  std::vector<int> current;
  auto rec = [&](auto&& self, int left, int cap) -> void {
    if (left == 0) {
      out.push_back(current);
      return;
    }
    for (int part = std::min(left, cap); part >= 1; --part) {
      current.push_back(part);
      self(self, left - part, part);
      current.pop_back();
    }
  };
  rec(rec, n, n);
  return out;
}

namespace {

std::string partition_label(const std::vector<int>& parts) {
  if (parts.empty()) return "1";  // the root
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += "+";
    s += std::to_string(parts[i]);
  }
  return s;
}

// mu is lambda minus one box: same length with one part decremented, or one
// shorter with a trailing 1 removed.
bool one_box_below(const std::vector<int>& mu, const std::vector<int>& lambda) {
  if (mu.size() + 1 == lambda.size()) {
    if (lambda.back() != 1) return false;
    for (std::size_t i = 0; i < mu.size(); ++i)
      if (mu[i] != lambda[i]) return false;
    return true;
  }
  if (mu.size() != lambda.size()) return false;
  int diffs = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] == lambda[i]) continue;
    if (mu[i] + 1 != lambda[i]) return false;
    ++diffs;
  }
  return diffs == 1;
}

}  // namespace

GraphPtr young(int N) {
  if (N < 1) fail(Errc::ParameterOutOfRange, "depth must be >= 1");
  if (N > kYoungMaxDepth)
    fail(Errc::DepthLimit,
         "young graph capped at depth " + std::to_string(kYoungMaxDepth));
  std::vector<std::vector<std::vector<int>>> parts(N + 1);
  std::vector<std::vector<std::string>> levels(N + 1);
  for (int n = 0; n <= N; ++n) {
    parts[n] = partitions_of(n);
    levels[n].reserve(parts[n].size());
    for (const auto& p : parts[n]) levels[n].push_back(partition_label(p));
  }
  std::vector<std::vector<Edge>> edges(N + 1);
  for (int n = 1; n <= N; ++n) {
    for (std::size_t t = 0; t < parts[n].size(); ++t)
      for (std::size_t s = 0; s < parts[n - 1].size(); ++s)
        if (one_box_below(parts[n - 1][s], parts[n][t]))
          edges[n].push_back({static_cast<int>(s), static_cast<int>(t), 1});
  }
  return std::make_shared<const GradedGraph>(std::move(levels), std::move(edges));
}

}  // namespace bratteli
