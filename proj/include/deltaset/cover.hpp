#pragma once

// Minimum covers of Z/L by translates of a residue pattern.

#include <cstdint>
#include <algorithm>
#include <optional>
#include <vector>

namespace deltaset {

namespace detail {

inline bool cover_dfs(const std::vector<bool>& D, const std::vector<std::int64_t>& members,
                      std::vector<int>& hits, std::size_t uncovered, std::size_t budget,
                      std::vector<std::int64_t>& chosen) {
  if (uncovered == 0) return true;
  if (budget == 0 || uncovered > budget * members.size()) return false;
  const auto L = static_cast<std::int64_t>(D.size());
  std::int64_t u = 0;
  while (hits[u]) ++u;
  // Some shift f must cover u, i.e. u - f ∈ D.
  for (std::int64_t d : members) {
    std::int64_t f = ((u - d) % L + L) % L;
    std::size_t gained = 0;
    for (std::int64_t e : members)
      if (hits[(f + e) % L]++ == 0) ++gained;
    chosen.push_back(f);
    if (cover_dfs(D, members, hits, uncovered - gained, budget - 1, chosen)) return true;
    chosen.pop_back();
    for (std::int64_t e : members) --hits[(f + e) % L];
  }
  return false;
}

}  // namespace detail

/// Least F ⊆ {0..L-1} with F + D = Z/L, where L = |D|; searched up to size
/// max_size. Returns nullopt when D is empty or no cover that small exists.
inline std::optional<std::vector<std::int64_t>> min_residue_cover(const std::vector<bool>& D,
                                                                  std::size_t max_size) {
  std::vector<std::int64_t> members;
  for (std::size_t r = 0; r < D.size(); ++r)
    if (D[r]) members.push_back(static_cast<std::int64_t>(r));
  if (members.empty()) return std::nullopt;
  for (std::size_t k = 1; k <= max_size; ++k) {
    std::vector<int> hits(D.size(), 0);
    std::vector<std::int64_t> chosen;
    if (detail::cover_dfs(D, members, hits, D.size(), k, chosen)) {
      std::sort(chosen.begin(), chosen.end());
      return chosen;
    }
  }
  return std::nullopt;
}

/// Does F + D cover Z/L?
inline bool covers(const std::vector<bool>& D, const std::vector<std::int64_t>& F) {
  const auto L = static_cast<std::int64_t>(D.size());
  std::vector<bool> hit(D.size(), false);
  for (std::int64_t f : F)
    for (std::int64_t r = 0; r < L; ++r)
      if (D[r]) hit[((f + r) % L + L) % L] = true;
  for (bool h : hit)
    if (!h) return false;
  return true;
}

}  // namespace deltaset
