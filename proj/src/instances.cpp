#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "covgame/instances.hpp"
#include "covgame/rng.hpp"

namespace covgame {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

CoveringInstance gen_star(std::size_t n, double c, double w) {
  require(n >= 2, "star: need n >= 2");
  require(c > 0.0 && w > 0.0, "star: c and w must be positive");
  std::vector<WeightedSet> sets;
  for (AgentId i = 1; i < n; ++i) sets.push_back({{0, i}, w});
  return CoveringInstance(std::vector<double>(n, c), std::move(sets));
}

CoveringInstance gen_poa_bipartite(std::size_t n, double c) {
  require(c > 0.0, "poa-bipartite: c must be positive");
  const auto left = static_cast<std::size_t>(std::ceil(c));
  require(n > left, "poa-bipartite: need n > ceil(c)");
  std::vector<WeightedSet> sets;
  for (AgentId l = 0; l < left; ++l)
    for (AgentId r = left; r < n; ++r) sets.push_back({{l, r}, 1.0});
  return CoveringInstance(std::vector<double>(n, c), std::move(sets));
}

CoveringInstance gen_path(std::size_t n, double c, double w) {
  require(n >= 2, "path: need n >= 2");
  require(c > 0.0 && w > 0.0, "path: c and w must be positive");
  std::vector<WeightedSet> sets;
  for (AgentId i = 0; i + 1 < n; ++i) sets.push_back({{i, i + 1}, w});
  return CoveringInstance(std::vector<double>(n, c), std::move(sets));
}

CoveringInstance gen_cycle(std::size_t n, double c, double w) {
  require(n >= 3, "cycle: need n >= 3");
  require(c > 0.0 && w > 0.0, "cycle: c and w must be positive");
  std::vector<WeightedSet> sets;
  for (AgentId i = 0; i < n; ++i) sets.push_back({{i, (i + 1) % n}, w});
  return CoveringInstance(std::vector<double>(n, c), std::move(sets));
}

std::uint64_t binomial_count(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::size_t j = 1; j <= k; ++j) {
    r = r * (n - k + j) / j;
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

CoveringInstance gen_random_uniform(std::size_t n, std::size_t m, std::size_t k, Range cost, Range weight,
                                    std::uint64_t seed) {
  require(n >= 1, "random-uniform: need n >= 1");
  require(k >= 1 && k <= n, "random-uniform: need 1 <= k <= n");
  require(cost.lo > 0.0 && cost.hi >= cost.lo, "random-uniform: cost range must satisfy 0 < lo <= hi");
  require(weight.lo > 0.0 && weight.hi >= weight.lo, "random-uniform: weight range must satisfy 0 < lo <= hi");
  const std::uint64_t total = binomial_count(n, k);
  require(m <= total, "random-uniform: m = " + std::to_string(m) + " exceeds C(n, k) = " + std::to_string(total));

  Rng rng(seed);
  std::vector<double> costs(n);
  for (double& c : costs) c = rng.uniform(cost.lo, cost.hi);

  std::vector<std::vector<AgentId>> chosen;
  if (m > 0 && 2 * m > total) {
    // Dense: enumerate every k-subset, then take a uniform m-prefix of a shuffle.
    std::vector<std::vector<AgentId>> all;
    std::vector<AgentId> comb(k);
    std::iota(comb.begin(), comb.end(), AgentId{0});
    for (;;) {
      all.push_back(comb);
      std::size_t pos = k;
      while (pos > 0 && comb[pos - 1] == n - k + pos - 1) --pos;
      if (pos == 0) break;
      ++comb[pos - 1];
      for (std::size_t j = pos; j < k; ++j) comb[j] = comb[j - 1] + 1;
    }
    rng.shuffle(std::span<std::vector<AgentId>>(all));
    all.resize(m);
    chosen = std::move(all);
  } else {
    std::set<std::vector<AgentId>> seen;
    std::vector<AgentId> pool(n);
    while (chosen.size() < m) {
      std::iota(pool.begin(), pool.end(), AgentId{0});
      for (std::size_t j = 0; j < k; ++j) std::swap(pool[j], pool[j + rng.below(n - j)]);
      std::vector<AgentId> members(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
      std::sort(members.begin(), members.end());
      if (seen.insert(members).second) chosen.push_back(std::move(members));
    }
  }

  std::vector<WeightedSet> sets;
  sets.reserve(m);
  for (auto& members : chosen) sets.push_back({std::move(members), rng.uniform(weight.lo, weight.hi)});
  return CoveringInstance(std::move(costs), std::move(sets));
}

CoveringInstance gen_grid_sensor(std::size_t rows, std::size_t cols, std::size_t radius, double c, double w) {
  require(rows >= 1 && cols >= 1, "grid-sensor: dimensions must be positive");
  require(c > 0.0 && w > 0.0, "grid-sensor: c and w must be positive");
  const auto r = static_cast<std::ptrdiff_t>(radius);
  std::map<std::vector<AgentId>, double> merged;
  for (std::ptrdiff_t y = 0; y < static_cast<std::ptrdiff_t>(rows); ++y)
    for (std::ptrdiff_t x = 0; x < static_cast<std::ptrdiff_t>(cols); ++x) {
      std::vector<AgentId> members;
      for (std::ptrdiff_t yy = std::max<std::ptrdiff_t>(0, y - r);
           yy <= std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(rows) - 1, y + r); ++yy)
        for (std::ptrdiff_t xx = std::max<std::ptrdiff_t>(0, x - r);
             xx <= std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(cols) - 1, x + r); ++xx)
          members.push_back(static_cast<AgentId>(yy) * cols + static_cast<AgentId>(xx));
      merged[members] += w;
    }
  std::vector<WeightedSet> sets;
  for (auto& [members, weight] : merged) sets.push_back({members, weight});
  return CoveringInstance(std::vector<double>(rows * cols, c), std::move(sets));
}

Family parse_family(const std::string& s) {
  if (s == "star") return Family::star;
  if (s == "poa-bipartite") return Family::poa_bipartite;
  if (s == "random-uniform-hypergraph" || s == "random-uniform") return Family::random_uniform;
  if (s == "grid-sensor") return Family::grid_sensor;
  if (s == "path") return Family::path;
  if (s == "cycle") return Family::cycle;
  throw std::invalid_argument("unknown generator family: " + s);
}

const char* to_string(Family f) {
  switch (f) {
    case Family::star: return "star";
    case Family::poa_bipartite: return "poa-bipartite";
    case Family::random_uniform: return "random-uniform-hypergraph";
    case Family::grid_sensor: return "grid-sensor";
    case Family::path: return "path";
    case Family::cycle: return "cycle";
  }
  return "?";
}

CoveringInstance generate(const GeneratorSpec& g) {
  switch (g.family) {
    case Family::star: return gen_star(g.n, g.c, g.w);
    case Family::poa_bipartite: return gen_poa_bipartite(g.n, g.c);
    case Family::random_uniform: return gen_random_uniform(g.n, g.m, g.k, g.cost_range, g.weight_range, g.seed);
    case Family::grid_sensor: return gen_grid_sensor(g.rows, g.cols, g.radius, g.c, g.w);
    case Family::path: return gen_path(g.n, g.c, g.w);
    case Family::cycle: return gen_cycle(g.n, g.c, g.w);
  }
  throw std::invalid_argument("unknown generator family");
}

}  // namespace covgame
