#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "covgame/game.hpp"

namespace covgame {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& location, const std::string& what)
      : std::runtime_error(location + ": " + what), location_(location) {}
  const std::string& location() const { return location_; }

 private:
  std::string location_;
};

/// Agent 0 is the center; sets {0, i} for i in [1, n).
CoveringInstance gen_star(std::size_t n, double c, double w);

/// Agents [0, ceil(c)) form L, the rest R; one unit-weight set per (l, r) pair.
CoveringInstance gen_poa_bipartite(std::size_t n, double c);

CoveringInstance gen_path(std::size_t n, double c, double w);
CoveringInstance gen_cycle(std::size_t n, double c, double w);

struct Range {
  double lo = 1.0;
  double hi = 1.0;
};

/// m distinct k-subsets drawn uniformly without replacement.
CoveringInstance gen_random_uniform(std::size_t n, std::size_t m, std::size_t k, Range cost, Range weight,
                                    std::uint64_t seed);

/// One agent per grid point; one set per grid cell holding every agent within
/// Chebyshev distance `radius`. Identical member lists merge by summing weights.
CoveringInstance gen_grid_sensor(std::size_t rows, std::size_t cols, std::size_t radius, double c, double w);

enum class Family { star, poa_bipartite, random_uniform, grid_sensor, path, cycle };

struct GeneratorSpec {
  Family family = Family::star;
  std::size_t n = 0;
  double c = 0.5;
  double w = 1.0;
  std::size_t k = 2;
  std::size_t m = 0;
  Range cost_range{0.5, 0.5};
  Range weight_range{1.0, 1.0};
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t radius = 1;
  std::uint64_t seed = 0;
};

Family parse_family(const std::string& s);
const char* to_string(Family f);
CoveringInstance generate(const GeneratorSpec& spec);

/// Number of k-subsets of n items, saturating at UINT64_MAX.
std::uint64_t binomial_count(std::size_t n, std::size_t k);

// Text formats. Instances: {"n":..,"costs":[..],"sets":[{"members":[..],"weight":..},..]}.
// States: {"actions":"0101.."} with '1' meaning on.
std::string serialize_instance(const CoveringInstance& inst);
CoveringInstance parse_instance(std::string_view text);
std::string serialize_state(const JointState& s);
JointState parse_state(std::string_view text);

CoveringInstance load_instance(const std::filesystem::path& path);
JointState load_state(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace covgame
