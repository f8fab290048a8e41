#pragma once

// Inductive dyadic sector construction. Level n places candidate centers on
// the grid (j, l) / 2^{n-1}; a candidate is kept when its disk of radius
// 2^{-4n} lies in the unit disk and the point was not chosen before. Each
// disk splits into four open quarter sectors S1..S4 (counter-clockwise from
// the positive real direction). A point takes the label of the deepest level
// whose sector union contains it.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edlab/complex.hpp"

namespace edlab {

struct DyadicCenter {
  int level = 1;
  std::int64_t j = 0;
  std::int64_t l = 0;
  /// 1-based position in the global enumeration.
  std::size_t index = 0;

  ComplexValue point() const;
  /// 2^{-4 level}.
  double radius() const;
  /// 1 - |point|, the distance to the unit circle.
  double boundary_distance() const;
};

enum class SectorTag { S1, S2, S3, S4, None, Boundary, Unresolved };

std::string_view to_string(SectorTag tag) noexcept;
/// Parses "S1".."S4"; throws Format otherwise.
SectorTag parse_sector_tag(std::string_view text);

struct SectorLabel {
  SectorTag tag = SectorTag::None;
  std::optional<int> level;
};

class SectorSystem {
 public:
  static constexpr int kMaxLevelCeiling = 8;

  int max_level() const noexcept { return max_level_; }
  /// Enumeration order: level-major, then (j, l) lexicographic.
  const std::vector<DyadicCenter>& centers() const noexcept { return centers_; }
  const DyadicCenter& center(std::size_t index) const;  // 1-based
  std::size_t count(int level) const;

  /// The level-n center whose disk could contain z (the nearest grid point),
  /// if that grid point is a chosen center.
  const DyadicCenter* nearest_center(int level, ComplexValue z) const;
  /// Whether (j, l) / 2^{level-1} is a chosen center at this or an earlier level.
  bool is_chosen(int level, std::int64_t j, std::int64_t l) const;
  /// Distance from z to the nearest grid point a level max_level + 1 step
  /// would add, or +inf if there is none nearby.
  double next_level_distance(ComplexValue z) const;

  std::string to_json() const;
  static SectorSystem from_json(std::string_view text);

 private:
  friend SectorSystem build_system(int max_level);
  SectorSystem() = default;

  int max_level_ = 0;
  std::vector<DyadicCenter> centers_;
  std::vector<std::size_t> level_count_;
  // Per level, a dense (2 * half + 1)^2 table of enumeration indices (0 = absent).
  std::vector<std::vector<std::uint32_t>> lookup_;
};

/// Throws Capacity above kMaxLevelCeiling and Precondition below 1.
SectorSystem build_system(int max_level);

/// Whether D((j, l) / 2^{n-1}, 2^{-4n}) lies in the closed unit disk, exactly.
bool disk_fits(int level, std::int64_t j, std::int64_t l);

/// Width factor of the unresolved band around next-level grid points.
inline constexpr double kUnresolvedSafety = 2.0;

SectorLabel classify(ComplexValue z, const SectorSystem& system);

struct AreaCertificate {
  std::vector<std::size_t> counts;
  /// 2^{2n}, the counting bound per level.
  std::vector<double> count_bounds;
  /// sum_n count(n) pi 2^{-8n}
  double area = 0.0;
  /// pi / 63
  double geometric_bound = 0.0;
  /// pi / 2^5
  double sector_bound = 0.0;
  bool holds = false;
};

AreaCertificate area_certificate(const SectorSystem& system);

/// Deterministic uniform variate in [0, 1) keyed by (seed, counter).
double counter_uniform(std::uint64_t seed, std::uint64_t counter);

struct DensityCounts {
  std::size_t samples = 0;
  /// Indexed by SectorTag.
  std::array<std::size_t, 7> by_tag{};
};

/// Labels `samples` uniform points of D(center, r). Parallel over fixed
/// chunks; the result does not depend on the thread count.
DensityCounts sample_labels(const SectorSystem& system, const DyadicCenter& center, double r,
                            std::size_t samples, std::uint64_t seed, unsigned threads = 0);

/// Normal quantile for a two-sided 99% interval.
inline constexpr double kZ99 = 2.5758293035489004;
inline constexpr double kDensityFloor = 1.0 / 32.0;

struct DensityEstimate {
  std::size_t center_index = 0;
  double r = 0.0;
  SectorTag tag = SectorTag::S1;
  double ratio = 0.0;
  double half_width = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double unresolved_fraction = 0.0;

  double lower() const { return ratio - half_width; }
};

/// Monte-Carlo density of S_tag in D(center, r) with a 99% half-width.
/// Requires 0 < r < center.radius() and samples >= 10^4; throws
/// UnresolvedContamination when more than 1% of samples are unresolved.
DensityEstimate density_estimate(const SectorSystem& system, const DyadicCenter& center, double r,
                                 SectorTag tag, std::size_t samples, std::uint64_t seed,
                                 unsigned threads = 0);

/// All four tags from one sample set.
std::array<DensityEstimate, 4> density_estimates(const SectorSystem& system,
                                                 const DyadicCenter& center, double r,
                                                 std::size_t samples, std::uint64_t seed,
                                                 unsigned threads = 0);

std::string density_csv_header();
std::string density_csv_row(const DensityEstimate& estimate);

}  // namespace edlab
