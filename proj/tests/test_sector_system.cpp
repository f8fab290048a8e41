#include <doctest.h>

#include <cmath>

#include "edlab/error.hpp"
#include "edlab/sector_system.hpp"

using namespace edlab;

namespace {

const SectorSystem& system6() {
  static const SectorSystem s = build_system(6);
  return s;
}

}  // namespace

// Counts and areas are frozen from the exact rational enumeration in
// tests/oracles/golden_values.py.
TEST_CASE("center counts per level") {
  const SectorSystem s = build_system(8);
  const std::size_t expected[] = {1, 8, 36, 148, 600, 2412, 9644, 38580};
  for (int n = 1; n <= 8; ++n) CHECK(s.count(n) == expected[n - 1]);
  CHECK(s.centers().size() == 51429);
}

TEST_CASE("enumeration order") {
  const SectorSystem& s = system6();
  const int expected[][3] = {{1, 0, 0},  {2, -1, -1}, {2, -1, 0}, {2, -1, 1},
                             {2, 0, -1}, {2, 0, 1},   {2, 1, -1}, {2, 1, 0},
                             {2, 1, 1},  {3, -3, -2}, {3, -3, -1}, {3, -3, 0}};
  for (std::size_t k = 1; k <= 12; ++k) {
    const DyadicCenter& c = s.center(k);
    CHECK(c.level == expected[k - 1][0]);
    CHECK(c.j == expected[k - 1][1]);
    CHECK(c.l == expected[k - 1][2]);
    CHECK(c.index == k);
  }
}

TEST_CASE("area certificate") {
  const double area[] = {0.012271846303085129838, 0.012655341500056540145,
                         0.012662082626565803217, 0.012662190882503668987,
                         0.012662192596860793128, 0.012662192623781557343,
                         0.01266219262420201989,  0.012662192624208590299};
  for (int n = 1; n <= 8; ++n) {
    const AreaCertificate a = area_certificate(build_system(n));
    CHECK(a.area == doctest::Approx(area[n - 1]).epsilon(1e-14));
    CHECK(a.holds);
    CHECK(a.area <= kPi / 63.0);
    CHECK(a.area < kPi / 32.0);
    for (int m = 1; m <= n; ++m) CHECK(static_cast<double>(a.counts[m - 1]) <= a.count_bounds[m - 1]);
  }
}

TEST_CASE("disks fit the unit disk exactly") {
  for (const DyadicCenter& c : system6().centers()) {
    CHECK(disk_fits(c.level, c.j, c.l));
    CHECK(std::abs(c.point()) + c.radius() <= 1.0);
  }
  CHECK_FALSE(disk_fits(2, 2, 0));
  CHECK(disk_fits(1, 0, 0));
}

TEST_CASE("chosen points are disjoint across levels") {
  const SectorSystem& s = system6();
  // (1, 0) / 2 at level 2 reappears as (2, 0) / 4 at level 3 and must be skipped.
  CHECK(s.is_chosen(3, 2, 0));
  std::size_t level3 = 0;
  for (const DyadicCenter& c : s.centers()) {
    if (c.level == 3) {
      ++level3;
      CHECK_FALSE((c.j % 2 == 0 && c.l % 2 == 0));
    }
  }
  CHECK(level3 == 36);
}

TEST_CASE("classification") {
  const SectorSystem& s = system6();
  const SectorLabel a = classify({0.01, 0.005}, s);
  CHECK(a.tag == SectorTag::S1);
  CHECK(a.level == 1);
  CHECK(classify({-0.01, 0.005}, s).tag == SectorTag::S2);
  CHECK(classify({-0.01, -0.005}, s).tag == SectorTag::S3);
  CHECK(classify({0.01, -0.005}, s).tag == SectorTag::S4);
  CHECK(classify({0.3, 0.3}, s).tag == SectorTag::None);
  // A level-2 center's first quadrant.
  const SectorLabel b = classify({-0.5 + 1e-4, -0.5 + 1e-4}, s);
  CHECK(b.tag == SectorTag::S1);
  CHECK(b.level == 2);
}

TEST_CASE("sector tags parse") {
  CHECK(parse_sector_tag("S3") == SectorTag::S3);
  CHECK_THROWS_AS(parse_sector_tag("S5"), Error);
  CHECK(to_string(SectorTag::Boundary) == "boundary");
}

TEST_CASE("counter RNG is deterministic and uniform") {
  CHECK(counter_uniform(1, 5) == counter_uniform(1, 5));
  CHECK(counter_uniform(1, 5) != counter_uniform(2, 5));
  double sum = 0.0;
  for (std::uint64_t i = 0; i < 100000; ++i) {
    const double u = counter_uniform(9, i);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
  }
  CHECK(sum / 100000.0 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("density estimates at z_1 and a level-2 center") {
  const SectorSystem& s = system6();
  for (std::size_t k : {std::size_t{1}, std::size_t{2}}) {
    const DyadicCenter& c = s.center(k);
    const double r = std::ldexp(1.0, -5 - 4 * (c.level - 1));
    const auto estimates = density_estimates(s, c, r, 200000, 3);
    double total = 0.0;
    for (const DensityEstimate& e : estimates) {
      CHECK(e.lower() >= kDensityFloor);
      CHECK(e.ratio == doctest::Approx(0.25).epsilon(0.05));
      total += e.ratio;
    }
    CHECK(total <= 1.0 + 1e-12);
  }
}

TEST_CASE("density sampling does not depend on the thread count") {
  const SectorSystem& s = system6();
  const DensityCounts a = sample_labels(s, s.center(1), 0.03, 150000, 4, 1);
  const DensityCounts b = sample_labels(s, s.center(1), 0.03, 150000, 4, 3);
  CHECK(a.by_tag == b.by_tag);
}

TEST_CASE("density preconditions") {
  const SectorSystem& s = system6();
  CHECK_THROWS_AS(density_estimates(s, s.center(1), 0.1, 100000, 1), Error);
  CHECK_THROWS_AS(density_estimates(s, s.center(1), 0.01, 10, 1), Error);
}

TEST_CASE("level bounds") {
  CHECK_THROWS_AS(build_system(0), Error);
  CHECK_THROWS_AS(build_system(9), Error);
}

TEST_CASE("JSON round trip") {
  const SectorSystem s = build_system(4);
  const SectorSystem t = SectorSystem::from_json(s.to_json());
  CHECK(t.to_json() == s.to_json());
  CHECK(t.centers().size() == s.centers().size());
  CHECK_THROWS_AS(SectorSystem::from_json("{\"max_level\": 2}"), Error);
}
