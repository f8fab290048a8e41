#include "edlab/sector_system.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "edlab/error.hpp"

namespace edlab {

namespace {

constexpr const char* kSystemSchema = "edlab.sector_system";
constexpr int kSystemVersion = 1;
constexpr std::size_t kChunk = 1 << 16;
constexpr double kGuard = 1e-14;

std::int64_t half_width(int level) { return (std::int64_t{1} << (level - 1)) - 1; }

std::size_t slot(int level, std::int64_t j, std::int64_t l) {
  const std::int64_t h = half_width(level);
  return static_cast<std::size_t>((j + h) * (2 * h + 1) + (l + h));
}

// Sign of |z - p|^2 - R^2 for the level-n disk, exact.
int compare_exact(ComplexValue z, const DyadicCenter& c) {
  mpq_class dx(z.real());
  mpq_class dy(z.imag());
  mpq_class scale(1);
  scale <<= static_cast<mp_bitcnt_t>(c.level - 1);
  dx -= mpq_class(static_cast<long>(c.j)) / scale;
  dy -= mpq_class(static_cast<long>(c.l)) / scale;
  mpq_class r2(1);
  r2 >>= static_cast<mp_bitcnt_t>(8 * c.level);
  return cmp(dx * dx + dy * dy, r2);
}

bool inside_disk(ComplexValue z, const DyadicCenter& c, double dx, double dy) {
  const double d2 = dx * dx + dy * dy;
  const double r2 = std::ldexp(1.0, -8 * c.level);
  if (d2 < r2 * (1.0 - kGuard)) return true;
  if (d2 > r2 * (1.0 + kGuard)) return false;
  return compare_exact(z, c) < 0;
}

SectorTag quadrant(double dx, double dy) {
  if (dy > 0.0) return dx > 0.0 ? SectorTag::S1 : SectorTag::S2;
  return dx < 0.0 ? SectorTag::S3 : SectorTag::S4;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

ComplexValue DyadicCenter::point() const {
  return {std::ldexp(static_cast<double>(j), 1 - level), std::ldexp(static_cast<double>(l), 1 - level)};
}

double DyadicCenter::radius() const { return std::ldexp(1.0, -4 * level); }

double DyadicCenter::boundary_distance() const {
  // |p| = sqrt(j^2 + l^2) 2^{1-n}; the square root is the only rounding.
  const double norm = std::sqrt(static_cast<double>(j * j + l * l));
  return 1.0 - std::ldexp(norm, 1 - level);
}

std::string_view to_string(SectorTag tag) noexcept {
  switch (tag) {
    case SectorTag::S1: return "S1";
    case SectorTag::S2: return "S2";
    case SectorTag::S3: return "S3";
    case SectorTag::S4: return "S4";
    case SectorTag::None: return "none";
    case SectorTag::Boundary: return "boundary";
    case SectorTag::Unresolved: return "unresolved";
  }
  return "none";
}

SectorTag parse_sector_tag(std::string_view text) {
  if (text == "S1") return SectorTag::S1;
  if (text == "S2") return SectorTag::S2;
  if (text == "S3") return SectorTag::S3;
  if (text == "S4") return SectorTag::S4;
  throw Error(ErrorKind::Format, "sector tag must be one of S1, S2, S3, S4");
}

bool disk_fits(int level, std::int64_t j, std::int64_t l) {
  if (level < 1 || level > SectorSystem::kMaxLevelCeiling + 1) {
    throw Error(ErrorKind::Capacity, "disk_fits: level outside the exact range");
  }
  __extension__ using u128 = unsigned __int128;
  const u128 norm = static_cast<u128>(j * j + l * l);
  const u128 lhs = norm << (6 * level + 2);
  const u128 edge = (u128{1} << (4 * level)) - 1;
  return lhs <= edge * edge;
}

const DyadicCenter& SectorSystem::center(std::size_t index) const {
  if (index < 1 || index > centers_.size()) {
    throw Error(ErrorKind::Precondition, "center index out of range");
  }
  return centers_[index - 1];
}

std::size_t SectorSystem::count(int level) const {
  if (level < 1 || level > max_level_) return 0;
  return level_count_[static_cast<std::size_t>(level - 1)];
}

const DyadicCenter* SectorSystem::nearest_center(int level, ComplexValue z) const {
  if (level < 1 || level > max_level_) return nullptr;
  const double scale = std::ldexp(1.0, level - 1);
  const auto j = static_cast<std::int64_t>(std::llround(z.real() * scale));
  const auto l = static_cast<std::int64_t>(std::llround(z.imag() * scale));
  const std::int64_t h = half_width(level);
  if (std::abs(j) > h || std::abs(l) > h) return nullptr;
  const std::uint32_t k = lookup_[static_cast<std::size_t>(level - 1)][slot(level, j, l)];
  return k == 0 ? nullptr : &centers_[k - 1];
}

bool SectorSystem::is_chosen(int level, std::int64_t j, std::int64_t l) const {
  for (int m = level; m >= 1; --m) {
    if (m <= max_level_ && std::abs(j) <= half_width(m) && std::abs(l) <= half_width(m) &&
        lookup_[static_cast<std::size_t>(m - 1)][slot(m, j, l)] != 0) {
      return true;
    }
    if (j % 2 != 0 || l % 2 != 0) return false;
    j /= 2;
    l /= 2;
  }
  return false;
}

double SectorSystem::next_level_distance(ComplexValue z) const {
  const int level = max_level_ + 1;
  const double scale = std::ldexp(1.0, level - 1);
  const auto j = static_cast<std::int64_t>(std::llround(z.real() * scale));
  const auto l = static_cast<std::int64_t>(std::llround(z.imag() * scale));
  if (std::abs(j) > half_width(level) || std::abs(l) > half_width(level)) {
    return std::numeric_limits<double>::infinity();
  }
  if (!disk_fits(level, j, l) || is_chosen(level, j, l)) {
    return std::numeric_limits<double>::infinity();
  }
  const DyadicCenter hypothetical{level, j, l, 0};
  return std::abs(z - hypothetical.point());
}

SectorSystem build_system(int max_level) {
  if (max_level < 1) throw Error(ErrorKind::Precondition, "max_level must be >= 1");
  if (max_level > SectorSystem::kMaxLevelCeiling) {
    throw Error(ErrorKind::Capacity, "max_level above the ceiling of " +
                                         std::to_string(SectorSystem::kMaxLevelCeiling));
  }
  SectorSystem system;
  system.max_level_ = max_level;
  for (int n = 1; n <= max_level; ++n) {
    const std::int64_t h = half_width(n);
    system.lookup_.emplace_back(static_cast<std::size_t>((2 * h + 1) * (2 * h + 1)), 0);
    std::size_t added = 0;
    for (std::int64_t j = -h; j <= h; ++j) {
      for (std::int64_t l = -h; l <= h; ++l) {
        if (!disk_fits(n, j, l) || system.is_chosen(n, j, l)) continue;
        const std::size_t k = system.centers_.size() + 1;
        system.centers_.push_back({n, j, l, k});
        system.lookup_.back()[slot(n, j, l)] = static_cast<std::uint32_t>(k);
        ++added;
      }
    }
    system.level_count_.push_back(added);
  }
  return system;
}

std::string SectorSystem::to_json() const {
  nlohmann::json j;
  j["schema"] = kSystemSchema;
  j["version"] = kSystemVersion;
  j["max_level"] = max_level_;
  nlohmann::json list = nlohmann::json::array();
  for (const DyadicCenter& c : centers_) list.push_back({{"n", c.level}, {"j", c.j}, {"l", c.l}});
  j["centers"] = std::move(list);
  return j.dump();
}

SectorSystem SectorSystem::from_json(std::string_view text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (j.at("schema").get<std::string>() != kSystemSchema ||
        j.at("version").get<int>() != kSystemVersion) {
      throw Error(ErrorKind::Format, "sector system JSON: unsupported schema or version");
    }
    SectorSystem system = build_system(j.at("max_level").get<int>());
    const auto& list = j.at("centers");
    if (list.size() != system.centers_.size()) {
      throw Error(ErrorKind::Format, "sector system JSON: center count does not match max_level");
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
      const DyadicCenter& c = system.centers_[i];
      if (list[i].at("n").get<int>() != c.level || list[i].at("j").get<std::int64_t>() != c.j ||
          list[i].at("l").get<std::int64_t>() != c.l) {
        throw Error(ErrorKind::Format,
                    "sector system JSON: center " + std::to_string(i + 1) + " is out of order");
      }
    }
    return system;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Format, std::string("sector system JSON: ") + e.what());
  }
}

SectorLabel classify(ComplexValue z, const SectorSystem& system) {
  if (!(std::norm(z) < 1.0)) return {SectorTag::None, std::nullopt};
  const double band = kUnresolvedSafety * std::ldexp(1.0, -4 * (system.max_level() + 1));
  if (system.next_level_distance(z) < band) return {SectorTag::Unresolved, std::nullopt};
  bool on_ray = false;
  for (int n = system.max_level(); n >= 1; --n) {
    const DyadicCenter* c = system.nearest_center(n, z);
    if (c == nullptr) continue;
    const ComplexValue p = c->point();
    const double dx = z.real() - p.real();
    const double dy = z.imag() - p.imag();
    if (!inside_disk(z, *c, dx, dy)) continue;
    if (dx == 0.0 || dy == 0.0) {
      on_ray = true;
      continue;
    }
    return {quadrant(dx, dy), n};
  }
  return {on_ray ? SectorTag::Boundary : SectorTag::None, std::nullopt};
}

AreaCertificate area_certificate(const SectorSystem& system) {
  AreaCertificate out;
  double dyadic_sum = 0.0;  // exact: few significant bits per term
  bool counts_ok = true;
  for (int n = 1; n <= system.max_level(); ++n) {
    const std::size_t c = system.count(n);
    out.counts.push_back(c);
    out.count_bounds.push_back(std::ldexp(1.0, 2 * n));
    const double side = std::ldexp(1.0, n) - 1.0;
    if (static_cast<double>(c) > side * side || static_cast<double>(c) > out.count_bounds.back()) {
      counts_ok = false;
    }
    dyadic_sum += std::ldexp(static_cast<double>(c), -8 * n);
  }
  out.area = kPi * dyadic_sum;
  out.geometric_bound = kPi / 63.0;
  out.sector_bound = kPi / 32.0;
  out.holds = counts_ok && out.area <= out.geometric_bound && out.area < out.sector_bound;
  return out;
}

double counter_uniform(std::uint64_t seed, std::uint64_t counter) {
  const std::uint64_t x = splitmix64(splitmix64(seed) ^ counter);
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

DensityCounts sample_labels(const SectorSystem& system, const DyadicCenter& center, double r,
                            std::size_t samples, std::uint64_t seed, unsigned threads) {
  const ComplexValue p = center.point();
  const std::size_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<std::array<std::size_t, 7>> per_chunk(chunks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < chunks; c = next++) {
      std::array<std::size_t, 7> local{};
      const std::size_t end = std::min(samples, (c + 1) * kChunk);
      for (std::size_t i = c * kChunk; i < end; ++i) {
        const double rho = r * std::sqrt(counter_uniform(seed, 2 * i));
        const double theta = 2.0 * kPi * counter_uniform(seed, 2 * i + 1);
        const SectorLabel label = classify(p + std::polar(rho, theta), system);
        ++local[static_cast<std::size_t>(label.tag)];
      }
      per_chunk[c] = local;
    }
  };
  unsigned n = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  n = static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(chunks, 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
  }
  DensityCounts out;
  out.samples = samples;
  for (const auto& local : per_chunk) {
    for (std::size_t t = 0; t < local.size(); ++t) out.by_tag[t] += local[t];
  }
  return out;
}

std::array<DensityEstimate, 4> density_estimates(const SectorSystem& system,
                                                 const DyadicCenter& center, double r,
                                                 std::size_t samples, std::uint64_t seed,
                                                 unsigned threads) {
  if (!(r > 0.0 && r < center.radius())) {
    throw Error(ErrorKind::Precondition, "density_estimate: need 0 < r < center radius");
  }
  if (samples < 10'000) {
    throw Error(ErrorKind::Precondition, "density_estimate: need at least 10^4 samples");
  }
  const DensityCounts counts = sample_labels(system, center, r, samples, seed, threads);
  const double n = static_cast<double>(samples);
  const double unresolved =
      static_cast<double>(counts.by_tag[static_cast<std::size_t>(SectorTag::Unresolved)]) / n;
  if (unresolved > 0.01) {
    std::ostringstream os;
    os << "density_estimate: " << unresolved * 100.0
       << "% of samples are unresolved; raise max_level";
    throw Error(ErrorKind::UnresolvedContamination, os.str());
  }
  std::array<DensityEstimate, 4> out;
  for (std::size_t t = 0; t < 4; ++t) {
    const double ratio = static_cast<double>(counts.by_tag[t]) / n;
    out[t] = {center.index, r, static_cast<SectorTag>(t), ratio,
              kZ99 * std::sqrt(ratio * (1.0 - ratio) / n), samples, seed, unresolved};
  }
  return out;
}

DensityEstimate density_estimate(const SectorSystem& system, const DyadicCenter& center, double r,
                                 SectorTag tag, std::size_t samples, std::uint64_t seed,
                                 unsigned threads) {
  const auto t = static_cast<std::size_t>(tag);
  if (t > 3) throw Error(ErrorKind::Precondition, "density_estimate: tag must be S1..S4");
  return density_estimates(system, center, r, samples, seed, threads)[t];
}

std::string density_csv_header() { return "center_k,r,tag,estimate,half_width,samples,seed"; }

std::string density_csv_row(const DensityEstimate& e) {
  std::ostringstream os;
  os << e.center_index << ',' << format_double(e.r) << ',' << to_string(e.tag) << ','
     << format_double(e.ratio) << ',' << format_double(e.half_width) << ',' << e.samples << ','
     << e.seed;
  return os.str();
}

}  // namespace edlab
