#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "zdl/divisor.hpp"
#include "zdl/zeta.hpp"

namespace zdl {

// On-disk formats, all little-endian, each ending in an FNV-1a 64 checksum of
// the preceding bytes:
//   divisors: "ZDL1", u64 limit, u32 d(1..limit)
//   zeta grid: "ZGR1", f64 t_start, t_end, step, u8 method, u8 rs_order,
//              f64 rs_threshold, u64 count, f64 |ζ|² samples

std::vector<std::uint8_t> encode_divisors(const DivisorTable& table);
/// Throws CacheError on a bad magic, length, checksum or hyperbola check.
DivisorTable decode_divisors(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_grid(const ZetaSampleGrid& grid, const ZetaOptions& options);
/// Throws CacheError on a bad magic, length or checksum, or if the stored
/// grid violates the sample invariants.
ZetaSampleGrid decode_grid(std::span<const std::uint8_t> bytes, ZetaOptions* options = nullptr);

enum class CacheOutcome { built, loaded, rebuilt };

const char* to_string(CacheOutcome o) noexcept;

/// Directory of cached divisor tables and zeta grids. Missing or corrupt
/// files are (re)built and written with create-then-rename.
class Cache {
 public:
  explicit Cache(std::filesystem::path dir);

  const std::filesystem::path& dir() const noexcept { return dir_; }

  std::filesystem::path divisor_path(std::uint64_t limit) const;
  std::filesystem::path grid_path(double t_end, double step, const ZetaOptions& options) const;

  DivisorTable divisors(std::uint64_t limit, CacheOutcome* outcome = nullptr) const;

  /// Grid on [0, t_end] with the given step.
  ZetaSampleGrid zeta_grid(double t_end, double step, const ZetaOptions& options = {},
                           CacheOutcome* outcome = nullptr) const;

 private:
  std::filesystem::path dir_;
};

/// $ZDL_CACHE_DIR if set, else ".zdl-cache".
std::filesystem::path default_cache_dir();

}  // namespace zdl
