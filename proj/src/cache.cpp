#include "zdl/cache.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <system_error>

#include "zdl/binary_io.hpp"
#include "zdl/errors.hpp"

namespace zdl {

namespace {

std::uint64_t fnv1a(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::vector<std::uint8_t> seal(io::ByteWriter& w) {
  w.u64(fnv1a(w.buffer()));
  return w.buffer();
}

// Verifies the trailing checksum and returns the payload before it.
std::span<const std::uint8_t> unseal(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12) throw CacheError("cache file too short");
  const auto body = bytes.first(bytes.size() - 8);
  io::ByteReader tail(bytes.last(8));
  if (tail.u64() != fnv1a(body)) throw CacheError("cache checksum mismatch");
  return body;
}

}  // namespace

std::vector<std::uint8_t> encode_divisors(const DivisorTable& table) {
  io::ByteWriter w;
  w.magic("ZDL1");
  w.u64(table.limit());
  for (std::uint32_t d : table.counts()) w.u32(d);
  return seal(w);
}

DivisorTable decode_divisors(std::span<const std::uint8_t> bytes) {
  io::ByteReader r(unseal(bytes));
  if (!r.magic("ZDL1")) throw CacheError("not a divisor table (bad magic)");
  const std::uint64_t limit = r.u64();
  if (r.remaining() != limit * 4) throw CacheError("divisor table length does not match its limit");
  std::vector<std::uint32_t> counts(limit);
  for (auto& c : counts) c = r.u32();
  auto table = DivisorTable::from_counts(std::move(counts));
  if (!validate_hyperbola(table)) throw CacheError("divisor table fails the hyperbola identity");
  return table;
}

std::vector<std::uint8_t> encode_grid(const ZetaSampleGrid& grid, const ZetaOptions& options) {
  io::ByteWriter w;
  w.magic("ZGR1");
  w.f64(grid.t_start);
  w.f64(grid.t_end);
  w.f64(grid.step);
  w.u8(static_cast<std::uint8_t>(grid.method));
  w.u8(static_cast<std::uint8_t>(grid.rs_order));
  w.f64(options.rs_threshold);
  w.u64(grid.values.size());
  for (double v : grid.values) w.f64(v);
  return seal(w);
}

ZetaSampleGrid decode_grid(std::span<const std::uint8_t> bytes, ZetaOptions* options) {
  io::ByteReader r(unseal(bytes));
  if (!r.magic("ZGR1")) throw CacheError("not a zeta grid (bad magic)");
  ZetaSampleGrid g;
  g.t_start = r.f64();
  g.t_end = r.f64();
  g.step = r.f64();
  const auto method = r.u8();
  if (method > 1) throw CacheError("unknown zeta method tag");
  g.method = static_cast<ZetaMethod>(method);
  g.rs_order = r.u8();
  const double threshold = r.f64();
  const std::uint64_t count = r.u64();
  if (r.remaining() != count * 8) throw CacheError("zeta grid length does not match its sample count");
  g.values.resize(count);
  for (auto& v : g.values) v = r.f64();
  try {
    validate_grid(g);
  } catch (const DataError& e) {
    throw CacheError(std::string("cached zeta grid invalid: ") + e.what());
  }
  if (options) {
    options->rs_order = g.rs_order;
    options->rs_threshold = threshold;
  }
  return g;
}

const char* to_string(CacheOutcome o) noexcept {
  switch (o) {
    case CacheOutcome::built: return "built";
    case CacheOutcome::loaded: return "loaded";
    case CacheOutcome::rebuilt: return "rebuilt";
  }
  return "unknown";
}

Cache::Cache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec || !std::filesystem::is_directory(dir_))
    throw ParameterError("cannot create cache directory '" + dir_.string() + "'");
}

std::filesystem::path Cache::divisor_path(std::uint64_t limit) const {
  return dir_ / ("divisors-" + std::to_string(limit) + ".zdl");
}

std::filesystem::path Cache::grid_path(double t_end, double step, const ZetaOptions& options) const {
  char name[128];
  std::snprintf(name, sizeof name, "zeta-%.6f-%.6f-o%d-s%.3f.zgr", t_end, step, options.rs_order,
                options.rs_threshold);
  return dir_ / name;
}

namespace {

template <typename Load, typename Build, typename Encode>
auto load_or_build(const std::filesystem::path& path, CacheOutcome* outcome, Load load, Build build,
                   Encode encode) {
  bool existed = std::filesystem::exists(path);
  if (existed) {
    try {
      auto value = load(io::read_file(path));
      if (outcome) *outcome = CacheOutcome::loaded;
      return value;
    } catch (const CacheError&) {
      // Corrupt or stale: rebuild below.
    }
  }
  auto value = build();
  io::write_file_atomic(path, encode(value));
  if (outcome) *outcome = existed ? CacheOutcome::rebuilt : CacheOutcome::built;
  return value;
}

}  // namespace

DivisorTable Cache::divisors(std::uint64_t limit, CacheOutcome* outcome) const {
  return load_or_build(
      divisor_path(limit), outcome,
      [&](const std::vector<std::uint8_t>& bytes) {
        auto t = decode_divisors(bytes);
        if (t.limit() != limit) throw CacheError("cached divisor table has the wrong limit");
        return t;
      },
      [&] { return sieve_divisors(limit); }, [](const DivisorTable& t) { return encode_divisors(t); });
}

ZetaSampleGrid Cache::zeta_grid(double t_end, double step, const ZetaOptions& options,
                                CacheOutcome* outcome) const {
  return load_or_build(
      grid_path(t_end, step, options), outcome,
      [&](const std::vector<std::uint8_t>& bytes) {
        ZetaOptions stored;
        auto g = decode_grid(bytes, &stored);
        if (g.t_start != 0.0 || g.step != step || g.t_end < t_end || stored.rs_order != options.rs_order ||
            stored.rs_threshold != options.rs_threshold)
          throw CacheError("cached zeta grid was built with different parameters");
        return g;
      },
      [&] { return build_zeta_grid(0.0, t_end, step, options); },
      [&](const ZetaSampleGrid& g) { return encode_grid(g, options); });
}

std::filesystem::path default_cache_dir() {
  if (const char* env = std::getenv("ZDL_CACHE_DIR"); env && *env) return env;
  return ".zdl-cache";
}

}  // namespace zdl
