#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace zdl::io {

/// Byte buffer with little-endian append helpers.
class ByteWriter {
 public:
  void bytes(std::span<const std::uint8_t> b);
  void magic(const char (&tag)[5]);
  void u8(std::uint8_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void f64(double v);

  const std::vector<std::uint8_t>& buffer() const noexcept { return buf_; }

 private:
  std::vector<std::uint8_t> buf_;
};

/// Bounds-checked little-endian reader over a byte span. Reads past the end
/// throw CacheError.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  bool magic(const char (&tag)[5]);
  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  double f64();

  std::size_t remaining() const noexcept { return data_.size() - pos_; }

 private:
  void need(std::size_t n) const;

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`, so readers
/// never observe a partially written file.
void write_file_atomic(const std::filesystem::path& path,
                       std::span<const std::uint8_t> data);

}  // namespace zdl::io
