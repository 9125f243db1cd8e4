#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace hategraph {

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);
std::vector<std::string> read_lines(const std::string& path);
std::vector<std::string_view> split(std::string_view s, char sep);

// FNV-1a over file bytes, hex-encoded; used for run manifests.
std::string content_hash(const std::string& path);
std::string to_hex(std::uint64_t v);

std::string csv_escape(std::string_view field);
std::string format_double(double v);  // shortest round-trip-ish, locale-free

// Little-endian binary stream helpers for model containers.
class BinWriter {
 public:
  explicit BinWriter(const std::string& path);
  void u8(std::uint8_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void f32(float v);
  void f64(double v);
  void bytes(const void* p, std::size_t n);
  void str(std::string_view s);  // u32 length + bytes
  void close();

 private:
  std::ofstream out_;
};

class BinReader {
 public:
  explicit BinReader(const std::string& path);
  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  float f32();
  double f64();
  void bytes(void* p, std::size_t n);
  std::string str();

 private:
  std::ifstream in_;
  std::string path_;
};

}  // namespace hategraph
