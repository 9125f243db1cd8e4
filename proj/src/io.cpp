#include "hategraph/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <sstream>
#include <stdexcept>

#include "hategraph/rng.hpp"

namespace hategraph {

static_assert(std::endian::native == std::endian::little,
              "container formats assume a little-endian host");

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<std::string> read_lines(const std::string& path) {
  std::string all = read_file(path);
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= all.size()) {
    std::size_t nl = all.find('\n', start);
    if (nl == std::string::npos) {
      if (start < all.size()) lines.push_back(all.substr(start));
      break;
    }
    std::size_t len = nl - start;
    if (len > 0 && all[start + len - 1] == '\r') --len;
    lines.push_back(all.substr(start, len));
    start = nl + 1;
  }
  return lines;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::string to_hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string content_hash(const std::string& path) {
  std::string data = read_file(path);
  return to_hex(fnv1a64(data));
}

std::string csv_escape(std::string_view field) {
  bool needs = field.find_first_of(",\"\n") != std::string_view::npos;
  if (!needs) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

BinWriter::BinWriter(const std::string& path) : out_(path, std::ios::binary) {
  if (!out_) throw std::runtime_error("cannot write file: " + path);
}
void BinWriter::u8(std::uint8_t v) { bytes(&v, 1); }
void BinWriter::u32(std::uint32_t v) { bytes(&v, 4); }
void BinWriter::u64(std::uint64_t v) { bytes(&v, 8); }
void BinWriter::f32(float v) { bytes(&v, 4); }
void BinWriter::f64(double v) { bytes(&v, 8); }
void BinWriter::bytes(const void* p, std::size_t n) {
  out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
  if (!out_) throw std::runtime_error("binary write failed");
}
void BinWriter::str(std::string_view s) {
  u32(static_cast<std::uint32_t>(s.size()));
  bytes(s.data(), s.size());
}
void BinWriter::close() { out_.close(); }

BinReader::BinReader(const std::string& path) : in_(path, std::ios::binary), path_(path) {
  if (!in_) throw std::runtime_error("cannot open file: " + path);
}
std::uint8_t BinReader::u8() { std::uint8_t v; bytes(&v, 1); return v; }
std::uint32_t BinReader::u32() { std::uint32_t v; bytes(&v, 4); return v; }
std::uint64_t BinReader::u64() { std::uint64_t v; bytes(&v, 8); return v; }
float BinReader::f32() { float v; bytes(&v, 4); return v; }
double BinReader::f64() { double v; bytes(&v, 8); return v; }
void BinReader::bytes(void* p, std::size_t n) {
  in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (in_.gcount() != static_cast<std::streamsize>(n))
    throw std::runtime_error("truncated file: " + path_);
}
std::string BinReader::str() {
  std::uint32_t n = u32();
  std::string s(n, '\0');
  if (n > 0) bytes(s.data(), n);
  return s;
}

}  // namespace hategraph
