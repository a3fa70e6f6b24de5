#pragma once

// On-disk SmoothTable cache.
//
//   bytes 0..3   "SMTB"
//   byte  4      version (0x01)
//   bytes 5..12  x_max, unsigned 64-bit little-endian
//   then         x_max unsigned 32-bit little-endian values lpf(1), ..., lpf(x_max)

#include <array>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "friable/arith.hpp"
#include "friable/error.hpp"
#include "friable/smooth.hpp"

namespace friable {

inline constexpr std::array<char, 4> kSieveMagic = {'S', 'M', 'T', 'B'};
inline constexpr std::uint8_t kSieveVersion = 0x01;
inline constexpr std::size_t kSieveHeaderBytes = 13;

inline std::uintmax_t sieve_cache_size(u64 x_max) { return kSieveHeaderBytes + 4 * static_cast<std::uintmax_t>(x_max); }

namespace detail {

inline void put_le(std::vector<char>& buf, u64 v, int bytes) {
  for (int i = 0; i < bytes; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

inline u64 get_le(const unsigned char* p, int bytes) {
  u64 v = 0;
  for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

// Sixteen deterministic probe positions spread over [1, x_max].
inline std::vector<u64> spot_check_positions(u64 x_max) {
  std::vector<u64> pos;
  u64 state = 0x9e3779b97f4a7c15ull ^ x_max;
  for (int i = 0; i < 16; ++i) {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    pos.push_back(i == 0 ? x_max : 1 + state % x_max);
  }
  return pos;
}

}  // namespace detail

inline void write_sieve_cache(const std::filesystem::path& path, const SmoothTable& table) {
  const u64 x_max = table.x_max();
  std::vector<char> buf;
  buf.reserve(sieve_cache_size(x_max));
  buf.insert(buf.end(), kSieveMagic.begin(), kSieveMagic.end());
  buf.push_back(static_cast<char>(kSieveVersion));
  detail::put_le(buf, x_max, 8);
  for (std::uint32_t v : table.values()) detail::put_le(buf, v, 4);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

/// Reads and validates a cache file: magic, version, length, and sixteen
/// entries re-derived by trial division.
inline SmoothTable load_sieve_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::array<unsigned char, kSieveHeaderBytes> header{};
  in.read(reinterpret_cast<char*>(header.data()), header.size());
  if (in.gcount() != static_cast<std::streamsize>(header.size())) {
    throw Error(ErrorCode::FormatError, path.string() + ": truncated header");
  }
  if (std::memcmp(header.data(), kSieveMagic.data(), kSieveMagic.size()) != 0) {
    throw Error(ErrorCode::FormatError, path.string() + ": bad magic");
  }
  if (header[4] != kSieveVersion) {
    throw Error(ErrorCode::FormatError, path.string() + ": unsupported version " + std::to_string(header[4]));
  }
  const u64 x_max = detail::get_le(header.data() + 5, 8);
  if (x_max < 1 || x_max > kHardTableCap) throw Error(ErrorCode::FormatError, path.string() + ": implausible x_max");
  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  if (ec || size != sieve_cache_size(x_max)) {
    throw Error(ErrorCode::FormatError, path.string() + ": length does not match x_max");
  }
  std::vector<unsigned char> raw(4 * x_max);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size())) throw Error(ErrorCode::FormatError, path.string() + ": truncated body");
  std::vector<std::uint32_t> values(x_max + 1, 0);
  for (u64 n = 1; n <= x_max; ++n) values[n] = static_cast<std::uint32_t>(detail::get_le(raw.data() + 4 * (n - 1), 4));
  for (u64 n : detail::spot_check_positions(x_max)) {
    if (values[n] != factorize(n).largest_prime()) {
      throw Error(ErrorCode::FormatError, path.string() + ": spot check failed at n = " + std::to_string(n));
    }
  }
  return SmoothTable::from_values(std::move(values));
}

}  // namespace friable
