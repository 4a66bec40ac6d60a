// SPDX-License-Identifier: Apache-2.0
//
// File formats.
//
// Signal: raw little-endian float32 payload at `path`, text header at `path.hdr`:
//
//   ceui-signal 1
//   dtype float32
//   endianness little
//   fs <Hz, %.17g>
//   t0 <s, %.17g>
//   length <samples>
//
// M-mode CSV: first row "depth_m\time_s" then the time grid; every following
// row is a depth followed by that row of the image.
// M-mode PNG: 8-bit grayscale, row 0 = shallowest depth, value v mapped to
// 255 * clip(1 + 20 log10(v / max) / db_range, 0, 1).

#pragma once

#include "ceui/mmode.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace ceui::io {

namespace fs = std::filesystem;

/// Thrown for malformed or truncated input files.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

fs::path header_path(const fs::path& payload);

void write_signal(const RfRecord& record, const fs::path& path);
RfRecord read_signal(const fs::path& path);

/// Two columns: time_s, value.
void write_signal_csv(const RfRecord& record, const fs::path& path);

void write_mmode_csv(const MModeImage& image, const fs::path& path);
MModeImage read_mmode_csv(const fs::path& path);

/// dB-compressed grayscale pixels, rows x cols, row-major.
std::vector<std::uint8_t> mmode_gray(const MModeImage& image, double db_range);
void write_mmode_png(const MModeImage& image, const fs::path& path, double db_range = 40.0);

/// `key = value` lines in key order.
void write_report(const std::map<std::string, double>& values, const fs::path& path);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const fs::path& path);

}  // namespace ceui::io
