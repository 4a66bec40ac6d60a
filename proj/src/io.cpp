// SPDX-License-Identifier: Apache-2.0

#include "ceui/io.hpp"

#include <openssl/evp.h>
#include <png.h>

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

namespace ceui::io {

namespace {

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const fs::path& path) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw FormatError(path.string() + ": not a number: '" + s + "'");
  }
}

}  // namespace

fs::path header_path(const fs::path& payload) {
  fs::path h = payload;
  h += ".hdr";
  return h;
}

void write_signal(const RfRecord& record, const fs::path& path) {
  {
    auto hdr = open_out(header_path(path));
    hdr << "ceui-signal 1\n"
        << "dtype float32\n"
        << "endianness little\n"
        << "fs " << format_double(record.fs) << '\n'
        << "t0 " << format_double(record.t0) << '\n'
        << "length " << record.size() << '\n';
    if (!hdr) throw std::runtime_error("write failure on '" + header_path(path).string() + "'");
  }
  auto out = open_out(path, std::ios::binary);
  std::vector<char> bytes(static_cast<std::size_t>(record.size()) * 4);
  for (Index i = 0; i < record.size(); ++i) {
    auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(record.samples(i)));
    for (int b = 0; b < 4; ++b) bytes[static_cast<std::size_t>(4 * i + b)] = static_cast<char>((bits >> (8 * b)) & 0xFFu);
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failure on '" + path.string() + "'");
}

RfRecord read_signal(const fs::path& path) {
  const fs::path hpath = header_path(path);
  std::ifstream hdr(hpath);
  if (!hdr) throw FormatError("cannot open header '" + hpath.string() + "'");
  std::map<std::string, std::string> fields;
  std::string line;
  int line_no = 0;
  while (std::getline(hdr, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto sp = line.find(' ');
    if (sp == std::string::npos)
      throw FormatError(hpath.string() + ":" + std::to_string(line_no) + ": expected '<key> <value>'");
    fields[line.substr(0, sp)] = line.substr(sp + 1);
  }
  auto need = [&](const std::string& key) -> const std::string& {
    const auto it = fields.find(key);
    if (it == fields.end()) throw FormatError(hpath.string() + ": missing field '" + key + "'");
    return it->second;
  };
  if (need("ceui-signal") != "1") throw FormatError(hpath.string() + ": unsupported version");
  if (need("dtype") != "float32") throw FormatError(hpath.string() + ": unsupported dtype '" + need("dtype") + "'");
  if (need("endianness") != "little")
    throw FormatError(hpath.string() + ": unsupported endianness '" + need("endianness") + "'");
  RfRecord r;
  r.fs = parse_double(need("fs"), hpath);
  r.t0 = parse_double(need("t0"), hpath);
  const double len = parse_double(need("length"), hpath);
  if (!(r.fs > 0.0)) throw FormatError(hpath.string() + ": fs must be positive");
  if (len < 0 || len != std::floor(len)) throw FormatError(hpath.string() + ": length must be a non-negative integer");
  const auto n = static_cast<Index>(len);

  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open payload '" + path.string() + "'");
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto expected = static_cast<std::size_t>(n) * 4;
  if (bytes.size() != expected)
    throw FormatError(path.string() + ": payload holds " + std::to_string(bytes.size()) + " bytes, header expects " +
                      std::to_string(expected));
  r.samples.resize(n);
  for (Index i = 0; i < n; ++i) {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b)
      bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[static_cast<std::size_t>(4 * i + b)])) << (8 * b);
    r.samples(i) = static_cast<double>(std::bit_cast<float>(bits));
  }
  return r;
}

void write_signal_csv(const RfRecord& record, const fs::path& path) {
  auto out = open_out(path);
  out << "time_s,value\n";
  for (Index i = 0; i < record.size(); ++i)
    out << format_double(record.time_at(static_cast<double>(i))) << ',' << format_double(record.samples(i)) << '\n';
  if (!out) throw std::runtime_error("write failure on '" + path.string() + "'");
}

void write_mmode_csv(const MModeImage& image, const fs::path& path) {
  auto out = open_out(path);
  out << std::setprecision(9);
  out << "depth_m\\time_s";
  for (Index w = 0; w < image.cols(); ++w) out << ',' << image.time_grid(w);
  out << '\n';
  for (Index r = 0; r < image.rows(); ++r) {
    out << image.depth_grid(r);
    for (Index w = 0; w < image.cols(); ++w) out << ',' << image.values(r, w);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failure on '" + path.string() + "'");
}

MModeImage read_mmode_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string() + ": empty file");
  const auto head = split(line, ',');
  MModeImage image;
  image.time_grid.resize(static_cast<Index>(head.size()) - 1);
  for (std::size_t i = 1; i < head.size(); ++i) image.time_grid(static_cast<Index>(i - 1)) = parse_double(head[i], path);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != head.size())
      throw FormatError(path.string() + ": row " + std::to_string(rows.size() + 2) + " has " +
                        std::to_string(cells.size()) + " cells, expected " + std::to_string(head.size()));
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_double(c, path));
    rows.push_back(std::move(row));
  }
  const auto n_rows = static_cast<Index>(rows.size());
  image.depth_grid.resize(n_rows);
  image.values.resize(n_rows, image.time_grid.size());
  for (Index r = 0; r < n_rows; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    image.depth_grid(r) = row[0];
    for (Index w = 0; w < image.time_grid.size(); ++w) image.values(r, w) = row[static_cast<std::size_t>(w + 1)];
  }
  return image;
}

std::vector<std::uint8_t> mmode_gray(const MModeImage& image, double db_range) {
  if (!(db_range > 0.0)) throw std::invalid_argument("mmode_gray: db_range must be positive");
  std::vector<std::uint8_t> px(static_cast<std::size_t>(image.rows() * image.cols()), 0);
  const double max = image.values.size() ? image.values.maxCoeff() : 0.0;
  if (!(max > 0.0)) return px;
  for (Index r = 0; r < image.rows(); ++r)
    for (Index w = 0; w < image.cols(); ++w) {
      const double v = image.values(r, w);
      const double level = v > 0.0 ? std::clamp(1.0 + 20.0 * std::log10(v / max) / db_range, 0.0, 1.0) : 0.0;
      px[static_cast<std::size_t>(r * image.cols() + w)] = static_cast<std::uint8_t>(std::lround(255.0 * level));
    }
  return px;
}

void write_mmode_png(const MModeImage& image, const fs::path& path, double db_range) {
  if (image.rows() == 0 || image.cols() == 0) throw std::invalid_argument("write_mmode_png: empty image");
  const auto px = mmode_gray(image, db_range);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(path.string().c_str(), "wb"), &std::fclose);
  if (!fp) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("write failure on '" + path.string() + "'");
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.cols()), static_cast<png_uint_32>(image.rows()), 8,
               PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (Index r = 0; r < image.rows(); ++r)
    png_write_row(png, const_cast<png_bytep>(px.data() + r * image.cols()));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

void write_report(const std::map<std::string, double>& values, const fs::path& path) {
  auto out = open_out(path);
  for (const auto& [k, v] : values) out << k << " = " << format_double(v) << '\n';
  if (!out) throw std::runtime_error("write failure on '" + path.string() + "'");
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::unique_ptr<EVP_MD_CTX, void (*)(EVP_MD_CTX*)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return hex.str();
}

}  // namespace ceui::io
