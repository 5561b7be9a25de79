// Copyright 2026 The qmlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qmlab/io.hpp"

#include <bit>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "qmlab/error.hpp"

namespace qmlab {
namespace {

constexpr char kMagic[4] = {'Q', 'M', 'L', 'F'};

class Writer {
 public:
  void u32(std::uint32_t v) {
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
  }
  void f64(double d) {
    const auto v = std::bit_cast<std::uint64_t>(d);
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
  }
  std::vector<std::uint8_t> out;
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) v |= std::uint32_t{bytes_[pos_++]} << (8 * b);
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) v |= std::uint64_t{bytes_[pos_++]} << (8 * b);
    return std::bit_cast<double>(v);
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) fail(ErrorCode::kIo, "field file is truncated");
  }
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

void write_header(Writer& w, std::uint32_t n0, std::uint32_t n1, std::uint32_t flags) {
  for (char c : kMagic) w.out.push_back(static_cast<std::uint8_t>(c));
  w.u32(n0);
  w.u32(n1);
  w.u32(flags);
}

void write_values(Writer& w, const ComplexPlane& v) {
  for (Eigen::Index i = 0; i < v.rows(); ++i)
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
      w.f64(v(i, j).real());
      w.f64(v(i, j).imag());
    }
}

FieldHeader read_header(Reader& r, const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 16 || !std::equal(kMagic, kMagic + 4, bytes.begin()))
    fail(ErrorCode::kIo, "not a QMLF field file");
  r.u32();  // magic
  FieldHeader h;
  h.n0 = r.u32();
  h.n1 = r.u32();
  h.flags = r.u32();
  if ((h.flags & ~(kFieldCylinder | kFieldPlaneExtent)) != 0)
    fail(ErrorCode::kIo, "unknown flags in field header");
  if ((h.flags & kFieldCylinder) && (h.flags & kFieldPlaneExtent))
    fail(ErrorCode::kIo, "field header carries both extensions");
  if (h.n0 == 0 || h.n1 == 0 || h.n0 > (1u << 20) || h.n1 > (1u << 20))
    fail(ErrorCode::kIo, "bad field dimensions");
  return h;
}

ComplexPlane read_values(Reader& r, const FieldHeader& h) {
  const std::size_t count = std::size_t{h.n0} * h.n1;
  if (r.remaining() != 16 * count) fail(ErrorCode::kIo, "field payload has the wrong size");
  ComplexPlane v(h.n0, h.n1);
  for (std::uint32_t i = 0; i < h.n0; ++i)
    for (std::uint32_t j = 0; j < h.n1; ++j) {
      const double re = r.f64();
      v(i, j) = Complex(re, r.f64());
    }
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_field(const PlaneField& f) {
  require(!f.empty(), "cannot encode an empty field");
  const PlaneGrid& g = f.grid();
  const PlaneGrid def;
  const bool extent = g.extent_rho != def.extent_rho || g.extent_sigma != def.extent_sigma;
  Writer w;
  write_header(w, g.n_rho, g.n_sigma, extent ? kFieldPlaneExtent : 0u);
  if (extent) {
    w.f64(g.extent_rho);
    w.f64(g.extent_sigma);
  }
  write_values(w, f.values());
  return std::move(w.out);
}

std::vector<std::uint8_t> encode_field(const CylField& f) {
  const CylGrid& g = f.grid;
  g.validate();
  require(f.values.rows() == g.n_r && f.values.cols() == g.n_y,
          "field shape differs from its grid");
  Writer w;
  write_header(w, g.n_r, g.n_y, kFieldCylinder);
  w.f64(g.r_min);
  w.f64(g.r_max);
  w.f64(g.y_half);
  w.u32(static_cast<std::uint32_t>(g.k));
  w.u32(0);
  write_values(w, f.values);
  return std::move(w.out);
}

FieldHeader decode_header(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  return read_header(r, bytes);
}

PlaneField decode_plane_field(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  const FieldHeader h = read_header(r, bytes);
  if (h.flags & kFieldCylinder) fail(ErrorCode::kIo, "file holds a cylinder field");
  PlaneGrid g;
  g.n_rho = static_cast<int>(h.n0);
  g.n_sigma = static_cast<int>(h.n1);
  if (h.flags & kFieldPlaneExtent) {
    g.extent_rho = r.f64();
    g.extent_sigma = r.f64();
  }
  try {
    g.validate();
  } catch (const Error& e) {
    fail(ErrorCode::kIo, std::string("bad plane grid in field file: ") + e.what());
  }
  return PlaneField(g, read_values(r, h));
}

CylField decode_cyl_field(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  const FieldHeader h = read_header(r, bytes);
  if (!(h.flags & kFieldCylinder)) fail(ErrorCode::kIo, "file holds a plane field");
  CylGrid g;
  g.n_r = static_cast<int>(h.n0);
  g.n_y = static_cast<int>(h.n1);
  g.r_min = r.f64();
  g.r_max = r.f64();
  g.y_half = r.f64();
  g.k = static_cast<int>(r.u32());
  if (r.u32() != 0) fail(ErrorCode::kIo, "bad cylinder header extension");
  try {
    g.validate();
  } catch (const Error& e) {
    fail(ErrorCode::kIo, std::string("bad cylinder grid in field file: ") + e.what());
  }
  return {g, read_values(r, h)};
}

void save_field(const std::string& path, const PlaneField& f) {
  write_bytes(path, encode_field(f));
}

void save_field(const std::string& path, const CylField& f) {
  write_bytes(path, encode_field(f));
}

PlaneField load_plane_field(const std::string& path) {
  return decode_plane_field(read_bytes(path));
}

CylField load_cyl_field(const std::string& path) {
  return decode_cyl_field(read_bytes(path));
}

std::vector<std::uint8_t> read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::kIo, "write failed for " + path);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path);
  out << text;
  if (!out) fail(ErrorCode::kIo, "write failed for " + path);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  require(header.size() == columns.size(), "csv header and columns differ in count");
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns) require(c.size() == rows, "csv columns differ in length");
  std::string text;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c) text += ',';
    text += header[c];
  }
  text += '\n';
  char buf[32];
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) text += ',';
      std::snprintf(buf, sizeof buf, "%.17g", columns[c][r]);
      text += buf;
    }
    text += '\n';
  }
  write_text(path, text);
}

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) fail(ErrorCode::kIo, "cannot create directory " + path + ": " + ec.message());
}

}  // namespace qmlab
