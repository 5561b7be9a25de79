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

#ifndef QMLAB_IO_HPP
#define QMLAB_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qmlab/quasimode.hpp"

namespace qmlab {

// Binary field files:
//   "QMLF" | u32 n0 | u32 n1 | u32 flags      (16 bytes, little endian)
//   [cylinder extension: f64 r_min, f64 r_max, f64 y_half, u32 k, u32 0]
//   [plane extension: f64 extent_rho, f64 extent_sigma]
//   n0 * n1 pairs (re, im) of f64, row-major (second index fastest).
// A plane field on the default extents carries no extension (flags 0).
inline constexpr std::uint32_t kFieldCylinder = 1u;
inline constexpr std::uint32_t kFieldPlaneExtent = 2u;

struct FieldHeader {
  std::uint32_t n0 = 0;
  std::uint32_t n1 = 0;
  std::uint32_t flags = 0;
};

std::vector<std::uint8_t> encode_field(const PlaneField& f);
std::vector<std::uint8_t> encode_field(const CylField& f);
FieldHeader decode_header(const std::vector<std::uint8_t>& bytes);
PlaneField decode_plane_field(const std::vector<std::uint8_t>& bytes);
CylField decode_cyl_field(const std::vector<std::uint8_t>& bytes);

void save_field(const std::string& path, const PlaneField& f);
void save_field(const std::string& path, const CylField& f);
PlaneField load_plane_field(const std::string& path);
CylField load_cyl_field(const std::string& path);

std::vector<std::uint8_t> read_bytes(const std::string& path);
void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes);
void write_text(const std::string& path, const std::string& text);

/// Columns of equal length under a header row; values at full precision.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

/// Creates the directory (and parents) if needed.
void ensure_directory(const std::string& path);

}  // namespace qmlab

#endif  // QMLAB_IO_HPP
