// Copyright 2026 The Tundra Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tundra/featfile.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "tundra/error.hpp"

namespace tundra::feat {
namespace {

constexpr char kMagic[8] = {'T', 'N', 'D', 'R', 'F', 'E', 'A', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v),
                        static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16),
                        static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& in, const std::string& path) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) {
    throw DataError(path + ": truncated feature file");
  }
  return static_cast<std::uint32_t>(b[0]) |
         (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

void write_features(const std::string& path, const std::string& id,
                    const MatXd& features) {
  if (!features.allFinite()) {
    throw NumericError(path + ": refusing to write non-finite features");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out.write(kMagic, sizeof(kMagic));
  put_u32(out, static_cast<std::uint32_t>(features.rows()));
  put_u32(out, static_cast<std::uint32_t>(features.cols()));
  put_u32(out, static_cast<std::uint32_t>(id.size()));
  out.write(id.data(), static_cast<std::streamsize>(id.size()));
  // Row-major float32, one row at a time.
  std::vector<float> row(static_cast<std::size_t>(features.cols()));
  for (Index r = 0; r < features.rows(); ++r) {
    for (Index c = 0; c < features.cols(); ++c) {
      row[static_cast<std::size_t>(c)] = static_cast<float>(features(r, c));
    }
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(float)));
  }
  if (!out) throw DataError("write failed for " + path);
}

FeatureFile read_features(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  char magic[8];
  if (!in.read(magic, sizeof(magic)) ||
      std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw DataError(path + ": not a feature file (bad magic)");
  }
  const std::uint32_t rows = get_u32(in, path);
  const std::uint32_t cols = get_u32(in, path);
  const std::uint32_t id_len = get_u32(in, path);
  if (id_len > (1u << 20)) throw DataError(path + ": implausible id length");
  FeatureFile f;
  f.id.resize(id_len);
  if (id_len > 0 && !in.read(f.id.data(), id_len)) {
    throw DataError(path + ": truncated feature file");
  }
  f.features.resize(static_cast<Index>(rows), static_cast<Index>(cols));
  std::vector<float> row(cols);
  for (std::uint32_t r = 0; r < rows; ++r) {
    if (!in.read(reinterpret_cast<char*>(row.data()),
                 static_cast<std::streamsize>(row.size() * sizeof(float)))) {
      throw DataError(path + ": truncated feature file");
    }
    for (std::uint32_t c = 0; c < cols; ++c) {
      f.features(static_cast<Index>(r), static_cast<Index>(c)) = row[c];
    }
  }
  if (!f.features.allFinite()) {
    throw NumericError(path + ": non-finite values in feature file");
  }
  return f;
}

std::string format_features_text(const FeatureFile& f, Index max_rows) {
  std::ostringstream out;
  out << "id\t" << f.id << "\n";
  out << "shape\t" << f.features.rows() << "x" << f.features.cols() << "\n";
  const Index rows = max_rows < 0
                         ? f.features.rows()
                         : std::min<Index>(max_rows, f.features.rows());
  char buf[32];
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < f.features.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.6g", static_cast<double>(f.features(r, c)));
      if (c > 0) out << ' ';
      out << buf;
    }
    out << "\n";
  }
  if (rows < f.features.rows()) {
    out << "... (" << (f.features.rows() - rows) << " more rows)\n";
  }
  return out.str();
}

}  // namespace tundra::feat
