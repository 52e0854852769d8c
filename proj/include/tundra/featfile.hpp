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

#ifndef TUNDRA_FEATFILE_HPP_
#define TUNDRA_FEATFILE_HPP_

#include <string>

#include "tundra/types.hpp"

namespace tundra::feat {

// On-disk layout: magic "TNDRFEA1", then u32 rows, u32 cols, u32 id
// length, id bytes, then rows*cols row-major little-endian float32.
struct FeatureFile {
  std::string id;
  MatXf features;
};

void write_features(const std::string& path, const std::string& id,
                    const MatXd& features);

FeatureFile read_features(const std::string& path);

// Plain-text dump for debugging: id, shape, then one row per line.
std::string format_features_text(const FeatureFile& f, Index max_rows = -1);

}  // namespace tundra::feat

#endif  // TUNDRA_FEATFILE_HPP_
