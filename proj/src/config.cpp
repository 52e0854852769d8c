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

#include "tundra/config.hpp"

#include <zlib.h>

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "tundra/error.hpp"

namespace tundra {
namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

bool parse_bool(const std::string& v, const std::string& where) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw DataError(where + ": expected a boolean, got '" + v + "'");
}

double parse_double(const std::string& v, const std::string& where) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) {
    throw DataError(where + ": expected a number, got '" + v + "'");
  }
  return out;
}

long long parse_int(const std::string& v, const std::string& where) {
  std::size_t used = 0;
  long long out = 0;
  try {
    out = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) {
    throw DataError(where + ": expected an integer, got '" + v + "'");
  }
  return out;
}

std::uint64_t parse_u64(const std::string& v, const std::string& where) {
  std::size_t used = 0;
  unsigned long long out = 0;
  try {
    out = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) {
    throw DataError(where + ": expected a non-negative integer, got '" + v + "'");
  }
  return out;
}

using Setter = std::function<void(PipelineConfig&, const std::string& value,
                                  const std::string& where)>;

const std::map<std::string, std::map<std::string, Setter>>& setters() {
  static const std::map<std::string, std::map<std::string, Setter>> table = {
      {"pipeline",
       {
           {"seed",
            [](PipelineConfig& c, const std::string& v, const std::string& w) {
              c.seed = parse_u64(v, w);
            }},
       }},
      {"segment",
       {
           {"frame_ms", [](PipelineConfig& c, const std::string& v,
                           const std::string& w) {
              c.segment.frame_ms = parse_double(v, w);
            }},
           {"hop_ms", [](PipelineConfig& c, const std::string& v,
                         const std::string& w) {
              c.segment.hop_ms = parse_double(v, w);
            }},
           {"silence_threshold_db", [](PipelineConfig& c, const std::string& v,
                                       const std::string& w) {
              c.segment.silence_threshold_db = parse_double(v, w);
            }},
           {"absolute_floor_db", [](PipelineConfig& c, const std::string& v,
                                    const std::string& w) {
              c.segment.absolute_floor_db = parse_double(v, w);
            }},
           {"min_silence_ms", [](PipelineConfig& c, const std::string& v,
                                 const std::string& w) {
              c.segment.min_silence_ms = parse_double(v, w);
            }},
           {"max_segment_s", [](PipelineConfig& c, const std::string& v,
                                const std::string& w) {
              c.segment.max_segment_s = parse_double(v, w);
            }},
           {"fallback_chunk_s", [](PipelineConfig& c, const std::string& v,
                                   const std::string& w) {
              c.segment.fallback_chunk_s = parse_double(v, w);
            }},
       }},
      {"mfcc",
       {
           {"frame_ms", [](PipelineConfig& c, const std::string& v,
                           const std::string& w) {
              c.mfcc.frame_ms = parse_double(v, w);
            }},
           {"hop_ms", [](PipelineConfig& c, const std::string& v,
                         const std::string& w) {
              c.mfcc.hop_ms = parse_double(v, w);
            }},
           {"pre_emphasis", [](PipelineConfig& c, const std::string& v,
                               const std::string& w) {
              c.mfcc.pre_emphasis = parse_double(v, w);
            }},
           {"n_mels", [](PipelineConfig& c, const std::string& v,
                         const std::string& w) {
              c.mfcc.n_mels = static_cast<int>(parse_int(v, w));
            }},
           {"n_ceps", [](PipelineConfig& c, const std::string& v,
                         const std::string& w) {
              c.mfcc.n_ceps = static_cast<int>(parse_int(v, w));
            }},
           {"fft_size", [](PipelineConfig& c, const std::string& v,
                           const std::string& w) {
              c.mfcc.fft_size = static_cast<int>(parse_int(v, w));
            }},
           {"deltas", [](PipelineConfig& c, const std::string& v,
                         const std::string& w) {
              c.mfcc.deltas = parse_bool(v, w);
            }},
           {"delta_window", [](PipelineConfig& c, const std::string& v,
                               const std::string& w) {
              c.mfcc.delta_window = static_cast<int>(parse_int(v, w));
            }},
           {"mean_normalize", [](PipelineConfig& c, const std::string& v,
                                 const std::string& w) {
              c.mfcc.mean_normalize = parse_bool(v, w);
            }},
       }},
      {"vqvae",
       {
           {"input_dim", [](PipelineConfig& c, const std::string& v,
                            const std::string& w) {
              c.vqvae.input_dim = static_cast<int>(parse_int(v, w));
            }},
           {"hid_dim", [](PipelineConfig& c, const std::string& v,
                          const std::string& w) {
              c.vqvae.hid_dim = static_cast<int>(parse_int(v, w));
            }},
           {"enc_dim", [](PipelineConfig& c, const std::string& v,
                          const std::string& w) {
              c.vqvae.enc_dim = static_cast<int>(parse_int(v, w));
            }},
           {"codebook_size", [](PipelineConfig& c, const std::string& v,
                                const std::string& w) {
              c.vqvae.codebook_size = static_cast<int>(parse_int(v, w));
            }},
           {"beta", [](PipelineConfig& c, const std::string& v,
                       const std::string& w) {
              c.vqvae.beta = parse_double(v, w);
            }},
           {"epochs", [](PipelineConfig& c, const std::string& v,
                         const std::string& w) {
              c.vqvae.epochs = static_cast<int>(parse_int(v, w));
            }},
           {"lr", [](PipelineConfig& c, const std::string& v,
                     const std::string& w) {
              c.vqvae.lr = parse_double(v, w);
            }},
           {"batch_train", [](PipelineConfig& c, const std::string& v,
                              const std::string& w) {
              c.vqvae.batch_train = static_cast<int>(parse_int(v, w));
            }},
           {"batch_val", [](PipelineConfig& c, const std::string& v,
                            const std::string& w) {
              c.vqvae.batch_val = static_cast<int>(parse_int(v, w));
            }},
           {"batch_test", [](PipelineConfig& c, const std::string& v,
                             const std::string& w) {
              c.vqvae.batch_test = static_cast<int>(parse_int(v, w));
            }},
       }},
      {"langid",
       {
           {"chukchi_lexicon", [](PipelineConfig& c, const std::string& v,
                                  const std::string&) {
              c.chukchi_lexicon = v;
            }},
           {"russian_lexicon", [](PipelineConfig& c, const std::string& v,
                                  const std::string&) {
              c.russian_lexicon = v;
            }},
       }},
      {"split",
       {
           {"train", [](PipelineConfig& c, const std::string& v,
                        const std::string& w) {
              c.split_ratios[0] = parse_double(v, w);
            }},
           {"val", [](PipelineConfig& c, const std::string& v,
                      const std::string& w) {
              c.split_ratios[1] = parse_double(v, w);
            }},
           {"test", [](PipelineConfig& c, const std::string& v,
                       const std::string& w) {
              c.split_ratios[2] = parse_double(v, w);
            }},
       }},
      {"eval",
       {
           {"cer_count_spaces", [](PipelineConfig& c, const std::string& v,
                                   const std::string& w) {
              c.cer_count_spaces = parse_bool(v, w);
            }},
           {"lowercase", [](PipelineConfig& c, const std::string& v,
                            const std::string& w) {
              c.eval_lowercase = parse_bool(v, w);
            }},
           {"strip_punctuation", [](PipelineConfig& c, const std::string& v,
                                    const std::string& w) {
              c.eval_strip_punctuation = parse_bool(v, w);
            }},
       }},
  };
  return table;
}

}  // namespace

PipelineConfig parse_config(const std::string& text, const std::string& name) {
  PipelineConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    const std::string where = name + ":" + std::to_string(line_no);
    if (t.front() == '[') {
      if (t.back() != ']') throw DataError(where + ": unterminated section");
      section = trim(t.substr(1, t.size() - 2));
      if (setters().find(section) == setters().end()) {
        throw DataError(where + ": unknown section [" + section + "]");
      }
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw DataError(where + ": expected key = value");
    }
    if (section.empty()) {
      throw DataError(where + ": key outside any section");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    const auto& sec = setters().at(section);
    const auto it = sec.find(key);
    if (it == sec.end()) {
      throw DataError(where + ": unknown key '" + key + "' in [" + section +
                      "]");
    }
    it->second(cfg, value, where);
  }
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config " + path);
  std::ostringstream raw;
  raw << in.rdbuf();
  return parse_config(raw.str(), path);
}

std::string canonical_config(const PipelineConfig& c) {
  std::ostringstream out;
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  out << "[pipeline]\nseed = " << c.seed << "\n";
  out << "[segment]\n";
  out << "frame_ms = " << num(c.segment.frame_ms) << "\n";
  out << "hop_ms = " << num(c.segment.hop_ms) << "\n";
  out << "silence_threshold_db = " << num(c.segment.silence_threshold_db) << "\n";
  out << "absolute_floor_db = " << num(c.segment.absolute_floor_db) << "\n";
  out << "min_silence_ms = " << num(c.segment.min_silence_ms) << "\n";
  out << "max_segment_s = " << num(c.segment.max_segment_s) << "\n";
  out << "fallback_chunk_s = " << num(c.segment.fallback_chunk_s) << "\n";
  out << "[mfcc]\n";
  out << "frame_ms = " << num(c.mfcc.frame_ms) << "\n";
  out << "hop_ms = " << num(c.mfcc.hop_ms) << "\n";
  out << "pre_emphasis = " << num(c.mfcc.pre_emphasis) << "\n";
  out << "n_mels = " << c.mfcc.n_mels << "\n";
  out << "n_ceps = " << c.mfcc.n_ceps << "\n";
  out << "fft_size = " << c.mfcc.fft_size << "\n";
  out << "deltas = " << (c.mfcc.deltas ? "true" : "false") << "\n";
  out << "delta_window = " << c.mfcc.delta_window << "\n";
  out << "mean_normalize = " << (c.mfcc.mean_normalize ? "true" : "false")
      << "\n";
  out << "[vqvae]\n";
  out << "input_dim = " << c.vqvae.input_dim << "\n";
  out << "hid_dim = " << c.vqvae.hid_dim << "\n";
  out << "enc_dim = " << c.vqvae.enc_dim << "\n";
  out << "codebook_size = " << c.vqvae.codebook_size << "\n";
  out << "beta = " << num(c.vqvae.beta) << "\n";
  out << "epochs = " << c.vqvae.epochs << "\n";
  out << "lr = " << num(c.vqvae.lr) << "\n";
  out << "batch_train = " << c.vqvae.batch_train << "\n";
  out << "batch_val = " << c.vqvae.batch_val << "\n";
  out << "batch_test = " << c.vqvae.batch_test << "\n";
  out << "[langid]\n";
  out << "chukchi_lexicon = " << c.chukchi_lexicon << "\n";
  out << "russian_lexicon = " << c.russian_lexicon << "\n";
  out << "[split]\n";
  out << "train = " << num(c.split_ratios[0]) << "\n";
  out << "val = " << num(c.split_ratios[1]) << "\n";
  out << "test = " << num(c.split_ratios[2]) << "\n";
  out << "[eval]\n";
  out << "cer_count_spaces = " << (c.cer_count_spaces ? "true" : "false")
      << "\n";
  out << "lowercase = " << (c.eval_lowercase ? "true" : "false") << "\n";
  out << "strip_punctuation = "
      << (c.eval_strip_punctuation ? "true" : "false") << "\n";
  return out.str();
}

std::uint32_t config_hash(const PipelineConfig& cfg) {
  const std::string text = canonical_config(cfg);
  return static_cast<std::uint32_t>(
      crc32(crc32(0L, Z_NULL, 0), reinterpret_cast<const Bytef*>(text.data()),
            static_cast<uInt>(text.size())));
}

}  // namespace tundra
