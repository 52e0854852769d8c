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

#include "tundra/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <vector>

#include "tundra/error.hpp"

namespace tundra::audio {

namespace {

std::uint32_t read_u32(const std::vector<char>& buf, std::size_t off) {
  return static_cast<std::uint32_t>(static_cast<unsigned char>(buf[off])) |
         static_cast<std::uint32_t>(static_cast<unsigned char>(buf[off + 1])) << 8 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(buf[off + 2])) << 16 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(buf[off + 3])) << 24;
}

std::uint16_t read_u16(const std::vector<char>& buf, std::size_t off) {
  return static_cast<std::uint16_t>(
      static_cast<unsigned char>(buf[off]) |
      static_cast<unsigned char>(buf[off + 1]) << 8);
}

bool tag_is(const std::vector<char>& buf, std::size_t off, const char* tag) {
  return std::memcmp(buf.data() + off, tag, 4) == 0;
}

void append_u32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
  out.push_back(static_cast<char>((v >> 16) & 0xFF));
  out.push_back(static_cast<char>((v >> 24) & 0xFF));
}

void append_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

}  // namespace

AudioBuffer read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open WAV file: " + path);
  std::vector<char> buf((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
  if (buf.size() < 12 || !tag_is(buf, 0, "RIFF") || !tag_is(buf, 8, "WAVE")) {
    throw DataError("not a RIFF/WAVE file: " + path);
  }

  int channels = 0;
  int sample_rate = 0;
  int bits = 0;
  int audio_format = 0;
  std::size_t data_off = 0, data_len = 0;

  std::size_t off = 12;
  while (off + 8 <= buf.size()) {
    const std::uint32_t chunk_len = read_u32(buf, off + 4);
    const std::size_t body = off + 8;
    if (body + chunk_len > buf.size()) {
      throw DataError("truncated WAV chunk in " + path);
    }
    if (tag_is(buf, off, "fmt ")) {
      if (chunk_len < 16) throw DataError("short fmt chunk in " + path);
      audio_format = read_u16(buf, body);
      channels = read_u16(buf, body + 2);
      sample_rate = static_cast<int>(read_u32(buf, body + 4));
      bits = read_u16(buf, body + 14);
    } else if (tag_is(buf, off, "data")) {
      data_off = body;
      data_len = chunk_len;
    }
    off = body + chunk_len + (chunk_len & 1);  // chunks are word-aligned
  }

  if (audio_format != 1 || bits != 16) {
    throw DataError(path + ": only PCM 16-bit WAV is supported (format=" +
                    std::to_string(audio_format) +
                    ", bits=" + std::to_string(bits) + ")");
  }
  if (channels < 1 || sample_rate <= 0 || data_off == 0) {
    throw DataError("malformed WAV header in " + path);
  }

  const std::size_t frame_bytes = static_cast<std::size_t>(channels) * 2;
  const std::size_t n_frames = data_len / frame_bytes;
  AudioBuffer audio;
  audio.sample_rate_hz = sample_rate;
  audio.samples.resize(static_cast<Index>(n_frames));
  for (std::size_t f = 0; f < n_frames; ++f) {
    double acc = 0.0;
    for (int c = 0; c < channels; ++c) {
      const std::size_t o = data_off + f * frame_bytes +
                            static_cast<std::size_t>(c) * 2;
      const std::int16_t s = static_cast<std::int16_t>(read_u16(buf, o));
      acc += static_cast<double>(s);
    }
    audio.samples(static_cast<Index>(f)) = acc / channels / 32768.0;
  }
  return audio;
}

void write_wav(const std::string& path, const AudioBuffer& audio) {
  if (audio.sample_rate_hz <= 0) {
    throw DataError("write_wav: sample rate must be positive");
  }
  const std::uint32_t n = static_cast<std::uint32_t>(audio.samples.size());
  const std::uint32_t data_len = n * 2;

  std::string out;
  out.reserve(44 + data_len);
  out += "RIFF";
  append_u32(out, 36 + data_len);
  out += "WAVE";
  out += "fmt ";
  append_u32(out, 16);
  append_u16(out, 1);  // PCM
  append_u16(out, 1);  // mono
  append_u32(out, static_cast<std::uint32_t>(audio.sample_rate_hz));
  append_u32(out, static_cast<std::uint32_t>(audio.sample_rate_hz) * 2);
  append_u16(out, 2);
  append_u16(out, 16);
  out += "data";
  append_u32(out, data_len);
  for (Index i = 0; i < audio.samples.size(); ++i) {
    const double clamped = std::clamp(audio.samples(i), -1.0, 1.0);
    const auto s = static_cast<std::int16_t>(std::lrint(clamped * 32767.0));
    append_u16(out, static_cast<std::uint16_t>(s));
  }

  std::ofstream file(path, std::ios::binary);
  if (!file) throw DataError("cannot write WAV file: " + path);
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw DataError("write failed: " + path);
}

}  // namespace tundra::audio
