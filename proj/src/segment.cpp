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

#include "tundra/segment.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "tundra/error.hpp"

namespace tundra::audio {

namespace {

struct FrameGrid {
  Index frame_len = 0;
  Index hop = 0;
  Index count = 0;

  Index start_of(Index f) const { return f * hop; }
  Index center_of(Index f) const { return f * hop + frame_len / 2; }
};

FrameGrid grid_for(Index n_samples, int sr, double frame_ms, double hop_ms) {
  FrameGrid g;
  g.frame_len = std::max<Index>(
      1, static_cast<Index>(std::lround(frame_ms * sr / 1000.0)));
  g.hop = std::max<Index>(
      1, static_cast<Index>(std::lround(hop_ms * sr / 1000.0)));
  g.count = n_samples >= g.frame_len
                ? (n_samples - g.frame_len) / g.hop + 1
                : 1;  // short buffer: one partial frame
  return g;
}

double median_of(VecXd v) {
  std::sort(v.data(), v.data() + v.size());
  const Index n = v.size();
  return n % 2 == 1 ? v(n / 2) : 0.5 * (v(n / 2 - 1) + v(n / 2));
}

AudioSegment make_segment(const AudioBuffer& audio, Index begin, Index end) {
  AudioSegment seg;
  seg.offset = begin;
  seg.audio.sample_rate_hz = audio.sample_rate_hz;
  seg.audio.samples = audio.samples.segment(begin, end - begin);
  return seg;
}

}  // namespace

VecXd frame_energies_db(const AudioBuffer& audio, double frame_ms,
                        double hop_ms) {
  if (audio.size() == 0) throw DataError("frame_energies_db: empty audio");
  const FrameGrid g =
      grid_for(audio.size(), audio.sample_rate_hz, frame_ms, hop_ms);
  VecXd energies(g.count);
  for (Index f = 0; f < g.count; ++f) {
    const Index begin = g.start_of(f);
    const Index len = std::min(g.frame_len, audio.size() - begin);
    const double mean_sq = audio.samples.segment(begin, len).squaredNorm() /
                           static_cast<double>(len);
    energies(f) = 10.0 * std::log10(mean_sq + 1e-12);
  }
  return energies;
}

std::vector<AudioSegment> split_on_silence(const AudioBuffer& audio,
                                           const SegmentationConfig& cfg) {
  if (audio.size() == 0) throw DataError("split_on_silence: empty audio");
  if (!(cfg.frame_ms >= cfg.hop_ms && cfg.hop_ms > 0)) {
    throw DataError("split_on_silence: need frame_ms >= hop_ms > 0");
  }
  if (!(cfg.max_segment_s > 0)) {
    throw DataError("split_on_silence: max_segment_s must be positive");
  }

  const FrameGrid g =
      grid_for(audio.size(), audio.sample_rate_hz, cfg.frame_ms, cfg.hop_ms);
  const VecXd energies = frame_energies_db(audio, cfg.frame_ms, cfg.hop_ms);
  const double threshold =
      std::max(median_of(energies) + cfg.silence_threshold_db,
               cfg.absolute_floor_db);
  std::vector<bool> silent(static_cast<std::size_t>(g.count));
  for (Index f = 0; f < g.count; ++f) {
    silent[static_cast<std::size_t>(f)] = energies(f) < threshold;
  }

  // Runs of silent frames long enough to count as a pause become cut
  // regions; the cut lands on the midpoint of each region.
  const Index min_run =
      std::max<Index>(1, static_cast<Index>(
                             std::ceil(cfg.min_silence_ms / cfg.hop_ms)));
  std::vector<Index> cuts;
  Index run_start = -1;
  for (Index f = 0; f <= g.count; ++f) {
    const bool is_silent = f < g.count && silent[static_cast<std::size_t>(f)];
    if (is_silent && run_start < 0) run_start = f;
    if (!is_silent && run_start >= 0) {
      const Index run_len = f - run_start;
      if (run_len >= min_run) {
        const Index lo = g.start_of(run_start);
        const Index hi =
            std::min(audio.size(), g.start_of(f - 1) + g.frame_len);
        cuts.push_back((lo + hi) / 2);
      }
      run_start = -1;
    }
  }

  // Candidate spans between consecutive cuts; keep only spans that contain
  // at least one speech frame (by frame center).
  std::vector<std::pair<Index, Index>> spans;
  Index begin = 0;
  for (Index cut : cuts) {
    if (cut > begin) spans.emplace_back(begin, cut);
    begin = cut;
  }
  if (begin < audio.size()) spans.emplace_back(begin, audio.size());

  auto has_speech = [&](Index lo, Index hi) {
    for (Index f = 0; f < g.count; ++f) {
      const Index c = g.center_of(f);
      if (c >= lo && c < hi && !silent[static_cast<std::size_t>(f)]) {
        return true;
      }
    }
    return false;
  };

  const Index max_samples = static_cast<Index>(
      std::lround(cfg.max_segment_s * audio.sample_rate_hz));

  // Overlong spans re-split recursively at the weakest internal frame; ties
  // go to the frame nearest the span center so constant-energy audio splits
  // evenly.
  std::vector<std::pair<Index, Index>> final_spans;
  std::vector<std::pair<Index, Index>> work(spans.rbegin(), spans.rend());
  while (!work.empty()) {
    const auto [lo, hi] = work.back();
    work.pop_back();
    if (hi - lo <= max_samples) {
      final_spans.emplace_back(lo, hi);
      continue;
    }
    const Index mid = (lo + hi) / 2;
    double weakest = std::numeric_limits<double>::infinity();
    Index cut = -1;
    for (Index f = 0; f < g.count; ++f) {
      const Index c = g.center_of(f);
      if (c <= lo || c >= hi) continue;
      const double e = energies(f);
      if (e < weakest ||
          (e == weakest && std::abs(c - mid) < std::abs(cut - mid))) {
        weakest = e;
        cut = c;
      }
    }
    if (cut <= lo || cut >= hi) cut = mid;  // no internal frame: halve
    work.emplace_back(cut, hi);
    work.emplace_back(lo, cut);
  }
  std::sort(final_spans.begin(), final_spans.end());

  std::vector<AudioSegment> segments;
  for (const auto& [lo, hi] : final_spans) {
    if (!has_speech(lo, hi)) continue;
    segments.push_back(make_segment(audio, lo, hi));
  }
  return segments;
}

std::vector<AudioSegment> split_fixed(const AudioBuffer& audio,
                                      double chunk_s) {
  if (!(chunk_s > 0)) throw DataError("split_fixed: chunk_s must be positive");
  if (audio.size() == 0) throw DataError("split_fixed: empty audio");
  const Index chunk = std::max<Index>(
      1, static_cast<Index>(std::lround(chunk_s * audio.sample_rate_hz)));
  std::vector<AudioSegment> segments;
  for (Index begin = 0; begin < audio.size(); begin += chunk) {
    const Index end = std::min(audio.size(), begin + chunk);
    segments.push_back(make_segment(audio, begin, end));
  }
  return segments;
}

}  // namespace tundra::audio
