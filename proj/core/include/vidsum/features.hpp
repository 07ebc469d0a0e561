// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "vidsum/types.hpp"

namespace vidsum {

/// Per-frame image features of one video, stored row-major as f32.
///
/// The mean row is computed once in double precision over every frame of the
/// video and cached. Construction rejects NaN and Inf entries.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::string video_id, std::size_t num_frames, std::size_t dim, std::vector<float> data);

  const std::string& video_id() const { return video_id_; }
  std::size_t num_frames() const { return num_frames_; }
  std::size_t dim() const { return dim_; }

  std::span<const float> row(std::size_t i) const;
  std::span<const float> row(FrameIndex f) const { return row(f.index()); }
  std::span<const float> data() const { return data_; }
  std::span<const double> mean() const { return mean_; }

  friend bool operator==(const FeatureMatrix& a, const FeatureMatrix& b) {
    return a.video_id_ == b.video_id_ && a.num_frames_ == b.num_frames_ && a.dim_ == b.dim_ && a.data_ == b.data_;
  }

 private:
  std::string video_id_;
  std::size_t num_frames_ = 0;
  std::size_t dim_ = 0;
  std::vector<float> data_;
  std::vector<double> mean_;
};

/// rows[i] - mean, in double precision.
std::vector<double> mean_center(const FeatureMatrix& fm, FrameIndex i);

// VSFT binary: "VSFT", u32 version (1), u32 num_frames, u32 dim, then
// num_frames*dim f32, all little-endian, row-major.
inline constexpr std::uint32_t kVsftVersion = 1;

std::vector<std::uint8_t> encode_vsft(const FeatureMatrix& fm);
FeatureMatrix decode_vsft(std::span<const std::uint8_t> bytes, std::string video_id);

FeatureMatrix load_features(const std::filesystem::path& path, std::string video_id = {});
void save_features(const std::filesystem::path& path, const FeatureMatrix& fm);

/// Resolves video ids to VSFT files and caches loaded matrices.
///
/// A directory is searched for a `features.json` sidecar mapping video_id to a
/// file path (relative to the directory); without one, `<dir>/<video_id>.vsft`
/// is used. Safe to call from several threads.
class FeatureStore {
 public:
  explicit FeatureStore(std::filesystem::path root);

  std::filesystem::path path_for(const std::string& video_id) const;
  bool has(const std::string& video_id) const;
  std::shared_ptr<const FeatureMatrix> get(const std::string& video_id) const;

  /// Paths of every feature file the store has loaded so far, by video id.
  std::map<std::string, std::filesystem::path> loaded_paths() const;

 private:
  std::filesystem::path root_;
  std::map<std::string, std::filesystem::path> sidecar_;
  mutable std::mutex mu_;
  mutable std::map<std::string, std::shared_ptr<const FeatureMatrix>> cache_;
};

}  // namespace vidsum
