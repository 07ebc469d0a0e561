// SPDX-License-Identifier: Apache-2.0
#include "vidsum/features.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "vidsum/error.hpp"
#include "vidsum/file_util.hpp"

namespace vidsum {

FeatureMatrix::FeatureMatrix(std::string video_id, std::size_t num_frames, std::size_t dim, std::vector<float> data)
    : video_id_(std::move(video_id)), num_frames_(num_frames), dim_(dim), data_(std::move(data)) {
  if (num_frames_ == 0 || dim_ == 0) {
    throw ValidationError("features '" + video_id_ + "': num_frames and dim must be positive");
  }
  if (data_.size() != num_frames_ * dim_) {
    throw ValidationError("features '" + video_id_ + "': payload size does not match num_frames x dim");
  }
  for (std::size_t k = 0; k < data_.size(); ++k) {
    if (!std::isfinite(data_[k])) {
      throw ValidationError("features '" + video_id_ + "': non-finite value at frame " + std::to_string(k / dim_) +
                            ", dim " + std::to_string(k % dim_));
    }
  }
  mean_.assign(dim_, 0.0);
  for (std::size_t i = 0; i < num_frames_; ++i) {
    const float* r = data_.data() + i * dim_;
    for (std::size_t d = 0; d < dim_; ++d) mean_[d] += r[d];
  }
  for (auto& m : mean_) m /= static_cast<double>(num_frames_);
}

std::span<const float> FeatureMatrix::row(std::size_t i) const {
  if (i >= num_frames_) {
    throw ValidationError("features '" + video_id_ + "': frame " + std::to_string(i) + " out of range (" +
                          std::to_string(num_frames_) + " frames)");
  }
  return std::span<const float>(data_).subspan(i * dim_, dim_);
}

std::vector<double> mean_center(const FeatureMatrix& fm, FrameIndex i) {
  const auto r = fm.row(i);
  const auto m = fm.mean();
  std::vector<double> out(fm.dim());
  for (std::size_t d = 0; d < out.size(); ++d) out[d] = static_cast<double>(r[d]) - m[d];
  return out;
}

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t off) {
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(in[off + b]) << (8 * b);
  return v;
}

constexpr std::size_t kHeaderBytes = 16;

}  // namespace

std::vector<std::uint8_t> encode_vsft(const FeatureMatrix& fm) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + fm.data().size() * 4);
  out.insert(out.end(), {'V', 'S', 'F', 'T'});
  put_u32(out, kVsftVersion);
  put_u32(out, static_cast<std::uint32_t>(fm.num_frames()));
  put_u32(out, static_cast<std::uint32_t>(fm.dim()));
  for (float f : fm.data()) put_u32(out, std::bit_cast<std::uint32_t>(f));
  return out;
}

FeatureMatrix decode_vsft(std::span<const std::uint8_t> bytes, std::string video_id) {
  if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), "VSFT", 4) != 0) {
    throw ParseError("features '" + video_id + "': bad VSFT magic");
  }
  const std::uint32_t version = get_u32(bytes, 4);
  if (version != kVsftVersion) {
    throw ParseError("features '" + video_id + "': unsupported VSFT version " + std::to_string(version));
  }
  const std::uint64_t frames = get_u32(bytes, 8);
  const std::uint64_t dim = get_u32(bytes, 12);
  const std::uint64_t expected = kHeaderBytes + frames * dim * 4;
  if (bytes.size() != expected) {
    throw ParseError("features '" + video_id + "': payload is " + std::to_string(bytes.size()) + " bytes, expected " +
                     std::to_string(expected));
  }
  std::vector<float> data(frames * dim);
  for (std::size_t k = 0; k < data.size(); ++k) {
    data[k] = std::bit_cast<float>(get_u32(bytes, kHeaderBytes + 4 * k));
  }
  return FeatureMatrix(std::move(video_id), frames, dim, std::move(data));
}

FeatureMatrix load_features(const std::filesystem::path& path, std::string video_id) {
  if (video_id.empty()) video_id = path.stem().string();
  const auto bytes = read_file_bytes(path);
  return decode_vsft(bytes, std::move(video_id));
}

void save_features(const std::filesystem::path& path, const FeatureMatrix& fm) {
  write_file_atomic(path, encode_vsft(fm));
}

FeatureStore::FeatureStore(std::filesystem::path root) : root_(std::move(root)) {
  const auto sidecar = root_ / "features.json";
  if (std::filesystem::is_regular_file(sidecar)) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_file_text(sidecar));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(sidecar.string() + ": " + e.what());
    }
    if (!j.is_object()) throw ParseError(sidecar.string() + ": expected an object of video_id -> file");
    for (const auto& [id, file] : j.items()) {
      if (!file.is_string()) throw ParseError(sidecar.string() + ": entry '" + id + "' is not a string");
      sidecar_[id] = root_ / file.get<std::string>();
    }
  } else if (!std::filesystem::is_directory(root_)) {
    throw IoError("feature directory not found: " + root_.string());
  }
}

std::filesystem::path FeatureStore::path_for(const std::string& video_id) const {
  if (auto it = sidecar_.find(video_id); it != sidecar_.end()) return it->second;
  return root_ / (video_id + ".vsft");
}

bool FeatureStore::has(const std::string& video_id) const {
  return std::filesystem::is_regular_file(path_for(video_id));
}

std::shared_ptr<const FeatureMatrix> FeatureStore::get(const std::string& video_id) const {
  {
    std::lock_guard lock(mu_);
    if (auto it = cache_.find(video_id); it != cache_.end()) return it->second;
  }
  const auto path = path_for(video_id);
  if (!std::filesystem::is_regular_file(path)) {
    throw IoError("features for video '" + video_id + "' not found at " + path.string());
  }
  auto fm = std::make_shared<const FeatureMatrix>(load_features(path, video_id));
  std::lock_guard lock(mu_);
  return cache_.emplace(video_id, std::move(fm)).first->second;
}

std::map<std::string, std::filesystem::path> FeatureStore::loaded_paths() const {
  std::lock_guard lock(mu_);
  std::map<std::string, std::filesystem::path> out;
  for (const auto& [id, _] : cache_) out[id] = path_for(id);
  return out;
}

}  // namespace vidsum
