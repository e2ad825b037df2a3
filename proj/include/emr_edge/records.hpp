#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace emr_edge {

// The three record tiers, in canonical order.
enum class FileClass : std::uint8_t { Text = 0, Image = 1, Video = 2 };

inline constexpr std::array<FileClass, 3> kAllClasses{FileClass::Text, FileClass::Image,
                                                      FileClass::Video};

enum class VideoMode : std::uint8_t { Conventional, Dvs };

inline constexpr std::string_view to_string(FileClass c) {
  switch (c) {
    case FileClass::Text: return "text";
    case FileClass::Image: return "image";
    case FileClass::Video: return "video";
  }
  return "?";
}

inline FileClass parse_file_class(std::string_view s) {
  if (s == "text") return FileClass::Text;
  if (s == "image") return FileClass::Image;
  if (s == "video") return FileClass::Video;
  throw std::invalid_argument("unknown file class '" + std::string(s) + "'");
}

inline constexpr std::string_view to_string(VideoMode m) {
  return m == VideoMode::Dvs ? "dvs" : "conventional";
}

inline VideoMode parse_video_mode(std::string_view s) {
  if (s == "dvs") return VideoMode::Dvs;
  if (s == "conventional") return VideoMode::Conventional;
  throw std::invalid_argument("unknown video mode '" + std::string(s) + "'");
}

// A subset of the three file classes, stored as a 3-bit mask
// (bit 0 = Text, bit 1 = Image, bit 2 = Video).
class FileSet {
 public:
  static constexpr std::uint8_t kFullMask = 0b111;
  static constexpr std::size_t kCount = 8;

  constexpr FileSet() = default;
  constexpr FileSet(std::initializer_list<FileClass> classes) {
    for (auto c : classes) mask_ |= bit(c);
  }

  static constexpr FileSet from_mask(std::uint8_t mask) {
    if (mask > kFullMask) throw std::out_of_range("file set mask out of range");
    FileSet s;
    s.mask_ = mask;
    return s;
  }
  static constexpr FileSet all() { return from_mask(kFullMask); }
  static constexpr FileSet none() { return {}; }

  // All 8 subsets in mask order, starting with the empty set.
  static constexpr std::array<FileSet, kCount> power_set() {
    std::array<FileSet, kCount> out{};
    for (std::uint8_t m = 0; m < kCount; ++m) out[m] = from_mask(m);
    return out;
  }

  constexpr std::uint8_t mask() const { return mask_; }
  constexpr bool contains(FileClass c) const { return (mask_ & bit(c)) != 0; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr int count() const {
    return ((mask_ >> 0) & 1) + ((mask_ >> 1) & 1) + ((mask_ >> 2) & 1);
  }
  constexpr bool is_subset_of(FileSet other) const { return (mask_ & ~other.mask_) == 0; }

  constexpr FileSet with(FileClass c) const { return from_mask(mask_ | bit(c)); }
  constexpr FileSet without(FileClass c) const {
    return from_mask(static_cast<std::uint8_t>(mask_ & ~bit(c)));
  }
  constexpr FileSet complement() const {
    return from_mask(static_cast<std::uint8_t>(~mask_ & kFullMask));
  }
  friend constexpr FileSet operator|(FileSet a, FileSet b) {
    return from_mask(a.mask_ | b.mask_);
  }
  friend constexpr FileSet operator&(FileSet a, FileSet b) {
    return from_mask(a.mask_ & b.mask_);
  }
  friend constexpr bool operator==(FileSet, FileSet) = default;

  std::vector<FileClass> classes() const {
    std::vector<FileClass> out;
    for (auto c : kAllClasses)
      if (contains(c)) out.push_back(c);
    return out;
  }

  // "text+image", or "none" for the empty set.
  std::string label() const {
    if (empty()) return "none";
    std::string out;
    for (auto c : classes()) {
      if (!out.empty()) out += '+';
      out += to_string(c);
    }
    return out;
  }

 private:
  static constexpr std::uint8_t bit(FileClass c) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(c));
  }
  std::uint8_t mask_ = 0;
};

// Per-class record sizes in GB (10^9 bytes).
struct RecordSet {
  double text_gb = 3.0;
  double image_gb = 87.0;
  double video_conventional_gb = 200.0;
  double video_dvs_gb = 16.66;

  double size_of(FileClass c, VideoMode mode) const {
    switch (c) {
      case FileClass::Text: return text_gb;
      case FileClass::Image: return image_gb;
      case FileClass::Video:
        return mode == VideoMode::Dvs ? video_dvs_gb : video_conventional_gb;
    }
    return 0.0;
  }

  bool valid() const {
    return text_gb >= 0 && image_gb >= 0 && video_conventional_gb >= 0 && video_dvs_gb >= 0 &&
           video_dvs_gb <= video_conventional_gb;
  }

  friend bool operator==(const RecordSet&, const RecordSet&) = default;
};

// Inverse of FileSet::label().
inline FileSet parse_file_set(std::string_view label) {
  FileSet out;
  if (label == "none") return out;
  while (!label.empty()) {
    const auto plus = label.find('+');
    const auto part = label.substr(0, plus);
    const auto c = parse_file_class(part);
    if (out.contains(c)) throw std::invalid_argument("file class repeated in '" + std::string(label) + "'");
    out = out.with(c);
    if (plus == std::string_view::npos) break;
    label.remove_prefix(plus + 1);
    if (label.empty()) throw std::invalid_argument("trailing '+' in file set label");
  }
  return out;
}

inline double subset_size(FileSet subset, const RecordSet& records, VideoMode mode) {
  double total = 0.0;
  for (auto c : kAllClasses)
    if (subset.contains(c)) total += records.size_of(c, mode);
  return total;
}

inline double full_emr_size(const RecordSet& records, VideoMode mode) {
  return subset_size(FileSet::all(), records, mode);
}

}  // namespace emr_edge
