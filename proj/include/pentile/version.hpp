#pragma once

namespace pentile {

inline constexpr const char* kCodeVersion = "pentile 0.3.0";

// Bumped whenever the on-disk layout of ball/census caches changes.
inline constexpr int kCacheFormatVersion = 3;

} // namespace pentile
