#pragma once

namespace mongeo {

inline constexpr int kVersionMajor = 1;
inline constexpr int kVersionMinor = 0;
inline constexpr int kVersionPatch = 0;
inline constexpr const char* kVersionString = "1.0.0";

/// Format tag written into file headers; bump only on layout changes.
inline constexpr const char* kFormatTag = "mongeo v1";

} // namespace mongeo
