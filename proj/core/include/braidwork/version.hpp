#pragma once

namespace braidwork {

inline constexpr const char* kVersion = "0.1.0";
// Bumped whenever report content/layout changes; part of cache keys.
inline constexpr const char* kReportSchema = "braidwork-report-v1";

} // namespace braidwork
