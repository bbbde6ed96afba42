#pragma once

namespace rav {

inline constexpr const char* kToolVersion = "rav 0.1.0";
inline constexpr const char* kReportSchema = "rav-report/1";

} // namespace rav
