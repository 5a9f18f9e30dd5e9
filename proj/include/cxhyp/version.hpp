#pragma once

namespace cxhyp {

inline constexpr const char* kLibraryVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

} // namespace cxhyp
