#pragma once

namespace zdip {

inline constexpr const char* library_version = "1.0.0";

// Version of the on-disk null-table format understood by save/load.
inline constexpr int table_format_version = 1;

}  // namespace zdip
