#pragma once

namespace adbd::cli {

#ifndef ADBD_TOOL_VERSION
#define ADBD_TOOL_VERSION "unknown"
#endif

inline constexpr const char* kToolVersion = ADBD_TOOL_VERSION;

}  // namespace adbd::cli
