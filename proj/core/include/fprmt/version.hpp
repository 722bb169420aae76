#pragma once

namespace fprmt {

#ifdef FPRMT_VERSION
inline constexpr const char* kVersion = FPRMT_VERSION;
#else
inline constexpr const char* kVersion = "unknown";
#endif

}  // namespace fprmt
