#pragma once

// placeholder; filled in once the training stack exists
namespace kpa::cli {
inline int run(int, char**) { return 0; }
}  // namespace kpa::cli
