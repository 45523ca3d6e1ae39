#pragma once

#include <string>
#include <vector>

namespace stainlab::cli {

// Exit codes: 0 ok, 1 fatal, 2 partial results, 64 usage error,
// 78 configuration error.
inline constexpr int kOk = 0;
inline constexpr int kFatal = 1;
inline constexpr int kPartial = 2;
inline constexpr int kUsage = 64;
inline constexpr int kConfigError = 78;

int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

}  // namespace stainlab::cli
