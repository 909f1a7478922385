#pragma once

namespace lorch {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace lorch
