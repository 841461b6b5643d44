#pragma once

namespace bbq {
inline constexpr const char* version = "0.1.0";
}
