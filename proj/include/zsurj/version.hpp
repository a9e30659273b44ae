#pragma once

namespace zsurj {

inline constexpr const char* version = "0.1.0";

}
