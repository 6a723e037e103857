#pragma once

namespace stokes_summa {

inline constexpr const char* version_string = "0.1.0";

}
