#ifndef NLWAVE_VERSION_HPP
#define NLWAVE_VERSION_HPP

#include <string_view>

namespace nlwave {
inline constexpr std::string_view library_version = "0.1.0";
}

#endif
