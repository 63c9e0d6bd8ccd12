#pragma once

#include <concepts>
#include <sstream>
#include <string>

namespace vofde::detail {

// Diagnostic formatting: integers as-is, reals with 10 significant digits.
template <std::integral T>
std::string str(T value)
{
    return std::to_string(value);
}

inline std::string str(double value)
{
    std::ostringstream os;
    os.precision(10);
    os << value;
    return os.str();
}

}  // namespace vofde::detail
