#pragma once

#include <string_view>

namespace smp {

/// Support of a distribution. PositiveHalfLine is the Stieltjes setting
/// (0, inf); RealLine is the Hamburger setting with the origin excluded.
enum class Domain
{
    PositiveHalfLine,
    RealLine,
};

constexpr std::string_view to_string(Domain d)
{
    return d == Domain::PositiveHalfLine ? "positive-half-line" : "real-line";
}

}  // namespace smp
