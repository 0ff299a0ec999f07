#pragma once

#include <cmath>

namespace dirtsch {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Vec2&) const = default;
};

inline double distance(const Vec2& a, const Vec2& b) {
    return std::hypot(b.x - a.x, b.y - a.y);
}

// Bearing of `to` as seen from `from`, counterclockwise from east, in [0, 360).
// Callers must not pass identical positions (direction undefined).
inline double azimuthDeg(const Vec2& from, const Vec2& to) {
    double deg = std::atan2(to.y - from.y, to.x - from.x) * 180.0 / M_PI;
    if (deg < 0.0) deg += 360.0;
    if (deg >= 360.0) deg = 0.0;
    return deg;
}

}  // namespace dirtsch
