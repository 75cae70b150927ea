#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace r2d {

/// Lattice vector in N^2. Used for shapes, depths, shift exponents and
/// groupoid degrees (where components may be negative).
struct Vec2 {
    int x = 0;
    int y = 0;

    constexpr Vec2() = default;
    constexpr Vec2(int x_, int y_) : x(x_), y(y_) {}

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }
    friend constexpr bool operator!=(Vec2 a, Vec2 b) { return !(a == b); }

    /// Componentwise partial order on N^2.
    friend constexpr bool leq(Vec2 a, Vec2 b) { return a.x <= b.x && a.y <= b.y; }
    friend constexpr Vec2 cmin(Vec2 a, Vec2 b) { return {a.x < b.x ? a.x : b.x, a.y < b.y ? a.y : b.y}; }
    friend constexpr Vec2 cmax(Vec2 a, Vec2 b) { return {a.x > b.x ? a.x : b.x, a.y > b.y ? a.y : b.y}; }

    constexpr long long area() const { return static_cast<long long>(x) * y; }
    constexpr bool nonneg() const { return x >= 0 && y >= 0; }

    /// Total order for use as map key (not the componentwise order).
    friend constexpr bool operator<(Vec2 a, Vec2 b) {
        return a.y != b.y ? a.y < b.y : a.x < b.x;
    }
};

inline Vec2 unit_vec(int direction) { return direction == 1 ? Vec2{1, 0} : Vec2{0, 1}; }

inline std::string to_string(Vec2 v) {
    return std::to_string(v.x) + "," + std::to_string(v.y);
}

/// Error with a stable machine-readable code alongside the human message.
/// Codes are kebab-case, e.g. "shape-overflow", "depth-too-small".
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

/// Cap on enumeration candidate spaces; see SftSpec enumeration.
constexpr std::uint64_t kDefaultCandidateBound = std::uint64_t(1) << 24;

} // namespace r2d
