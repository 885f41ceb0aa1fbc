#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <string>

#include "delzant/errors.hpp"
#include "delzant/scalar.hpp"

namespace delzant {

struct IntVec2 {
  std::int64_t x = 0;
  std::int64_t y = 0;

  bool operator==(const IntVec2&) const = default;
  IntVec2 operator+(const IntVec2& o) const { return {x + o.x, y + o.y}; }
  IntVec2 operator-(const IntVec2& o) const { return {x - o.x, y - o.y}; }
  IntVec2 operator-() const { return {-x, -y}; }
  IntVec2 operator*(std::int64_t c) const { return {x * c, y * c}; }
};

inline std::int64_t cross(const IntVec2& a, const IntVec2& b) { return a.x * b.y - a.y * b.x; }
inline std::int64_t dot(const IntVec2& a, const IntVec2& b) { return a.x * b.x + a.y * b.y; }

/// 90 degrees clockwise: the outward normal of an edge of a counterclockwise polygon.
inline IntVec2 rotate_clockwise(const IntVec2& v) { return {v.y, -v.x}; }

inline bool is_primitive(const IntVec2& v) { return std::gcd(v.x, v.y) == 1; }

struct Point {
  Scalar x;
  Scalar y;
  bool operator==(const Point&) const = default;
  Point operator+(const Point& o) const { return {x + o.x, y + o.y}; }
  Point operator-(const Point& o) const { return {x - o.x, y - o.y}; }
};

inline Point operator*(const Scalar& t, const IntVec2& v) {
  return {t * static_cast<long long>(v.x), t * static_cast<long long>(v.y)};
}

/// Row-major 2x2 integer matrix.
struct IntMat2 {
  std::int64_t a = 1, b = 0, c = 0, d = 1;

  bool operator==(const IntMat2&) const = default;
  std::int64_t det() const { return a * d - b * c; }
  IntVec2 operator*(const IntVec2& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
  IntMat2 operator*(const IntMat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  Point operator*(const Point& p) const {
    return {p.x * static_cast<long long>(a) + p.y * static_cast<long long>(b),
            p.x * static_cast<long long>(c) + p.y * static_cast<long long>(d)};
  }
  /// Inverse of a unimodular matrix.
  IntMat2 inverse() const {
    std::int64_t D = det();
    if (D != 1 && D != -1) throw InvalidInput("matrix is not unimodular");
    return {d * D, -b * D, -c * D, a * D};
  }

  /// Matrix with the given columns.
  static IntMat2 from_columns(const IntVec2& c0, const IntVec2& c1) { return {c0.x, c1.x, c0.y, c1.y}; }
};

/// x -> A x + t with det A = +-1.
class UnimodularAffineMap {
 public:
  UnimodularAffineMap() = default;
  UnimodularAffineMap(IntMat2 matrix, Point translation) : matrix_(matrix), translation_(std::move(translation)) {
    if (matrix_.det() != 1 && matrix_.det() != -1)
      throw InvalidInput("affine map matrix must have determinant +-1, got " + std::to_string(matrix_.det()));
  }

  static UnimodularAffineMap identity() { return {}; }
  static UnimodularAffineMap translation(Point t) { return {IntMat2{}, std::move(t)}; }

  const IntMat2& matrix() const { return matrix_; }
  const Point& translation() const { return translation_; }
  std::int64_t det() const { return matrix_.det(); }

  Point operator()(const Point& p) const { return matrix_ * p + translation_; }
  IntVec2 apply_linear(const IntVec2& v) const { return matrix_ * v; }

  /// (this o other)(x) = this(other(x)).
  UnimodularAffineMap compose(const UnimodularAffineMap& other) const {
    return {matrix_ * other.matrix_, (*this)(other.translation_)};
  }

  UnimodularAffineMap inverse() const {
    IntMat2 inv = matrix_.inverse();
    Point t = inv * translation_;
    return {inv, Point{-t.x, -t.y}};
  }

  bool operator==(const UnimodularAffineMap&) const = default;

 private:
  IntMat2 matrix_{};
  Point translation_{};
};

}  // namespace delzant
