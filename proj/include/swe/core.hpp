#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace swe {

// ---- small 2D vector ----

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

// Rotate by -90 degrees. For a CCW-traversed polygon edge a->b, perp(b-a) is
// the outward normal scaled by the edge length.
inline Vec2 perp(Vec2 a) { return {a.y, -a.x}; }

// ---- error types (mapped to CLI exit codes) ----

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// invalid configuration, parameters, or oracle inputs
struct ConfigError : Error {
    using Error::Error;
};

// invalid mesh topology/geometry or mesh file contents
struct MeshError : Error {
    using Error::Error;
};

// runtime solver failure: positivity loss, NaN, non-convergence
struct SolverError : Error {
    using Error::Error;
};

// file I/O failure
struct IoError : Error {
    using Error::Error;
};

}  // namespace swe
