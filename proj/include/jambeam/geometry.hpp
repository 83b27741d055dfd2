#pragma once

#include <span>
#include <vector>

namespace jambeam {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;  // radians from +x, counter-clockwise
};

using Polyline = std::vector<Point2>;

double distance(Point2 a, Point2 b) noexcept;
double arc_length(std::span<const Point2> line) noexcept;

// Point at arc length s, clamped to the ends.
Point2 point_at(std::span<const Point2> line, double s);

// Leading part of the line up to arc length s (whole line if s exceeds it).
Polyline prefix(std::span<const Point2> line, double s);

// `count` points evenly spaced in arc length, endpoints included.
Polyline resample(std::span<const Point2> line, int count);

// Pose reached after travelling `ds` along a circular arc of curvature
// `curvature` (straight line when zero) starting from `start`.
Pose2 advance_along_arc(const Pose2& start, double curvature, double ds) noexcept;

// Classic coupling (Eiter-Mannila) discrete Frechet distance.
double discrete_frechet(std::span<const Point2> a, std::span<const Point2> b);

// Both curves resampled to `samples` points, then discrete Frechet.
double shape_distance(std::span<const Point2> a, std::span<const Point2> b, int samples = 64);

}  // namespace jambeam
