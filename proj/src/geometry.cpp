#include "jambeam/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "jambeam/error.hpp"

namespace jambeam {

double distance(Point2 a, Point2 b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

double arc_length(std::span<const Point2> line) noexcept {
  double total = 0.0;
  for (std::size_t i = 1; i < line.size(); ++i) total += distance(line[i - 1], line[i]);
  return total;
}

Point2 point_at(std::span<const Point2> line, double s) {
  if (line.empty()) throw Error(ErrorKind::InvalidArgument, "empty polyline");
  if (s <= 0.0) return line.front();
  double walked = 0.0;
  for (std::size_t i = 1; i < line.size(); ++i) {
    const double len = distance(line[i - 1], line[i]);
    if (walked + len >= s && len > 0.0) {
      const double t = (s - walked) / len;
      return {line[i - 1].x + t * (line[i].x - line[i - 1].x), line[i - 1].y + t * (line[i].y - line[i - 1].y)};
    }
    walked += len;
  }
  return line.back();
}

Polyline prefix(std::span<const Point2> line, double s) {
  Polyline out;
  if (line.empty()) return out;
  out.push_back(line.front());
  double walked = 0.0;
  for (std::size_t i = 1; i < line.size(); ++i) {
    const double len = distance(line[i - 1], line[i]);
    if (walked + len >= s) {
      const double t = len > 0.0 ? (s - walked) / len : 0.0;
      if (t > 0.0) {
        out.push_back({line[i - 1].x + t * (line[i].x - line[i - 1].x), line[i - 1].y + t * (line[i].y - line[i - 1].y)});
      }
      return out;
    }
    walked += len;
    out.push_back(line[i]);
  }
  return out;
}

Polyline resample(std::span<const Point2> line, int count) {
  if (count < 2) throw Error(ErrorKind::InvalidArgument, "resample needs at least two points");
  if (line.empty()) throw Error(ErrorKind::InvalidArgument, "empty polyline");
  const double total = arc_length(line);
  Polyline out;
  out.reserve(static_cast<std::size_t>(count));
  // Single forward sweep; point_at per sample would be quadratic.
  std::size_t seg = 1;
  double seg_start = 0.0;
  for (int k = 0; k < count; ++k) {
    const double s = total * static_cast<double>(k) / static_cast<double>(count - 1);
    if (line.size() == 1) {
      out.push_back(line.front());
      continue;
    }
    while (seg + 1 < line.size() && seg_start + distance(line[seg - 1], line[seg]) < s) {
      seg_start += distance(line[seg - 1], line[seg]);
      ++seg;
    }
    const Point2 a = line[seg - 1];
    const Point2 b = line[seg];
    const double len = distance(a, b);
    const double t = len > 0.0 ? std::clamp((s - seg_start) / len, 0.0, 1.0) : 0.0;
    out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
  }
  out.back() = line.back();
  return out;
}

Pose2 advance_along_arc(const Pose2& start, double curvature, double ds) noexcept {
  Pose2 end = start;
  end.heading = start.heading + curvature * ds;
  if (std::abs(curvature * ds) < 1e-12) {
    end.x = start.x + ds * std::cos(start.heading);
    end.y = start.y + ds * std::sin(start.heading);
  } else {
    end.x = start.x + (std::sin(end.heading) - std::sin(start.heading)) / curvature;
    end.y = start.y - (std::cos(end.heading) - std::cos(start.heading)) / curvature;
  }
  return end;
}

double discrete_frechet(std::span<const Point2> a, std::span<const Point2> b) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::InvalidArgument, "discrete Frechet of an empty curve");
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<double> prev(m), cur(m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double d = distance(a[i], b[j]);
      double best;
      if (i == 0 && j == 0) best = d;
      else if (i == 0) best = std::max(cur[j - 1], d);
      else if (j == 0) best = std::max(prev[0], d);
      else best = std::max(std::min({prev[j], prev[j - 1], cur[j - 1]}), d);
      cur[j] = best;
    }
    std::swap(prev, cur);
  }
  return prev[m - 1];
}

double shape_distance(std::span<const Point2> a, std::span<const Point2> b, int samples) {
  const Polyline ra = resample(a, samples);
  const Polyline rb = resample(b, samples);
  return discrete_frechet(ra, rb);
}

}  // namespace jambeam
