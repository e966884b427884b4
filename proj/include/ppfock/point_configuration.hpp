#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace ppfock {

/// Observation window [a, b].
struct Window {
  double a = 0.0;
  double b = 1.0;

  Window() = default;
  Window(double lo, double hi) : a(lo), b(hi) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
      throw std::invalid_argument("Window: need finite a < b, got [" + std::to_string(lo) + ", " +
                                  std::to_string(hi) + "]");
  }

  double length() const { return b - a; }
  bool contains(double x) const { return x >= a && x <= b; }
  bool operator==(const Window&) const = default;
};

/// A finite simple configuration of points in a window, kept sorted.
class PointConfiguration {
 public:
  PointConfiguration() = default;
  explicit PointConfiguration(Window w) : window_(w) {}

  /// Sorts the points and checks they are distinct and inside the window.
  PointConfiguration(Window w, std::vector<double> points) : window_(w), points_(std::move(points)) {
    std::sort(points_.begin(), points_.end());
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (!w.contains(points_[i]))
        throw std::invalid_argument("PointConfiguration: point " + std::to_string(points_[i]) +
                                    " outside window");
      if (i > 0 && !(points_[i - 1] < points_[i]))
        throw std::invalid_argument("PointConfiguration: repeated point " +
                                    std::to_string(points_[i]));
    }
  }

  const Window& window() const { return window_; }
  const std::vector<double>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  /// Number of points in [lo, hi).
  std::size_t count_in(double lo, double hi) const {
    auto first = std::lower_bound(points_.begin(), points_.end(), lo);
    auto last = std::lower_bound(points_.begin(), points_.end(), hi);
    return static_cast<std::size_t>(last - first);
  }

  /// Translate points and window by `offset`.
  PointConfiguration shifted(double offset) const {
    std::vector<double> p(points_);
    for (auto& x : p) x += offset;
    return PointConfiguration(Window(window_.a + offset, window_.b + offset), std::move(p));
  }

  /// Affine image x -> (x - window.a) * (to.length() / window.length()) + to.a.
  PointConfiguration mapped_to(Window to) const {
    const double s = to.length() / window_.length();
    std::vector<double> p(points_);
    for (auto& x : p) x = std::clamp(to.a + (x - window_.a) * s, to.a, to.b);
    return PointConfiguration(to, std::move(p));
  }

 private:
  Window window_{};
  std::vector<double> points_;
};

using Batch = std::vector<PointConfiguration>;

}  // namespace ppfock
