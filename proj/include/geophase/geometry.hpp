#pragma once

#include "geophase/core.hpp"

#include <vector>

namespace geophase {

/// Ordered samples of a curve R[s] in parameter space. A closed path repeats
/// its first sample at the end.
class ParamPath {
 public:
  /// Validates: at least two samples, equal dimensions, finite coordinates,
  /// closed paths end where they start (1e-12), and no zero-length segments
  /// unless every sample is the same point.
  ParamPath(std::vector<ParameterPoint> samples, bool closed);

  const std::vector<ParameterPoint>& samples() const { return samples_; }
  const ParameterPoint& operator[](std::size_t k) const { return samples_[k]; }
  bool closed() const { return closed_; }
  /// Number of segments M (samples - 1).
  std::size_t segments() const { return samples_.size() - 1; }
  int dim() const { return static_cast<int>(samples_.front().size()); }
  bool is_single_point() const;
  double length() const;

  ParamPath reversed() const;

 private:
  std::vector<ParameterPoint> samples_;
  bool closed_;
};

struct EvolutionSchedule {
  ParamPath path;
  double total_time;
  int steps_per_segment;

  /// Throws DomainError unless total_time > 0 and steps_per_segment >= 1.
  EvolutionSchedule(ParamPath path, double total_time, int steps_per_segment);
};

/// Signed solid angle (steradians) subtended at the origin by a closed loop in
/// three-dimensional parameter space. Positive for counterclockwise traversal
/// seen from outside the sphere. Fanned from the loop centroid, so the value
/// describes the smaller of the two regions the loop bounds (|Omega| <= 2 pi
/// up to discretization); the complementary value is Omega -+ 4 pi.
double solid_angle(const ParamPath& loop);

/// Piecewise-linear reparameterization to M segments. When M is at least the
/// current segment count the original vertices are kept, so the traced
/// polyline is unchanged.
ParamPath resample(const ParamPath& path, std::size_t m);

enum class LoopKind { Cone, GreatCircle, Point };

/// Closed loops on the unit sphere in a 3-parameter space, traversed with
/// increasing azimuth. theta is only read for cones.
ParamPath standard_loop(LoopKind kind, std::size_t m, double theta = 0.0);

inline ParamPath cone_loop(double theta, std::size_t m) {
  return standard_loop(LoopKind::Cone, m, theta);
}

ParameterPoint spherical_point(double r, double theta, double phi);

}  // namespace geophase
