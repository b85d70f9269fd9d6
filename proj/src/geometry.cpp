#include "geophase/geometry.hpp"

#include "geophase/errors.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace geophase {

namespace {

std::vector<double> to_std(const ParameterPoint& r) {
  return {r.data(), r.data() + r.size()};
}

ParameterPoint lerp(const ParameterPoint& a, const ParameterPoint& b, double s) {
  return a + s * (b - a);
}

}  // namespace

ParamPath::ParamPath(std::vector<ParameterPoint> samples, bool closed)
    : samples_(std::move(samples)), closed_(closed) {
  if (samples_.size() < 2) {
    throw Error(ErrorKind::DomainError, "a path needs at least two samples");
  }
  const auto n = samples_.front().size();
  if (n < 1) throw Error(ErrorKind::DomainError, "zero-dimensional parameter space");
  for (const auto& p : samples_) {
    if (p.size() != n) {
      throw Error(ErrorKind::DimensionMismatch, "path samples differ in dimension",
                  to_std(p));
    }
    if (!p.allFinite()) {
      throw Error(ErrorKind::DomainError, "non-finite path sample", to_std(p));
    }
  }
  if (closed_ &&
      (samples_.front() - samples_.back()).cwiseAbs().maxCoeff() > 1e-12) {
    throw Error(ErrorKind::NotClosed, "closed path must end at its first sample",
                to_std(samples_.back()));
  }
  if (!is_single_point()) {
    for (std::size_t k = 0; k + 1 < samples_.size(); ++k) {
      if ((samples_[k + 1] - samples_[k]).norm() == 0.0) {
        throw Error(ErrorKind::DomainError, "zero-length path segment",
                    to_std(samples_[k]));
      }
    }
  }
}

bool ParamPath::is_single_point() const {
  return std::all_of(samples_.begin(), samples_.end(), [&](const auto& p) {
    return (p - samples_.front()).norm() == 0.0;
  });
}

double ParamPath::length() const {
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < samples_.size(); ++k) {
    total += (samples_[k + 1] - samples_[k]).norm();
  }
  return total;
}

ParamPath ParamPath::reversed() const {
  std::vector<ParameterPoint> rev(samples_.rbegin(), samples_.rend());
  return ParamPath(std::move(rev), closed_);
}

EvolutionSchedule::EvolutionSchedule(ParamPath p, double t, int steps)
    : path(std::move(p)), total_time(t), steps_per_segment(steps) {
  if (!(total_time > 0.0) || !std::isfinite(total_time)) {
    throw Error(ErrorKind::DomainError, "total time must be positive");
  }
  if (steps_per_segment < 1) {
    throw Error(ErrorKind::DomainError, "steps_per_segment must be >= 1");
  }
}

double solid_angle(const ParamPath& loop) {
  if (!loop.closed()) {
    throw Error(ErrorKind::NotClosed, "solid angle needs a closed loop");
  }
  if (loop.dim() != 3) {
    throw Error(ErrorKind::DimensionMismatch,
                "solid angle is defined for three-parameter loops only");
  }
  const auto& pts = loop.samples();
  std::vector<Eigen::Vector3d> unit;
  unit.reserve(pts.size());
  for (const auto& p : pts) {
    const Eigen::Vector3d v = p.head<3>();
    if (v.norm() < 1e-12) {
      throw Error(ErrorKind::OriginOnLoop, "loop passes through the origin",
                  to_std(p));
    }
    unit.push_back(v.normalized());
  }

  // Fan apex: spherical centroid, or for loops balanced around the origin
  // (great circles) the oriented area normal flipped into a fixed half-space
  // so reversing the loop reuses the same apex.
  Eigen::Vector3d apex = Eigen::Vector3d::Zero();
  for (std::size_t k = 0; k + 1 < unit.size(); ++k) apex += unit[k];
  if (apex.norm() < 1e-6 * static_cast<double>(unit.size())) {
    Eigen::Vector3d area = Eigen::Vector3d::Zero();
    for (std::size_t k = 0; k + 1 < unit.size(); ++k) {
      area += unit[k].cross(unit[k + 1]);
    }
    if (area.norm() < 1e-12) return 0.0;
    for (int i = 0; i < 3; ++i) {
      if (std::abs(area(i)) > 1e-12) {
        if (area(i) < 0.0) area = -area;
        break;
      }
    }
    apex = area;
  }
  apex.normalize();

  // Van Oosterom-Strackee signed triangle solid angle, summed over the fan.
  double omega = 0.0;
  for (std::size_t k = 0; k + 1 < unit.size(); ++k) {
    const Eigen::Vector3d& a = unit[k];
    const Eigen::Vector3d& b = unit[k + 1];
    const double num = apex.dot(a.cross(b));
    const double den = 1.0 + apex.dot(a) + a.dot(b) + b.dot(apex);
    omega += 2.0 * std::atan2(num, den);
  }
  return omega;
}

ParamPath resample(const ParamPath& path, std::size_t m) {
  if (m < 1) throw Error(ErrorKind::DomainError, "resample needs M >= 1");
  const auto& pts = path.samples();
  const std::size_t nseg = path.segments();

  if (path.is_single_point()) {
    return ParamPath(std::vector<ParameterPoint>(m + 1, pts.front()), path.closed());
  }

  std::vector<double> seg_len(nseg);
  for (std::size_t k = 0; k < nseg; ++k) seg_len[k] = (pts[k + 1] - pts[k]).norm();
  const double total = std::accumulate(seg_len.begin(), seg_len.end(), 0.0);

  std::vector<ParameterPoint> out;
  out.reserve(m + 1);

  if (m >= nseg) {
    // Largest-remainder split of the M new segments, at least one per
    // original segment.
    std::vector<std::size_t> count(nseg, 1);
    const std::size_t spare = m - nseg;
    std::vector<double> share(nseg);
    std::size_t used = 0;
    for (std::size_t k = 0; k < nseg; ++k) {
      share[k] = static_cast<double>(spare) * seg_len[k] / total;
      const auto whole = static_cast<std::size_t>(std::floor(share[k]));
      count[k] += whole;
      used += whole;
      share[k] -= static_cast<double>(whole);
    }
    std::vector<std::size_t> order(nseg);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return share[a] > share[b]; });
    for (std::size_t i = 0; used < spare; ++i, ++used) ++count[order[i % nseg]];

    for (std::size_t k = 0; k < nseg; ++k) {
      for (std::size_t j = 0; j < count[k]; ++j) {
        out.push_back(lerp(pts[k], pts[k + 1],
                           static_cast<double>(j) / static_cast<double>(count[k])));
      }
    }
    out.push_back(pts.back());
  } else {
    // Coarsening: uniform in arc length.
    std::size_t seg = 0;
    double seg_start = 0.0;
    out.push_back(pts.front());
    for (std::size_t j = 1; j < m; ++j) {
      const double target = total * static_cast<double>(j) / static_cast<double>(m);
      while (seg + 1 < nseg && seg_start + seg_len[seg] < target) {
        seg_start += seg_len[seg];
        ++seg;
      }
      const double s = std::clamp((target - seg_start) / seg_len[seg], 0.0, 1.0);
      out.push_back(lerp(pts[seg], pts[seg + 1], s));
    }
    out.push_back(pts.back());
  }
  if (path.closed()) out.back() = out.front();
  return ParamPath(std::move(out), path.closed());
}

ParameterPoint spherical_point(double r, double theta, double phi) {
  ParameterPoint p(3);
  p << r * std::sin(theta) * std::cos(phi), r * std::sin(theta) * std::sin(phi),
      r * std::cos(theta);
  return p;
}

ParamPath standard_loop(LoopKind kind, std::size_t m, double theta) {
  if (m < 1) throw Error(ErrorKind::DomainError, "loop needs M >= 1");
  std::vector<ParameterPoint> pts;
  pts.reserve(m + 1);
  switch (kind) {
    case LoopKind::Point:
      pts.assign(m + 1, spherical_point(1.0, 0.0, 0.0));
      break;
    case LoopKind::Cone:
      if (!(theta > 0.0 && theta < kPi)) {
        throw Error(ErrorKind::DomainError,
                    "cone angle must lie in (0, pi), got " + std::to_string(theta));
      }
      [[fallthrough]];
    case LoopKind::GreatCircle: {
      if (m < 3) throw Error(ErrorKind::DomainError, "a circular loop needs M >= 3");
      const double polar = kind == LoopKind::Cone ? theta : 0.5 * kPi;
      for (std::size_t k = 0; k < m; ++k) {
        ParameterPoint p = spherical_point(
            1.0, polar, 2.0 * kPi * static_cast<double>(k) / static_cast<double>(m));
        if (kind == LoopKind::GreatCircle) p(2) = 0.0;
        pts.push_back(std::move(p));
      }
      pts.push_back(pts.front());
      break;
    }
  }
  return ParamPath(std::move(pts), true);
}

}  // namespace geophase
