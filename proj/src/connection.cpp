#include "geophase/connection.hpp"

#include "geophase/errors.hpp"

#include <cmath>
#include <string>

namespace geophase {

namespace {

std::vector<double> to_std(const ParameterPoint& r) {
  return {r.data(), r.data() + r.size()};
}

}  // namespace

SmoothBandFrame band_frame(const ParametrizedHamiltonian& h,
                           const ParamPath& path, int band,
                           double degeneracy_tol) {
  if (band < 0 || band >= h.hilbert_dim()) {
    throw Error(ErrorKind::IndexOutOfRange,
                "band " + std::to_string(band) + " outside Hilbert dimension " +
                    std::to_string(h.hilbert_dim()));
  }
  if (path.dim() != h.param_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "path and model dimensions differ");
  }
  SmoothBandFrame frame{band, path, {}, {}};
  frame.states.reserve(path.samples().size());
  frame.energies.reserve(path.samples().size());

  for (const auto& r : path.samples()) {
    const auto dec = eigh(h.eval(r), degeneracy_tol);
    const auto& cl = dec.clusters[dec.cluster_of(band)];
    if (cl.size != 1) {
      throw Error(ErrorKind::DegeneracyOnPath,
                  "band " + std::to_string(band) + " is degenerate (cluster of " +
                      std::to_string(cl.size) + ")",
                  to_std(r));
    }
    StateVector v = dec.eigenvectors.col(band);
    if (!frame.states.empty()) {
      const Complex ov = frame.states.back().dot(v);
      if (std::abs(ov) < 1e-12) {
        throw Error(ErrorKind::ZeroOverlap,
                    "consecutive eigenvectors are orthogonal; refine the path",
                    to_std(r));
      }
      v *= std::conj(ov) / std::abs(ov);
    }
    frame.states.push_back(std::move(v));
    frame.energies.push_back(dec.eigenvalues(band));
  }
  return frame;
}

SphericalConnection berry_connection_spin_half(double theta, double /*phi*/) {
  if (!(theta > 0.0 && theta < kPi)) {
    throw Error(ErrorKind::DomainError,
                "azimuthal connection component is singular at the poles");
  }
  return {0.0, 0.5 * (std::cos(theta) - 1.0)};
}

double loop_phase(const SmoothBandFrame& frame) {
  if (!frame.path.closed()) {
    throw Error(ErrorKind::NotClosed, "loop_phase needs a closed path");
  }
  const auto& v = frame.states;
  const std::size_t m = v.size() - 1;
  Complex product = 1.0;
  for (std::size_t k = 0; k < m; ++k) {
    const StateVector& next = (k + 1 == m) ? v.front() : v[k + 1];
    const Complex ov = v[k].dot(next);
    if (std::abs(ov) < 1e-12) {
      throw Error(ErrorKind::ZeroOverlap, "vanishing overlap along loop",
                  to_std(frame.path[k]));
    }
    product *= ov / std::abs(ov);
  }
  return wrap_phase(-std::arg(product));
}

SmoothBandFrame apply_gauge(const SmoothBandFrame& frame, const GaugeTransform& g) {
  SmoothBandFrame out = frame;
  for (std::size_t k = 0; k < out.states.size(); ++k) {
    out.states[k] *= std::polar(1.0, g(frame.path[k]));
  }
  return out;
}

double berry_curvature_plaquette(const ParametrizedHamiltonian& h, int band,
                                 const ParameterPoint& center, int k, int l,
                                 double side) {
  if (k == l || k < 0 || l < 0 || k >= center.size() || l >= center.size()) {
    throw Error(ErrorKind::IndexOutOfRange, "invalid coordinate plane");
  }
  if (!(side > 0.0)) throw Error(ErrorKind::DomainError, "plaquette side must be positive");
  const double half = 0.5 * side;
  const double sk[4] = {-half, half, half, -half};
  const double sl[4] = {-half, -half, half, half};
  std::vector<ParameterPoint> pts;
  for (int c = 0; c <= 4; ++c) {
    ParameterPoint p = center;
    p(k) += sk[c % 4];
    p(l) += sl[c % 4];
    pts.push_back(std::move(p));
  }
  const auto frame = band_frame(h, ParamPath(std::move(pts), true), band);
  return loop_phase(frame) / (side * side);
}

double berry_flux_sphere(const ParametrizedHamiltonian& h, int band,
                         double radius, int n_theta, int n_phi) {
  if (n_theta < 1 || n_phi < 3 || !(radius > 0.0)) {
    throw Error(ErrorKind::DomainError, "flux grid needs n_theta >= 1, n_phi >= 3, radius > 0");
  }
  const double dtheta = kPi / n_theta;
  const double dphi = 2.0 * kPi / n_phi;
  double total = 0.0;
  for (int i = 0; i < n_theta; ++i) {
    const double t0 = i * dtheta;
    const double t1 = (i + 1) * dtheta;
    for (int j = 0; j < n_phi; ++j) {
      const double p0 = j * dphi;
      const double p1 = (j + 1) * dphi;
      // south, east, north, west: counterclockwise seen from outside
      std::vector<ParameterPoint> corners = {
          spherical_point(radius, t0, p0), spherical_point(radius, t1, p0),
          spherical_point(radius, t1, p1), spherical_point(radius, t0, p1)};
      std::vector<ParameterPoint> pts;
      for (const auto& c : corners) {
        if (pts.empty() || (c - pts.back()).norm() > 1e-14 * radius) pts.push_back(c);
      }
      if ((pts.back() - pts.front()).norm() <= 1e-14 * radius) pts.pop_back();
      pts.push_back(pts.front());
      const auto frame = band_frame(h, ParamPath(std::move(pts), true), band);
      total += loop_phase(frame);
    }
  }
  return total;
}

}  // namespace geophase
