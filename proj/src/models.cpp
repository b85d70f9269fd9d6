#include "geophase/models.hpp"

#include "geophase/errors.hpp"

#include <cmath>
#include <string>

namespace geophase {

namespace {

std::vector<double> to_std(const ParameterPoint& r) {
  return {r.data(), r.data() + r.size()};
}

}  // namespace

void ParametrizedHamiltonian::check_point(const ParameterPoint& r) const {
  if (r.size() != param_dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "parameter point has " + std::to_string(r.size()) +
                    " coordinates, model expects " + std::to_string(param_dim()),
                to_std(r));
  }
  if (!r.allFinite()) {
    throw Error(ErrorKind::DomainError, "non-finite parameter point", to_std(r));
  }
}

HermitianOperator SpinHalfModel::eval(const ParameterPoint& r) const {
  check_point(r);
  return mu_ * (r(0) * sigma_x() + r(1) * sigma_y() + r(2) * sigma_z());
}

std::optional<std::vector<HermitianOperator>> SpinHalfModel::grad(
    const ParameterPoint& r) const {
  check_point(r);
  return std::vector<HermitianOperator>{mu_ * sigma_x(), mu_ * sigma_y(),
                                        mu_ * sigma_z()};
}

QuadrupoleModel::QuadrupoleModel() {
  // Basis m = 3/2, 1/2, -1/2, -3/2.
  const double m[4] = {1.5, 0.5, -0.5, -1.5};
  const double j = 1.5;
  HermitianOperator jplus = HermitianOperator::Zero(4, 4);
  for (int k = 1; k < 4; ++k) {
    // <m+1| J+ |m> with |m> = column k, |m+1> = row k-1
    jplus(k - 1, k) = std::sqrt(j * (j + 1.0) - m[k] * (m[k] + 1.0));
  }
  const HermitianOperator jminus = jplus.adjoint();
  j_[0] = 0.5 * (jplus + jminus);
  j_[1] = Complex(0.0, -0.5) * (jplus - jminus);
  j_[2] = HermitianOperator::Zero(4, 4);
  for (int k = 0; k < 4; ++k) j_[2](k, k) = m[k];
}

HermitianOperator QuadrupoleModel::eval(const ParameterPoint& r) const {
  check_point(r);
  const HermitianOperator rj = r(0) * j_[0] + r(1) * j_[1] + r(2) * j_[2];
  const HermitianOperator sq = rj * rj;
  return 0.5 * (sq + sq.adjoint());
}

std::optional<std::vector<HermitianOperator>> QuadrupoleModel::grad(
    const ParameterPoint& r) const {
  check_point(r);
  const HermitianOperator rj = r(0) * j_[0] + r(1) * j_[1] + r(2) * j_[2];
  std::vector<HermitianOperator> out;
  for (int k = 0; k < 3; ++k) {
    const HermitianOperator g = j_[k] * rj + rj * j_[k];
    out.push_back(0.5 * (g + g.adjoint()));
  }
  return out;
}

FunctionModel::FunctionModel(int param_dim, int hilbert_dim, EvalFn eval,
                             GradFn grad)
    : param_dim_(param_dim),
      hilbert_dim_(hilbert_dim),
      eval_(std::move(eval)),
      grad_(std::move(grad)) {
  if (param_dim < 1 || hilbert_dim < 1 || !eval_) {
    throw Error(ErrorKind::DomainError, "FunctionModel needs positive dimensions and an eval callable");
  }
}

HermitianOperator FunctionModel::eval(const ParameterPoint& r) const {
  check_point(r);
  HermitianOperator h = eval_(r);
  if (h.rows() != hilbert_dim_ || h.cols() != hilbert_dim_) {
    throw Error(ErrorKind::DimensionMismatch, "model callable returned wrong shape",
                to_std(r));
  }
  return h;
}

std::optional<std::vector<HermitianOperator>> FunctionModel::grad(
    const ParameterPoint& r) const {
  if (!grad_) return std::nullopt;
  check_point(r);
  return grad_(r);
}

std::shared_ptr<FunctionModel> constant_model(int param_dim,
                                              const HermitianOperator& h) {
  const int d = static_cast<int>(h.rows());
  return std::make_shared<FunctionModel>(
      param_dim, d, [h](const ParameterPoint&) { return h; },
      [param_dim, d](const ParameterPoint&) {
        return std::vector<HermitianOperator>(param_dim,
                                              HermitianOperator::Zero(d, d));
      });
}

SampledModel::SampledModel(std::vector<Sample> samples)
    : samples_(std::move(samples)) {
  if (samples_.empty()) {
    throw Error(ErrorKind::DomainError, "sampled model needs at least one sample");
  }
  const auto n = samples_.front().r.size();
  const auto d = samples_.front().h.rows();
  for (const auto& s : samples_) {
    if (s.r.size() != n || s.h.rows() != d || s.h.cols() != d) {
      throw Error(ErrorKind::DimensionMismatch,
                  "sampled model entries have inconsistent shapes", to_std(s.r));
    }
    if (hermiticity_error(s.h) > 1e-12 * std::max(1.0, s.h.cwiseAbs().maxCoeff())) {
      throw Error(ErrorKind::NonHermitianInput, "sampled H is not Hermitian",
                  to_std(s.r));
    }
  }
}

int SampledModel::param_dim() const {
  return static_cast<int>(samples_.front().r.size());
}

int SampledModel::hilbert_dim() const {
  return static_cast<int>(samples_.front().h.rows());
}

HermitianOperator SampledModel::eval(const ParameterPoint& r) const {
  check_point(r);
  for (const auto& s : samples_) {
    if ((s.r - r).cwiseAbs().maxCoeff() <= 1e-12) return s.h;
  }
  throw Error(ErrorKind::DomainError,
              "sampled model is only defined at its listed points", to_std(r));
}

StateVector spin_half_eigenstate(double theta, double phi) {
  if (!(theta >= 0.0 && theta <= kPi)) {
    throw Error(ErrorKind::DomainError,
                "theta must lie in [0, pi], got " + std::to_string(theta));
  }
  StateVector v(2);
  v << std::cos(0.5 * theta), std::polar(std::sin(0.5 * theta), phi);
  return v;
}

std::vector<HermitianOperator> fd_gradient(const ParametrizedHamiltonian& h,
                                           const ParameterPoint& r,
                                           double step) {
  if (step <= 0.0) step = default_fd_step(r);
  std::vector<HermitianOperator> out;
  out.reserve(r.size());
  for (Eigen::Index k = 0; k < r.size(); ++k) {
    ParameterPoint plus = r, minus = r;
    plus(k) += step;
    minus(k) -= step;
    out.push_back((h.eval(plus) - h.eval(minus)) / (2.0 * step));
  }
  return out;
}

std::vector<HermitianOperator> eval_gradient(const ParametrizedHamiltonian& h,
                                             const ParameterPoint& r,
                                             double step) {
  if (auto g = h.grad(r)) return *std::move(g);
  return fd_gradient(h, r, step);
}

}  // namespace geophase
