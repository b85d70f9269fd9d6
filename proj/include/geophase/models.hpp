#pragma once

#include "geophase/core.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace geophase {

/// Fast Hamiltonian H_f(R) over an N-dimensional parameter space.
class ParametrizedHamiltonian {
 public:
  virtual ~ParametrizedHamiltonian() = default;

  virtual int param_dim() const = 0;
  virtual int hilbert_dim() const = 0;
  virtual HermitianOperator eval(const ParameterPoint& r) const = 0;

  /// Analytic dH/dR_k, one operator per parameter, when the model knows it.
  virtual std::optional<std::vector<HermitianOperator>> grad(
      const ParameterPoint& /*r*/) const {
    return std::nullopt;
  }

 protected:
  void check_point(const ParameterPoint& r) const;
};

using ModelPtr = std::shared_ptr<const ParametrizedHamiltonian>;

/// H = mu * R . sigma on a two-level system.
class SpinHalfModel final : public ParametrizedHamiltonian {
 public:
  explicit SpinHalfModel(double mu = 1.0) : mu_(mu) {}

  double mu() const { return mu_; }
  int param_dim() const override { return 3; }
  int hilbert_dim() const override { return 2; }
  HermitianOperator eval(const ParameterPoint& r) const override;
  std::optional<std::vector<HermitianOperator>> grad(
      const ParameterPoint& r) const override;

 private:
  double mu_;
};

/// H = (R . J)^2 on the spin-3/2 representation (hbar = 1). Every R != 0 gives
/// two doubly degenerate levels R^2/4 and 9R^2/4.
class QuadrupoleModel final : public ParametrizedHamiltonian {
 public:
  QuadrupoleModel();

  int param_dim() const override { return 3; }
  int hilbert_dim() const override { return 4; }
  HermitianOperator eval(const ParameterPoint& r) const override;
  std::optional<std::vector<HermitianOperator>> grad(
      const ParameterPoint& r) const override;

  const HermitianOperator& j(int axis) const { return j_[axis]; }

 private:
  HermitianOperator j_[3];
};

/// Model defined by a callable; gradients come from finite differences unless
/// a gradient callable is supplied.
class FunctionModel final : public ParametrizedHamiltonian {
 public:
  using EvalFn = std::function<HermitianOperator(const ParameterPoint&)>;
  using GradFn =
      std::function<std::vector<HermitianOperator>(const ParameterPoint&)>;

  FunctionModel(int param_dim, int hilbert_dim, EvalFn eval,
                GradFn grad = nullptr);

  int param_dim() const override { return param_dim_; }
  int hilbert_dim() const override { return hilbert_dim_; }
  HermitianOperator eval(const ParameterPoint& r) const override;
  std::optional<std::vector<HermitianOperator>> grad(
      const ParameterPoint& r) const override;

 private:
  int param_dim_;
  int hilbert_dim_;
  EvalFn eval_;
  GradFn grad_;
};

/// Constant H independent of R.
std::shared_ptr<FunctionModel> constant_model(int param_dim,
                                              const HermitianOperator& h);

/// Explicit table of (R, H) pairs. Only defined at its own sample points;
/// evaluation elsewhere is a DomainError.
class SampledModel final : public ParametrizedHamiltonian {
 public:
  struct Sample {
    ParameterPoint r;
    HermitianOperator h;
  };

  explicit SampledModel(std::vector<Sample> samples);

  int param_dim() const override;
  int hilbert_dim() const override;
  HermitianOperator eval(const ParameterPoint& r) const override;

  const std::vector<Sample>& samples() const { return samples_; }

 private:
  std::vector<Sample> samples_;
};

/// Positive-energy eigenstate (cos(theta/2), e^{i phi} sin(theta/2)) of
/// mu R.sigma at polar angles (theta, phi) of R.
StateVector spin_half_eigenstate(double theta, double phi);

inline double default_fd_step(const ParameterPoint& r) {
  return 1e-5 * std::max(1.0, r.norm());
}

/// Analytic gradient when the model has one, otherwise central differences
/// (H(R + h e_k) - H(R - h e_k)) / 2h. step <= 0 selects the default.
std::vector<HermitianOperator> eval_gradient(const ParametrizedHamiltonian& h,
                                             const ParameterPoint& r,
                                             double step = 0.0);

/// Always central differences, ignoring any analytic gradient.
std::vector<HermitianOperator> fd_gradient(const ParametrizedHamiltonian& h,
                                           const ParameterPoint& r,
                                           double step = 0.0);

}  // namespace geophase
