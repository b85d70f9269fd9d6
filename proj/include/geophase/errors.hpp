#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace geophase {

enum class ErrorKind {
  NonHermitianInput,
  DimensionMismatch,
  IndexOutOfRange,
  DomainError,
  OriginOnLoop,
  NotClosed,
  DegeneracyOnPath,
  ZeroOverlap,
  StepTooLarge,
  NotOnBand,
  NotCyclic,
  ClusterStructureChanged,
  DegenerateNeighborhood,
  RankDeficientOverlap,
  ConfigInvalid,
};

std::string_view error_name(ErrorKind kind);

/// Every failure raised by the library. Carries the offending parameter
/// point when there is one, so reports can name where a computation broke.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::vector<double> point = {});

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }
  const std::vector<double>& point() const noexcept { return point_; }

 private:
  ErrorKind kind_;
  std::vector<double> point_;
};

}  // namespace geophase
