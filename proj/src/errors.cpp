#include "geophase/errors.hpp"

namespace geophase {

std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonHermitianInput: return "NonHermitianInput";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::OriginOnLoop: return "OriginOnLoop";
    case ErrorKind::NotClosed: return "NotClosed";
    case ErrorKind::DegeneracyOnPath: return "DegeneracyOnPath";
    case ErrorKind::ZeroOverlap: return "ZeroOverlap";
    case ErrorKind::StepTooLarge: return "StepTooLarge";
    case ErrorKind::NotOnBand: return "NotOnBand";
    case ErrorKind::NotCyclic: return "NotCyclic";
    case ErrorKind::ClusterStructureChanged: return "ClusterStructureChanged";
    case ErrorKind::DegenerateNeighborhood: return "DegenerateNeighborhood";
    case ErrorKind::RankDeficientOverlap: return "RankDeficientOverlap";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message,
             std::vector<double> point)
    : std::runtime_error(std::string(error_name(kind)) + ": " + message),
      kind_(kind),
      point_(std::move(point)) {}

}  // namespace geophase
