#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gql {

enum class ErrorKind {
  AxiomViolation,
  EmptySet,
  NotAGroup,
  NotAnAction,
  NotAUnit,
  NotGenerating,
  NotSymmetric,
  NotAMetric,
  DepthTooSmall,
  InvalidFiltration,
  GroupoidMismatch,
  IndexMismatch,
  DimensionMismatch,
  DomainMismatch,
  NotEquivariant,
  NegativeValues,
  NotPositiveType,
  MassExceeded,
  ParseError,
  InvalidConfig,
};

std::string_view to_string(ErrorKind kind);

/// Every failure in the library surfaces as a gql::Error carrying its kind.
/// NotEquivariant errors additionally carry the measured intertwining defect.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail, std::optional<double> defect = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }
  std::optional<double> defect() const noexcept { return defect_; }

 private:
  ErrorKind kind_;
  std::string detail_;
  std::optional<double> defect_;
};

}  // namespace gql
