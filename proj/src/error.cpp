#include "gql/error.hpp"

namespace gql {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::AxiomViolation: return "AxiomViolation";
    case ErrorKind::EmptySet: return "EmptySet";
    case ErrorKind::NotAGroup: return "NotAGroup";
    case ErrorKind::NotAnAction: return "NotAnAction";
    case ErrorKind::NotAUnit: return "NotAUnit";
    case ErrorKind::NotGenerating: return "NotGenerating";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::NotAMetric: return "NotAMetric";
    case ErrorKind::DepthTooSmall: return "DepthTooSmall";
    case ErrorKind::InvalidFiltration: return "InvalidFiltration";
    case ErrorKind::GroupoidMismatch: return "GroupoidMismatch";
    case ErrorKind::IndexMismatch: return "IndexMismatch";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DomainMismatch: return "DomainMismatch";
    case ErrorKind::NotEquivariant: return "NotEquivariant";
    case ErrorKind::NegativeValues: return "NegativeValues";
    case ErrorKind::NotPositiveType: return "NotPositiveType";
    case ErrorKind::MassExceeded: return "MassExceeded";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

namespace {
std::string compose_message(ErrorKind kind, const std::string& detail, std::optional<double> defect) {
  std::string msg(to_string(kind));
  if (!detail.empty()) msg += ": " + detail;
  if (defect) msg += " (defect " + std::to_string(*defect) + ")";
  return msg;
}
}  // namespace

Error::Error(ErrorKind kind, const std::string& detail, std::optional<double> defect)
    : std::runtime_error(compose_message(kind, detail, defect)), kind_(kind), detail_(detail), defect_(defect) {}

}  // namespace gql
