#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

#include "equispec/models.hpp"
#include "equispec/montielros.hpp"

namespace equispec {

using Json = nlohmann::json;

inline constexpr const char* kReportVersion = "1";

/// Provenance stamped on every report.
struct ReportContext {
  std::uint64_t config_hash = 0;
  int level = 0;
  double zero_tol = 0.05;
  std::string problem;
};

std::string hex64(std::uint64_t v);

Json spectrum_json(const Spectrum& s, const ReportContext& ctx);
Json montiel_ros_json(const MontielRosReport& r, const ReportContext& ctx);
Json convergence_json(const ConvergenceStudy& study, const ReportContext& ctx);
Json ledger_json(const GluedLedger& ledger);

/// Two-space indented, sorted keys, trailing newline.
std::string dump(const Json& j);

/// index,eigenvalue,residual,class with class in negative / zero / positive.
std::string spectrum_csv(const Spectrum& s, double zero_tol);

/// Vertex samples of one eigenfunction (plot data): vertex,x,y,z,value and,
/// when nodal labels are given, the label of one incident triangle.
std::string eigenfunction_csv(const SurfaceMesh& mesh, const std::vector<double>& values,
                              const NodalDomains* nodal = nullptr);

}  // namespace equispec
