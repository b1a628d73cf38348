#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "equispec/montielros.hpp"

namespace equispec {

// Mesh files:
//   equimesh 1
//   chart NAME [a h s]
//   v x y z
//   t i j k
//   b i j TAG        (TAG in D, N, R)
//   g t g11 g12 g22  (metric override of triangle t)
SurfaceMesh read_mesh(std::istream& in);
SurfaceMesh load_mesh(const std::string& path);
void write_mesh(std::ostream& out, const SurfaceMesh& mesh);
void save_mesh(const std::string& path, const SurfaceMesh& mesh);

/// Lines "piece <id>: <triangles>" where triangles are integers or a-b
/// ranges separated by spaces or commas. '#' starts a comment.
Partition read_partition(std::istream& in);
Partition load_partition(const std::string& path);

/// "[+1,-1,...]" -> signs.
std::vector<int> parse_twist_table(const std::string& text);

/// Problem description from a key = value file (see README).
struct ProblemConfig {
  std::optional<std::string> builtin;
  std::optional<std::string> mesh_path;
  int level = 0;
  Params params;
  std::optional<std::string> potential;  // number, expression or "jacobi"
  std::optional<std::string> robin;      // number or expression
  bool robin_top = false;
  std::optional<std::string> conformal;  // expression for rho
  std::vector<std::pair<BoundaryTag, std::string>> tags;  // predicate per tag, applied in order
  std::optional<std::string> group;
  std::optional<std::string> twist;
  std::optional<std::string> strategy;
  std::optional<int> count;
  std::optional<double> zero_tol;
  std::optional<std::uint64_t> seed;

  /// Canonical one-line-per-key text, the input of config hashes.
  std::string canonical() const;
};

/// Raw key/value pairs in file order, comments and quotes stripped.
std::vector<std::pair<std::string, std::string>> parse_config_entries(const std::string& text);
void apply_config_entry(ProblemConfig& cfg, const std::string& key, const std::string& value,
                        const std::string& base_dir = ".");

ProblemConfig parse_problem_config(const std::string& text, const std::string& base_dir = ".");
ProblemConfig load_problem_config(const std::string& path);

/// Mesh, coefficients, tags and conformal change as described.
ProblemSpec build_problem(const ProblemConfig& cfg);

/// parse_group + twist ("trivial", "determinant", "normal_sign" or an
/// explicit table), realized on the mesh.
GroupAction build_group(const std::string& group_spec, const std::string& twist, const SurfaceMesh& mesh);

std::uint64_t fnv1a(const std::string& text);

}  // namespace equispec
