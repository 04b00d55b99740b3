#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "sagesimplex/certificates.hpp"
#include "sagesimplex/core.hpp"
#include "sagesimplex/decompose.hpp"
#include "sagesimplex/geometry.hpp"

namespace sagesimplex {

using Json = nlohmann::json;

struct Problem {
  Signomial f;
  std::optional<std::vector<Vector>> declared_A;

  SupportPartition partition() const { return partition_support(f, declared_A); }
};

/// A region given in x-space, or a polytope given directly in moment
/// coordinates (type "moment_vpolytope").
struct RegionSpec {
  std::optional<ConvexRegion> x_region;
  std::vector<Vector> moment_vertices;

  bool is_moment() const { return !x_region.has_value(); }
  /// The moment-space region for A, sampling x-space regions at `depth`.
  MomentRegion moment_region(const std::vector<Vector>& A, std::size_t anchor, MomentMode mode,
                             int depth) const;
};

Json read_json_file(const std::string& path);

Vector vector_from_json(const Json& j);
Json vector_to_json(const Vector& v);

Problem problem_from_json(const Json& j);
Json problem_to_json(const Problem& p);
Json signomial_to_json(const Signomial& f);

RegionSpec region_from_json(const Json& j);
Json region_to_json(const ConvexRegion& X);

Json certificate_to_json(const SageCertificate& cert);
SageCertificate certificate_from_json(const Json& j);

Json decomposition_to_json(const Decomposition& dec);
Decomposition decomposition_from_json(const Json& j);

}  // namespace sagesimplex
