#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vinberg/coxeter.hpp"
#include "vinberg/hilbert.hpp"
#include "vinberg/polytope.hpp"

namespace vinberg {

class NotNegativeType : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Two routes to the same answer disagreed: an implementation bug.
class RouteDisagreement : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A Yes answer whose structural consequences fail to hold.
class ConsistencyFailure : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class Question { FiniteVolume, UniqueDomain, MinDomainEqualsVinberg, LimitSetFillsBoundaryNecessary };

const char* to_string(Question q);

struct RouteRecord {
  std::string name;
  bool answer = false;
};

struct RankReport {
  bool irreducible = false;
  int cartan_rank = 0;
  int expected = 0;  ///< d + 1
};

struct FactorVerdict {
  IndexSet facets;
  bool negative_type = false;
  bool quasiperfect = false;
  std::optional<FaceDescriptor> offending_vertex;
};

/// Numerical volume sequence attached to a finite-volume verdict; never changes the answer.
struct VolumeEvidence {
  std::vector<int> depths;
  std::vector<double> values, std_errors;
  std::vector<double> diff_se;
  bool increasing = false;  ///< every consecutive difference above 3 sigma
};

struct Verdict {
  Question question = Question::FiniteVolume;
  bool answer = false;
  std::vector<RouteRecord> routes;
  bool routes_agree = true;
  std::optional<FaceDescriptor> offending_vertex;  ///< neither elliptic nor parabolic
  std::optional<FaceDescriptor> negative_face;     ///< proper face of negative type
  std::optional<RankReport> rank;
  std::vector<FactorVerdict> factors;
  std::optional<GroupKind> group_kind;
  int generators = 0;
  std::optional<VolumeEvidence> evidence;
  std::vector<std::string> notes;
};

/// Finite volume in the Vinberg domain: quasiperfect (vertex scan) and no proper face of
/// negative type (face scan). Throws RouteDisagreement when the two differ.
Verdict decide_finite_volume(const CoxeterPolytope& p, int max_facets = kDefaultMaxFacets);

/// Unique invariant properly convex domain: quasiperfect with at least 3 facets. A Yes also
/// checks that A_P is irreducible of rank d+1 and throws ConsistencyFailure otherwise.
Verdict decide_unique_domain(const CoxeterPolytope& p, int max_facets = kDefaultMaxFacets);

/// Omega_P = Int Conv(Lambda_P): every join factor of P is quasiperfect of negative type.
Verdict decide_min_domain_equals_vinberg(const CoxeterPolytope& p, int max_facets = kDefaultMaxFacets);

/// Necessary condition for Lambda_P = boundary of Omega_P: W_P large and P quasiperfect.
/// The hypothesis itself is not verified.
Verdict decide_limit_set_fills_boundary_necessary(const CoxeterPolytope& p, int max_facets = kDefaultMaxFacets);

/// Volume sequence of P across the protocol depths, for attaching to a verdict.
VolumeEvidence volume_evidence(const CoxeterPolytope& p, const VolumeProtocol& protocol);

}  // namespace vinberg
