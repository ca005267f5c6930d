#include "vinberg/decision.hpp"

#include <algorithm>

#include "vinberg/linalg.hpp"

namespace vinberg {

namespace {

void require_negative_type(const CoxeterPolytope& p, const char* op) {
  const TypeTag t = classify_type(p.cartan());
  if (t.sign != TypeSign::Negative)
    throw NotNegativeType(std::string(op) + ": Cartan matrix is of " + to_string(t.sign) + " type, not negative");
}

RankReport rank_report(const CoxeterPolytope& p) {
  RankReport r;
  const CartanMatrix& a = p.cartan();
  r.irreducible = irreducible_components(a).size() == 1;
  r.cartan_rank = a.exact() ? linalg::rank<Rational>(a.exact_entries()) : linalg::rank<double>(a.entries(), a.eps());
  r.expected = p.dim() + 1;
  return r;
}

/// Lowest-dimensional proper face whose link is of negative type.
std::optional<FaceDescriptor> negative_type_face(const CoxeterPolytope& p, int max_facets) {
  std::optional<FaceDescriptor> best;
  for (const auto& f : enumerate_faces(p, max_facets)) {
    if (f.facets.empty() || f.dim < 0 || f.type.sign != TypeSign::Negative) continue;
    if (!best || f.dim < best->dim) best = f;
  }
  return best;
}

}  // namespace

const char* to_string(Question q) {
  switch (q) {
    case Question::FiniteVolume: return "finite_volume";
    case Question::UniqueDomain: return "unique_domain";
    case Question::MinDomainEqualsVinberg: return "min_domain_equals_vinberg";
    case Question::LimitSetFillsBoundaryNecessary: return "limit_set_fills_boundary_necessary";
  }
  return "?";
}

Verdict decide_finite_volume(const CoxeterPolytope& p, int max_facets) {
  require_negative_type(p, "decide_finite_volume");
  Verdict v;
  v.question = Question::FiniteVolume;
  v.generators = p.size();
  const VertexCertificate qp = is_quasiperfect(p, max_facets);
  v.offending_vertex = qp.offending;
  v.negative_face = negative_type_face(p, max_facets);
  v.routes = {{"quasiperfect vertex scan", qp.holds}, {"no proper negative type face", !v.negative_face}};
  v.routes_agree = v.routes[0].answer == v.routes[1].answer;
  if (!v.routes_agree) {
    std::string msg = "decide_finite_volume: quasiperfect = " + std::string(qp.holds ? "yes" : "no") +
                      " but negative type face " + (v.negative_face ? "found" : "absent");
    throw RouteDisagreement(msg);
  }
  v.answer = qp.holds;
  if (v.answer) v.rank = rank_report(p);
  return v;
}

Verdict decide_unique_domain(const CoxeterPolytope& p, int max_facets) {
  require_negative_type(p, "decide_unique_domain");
  Verdict v;
  v.question = Question::UniqueDomain;
  v.generators = p.size();
  const VertexCertificate qp = is_quasiperfect(p, max_facets);
  v.offending_vertex = qp.offending;
  v.routes = {{"quasiperfect vertex scan", qp.holds}};
  v.answer = qp.holds && p.size() >= 3;
  if (qp.holds && p.size() < 3) v.notes.push_back("fewer than 3 facets: the complement of Omega_P is also invariant");
  if (v.answer) {
    v.rank = rank_report(p);
    if (!v.rank->irreducible || v.rank->cartan_rank != v.rank->expected)
      throw ConsistencyFailure("decide_unique_domain: quasiperfect P with irreducible = " +
                               std::string(v.rank->irreducible ? "yes" : "no") + ", rank A = " +
                               std::to_string(v.rank->cartan_rank) + ", d+1 = " + std::to_string(v.rank->expected));
  }
  return v;
}

Verdict decide_min_domain_equals_vinberg(const CoxeterPolytope& p, int max_facets) {
  require_negative_type(p, "decide_min_domain_equals_vinberg");
  Verdict v;
  v.question = Question::MinDomainEqualsVinberg;
  v.generators = p.size();
  const auto js = decompose(p);
  std::vector<std::pair<IndexSet, const CoxeterPolytope*>> parts;
  if (js) {
    for (std::size_t i = 0; i < js->factors.size(); ++i) parts.emplace_back(js->blocks[i], &js->factors[i]);
  } else {
    IndexSet all(static_cast<std::size_t>(p.size()));
    for (int s = 0; s < p.size(); ++s) all[static_cast<std::size_t>(s)] = s;
    parts.emplace_back(all, &p);
  }
  v.answer = true;
  for (const auto& [facets, f] : parts) {
    FactorVerdict fv;
    fv.facets = facets;
    fv.negative_type = classify_type(f->cartan()).sign == TypeSign::Negative;
    const VertexCertificate qp = is_quasiperfect(*f, max_facets);
    fv.quasiperfect = qp.holds;
    fv.offending_vertex = qp.offending;
    v.answer = v.answer && fv.negative_type && fv.quasiperfect;
    v.factors.push_back(std::move(fv));
  }
  v.routes = {{"every join factor quasiperfect of negative type", v.answer}};
  return v;
}

Verdict decide_limit_set_fills_boundary_necessary(const CoxeterPolytope& p, int max_facets) {
  require_negative_type(p, "decide_limit_set_fills_boundary_necessary");
  Verdict v;
  v.question = Question::LimitSetFillsBoundaryNecessary;
  v.generators = p.size();
  const GroupClass g = classify_group(coxeter_from_cartan(p.cartan()), p.eps());
  v.group_kind = g.kind;
  const VertexCertificate qp = is_quasiperfect(p, max_facets);
  v.offending_vertex = qp.offending;
  v.routes = {{"group is large", g.kind == GroupKind::Large}, {"quasiperfect vertex scan", qp.holds}};
  v.answer = g.kind == GroupKind::Large && qp.holds;
  v.notes.push_back("necessary condition only; Lambda_P = boundary of Omega_P is assumed, not checked");
  return v;
}

VolumeEvidence volume_evidence(const CoxeterPolytope& p, const VolumeProtocol& protocol) {
  const VolumeSequence seq = volume_sequence(p, protocol);
  VolumeEvidence e;
  e.depths = seq.depths;
  for (const auto& est : seq.volumes.estimates) {
    e.values.push_back(est.value);
    e.std_errors.push_back(est.std_error);
  }
  e.diff_se = seq.volumes.diff_se;
  e.increasing = !seq.volumes.diff.empty();
  for (std::size_t k = 0; k < seq.volumes.diff.size(); ++k)
    e.increasing = e.increasing && seq.volumes.diff[k] > 3.0 * seq.volumes.diff_se[k];
  return e;
}

}  // namespace vinberg
