#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "vinberg/cartan.hpp"

namespace vinberg {

class PolytopeError : public std::invalid_argument {
 public:
  enum class Kind { Shape, Normalization, NotReduced, EmptyInterior, RedundantFacet };

  PolytopeError(Kind kind, int facet, const std::string& what)
      : std::invalid_argument(what), kind_(kind), facet_(facet) {}

  Kind kind() const { return kind_; }
  int facet() const { return facet_; }  ///< offending facet, -1 when not applicable

 private:
  Kind kind_;
  int facet_;
};

/**
 * Facet data (alpha_s, v_s) of a Coxeter polytope in P(V), dim V = d + 1.
 *
 * alpha is n x (d+1) with the covector alpha_s as row s; v is (d+1) x n with
 * the polar v_s as column s, so that alpha * v is the Cartan matrix. The
 * preferred lift is the cone {x : alpha x <= 0}.
 */
class CoxeterPolytope {
 public:
  int dim() const { return static_cast<int>(alpha_.cols()) - 1; }
  int ambient() const { return static_cast<int>(alpha_.cols()); }
  int size() const { return static_cast<int>(alpha_.rows()); }
  Mode mode() const { return cartan_.mode(); }
  bool exact() const { return cartan_.exact(); }
  double eps() const { return cartan_.eps(); }

  const MatrixXd& alpha() const { return alpha_; }
  const MatrixXd& v() const { return v_; }
  const MatrixQ& alpha_exact() const;
  const MatrixQ& v_exact() const;
  const CartanMatrix& cartan() const { return cartan_; }

  template <typename Scalar>
  const Matrix<Scalar>& alpha_as() const {
    if constexpr (std::is_same_v<Scalar, Rational>) return alpha_exact();
    else return alpha_;
  }
  template <typename Scalar>
  const Matrix<Scalar>& v_as() const {
    if constexpr (std::is_same_v<Scalar, Rational>) return v_exact();
    else return v_;
  }

 private:
  friend CoxeterPolytope make_polytope_unchecked(MatrixQ alpha, MatrixQ v, const CartanMatrix& a);
  friend CoxeterPolytope make_polytope_unchecked(MatrixXd alpha, MatrixXd v, const CartanMatrix& a);

  explicit CoxeterPolytope(CartanMatrix a) : cartan_(std::move(a)) {}

  CartanMatrix cartan_;
  MatrixXd alpha_, v_;
  MatrixQ alpha_q_, v_q_;
};

/// Validating constructors. The rational overload stays exact unless `mode` is Approx.
CoxeterPolytope build_polytope(const MatrixQ& alpha, const MatrixQ& v, Mode mode = Mode::Exact,
                               double eps = kDefaultEps);
CoxeterPolytope build_polytope(const MatrixXd& alpha, const MatrixXd& v, double eps = kDefaultEps);

/// Canonical simplex of R^S: alpha_s the dual basis, v_s the columns of A.
CoxeterPolytope tits_polytope(const CartanMatrix& a);

struct FaceDescriptor {
  IndexSet facets;                          ///< S_f
  VectorXd witness;                         ///< alpha_s(x) = 0 on S_f, < 0 elsewhere
  std::optional<VectorQ> exact_witness;     ///< exact mode only
  int dim = 0;                              ///< d - rank{alpha_s : s in S_f}; -1 for the empty face
  double margin = 0.0;                      ///< min_{s not in S_f} -alpha_s(x) with |x|_inf <= 1 in kernel coordinates
  CartanMatrix link_cartan;                 ///< A_{S_f}
  TypeTag type;                             ///< type of A_{S_f}
};

/// LP test of the system alpha_s = 0 (s in S'), alpha_s < 0 (s not in S').
/// S' = S always answers with the empty face.
std::optional<FaceDescriptor> defines_face(const CoxeterPolytope& p, const IndexSet& subset);

inline constexpr int kDefaultMaxFacets = 16;

/// Proper faces and the interior, sorted by |S_f| then lexicographically. For d = 0
/// the single facet is the empty face and is listed as well.
std::vector<FaceDescriptor> enumerate_faces(const CoxeterPolytope& p, int max_facets = kDefaultMaxFacets);

/// Faces of dimension 0.
std::vector<FaceDescriptor> vertices(const CoxeterPolytope& p, int max_facets = kDefaultMaxFacets);

/// Link of f in P(V / Span f); its Cartan matrix is A_{S_f}.
CoxeterPolytope link(const CoxeterPolytope& p, const FaceDescriptor& f);

struct FaceClass {
  TypeSign sign = TypeSign::Positive;
  bool parabolic = false;   ///< zero type with rank A_{S_f} = d_f
  bool loxodromic = false;  ///< negative type with rank A_{S_f} = d_f + 1
  int cartan_rank = 0;      ///< rank A_{S_f}
  int span_rank = 0;        ///< d_f + 1 = rank{alpha_s : s in S_f}
  bool warning = false;

  bool elliptic() const { return sign == TypeSign::Positive; }
};

/// "elliptic", "parabolic", "zero", "loxodromic", "negative" or "mixed".
const char* to_string(const FaceClass& c);

FaceClass classify_face(const CoxeterPolytope& p, const FaceDescriptor& f);

struct BiggerFaces {
  FaceDescriptor zero;           ///< T1 u T2^0
  FaceDescriptor zero_positive;  ///< T1 u T2^0 u T2^+
  FaceDescriptor zero_negative;  ///< T1 u T2^0 u T2^-
};

/// Throws PreconditionError on bad input and std::logic_error if an output is not a face.
BiggerFaces bigger_face(const CoxeterPolytope& p, const IndexSet& t1, const IndexSet& t2);

struct JoinStructure {
  std::vector<IndexSet> blocks;              ///< partition of S
  std::vector<MatrixXd> subspaces;           ///< basis of V_i as columns
  std::vector<std::optional<MatrixQ>> exact_subspaces;
  std::vector<CoxeterPolytope> factors;      ///< P_i in the coordinates of its basis
};

/// Finest splitting of P as a join, or nullopt when P is indecomposable.
std::optional<JoinStructure> decompose(const CoxeterPolytope& p);

/// P (x) Q on V_P (+) V_Q with block-diagonal Cartan matrix.
CoxeterPolytope join(const CoxeterPolytope& p, const CoxeterPolytope& q);

struct VertexCertificate {
  bool holds = true;
  std::optional<FaceDescriptor> offending;  ///< first failing vertex
  std::vector<FaceDescriptor> vertices;
};

VertexCertificate is_perfect(const CoxeterPolytope& p, int max_facets = kDefaultMaxFacets);
VertexCertificate is_quasiperfect(const CoxeterPolytope& p, int max_facets = kDefaultMaxFacets);
/// Every vertex link is perfect.
VertexCertificate is_2perfect(const CoxeterPolytope& p, int max_facets = kDefaultMaxFacets);

}  // namespace vinberg
