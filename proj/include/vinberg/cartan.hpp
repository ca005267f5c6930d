#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "vinberg/types.hpp"

namespace vinberg {

/// Order m_st of an edge; kInfiniteOrder encodes m = infinity.
inline constexpr int kInfiniteOrder = std::numeric_limits<int>::max();

enum class TypeSign { Positive, Zero, Negative, Mixed };

const char* to_string(TypeSign t);

struct CartanViolation {
  enum class Kind { Shape, Diagonal, OffDiagonalSign, ZeroPattern, Product };
  Kind kind;
  int row = -1;
  int col = -1;
  std::string message;
};

class InvalidCartan : public std::invalid_argument {
 public:
  explicit InvalidCartan(std::vector<CartanViolation> v);
  const std::vector<CartanViolation>& violations() const { return violations_; }

 private:
  std::vector<CartanViolation> violations_;
};

/// All violated Cartan conditions of a square matrix, in row-major order.
std::vector<CartanViolation> cartan_violations(const MatrixQ& m);
std::vector<CartanViolation> cartan_violations(const MatrixXd& m, double eps = kDefaultEps);

/**
 * A validated Cartan matrix. Exact matrices carry rational entries and every
 * decision on them is exact; approximate ones carry doubles with tolerance eps.
 * Both representations expose a double copy for numerics.
 */
class CartanMatrix {
 public:
  /// Throws InvalidCartan listing every violation. `mode == Approx` demotes the input.
  static CartanMatrix validate(const MatrixQ& m, Mode mode = Mode::Exact, double eps = kDefaultEps);
  static CartanMatrix validate(const MatrixXd& m, double eps = kDefaultEps);

  int size() const { return static_cast<int>(approx_.rows()); }
  Mode mode() const { return mode_; }
  bool exact() const { return mode_ == Mode::Exact; }
  double eps() const { return eps_; }

  const MatrixQ& exact_entries() const;
  const MatrixXd& entries() const { return approx_; }

  /// m_st: 1 on the diagonal, k for products 4cos^2(pi/k), kInfiniteOrder for products >= 4.
  int order(int s, int t) const { return orders_[static_cast<std::size_t>(s * size() + t)]; }
  /// Largest |product - 4cos^2(pi/k)| accepted in approximate mode (0 when exact).
  double max_product_residual() const { return max_residual_; }

  bool is_zero_entry(int s, int t) const;
  bool symmetric() const;

  /// Calls f with the exact or the double entry matrix.
  template <typename F>
  decltype(auto) visit(F&& f) const {
    if (mode_ == Mode::Exact) return f(exact_);
    return f(approx_);
  }

 private:
  friend CartanMatrix restrict(const CartanMatrix& a, const IndexSet& t);

  CartanMatrix() = default;
  void compute_orders();

  Mode mode_ = Mode::Exact;
  double eps_ = kDefaultEps;
  MatrixQ exact_;
  MatrixXd approx_;
  std::vector<int> orders_;
  double max_residual_ = 0.0;
};

/// Connected components of the graph with an edge where A_st != 0, ordered by smallest member.
std::vector<IndexSet> irreducible_components(const CartanMatrix& a);

struct BlockType {
  IndexSet indices;
  TypeSign sign = TypeSign::Positive;
  double lambda = 0.0;       ///< Perron-Frobenius eigenvalue 2 - rho(2I - A_block)
  double uncertainty = 0.0;  ///< half-width of the Collatz-Wielandt bracket on rho
  bool warning = false;      ///< approximate mode and |lambda| < eps
};

struct TypeTag {
  TypeSign sign = TypeSign::Positive;
  std::vector<BlockType> blocks;
  double margin = std::numeric_limits<double>::infinity();  ///< min |lambda| over blocks
  bool warning = false;
};

struct PerronResult {
  double rho = 0.0;
  double uncertainty = 0.0;
  VectorXd vector;  ///< positive, max entry 1
  int iterations = 0;
};

/// Spectral radius and Perron vector of a nonnegative irreducible matrix by power iteration.
PerronResult perron(const MatrixXd& nonneg, double eps = kDefaultEps, int max_iterations = 100000);

TypeTag classify_type(const CartanMatrix& a);

struct WitnessVector {
  VectorXd x;
  VectorXd ax;
  std::optional<VectorQ> exact_x;  ///< set in exact mode; signs of A x certified exactly
  TypeSign sign = TypeSign::Positive;
  double margin = 0.0;  ///< min |(A x)_s| / x_s for the strict types
  bool warning = false;
};

/// X > 0 with A X > 0, = 0 or < 0 according to the (uniform) type of A.
WitnessVector witness_vector(const CartanMatrix& a);

/// A_T, preserving mode; T = {} yields the empty matrix.
CartanMatrix restrict(const CartanMatrix& a, const IndexSet& t);

struct TypeSplit {
  IndexSet positive, zero, negative;
};

/// Partition of T into unions of irreducible components of A_T by type.
TypeSplit split_by_type(const CartanMatrix& a, const IndexSet& t);

/// Exact principal-minor type test of an irreducible Z-matrix block.
TypeSign exact_block_type(const MatrixQ& block);

}  // namespace vinberg
