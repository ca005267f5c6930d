#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>

namespace vinberg {

/// Exact rationals. Expression templates are off so the type composes with Eigen.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

using MatrixQ = Matrix<Rational>;
using VectorQ = Vector<Rational>;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Index set of generators; facets are labelled 0..n-1 internally.
using IndexSet = std::vector<int>;

enum class Mode { Exact, Approx };

inline const char* to_string(Mode m) { return m == Mode::Exact ? "exact" : "approx"; }

inline constexpr double kDefaultEps = 1e-9;

/// Thrown when an operation's precondition does not hold for its input.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/**
 * Uniform sign and zero tests over both scalar fields. Rational tests are
 * exact and ignore `eps`; double tests treat |x| < eps as zero.
 */
template <typename Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static bool is_zero(const Rational& x, double = 0.0) { return x == 0; }
  static int sign(const Rational& x, double = 0.0) { return x.sign(); }
  static double to_double(const Rational& x) { return x.convert_to<double>(); }
  static Rational abs(const Rational& x) { return boost::multiprecision::abs(x); }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static bool is_zero(double x, double eps) { return std::abs(x) < eps; }
  static int sign(double x, double eps) { return is_zero(x, eps) ? 0 : (x > 0 ? 1 : -1); }
  static double to_double(double x) { return x; }
  static double abs(double x) { return std::abs(x); }
};

inline MatrixXd to_double(const MatrixQ& m) {
  MatrixXd out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).convert_to<double>();
  return out;
}

inline VectorXd to_double(const VectorQ& v) {
  VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = v(i).convert_to<double>();
  return out;
}

/// Exact binary value of each double.
inline MatrixQ to_rational(const MatrixXd& m) {
  MatrixQ out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = Rational(m(i, j));
  return out;
}

/// Parses "p", "p/q" or "-p/q". Throws std::invalid_argument on anything else.
Rational parse_rational(const std::string& text);

/// Best rational approximation with denominator at most `max_den` (continued fractions).
Rational rationalize(double x, long long max_den);

std::string to_string(const Rational& q);

/// Strictly increasing list of members of [0, n) that are set in `mask`.
IndexSet subset_from_mask(unsigned mask, int n);
unsigned mask_from_subset(const IndexSet& s);

}  // namespace vinberg
