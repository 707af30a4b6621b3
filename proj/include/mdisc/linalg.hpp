#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <string>
#include <string_view>

namespace mdisc {

using Index = Eigen::Index;

/// Norm exponent p in [1, inf]. Infinity is a first-class value so that the
/// operator norm can be selected without magic numbers.
class Exponent {
 public:
  constexpr Exponent() = default;  // defaults to infinity
  explicit Exponent(double value);

  static Exponent infinity() { return Exponent(); }
  static Exponent parse(std::string_view text);

  bool is_infinite() const { return std::isinf(value_); }
  double value() const { return value_; }
  /// 1/p, with 1/inf = 0.
  double reciprocal() const { return is_infinite() ? 0.0 : 1.0 / value_; }
  /// Hoelder conjugate p/(p-1); 1 <-> inf.
  Exponent conjugate() const;
  std::string to_string() const;

  friend bool operator==(const Exponent& a, const Exponent& b) { return a.value_ == b.value_; }
  friend bool operator<=(const Exponent& a, const Exponent& b) { return a.value_ <= b.value_; }

 private:
  double value_ = std::numeric_limits<double>::infinity();
};

/// Dense real symmetric matrix. Construction from arbitrary entries checks
/// |a_ij - a_ji| <= 1e-12 * max(1, ||A||_F) and stores the exact symmetrization.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(Eigen::MatrixXd entries);

  static SymMatrix zero(Index dim);
  static SymMatrix identity(Index dim);
  static SymMatrix diagonal(const Eigen::VectorXd& diag);
  /// v v^T
  static SymMatrix outer(const Eigen::VectorXd& v);

  Index dim() const { return entries_.rows(); }
  const Eigen::MatrixXd& matrix() const { return entries_; }
  double operator()(Index i, Index j) const { return entries_(i, j); }

  double trace() const { return entries_.trace(); }
  double frobenius_norm() const { return entries_.norm(); }

  SymMatrix& operator+=(const SymMatrix& other);
  SymMatrix& operator-=(const SymMatrix& other);
  SymMatrix& operator*=(double scale);

  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }
  friend SymMatrix operator*(SymMatrix a, double s) { return a *= s; }

  /// Wraps entries already known to be symmetric (sums of symmetric matrices,
  /// V diag V^T products). Only the upper/lower average is taken, no check.
  static SymMatrix trusted(Eigen::MatrixXd entries);

 private:
  Eigen::MatrixXd entries_;
};

bool is_symmetric(const Eigen::MatrixXd& a);

/// Eigenvalues sorted descending, eigenvectors as orthonormal columns.
struct Spectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;

  Index dim() const { return values.size(); }
  SymMatrix reconstruct() const;
  double min() const { return values(values.size() - 1); }
  double max() const { return values(0); }
};

Spectrum sym_eig(const SymMatrix& a);
/// Validating overload for raw entries.
Spectrum sym_eig(const Eigen::MatrixXd& a);

double schatten_norm_of_values(const Eigen::VectorXd& values, Exponent p);
double schatten_norm(const Spectrum& spectrum, Exponent p);
double schatten_norm(const SymMatrix& a, Exponent p);
/// Singular-value route for matrices that are not symmetric.
double schatten_norm_general(const Eigen::MatrixXd& a, Exponent p);

/// sum_j f(lambda_j) v_j v_j^T
template <class F>
SymMatrix spectral_fn(const Spectrum& s, F&& f) {
  Eigen::VectorXd mapped(s.dim());
  for (Index j = 0; j < s.dim(); ++j) mapped(j) = f(s.values(j));
  return SymMatrix::trusted(s.vectors * mapped.asDiagonal() * s.vectors.transpose());
}

template <class F>
SymMatrix spectral_fn(const SymMatrix& a, F&& f) {
  return spectral_fn(sym_eig(a), std::forward<F>(f));
}

SymMatrix mat_exp(const SymMatrix& a);
/// Throws DomainError unless every eigenvalue is > 0.
SymMatrix mat_log(const SymMatrix& a);
/// A^<alpha> := sum_j sign(l_j) |l_j|^alpha v_j v_j^T
SymMatrix signed_power(const SymMatrix& a, double alpha);
SymMatrix signed_power(const Spectrum& s, double alpha);

double frob_inner(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);
double frob_inner(const SymMatrix& a, const SymMatrix& b);

/// PSD with unit trace, both within tol.
bool in_spectraplex(const SymMatrix& x, double tol = 1e-8);

/// tr(X log X) with 0 log 0 = 0 below the 1e-12 eigenvalue cutoff.
double neg_entropy(const Spectrum& x);

/// S(X||Y) = tr(X (log X - log Y)). X must lie in the spectraplex, Y must be
/// positive definite.
double quantum_rel_entropy(const SymMatrix& x, const SymMatrix& y);

constexpr double kEigenvalueCutoff = 1e-12;

}  // namespace mdisc
