#include "mdisc/linalg.hpp"

#include "mdisc/errors.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace mdisc {

Exponent::Exponent(double value) : value_(value) {
  if (!(value >= 1.0)) {
    throw DomainError("norm exponent must lie in [1, inf], got " + std::to_string(value));
  }
}

Exponent Exponent::parse(std::string_view text) {
  if (text == "inf" || text == "infinity" || text == "Infinity") return infinity();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError("cannot parse norm exponent '" + std::string(text) + "'");
  }
  return Exponent(v);
}

Exponent Exponent::conjugate() const {
  if (is_infinite()) return Exponent(1.0);
  if (value_ == 1.0) return infinity();
  return Exponent(value_ / (value_ - 1.0));
}

std::string Exponent::to_string() const {
  if (is_infinite()) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << value_;
  return os.str();
}

bool is_symmetric(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) return false;
  const double tol = 1e-12 * std::max(1.0, a.norm());
  return (a - a.transpose()).cwiseAbs().maxCoeff() <= tol;
}

SymMatrix::SymMatrix(Eigen::MatrixXd entries) {
  if (entries.rows() != entries.cols()) {
    throw DimensionError("symmetric matrix must be square, got " + std::to_string(entries.rows()) +
                         "x" + std::to_string(entries.cols()));
  }
  if (entries.size() > 0 && !is_symmetric(entries)) {
    const double gap = (entries - entries.transpose()).cwiseAbs().maxCoeff();
    throw ValidationError("matrix is not symmetric: max |a_ij - a_ji| = " + std::to_string(gap));
  }
  entries_ = std::move(entries);
  entries_ = 0.5 * (entries_ + entries_.transpose()).eval();
}

SymMatrix SymMatrix::trusted(Eigen::MatrixXd entries) {
  SymMatrix out;
  out.entries_ = 0.5 * (entries + entries.transpose());
  return out;
}

SymMatrix SymMatrix::zero(Index dim) { return trusted(Eigen::MatrixXd::Zero(dim, dim)); }

SymMatrix SymMatrix::identity(Index dim) { return trusted(Eigen::MatrixXd::Identity(dim, dim)); }

SymMatrix SymMatrix::diagonal(const Eigen::VectorXd& diag) {
  return trusted(diag.asDiagonal().toDenseMatrix());
}

SymMatrix SymMatrix::outer(const Eigen::VectorXd& v) { return trusted(v * v.transpose()); }

SymMatrix& SymMatrix::operator+=(const SymMatrix& other) {
  if (dim() != other.dim()) throw DimensionError("dimension mismatch in matrix sum");
  entries_ += other.entries_;
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& other) {
  if (dim() != other.dim()) throw DimensionError("dimension mismatch in matrix difference");
  entries_ -= other.entries_;
  return *this;
}

SymMatrix& SymMatrix::operator*=(double scale) {
  entries_ *= scale;
  return *this;
}

SymMatrix Spectrum::reconstruct() const {
  return SymMatrix::trusted(vectors * values.asDiagonal() * vectors.transpose());
}

Spectrum sym_eig(const SymMatrix& a) {
  Spectrum out;
  if (a.dim() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.matrix());
  if (solver.info() != Eigen::Success) throw DomainError("symmetric eigensolver did not converge");
  // Eigen returns ascending order.
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

Spectrum sym_eig(const Eigen::MatrixXd& a) { return sym_eig(SymMatrix(a)); }

double schatten_norm_of_values(const Eigen::VectorXd& values, Exponent p) {
  if (values.size() == 0) return 0.0;
  const double top = values.cwiseAbs().maxCoeff();
  if (p.is_infinite() || top == 0.0) return top;
  const double e = p.value();
  // Scaled to avoid overflow for large p.
  double sum = 0.0;
  for (Index j = 0; j < values.size(); ++j) sum += std::pow(std::abs(values(j)) / top, e);
  return top * std::pow(sum, 1.0 / e);
}

double schatten_norm(const Spectrum& spectrum, Exponent p) {
  return schatten_norm_of_values(spectrum.values, p);
}

double schatten_norm(const SymMatrix& a, Exponent p) {
  if (p.value() == 2.0) return a.frobenius_norm();
  return schatten_norm(sym_eig(a), p);
}

double schatten_norm_general(const Eigen::MatrixXd& a, Exponent p) {
  if (a.size() == 0) return 0.0;
  if (p.value() == 2.0) return a.norm();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  return schatten_norm_of_values(svd.singularValues(), p);
}

SymMatrix mat_exp(const SymMatrix& a) {
  return spectral_fn(a, [](double l) { return std::exp(l); });
}

SymMatrix mat_log(const SymMatrix& a) {
  const Spectrum s = sym_eig(a);
  if (s.dim() > 0 && s.min() <= 0.0) {
    throw DomainError("matrix logarithm needs a positive definite argument, min eigenvalue " +
                      std::to_string(s.min()));
  }
  return spectral_fn(s, [](double l) { return std::log(l); });
}

SymMatrix signed_power(const Spectrum& s, double alpha) {
  return spectral_fn(s, [alpha](double l) {
    if (l == 0.0) return 0.0;
    return std::copysign(std::pow(std::abs(l), alpha), l);
  });
}

SymMatrix signed_power(const SymMatrix& a, double alpha) { return signed_power(sym_eig(a), alpha); }

double frob_inner(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("dimension mismatch in Frobenius inner product");
  }
  return a.cwiseProduct(b).sum();
}

double frob_inner(const SymMatrix& a, const SymMatrix& b) { return frob_inner(a.matrix(), b.matrix()); }

namespace {

void require_spectraplex(const Spectrum& s, double trace, const char* what) {
  if (std::abs(trace - 1.0) > 1e-8 || (s.dim() > 0 && s.min() < -1e-8)) {
    throw DomainError(std::string(what) + " is not in the spectraplex (trace " +
                      std::to_string(trace) + ", min eigenvalue " +
                      std::to_string(s.dim() ? s.min() : 0.0) + ")");
  }
}

}  // namespace

bool in_spectraplex(const SymMatrix& x, double tol) {
  if (std::abs(x.trace() - 1.0) > tol) return false;
  return x.dim() == 0 || sym_eig(x).min() >= -tol;
}

double neg_entropy(const Spectrum& x) {
  double acc = 0.0;
  for (Index j = 0; j < x.dim(); ++j) {
    const double l = x.values(j);
    if (l > kEigenvalueCutoff) acc += l * std::log(l);
  }
  return acc;
}

double quantum_rel_entropy(const SymMatrix& x, const SymMatrix& y) {
  if (x.dim() != y.dim()) throw DimensionError("dimension mismatch in relative entropy");
  const Spectrum sx = sym_eig(x);
  require_spectraplex(sx, x.trace(), "X");
  const Spectrum sy = sym_eig(y);
  if (sy.dim() > 0 && sy.min() <= kEigenvalueCutoff) {
    // Y singular: finite only if supp X lies inside supp Y, which we do not
    // attempt to resolve numerically.
    throw DomainError("relative entropy reference Y is not positive definite (min eigenvalue " +
                      std::to_string(sy.min()) + ")");
  }
  const SymMatrix log_y = spectral_fn(sy, [](double l) { return std::log(l); });
  return neg_entropy(sx) - frob_inner(x, log_y);
}

}  // namespace mdisc
