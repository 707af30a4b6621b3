#pragma once

// Independent reference computations used as test oracles. None of these
// call into the eigen-solver or norm code under test.

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

namespace oracle {

/// Characteristic polynomial coefficients c_0..c_m of det(tI - A), c_m = 1,
/// by Faddeev-LeVerrier.
inline std::vector<double> char_poly(const Eigen::MatrixXd& a) {
  const Eigen::Index m = a.rows();
  std::vector<double> c(static_cast<std::size_t>(m) + 1, 0.0);
  c[static_cast<std::size_t>(m)] = 1.0;
  Eigen::MatrixXd mk = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index k = 1; k <= m; ++k) {
    mk = a * mk + c[static_cast<std::size_t>(m - k + 1)] * Eigen::MatrixXd::Identity(m, m);
    c[static_cast<std::size_t>(m - k)] = -(a * mk).trace() / static_cast<double>(k);
  }
  return c;
}

inline double poly_eval(const std::vector<double>& c, double t) {
  double v = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * t + c[i];
  return v;
}

/// Real roots of a polynomial with only real roots: scan for sign changes on
/// a fine grid inside the Gershgorin interval, then bisect.
inline std::vector<double> real_roots(const std::vector<double>& c, double radius) {
  std::vector<double> roots;
  const int steps = 200000;
  const double lo = -radius - 1e-3;
  const double hi = radius + 1e-3;
  double prev_t = lo;
  double prev_v = poly_eval(c, lo);
  for (int s = 1; s <= steps; ++s) {
    const double t = lo + (hi - lo) * s / steps;
    const double v = poly_eval(c, t);
    if (prev_v == 0.0) {
      roots.push_back(prev_t);
    } else if ((prev_v < 0) != (v < 0) && v != 0.0) {
      double a = prev_t, b = t, fa = prev_v;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = poly_eval(c, mid);
        if ((fm < 0) == (fa < 0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    prev_t = t;
    prev_v = v;
  }
  std::sort(roots.rbegin(), roots.rend());
  return roots;
}

inline double gershgorin_radius(const Eigen::MatrixXd& a) {
  return a.cwiseAbs().rowwise().sum().maxCoeff();
}

/// sqrt(x^T G x) with G_ij = <A_i, A_j>: the Frobenius norm of sum x_i A_i.
inline double gram_frobenius(const std::vector<Eigen::MatrixXd>& mats, const Eigen::VectorXd& x) {
  const std::size_t n = mats.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      s += x(static_cast<Eigen::Index>(i)) * x(static_cast<Eigen::Index>(j)) * (mats[i].array() * mats[j].array()).sum();
    }
  }
  return std::sqrt(std::max(0.0, s));
}

/// Binomial coefficient from Pascal's triangle.
inline boost::multiprecision::cpp_int pascal(unsigned n, unsigned k) {
  if (k > n) return 0;
  std::vector<boost::multiprecision::cpp_int> row(n + 1, 0);
  row[0] = 1;
  for (unsigned i = 1; i <= n; ++i) {
    for (unsigned j = i; j > 0; --j) row[j] += row[j - 1];
  }
  return row[k];
}

/// Standard normal CDF.
inline double phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Central difference of f at x in direction e_i.
template <class F>
Eigen::VectorXd finite_gradient(F&& f, const Eigen::VectorXd& x, double h = 1e-6) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd a = x, b = x;
    a(i) += h;
    b(i) -= h;
    g(i) = (f(a) - f(b)) / (2 * h);
  }
  return g;
}

}  // namespace oracle
