#include "mdisc/mirror.hpp"

#include "mdisc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mdisc {

MirrorSetup MirrorSetup::schatten(double p_star) {
  if (!(p_star > 1.0) || p_star > 2.0) throw DomainError("Schatten mirror map needs p* in (1, 2]");
  return MirrorSetup(Kind::schatten, p_star);
}

std::string MirrorSetup::name() const {
  if (kind_ == Kind::spectraplex) return "spectraplex";
  std::ostringstream out;
  out << "schatten(" << p_star_ << ")";
  return out.str();
}

double eta_for(double lipschitz, double rho, double d_max, std::size_t steps) {
  if (!(lipschitz > 0) || !(rho > 0) || !(d_max > 0) || steps == 0) {
    throw ValidationError("step size needs positive L, rho, D_max and T");
  }
  return std::sqrt(2.0 * rho * d_max / static_cast<double>(steps)) / lipschitz;
}

namespace {

// norm * (X / norm)^{<alpha>} / scale, computed without forming norm^{2-p}.
SymMatrix scaled_signed_power(const SymMatrix& x, double p, double alpha, double factor) {
  const Spectrum s = sym_eig(x);
  const double norm = schatten_norm(s, Exponent(p));
  if (norm == 0.0) return SymMatrix::zero(x.dim());
  return spectral_fn(s, [&](double l) {
    return l == 0.0 ? 0.0 : factor * norm * std::copysign(std::pow(std::abs(l) / norm, alpha), l);
  });
}

}  // namespace

double mirror_potential(const MirrorSetup& setup, const SymMatrix& x) {
  if (setup.kind() == MirrorSetup::Kind::spectraplex) return neg_entropy(sym_eig(x));
  const double norm = schatten_norm(x, Exponent(setup.p_star()));
  return norm * norm / (2.0 * (setup.p_star() - 1.0));
}

SymMatrix mirror_gradient(const MirrorSetup& setup, const SymMatrix& x) {
  if (setup.kind() == MirrorSetup::Kind::spectraplex) return mat_log(x);
  const double ps = setup.p_star();
  // ||X||^{2-p*} X^{<p*-1>} / (p*-1)
  return scaled_signed_power(x, ps, ps - 1.0, 1.0 / (ps - 1.0));
}

SymMatrix mirror_inverse(const MirrorSetup& setup, const SymMatrix& y) {
  if (setup.kind() == MirrorSetup::Kind::spectraplex) {
    const Spectrum s = sym_eig(y);
    const double top = s.max();
    Eigen::VectorXd w = (s.values.array() - top).exp();
    w /= w.sum();
    return SymMatrix::trusted(s.vectors * w.asDiagonal() * s.vectors.transpose());
  }
  const double p = Exponent(setup.p_star()).conjugate().value();
  // (p*-1) ||Y||_p^{2-p} Y^{<p-1>}
  return scaled_signed_power(y, p, p - 1.0, setup.p_star() - 1.0);
}

double bregman(const MirrorSetup& setup, const SymMatrix& x, const SymMatrix& y) {
  if (setup.kind() == MirrorSetup::Kind::spectraplex) return quantum_rel_entropy(x, y);
  return mirror_potential(setup, x) - mirror_potential(setup, y) -
         frob_inner(mirror_gradient(setup, y), x - y);
}

void check_feasible(const MirrorSetup& setup, const SymMatrix& u, double tol) {
  if (setup.kind() == MirrorSetup::Kind::spectraplex) {
    if (!in_spectraplex(u, tol)) throw ValidationError("U must be PSD with unit trace");
    return;
  }
  const double norm = schatten_norm(u, Exponent(setup.p_star()));
  if (norm > 1.0 + tol) {
    throw ValidationError("U must lie in the S_{p*} unit ball, ||U|| = " + std::to_string(norm));
  }
}

MirrorState::MirrorState(MirrorSetup setup, SymMatrix x0, double eta)
    : setup_(setup), x0_(std::move(x0)), grad_sum_(SymMatrix::zero(x0_.dim())), eta_(eta) {
  if (!(eta >= 0) || !std::isfinite(eta)) throw ValidationError("step size must be finite and non-negative");
  if (setup_.kind() == MirrorSetup::Kind::spectraplex) {
    if (!in_spectraplex(x0_)) throw DomainError("spectraplex start must be PSD with unit trace");
    if (sym_eig(x0_).min() <= kEigenvalueCutoff) throw DomainError("spectraplex start must be positive definite");
  }
  base_ = mirror_gradient(setup_, x0_);
}

void MirrorState::add_gradient(const SymMatrix& g) {
  if (g.dim() != x0_.dim()) throw DimensionError("gradient has wrong dimension");
  grad_sum_ += g;
  ++steps_;
}

void MirrorState::add_gradient(const Eigen::MatrixXd& g, double sign) {
  add_gradient(SymMatrix::trusted(sign * g));
}

void MirrorState::set_grad_sum(SymMatrix sum, std::size_t steps) {
  if (sum.dim() != x0_.dim()) throw DimensionError("gradient sum has wrong dimension");
  grad_sum_ = std::move(sum);
  steps_ = steps;
}

SymMatrix md_iterate(const MirrorState& state) {
  if (state.steps_ == 0 || state.eta_ == 0.0) return state.x0_;
  return mirror_inverse(state.setup_, state.base_ - state.eta_ * state.grad_sum_);
}

Subgradient subgrad_fU(const EvaluationMap& map, const Eigen::VectorXd& image_u, const SymMatrix& x) {
  const Eigen::VectorXd diff = map.apply(x.matrix()) - image_u;
  Subgradient out;
  for (Index i = 0; i < diff.size(); ++i) {
    if (std::abs(diff(i)) > out.value) {
      out.value = std::abs(diff(i));
      out.index = static_cast<std::size_t>(i);
    }
  }
  out.sign = diff.size() > 0 && diff(static_cast<Index>(out.index)) < 0 ? -1.0 : 1.0;
  return out;
}

Subgradient subgrad_fU(const Instance& inst, const SymMatrix& x, const SymMatrix& u) {
  const EvaluationMap map(inst);
  return subgrad_fU(map, map.apply(u.matrix()), x);
}

double lipschitz_constant(const EvaluationMap& map, const MirrorSetup& setup) {
  const Exponent dual = setup.primal_norm().conjugate();
  double l = 1.0;
  for (std::size_t i = 0; i < map.n(); ++i) {
    const Eigen::MatrixXd a = map.matrix(i);
    l = std::max(l, map.symmetric() ? schatten_norm(SymMatrix::trusted(a), dual) : schatten_norm_general(a, dual));
  }
  return l;
}

MdRun md_minimize(const EvaluationMap& map, const SymMatrix& u, const SymMatrix& x0, const MirrorSetup& setup,
                  std::size_t steps, std::optional<double> d_max) {
  if (!map.symmetric()) throw ValidationError("mirror descent requires symmetric matrices");
  if (steps == 0) throw ValidationError("mirror descent needs T >= 1");
  if (u.dim() != map.m() || x0.dim() != map.m()) throw DimensionError("U and X0 must be m x m");
  check_feasible(setup, u);

  MdRun run;
  run.d_actual = bregman(setup, u, x0);
  run.d_used = d_max.value_or(std::max(0.0, run.d_actual));
  if (d_max && *d_max < 0) throw ValidationError("D_max must be non-negative");
  run.lipschitz = lipschitz_constant(map, setup);
  run.eta = run.d_used > 0 ? eta_for(run.lipschitz, setup.rho(), run.d_used, steps) : 0.0;

  std::vector<Eigen::MatrixXd> mats(map.n());
  for (std::size_t i = 0; i < map.n(); ++i) mats[i] = map.matrix(i);
  const Eigen::VectorXd image_u = map.apply(u.matrix());

  MirrorState state(setup, x0, run.eta);
  run.best_value = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s <= steps; ++s) {
    const SymMatrix x = md_iterate(state);
    const Subgradient g = subgrad_fU(map, image_u, x);
    run.values.push_back(g.value);
    if (g.value < run.best_value) {
      run.best_value = g.value;
      run.best_step = s;
    }
    if (s == steps) {
      run.final_iterate = x;
      break;
    }
    run.gradients.push_back(g);
    state.add_gradient(mats[g.index], g.sign);
  }
  run.bound = run.lipschitz * std::sqrt(2.0 * run.d_used / (setup.rho() * static_cast<double>(steps)));
  run.guarantee_held = run.best_value <= run.bound + 1e-6;
  return run;
}

}  // namespace mdisc
