#pragma once

#include "mdisc/instance.hpp"
#include "mdisc/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mdisc {

/// Spectraplex: Phi(X) = tr(X log X), rho = 1/2 w.r.t. S_1, iterates trace
/// normalized. Schatten: Phi(X) = ||X||_{p*}^2 / (2(p*-1)) on all symmetric
/// matrices, rho = 1 w.r.t. S_{p*}, p* in (1, 2].
class MirrorSetup {
 public:
  enum class Kind { spectraplex, schatten };

  static MirrorSetup spectraplex() { return MirrorSetup(Kind::spectraplex, 1.0); }
  static MirrorSetup schatten(double p_star);

  Kind kind() const { return kind_; }
  double p_star() const { return p_star_; }
  double rho() const { return kind_ == Kind::spectraplex ? 0.5 : 1.0; }
  /// The norm the map is strongly convex in: S_1 or S_{p*}.
  Exponent primal_norm() const { return kind_ == Kind::spectraplex ? Exponent(1) : Exponent(p_star_); }
  std::string name() const;

 private:
  MirrorSetup(Kind kind, double p_star) : kind_(kind), p_star_(p_star) {}
  Kind kind_;
  double p_star_;
};

/// (1/L) sqrt(2 rho D / T). Throws ValidationError unless all inputs are positive.
double eta_for(double lipschitz, double rho, double d_max, std::size_t steps);

double mirror_potential(const MirrorSetup& setup, const SymMatrix& x);
/// Gradient of Phi. Spectraplex: log X (the +I term is dropped; it is
/// absorbed by trace normalization). Requires X positive definite there.
SymMatrix mirror_gradient(const MirrorSetup& setup, const SymMatrix& x);
/// Inverse gradient map. Spectraplex: exp(Y) / tr exp(Y).
SymMatrix mirror_inverse(const MirrorSetup& setup, const SymMatrix& y);
/// D_Phi(X, Y); quantum relative entropy in the spectraplex setup.
double bregman(const MirrorSetup& setup, const SymMatrix& x, const SymMatrix& y);

/// Mirror-descent state. The iterate is a function of (X0, grad_sum, eta)
/// alone, so gradients may be added in any order.
class MirrorState {
 public:
  MirrorState(MirrorSetup setup, SymMatrix x0, double eta);

  const MirrorSetup& setup() const { return setup_; }
  const SymMatrix& x0() const { return x0_; }
  const SymMatrix& grad_sum() const { return grad_sum_; }
  double eta() const { return eta_; }
  std::size_t steps() const { return steps_; }

  void add_gradient(const SymMatrix& g);
  void add_gradient(const Eigen::MatrixXd& g, double sign);
  /// Sets the gradient sum directly (used when enumerating nets).
  void set_grad_sum(SymMatrix sum, std::size_t steps);

 private:
  friend SymMatrix md_iterate(const MirrorState& state);
  MirrorSetup setup_;
  SymMatrix x0_;
  SymMatrix base_;  // grad Phi(X0)
  SymMatrix grad_sum_;
  double eta_;
  std::size_t steps_ = 0;
};

/// grad Phi^{-1}(grad Phi(X0) - eta * grad_sum).
SymMatrix md_iterate(const MirrorState& state);

struct Subgradient {
  std::size_t index = 0;  // 0-based i*
  double sign = 1.0;
  double value = 0;  // f_U(X) = max_i |<A_i, X - U>|
};

/// Uses the cached image A(U); ties go to the lowest index, exact zero to +1.
Subgradient subgrad_fU(const EvaluationMap& map, const Eigen::VectorXd& image_u, const SymMatrix& x);
Subgradient subgrad_fU(const Instance& inst, const SymMatrix& x, const SymMatrix& u);

/// Largest dual norm max_i ||A_i||_{S_{r}}, r the conjugate of the setup's
/// primal norm, floored at 1: the Lipschitz constant of every f_U.
double lipschitz_constant(const EvaluationMap& map, const MirrorSetup& setup);

struct MdRun {
  double best_value = 0;
  std::size_t best_step = 0;
  double bound = 0;  // L sqrt(2 D / (rho T))
  bool guarantee_held = true;
  double d_used = 0;  // D fed to the step size
  double d_actual = 0;  // D_Phi(U, X0)
  double eta = 0;
  double lipschitz = 1;
  std::vector<double> values;  // f_U(X_s), s = 0..T
  std::vector<Subgradient> gradients;
  SymMatrix final_iterate;
};

/// T steps of mirror descent on f_U from X0; min over X_0..X_T. With no
/// d_max the exact D_Phi(U, X0) sets the step size.
MdRun md_minimize(const EvaluationMap& map, const SymMatrix& u, const SymMatrix& x0, const MirrorSetup& setup,
                  std::size_t steps, std::optional<double> d_max = {});

/// Checks that U lies in the setup's feasible set (spectraplex member, or
/// ||U||_{S_{p*}} <= 1); throws ValidationError otherwise.
void check_feasible(const MirrorSetup& setup, const SymMatrix& u, double tol = 1e-8);

}  // namespace mdisc
