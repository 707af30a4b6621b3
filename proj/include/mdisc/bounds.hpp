#pragma once

#include "mdisc/instance.hpp"
#include "mdisc/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mdisc {

/// ||sum_i x_i A_i||_{S_q}.
double eval_discrepancy(const EvaluationMap& map, const Eigen::VectorXd& x, Exponent q);
double eval_discrepancy(const Instance& inst, const Eigen::VectorXd& x, Exponent q);

struct BoundInputs {
  double n = 0;
  double m = 0;
  Exponent p;
  Exponent q;
  std::optional<double> r;  // defaults to m
  std::optional<double> h;  // defaults to m
};

/// Closed-form bound values, every "<~" evaluated with constant 1.
struct BoundReport {
  double k = 0;  // min(1, m/n)
  double spencer = 0;
  double matrix_spencer_conj = 0;
  double lowrank = 0;
  double block = 0;
  double schatten = 0;       // partial coloring
  double schatten_full = 0;  // times (1/2 + 1/q - 1/p)^{-1}; floor(log2 n) + 1 when that is 0
  double banaszczyk = 0;
  double komlos = 0;
  /// Names of bounds whose hypotheses (m >= sqrt(n), m >= n for Spencer)
  /// fail at these inputs. Values are still reported.
  std::vector<std::string> out_of_regime;

  /// Lookup by the names used in CSV headers and the CLI.
  double get(const std::string& name) const;
  static const std::vector<std::string>& names();
};

BoundReport bound_all(const BoundInputs& in);

struct SeparationResult {
  bool feasible = false;
  double value = 0;
  std::optional<Eigen::VectorXd> gradient;  // present iff infeasible
};

/// Subgradient G of ||.||_{S_q} at M, ||G||_{S_q*} = 1 for M != 0. For q = inf,
/// G = sign(l) v v^T for the eigenvalue of largest magnitude (lowest index
/// in descending order on ties).
SymMatrix norm_subgradient(const Spectrum& spectrum, Exponent q);

/// Membership test for D = {x : ||sum x_i A_i||_{S_q} <= t}; an infeasible
/// point comes back with g_i = <A_i, G>, so <g, x> = value and <g, z> <= t
/// on all of D.
SeparationResult separation_oracle(const EvaluationMap& map, const Eigen::VectorXd& x, double t,
                                   Exponent q);
SeparationResult separation_oracle(const Instance& inst, const Eigen::VectorXd& x, double t,
                                   Exponent q);

}  // namespace mdisc
