#include "mdisc/bounds.hpp"

#include "mdisc/errors.hpp"

#include <algorithm>
#include <cmath>

namespace mdisc {

double eval_discrepancy(const EvaluationMap& map, const Eigen::VectorXd& x, Exponent q) {
  const Eigen::MatrixXd sum = map.combine(x);
  if (map.symmetric()) return schatten_norm(SymMatrix::trusted(sum), q);
  return schatten_norm_general(sum, q);
}

double eval_discrepancy(const Instance& inst, const Eigen::VectorXd& x, Exponent q) {
  return eval_discrepancy(EvaluationMap(inst), x, q);
}

const std::vector<std::string>& BoundReport::names() {
  static const std::vector<std::string> kNames = {
      "spencer", "matrix_spencer_conj", "lowrank",    "block",
      "schatten", "schatten_full",      "banaszczyk", "komlos"};
  return kNames;
}

double BoundReport::get(const std::string& name) const {
  if (name == "spencer") return spencer;
  if (name == "matrix_spencer_conj") return matrix_spencer_conj;
  if (name == "lowrank") return lowrank;
  if (name == "block") return block;
  if (name == "schatten") return schatten;
  if (name == "schatten_full") return schatten_full;
  if (name == "banaszczyk") return banaszczyk;
  if (name == "komlos") return komlos;
  throw ValidationError("unknown bound name '" + name + "'");
}

BoundReport bound_all(const BoundInputs& in) {
  if (!(in.n >= 1) || !(in.m >= 1)) throw ValidationError("bounds need n >= 1 and m >= 1");
  const double n = in.n;
  const double m = in.m;
  const double r = in.r.value_or(m);
  const double h = in.h.value_or(m);
  const double ip = in.p.reciprocal();
  const double iq = in.q.reciprocal();

  BoundReport out;
  out.k = std::min(1.0, m / n);
  // With m < n the vector case pads to m = n, so the log term bottoms out at log 2.
  out.spencer = std::sqrt(n * std::log(2.0 * std::max(m, n) / n));
  out.matrix_spencer_conj = std::sqrt(n * std::max(1.0, std::log(m / n)));
  out.lowrank = std::sqrt(n * std::max(1.0, std::log(r * out.k)));
  out.block = std::sqrt(n * std::max(1.0, std::log(h * m / n)));
  const double inner = std::max(1.0, std::log(r * out.k));
  const double capped = in.p.is_infinite() ? inner : std::min(in.p.value(), inner);
  out.schatten = std::sqrt(n * capped) * std::pow(out.k, ip - iq);
  // At p = 2, q = inf the per-round bounds stop shrinking geometrically and the
  // sum over rounds is the round count floor(log2 n) + 1 instead.
  const double beta = 0.5 + iq - ip;
  out.schatten_full = beta > 1e-12 ? out.schatten / beta : out.schatten * (std::floor(std::log2(n)) + 1.0);
  out.banaszczyk = std::pow(m, 1.0 + iq - ip);
  out.komlos = std::sqrt(std::min(m, n));

  if (m < n) out.out_of_regime.push_back("spencer");
  if (m < std::sqrt(n)) {
    for (const char* name : {"matrix_spencer_conj", "lowrank", "block", "schatten", "schatten_full"}) {
      out.out_of_regime.emplace_back(name);
    }
  }
  return out;
}

SymMatrix norm_subgradient(const Spectrum& s, Exponent q) {
  const Index m = s.dim();
  if (m == 0) return SymMatrix::zero(0);
  if (q.is_infinite()) {
    Index best = 0;
    for (Index j = 1; j < m; ++j) {
      if (std::abs(s.values(j)) > std::abs(s.values(best))) best = j;
    }
    const double sign = s.values(best) < 0 ? -1.0 : 1.0;
    return sign * SymMatrix::outer(s.vectors.col(best));
  }
  const double norm = schatten_norm(s, q);
  if (norm == 0.0) return SymMatrix::zero(m);
  const double e = q.value();
  Eigen::VectorXd w(m);
  for (Index j = 0; j < m; ++j) {
    const double l = s.values(j);
    // (|l| / norm)^{q-1} keeps the scale bounded for large q.
    w(j) = l == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(l) / norm, e - 1.0), l);
  }
  return SymMatrix::trusted(s.vectors * w.asDiagonal() * s.vectors.transpose());
}

SeparationResult separation_oracle(const EvaluationMap& map, const Eigen::VectorXd& x, double t,
                                   Exponent q) {
  if (!(t > 0)) throw ValidationError("separation oracle needs t > 0");
  const SymMatrix sum = map.combine_sym(x);
  const Spectrum s = sym_eig(sum);
  SeparationResult out;
  out.value = schatten_norm(s, q);
  out.feasible = out.value <= t;
  if (!out.feasible) out.gradient = map.apply(norm_subgradient(s, q).matrix());
  return out;
}

SeparationResult separation_oracle(const Instance& inst, const Eigen::VectorXd& x, double t,
                                   Exponent q) {
  return separation_oracle(EvaluationMap(inst), x, t, q);
}

}  // namespace mdisc
