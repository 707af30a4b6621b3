#include "mdisc/coloring.hpp"

#include "mdisc/bounds.hpp"
#include "mdisc/projection.hpp"
#include "mdisc/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace mdisc {

void PartialColoringParams::validate() const {
  if (!(sigma > 0)) throw ValidationError("sigma must be positive");
  if (!(oracle_cap_factor > 0)) throw ValidationError("projection cap must be positive");
  if (!(delta_freeze > 0) || delta_freeze > 1e-3) {
    throw ValidationError("delta_freeze must lie in (0, 1e-3]");
  }
  if (!(growth > 1)) throw ValidationError("retry growth factor must exceed 1");
  if (!(feasibility_tol >= 0)) throw ValidationError("feasibility tolerance must be non-negative");
}

namespace {

struct Attempt {
  Eigen::VectorXd z;  // on active coordinates, snapped
  std::size_t frozen = 0;
  std::size_t oracle_calls = 0;
};

// One Gaussian sample projected onto {z : lower <= z <= upper, ||A(z)|| <= t}
// by a cutting-plane loop; each round re-projects onto box and all cuts so far.
Attempt project_gaussian(const EvaluationMap& map, Exponent q, double t, const Eigen::VectorXd& lower,
                         const Eigen::VectorXd& upper, const PartialColoringParams& params,
                         std::uint64_t seed) {
  const Index k = lower.size();
  Rng rng(seed);
  const Eigen::VectorXd g = gaussian_vector(rng, k, params.sigma);

  BoxCutProjector projector(lower, upper);
  const auto cap = static_cast<std::size_t>(std::ceil(params.oracle_cap_factor * static_cast<double>(k)));
  const std::size_t keep = std::max<std::size_t>(64, 4 * static_cast<std::size_t>(k));
  Attempt out;
  const double limit = t * (1.0 + params.feasibility_tol);
  for (;;) {
    out.z = projector.project(g).z;
    const Spectrum s = sym_eig(map.combine_sym(out.z));
    ++out.oracle_calls;
    if (schatten_norm(s, q) <= limit || out.oracle_calls >= cap) break;
    if (q.is_infinite()) {
      for (Index j = 0; j < s.dim(); ++j) {
        const double l = s.values(j);
        if (std::abs(l) <= t) continue;
        const Eigen::VectorXd v = s.vectors.col(j);
        Eigen::VectorXd a = map.apply(v * v.transpose());
        if (l < 0) a = -a;
        projector.add_cut(std::move(a), t);
      }
    } else {
      projector.add_cut(map.apply(norm_subgradient(s, q).matrix()), t);
    }
    if (projector.cuts() > 2 * keep) projector.prune(keep);
  }
  return out;
}

}  // namespace

Coloring partial_color(const EvaluationMap& map, Exponent q, double t, const Eigen::VectorXd& y,
                       const PartialColoringParams& params) {
  params.validate();
  if (!(t > 0)) throw ValidationError("partial coloring needs t > 0");
  if (!map.symmetric()) throw ValidationError("partial coloring requires symmetric matrices");
  const std::size_t n = map.n();
  if (static_cast<std::size_t>(y.size()) != n) throw DimensionError("shift y has wrong length");

  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::abs(y(static_cast<Index>(i)));
    if (a > 1.0 + 1e-9) throw ValidationError("shift y lies outside [-1,1]");
    if (a < 1.0) active.push_back(i);
  }

  Coloring best;
  best.y = y;
  best.target = t;
  best.active = active.size();

  auto finish = [&](Coloring& c, const Eigen::VectorXd& z_active) {
    c.x = Eigen::VectorXd::Zero(static_cast<Index>(n));
    for (std::size_t k = 0; k < active.size(); ++k) c.x(static_cast<Index>(active[k])) = z_active(static_cast<Index>(k));
    c.frozen.clear();
    for (std::size_t i = 0; i < n; ++i) {
      const auto ii = static_cast<Index>(i);
      if (std::abs(c.x(ii) + y(ii)) >= 1.0 - params.delta_freeze) c.frozen.push_back(i);
    }
    c.discrepancy = active.empty() ? 0.0 : schatten_norm(map.combine_sym(c.x), q);
    c.c = c.discrepancy / t;
  };

  const Index k = static_cast<Index>(active.size());
  Eigen::VectorXd lower(k), upper(k);
  for (Index j = 0; j < k; ++j) {
    const double yj = y(static_cast<Index>(active[static_cast<std::size_t>(j)]));
    lower(j) = -1.0 - yj;
    upper(j) = 1.0 - yj;
  }

  const EvaluationMap sub = map.restricted(active);
  if (k == 0 || sub.all_zero()) {
    // The body is everything; push each coordinate to the nearer face.
    Eigen::VectorXd z(k);
    for (Index j = 0; j < k; ++j) z(j) = upper(j) >= -lower(j) ? upper(j) : lower(j);
    best.newly_frozen = static_cast<std::size_t>(k);
    finish(best, z);
    return best;
  }

  bool have_best = false;
  for (std::size_t attempt = 0; attempt <= params.max_retries; ++attempt) {
    const double t_eff = t * std::pow(params.growth, static_cast<double>(attempt));
    Attempt a = project_gaussian(sub, q, t_eff, lower, upper, params, derive_seed(params.seed, attempt));
    for (Index j = 0; j < k; ++j) {
      const double yj = y(static_cast<Index>(active[static_cast<std::size_t>(j)]));
      const double s = a.z(j) + yj;
      if (std::abs(s) >= 1.0 - params.delta_freeze) {
        a.z(j) = std::copysign(1.0, s) - yj;
        ++a.frozen;
      }
    }
    best.oracle_calls += a.oracle_calls;
    if (!have_best || a.frozen > best.newly_frozen) {
      have_best = true;
      const std::size_t calls = best.oracle_calls;
      best.newly_frozen = a.frozen;
      best.retries = attempt;
      finish(best, a.z);
      best.oracle_calls = calls;
    }
    if (2 * a.frozen >= static_cast<std::size_t>(k)) return best;
  }
  throw ColoringFailure("partial coloring froze only " + std::to_string(best.newly_frozen) + " of " +
                            std::to_string(k) + " active coordinates after " +
                            std::to_string(params.max_retries + 1) + " attempts",
                        best);
}

Coloring partial_color(const Instance& inst, double t, const Eigen::VectorXd& y,
                       const PartialColoringParams& params) {
  return partial_color(EvaluationMap(inst), params.q.value_or(inst.q), t, y, params);
}

BoundFn bound_fn_for(const Instance& inst, const std::string& bound_name) {
  BoundInputs in;
  in.m = static_cast<double>(inst.m);
  in.p = inst.p;
  in.q = inst.q;
  if (inst.rank_bound) in.r = static_cast<double>(*inst.rank_bound);
  if (inst.block_size) in.h = static_cast<double>(*inst.block_size);
  bound_all({1, in.m, in.p, in.q, in.r, in.h}).get(bound_name);  // rejects unknown names now
  return [in, bound_name](std::size_t active) {
    BoundInputs b = in;
    b.n = static_cast<double>(std::max<std::size_t>(active, 1));
    return bound_all(b).get(bound_name);
  };
}

FullColoring full_color(const Instance& inst, const BoundFn& bound_fn, const PartialColoringParams& params,
                        std::optional<double> beta) {
  params.validate();
  const EvaluationMap map(inst);
  const Exponent q = params.q.value_or(inst.q);
  const std::size_t n = inst.n();
  FullColoring out;
  out.beta = beta;
  if (n == 0) throw ValidationError("empty instance");
  if (!map.symmetric()) throw ValidationError("full coloring requires symmetric matrices");

  if (map.all_zero()) {
    out.x = Eigen::VectorXd::Ones(static_cast<Index>(n));
    return out;
  }

  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Index>(n));
  const auto count_active = [&x] {
    std::size_t c = 0;
    for (Index i = 0; i < x.size(); ++i) c += std::abs(x(i)) < 1.0 ? 1 : 0;
    return c;
  };

  const auto rounds = static_cast<std::size_t>(std::floor(std::log2(static_cast<double>(n))));
  for (std::size_t round = 0; round < rounds; ++round) {
    const std::size_t active = count_active();
    if (active <= 1) break;
    const double t = bound_fn(active);
    if (!(t > 0)) throw ValidationError("bound function must be positive");
    PartialColoringParams p = params;
    p.seed = derive_seed(params.seed, 1000 + round);
    Coloring c;
    try {
      c = partial_color(map, q, t, x, p);
    } catch (const ColoringFailure& e) {
      throw ColoringFailure(std::string(e.what()) + " (round " + std::to_string(round) + ")", e.best(), round);
    }
    x += c.x;
    // Frozen coordinates are exactly +-1 after snapping; clamp rounding residue.
    for (std::size_t i : c.frozen) x(static_cast<Index>(i)) = std::copysign(1.0, x(static_cast<Index>(i)));
    out.rounds.push_back({active, c.newly_frozen, t, c.discrepancy, c.c, c.retries, c.oracle_calls});
    out.round_sum += c.discrepancy;
  }

  // Cleanup: fix the leftover fractional coordinates with the best signs.
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(x(static_cast<Index>(i))) < 1.0) rest.push_back(i);
  }
  out.cleanup_coordinates = rest.size();
  const Eigen::VectorXd before = x;
  if (!rest.empty()) {
    if (rest.size() <= 16) {
      double best = std::numeric_limits<double>::infinity();
      Eigen::VectorXd best_x = x;
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << rest.size()); ++mask) {
        Eigen::VectorXd trial = x;
        for (std::size_t b = 0; b < rest.size(); ++b) {
          trial(static_cast<Index>(rest[b])) = (mask >> b) & 1U ? -1.0 : 1.0;
        }
        const double v = schatten_norm(map.combine_sym(trial), q);
        if (v < best) {
          best = v;
          best_x = trial;
        }
      }
      x = best_x;
    } else {
      for (std::size_t i : rest) x(static_cast<Index>(i)) = x(static_cast<Index>(i)) < 0 ? -1.0 : 1.0;
    }
    out.cleanup_discrepancy = schatten_norm(map.combine_sym(x - before), q);
    out.round_sum += out.cleanup_discrepancy;
  }

  out.x = x;
  out.discrepancy = schatten_norm(map.combine_sym(x), q);
  out.triangle_ok = out.discrepancy <= out.round_sum * (1.0 + 1e-12) + 1e-9;
  if (beta) {
    const double reference = std::pow(static_cast<double>(n), *beta) / (1.0 - std::pow(2.0, -*beta));
    out.geometric_ratio = out.discrepancy / reference;
  }
  return out;
}

}  // namespace mdisc
