#include "mdisc/cover.hpp"

#include "mdisc/errors.hpp"
#include "mdisc/parallel.hpp"
#include "mdisc/sampling.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>

namespace mdisc {

BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt out = 1;
  for (unsigned i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

NetSizeBound net_size_bound(std::size_t n) {
  if (n == 0) throw ValidationError("net size bound needs n >= 1");
  const auto nn = static_cast<unsigned>(n);
  NetSizeBound out;
  for (unsigned t = 0; t <= nn; ++t) out.sum += binomial(t + 2 * nn - 1, 2 * nn - 1);
  out.bound = BigInt(nn + 1) * binomial(3 * nn, nn);
  return out;
}

namespace {

using Key = std::vector<int>;

// All d in Z^n with ||d||_1 <= budget, in lexicographic order.
void lattice_points(std::size_t n, int budget, Key& cur, std::vector<Key>& out) {
  if (cur.size() == n) {
    out.push_back(cur);
    return;
  }
  for (int v = -budget; v <= budget; ++v) {
    cur.push_back(v);
    lattice_points(n, budget - std::abs(v), cur, out);
    cur.pop_back();
  }
}

struct CoverSetup {
  std::size_t budget;
  double eta;
};

CoverSetup prepare(const EvaluationMap& map, const std::vector<SymMatrix>& starts, const MirrorSetup& setup,
                   double d_max, std::optional<std::size_t> budget, std::size_t n_cap) {
  if (!map.symmetric()) throw ValidationError("cover enumeration requires symmetric matrices");
  if (n_cap > kCoverCap) throw CapacityError("cover enumeration cap cannot exceed 8");
  if (map.n() > n_cap) {
    throw CapacityError("cover enumeration needs n <= " + std::to_string(n_cap) + ", got n=" + std::to_string(map.n()));
  }
  if (starts.empty()) throw ValidationError("cover enumeration needs at least one start");
  if (!(d_max >= 0)) throw ValidationError("D_max must be non-negative");
  const std::size_t steps = budget.value_or(map.n());
  const double eta = steps > 0 && d_max > 0 ? eta_for(lipschitz_constant(map, setup), setup.rho(), d_max, steps) : 0.0;
  return {steps, eta};
}

NetCover header(const EvaluationMap& map, const std::vector<SymMatrix>& starts, const MirrorSetup& setup,
                double d_max, const CoverSetup& cs) {
  NetCover out;
  out.n = map.n();
  out.starts = starts.size();
  out.budget = cs.budget;
  out.eta = cs.eta;
  out.d_max = d_max;
  const auto nn = static_cast<unsigned>(map.n());
  for (unsigned t = 0; t <= cs.budget; ++t) out.multisets += binomial(t + 2 * nn - 1, 2 * nn - 1);
  out.multisets *= starts.size();
  out.radius_bound = cs.budget == 0 ? std::numeric_limits<double>::infinity()
                                    : lipschitz_constant(map, setup) *
                                          std::sqrt(2.0 * d_max / (setup.rho() * static_cast<double>(cs.budget)));
  return out;
}

}  // namespace

NetCover enumerate_cover(const EvaluationMap& map, const std::vector<SymMatrix>& starts, const MirrorSetup& setup,
                         double d_max, std::optional<std::size_t> budget, std::size_t n_cap) {
  const CoverSetup cs = prepare(map, starts, setup, d_max, budget, n_cap);
  NetCover out = header(map, starts, setup, d_max, cs);
  std::vector<Key> keys;
  Key cur;
  lattice_points(map.n(), static_cast<int>(cs.budget), cur, keys);

  const std::size_t per_start = keys.size();
  out.distinct = per_start * starts.size();
  out.images.resize(static_cast<Index>(map.n()), static_cast<Index>(out.distinct));
  out.start_of.resize(out.distinct);
  std::vector<MirrorState> states;
  for (const auto& s : starts) states.emplace_back(setup, s, cs.eta);

#pragma omp parallel for schedule(dynamic, 64) num_threads(worker_count())
  for (std::int64_t j = 0; j < static_cast<std::int64_t>(out.distinct); ++j) {
    const std::size_t si = static_cast<std::size_t>(j) / per_start;
    const Key& d = keys[static_cast<std::size_t>(j) % per_start];
    Eigen::VectorXd dv(static_cast<Index>(d.size()));
    std::size_t steps = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      dv(static_cast<Index>(i)) = d[i];
      steps += static_cast<std::size_t>(std::abs(d[i]));
    }
    MirrorState state = states[si];
    state.set_grad_sum(map.combine_sym(dv), steps);
    out.images.col(static_cast<Index>(j)) = map.apply(md_iterate(state).matrix());
    out.start_of[static_cast<std::size_t>(j)] = si;
  }
  return out;
}

namespace serial {

NetCover enumerate_cover(const EvaluationMap& map, const std::vector<SymMatrix>& starts, const MirrorSetup& setup,
                         double d_max, std::optional<std::size_t> budget, std::size_t n_cap) {
  const CoverSetup cs = prepare(map, starts, setup, d_max, budget, n_cap);
  NetCover out = header(map, starts, setup, d_max, cs);
  const std::size_t n = map.n();
  std::vector<Eigen::MatrixXd> mats(n);
  for (std::size_t i = 0; i < n; ++i) mats[i] = map.matrix(i);

  std::vector<Eigen::VectorXd> columns;
  for (std::size_t si = 0; si < starts.size(); ++si) {
    // Walk every multiset of signed generators (counts c_k, k < 2n, total <=
    // budget), replaying its gradients one at a time; dedupe by net counts.
    std::map<Key, Eigen::VectorXd> seen;
    std::vector<int> counts(2 * n, 0);
    const auto visit = [&](const auto& self, std::size_t k, int left) -> void {
      if (k == 2 * n) {
        Key d(n);
        for (std::size_t i = 0; i < n; ++i) d[i] = counts[i] - counts[n + i];
        if (seen.count(d)) return;
        MirrorState state(setup, starts[si], cs.eta);
        for (std::size_t g = 0; g < 2 * n; ++g) {
          for (int c = 0; c < counts[g]; ++c) state.add_gradient(mats[g % n], g < n ? 1.0 : -1.0);
        }
        seen.emplace(std::move(d), map.apply(md_iterate(state).matrix()));
        return;
      }
      for (int c = 0; c <= left; ++c) {
        counts[k] = c;
        self(self, k + 1, left - c);
      }
      counts[k] = 0;
    };
    visit(visit, 0, static_cast<int>(cs.budget));
    for (auto& [key, image] : seen) {
      columns.push_back(std::move(image));
      out.start_of.push_back(si);
    }
  }
  out.distinct = columns.size();
  out.images.resize(static_cast<Index>(n), static_cast<Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) out.images.col(static_cast<Index>(j)) = columns[j];
  return out;
}

}  // namespace serial

std::vector<SymMatrix> sample_feasible(const MirrorSetup& setup, Index m, std::size_t count, std::uint64_t seed,
                                       std::optional<Index> block) {
  std::vector<SymMatrix> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(derive_seed(seed, i));
    if (setup.kind() == MirrorSetup::Kind::spectraplex) {
      out.push_back(block ? random_block_density(rng, m, *block) : random_density(rng, m));
    } else {
      out.push_back(random_schatten_ball(rng, m, Exponent(setup.p_star()), i % 2 == 0));
    }
  }
  return out;
}

double cover_radius(const NetCover& net, const EvaluationMap& map, const std::vector<SymMatrix>& us) {
  if (net.distinct == 0) throw ValidationError("empty net");
  std::vector<double> dist(us.size());
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(us.size()); ++k) {
    const Eigen::VectorXd image = map.apply(us[static_cast<std::size_t>(k)].matrix());
    dist[static_cast<std::size_t>(k)] = (net.images.colwise() - image).cwiseAbs().colwise().maxCoeff().minCoeff();
  }
  return dist.empty() ? 0.0 : *std::max_element(dist.begin(), dist.end());
}

StartSelector nearest_start(const MirrorSetup& setup, std::vector<SymMatrix> starts) {
  if (starts.empty()) throw ValidationError("start list is empty");
  return [setup, starts = std::move(starts)](const SymMatrix& u) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < starts.size(); ++i) {
      const double d = bregman(setup, u, starts[i]);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    return starts[best];
  };
}

namespace {

CoverSample run_one(const EvaluationMap& map, const StartSelector& select, const MirrorSetup& setup,
                    const SymMatrix& u) {
  const MdRun run = md_minimize(map, u, select(u), setup, map.n());
  return {run.d_actual, run.best_value, run.bound, run.guarantee_held, run.best_step};
}

CoverReport summarize(std::vector<CoverSample> samples) {
  CoverReport rep;
  rep.samples = std::move(samples);
  for (const auto& s : rep.samples) {
    rep.successes += s.held ? 1 : 0;
    if (s.bound > 0) rep.worst_ratio = std::max(rep.worst_ratio, s.best / s.bound);
  }
  rep.fraction = rep.samples.empty() ? 1.0 : static_cast<double>(rep.successes) / static_cast<double>(rep.samples.size());
  return rep;
}

}  // namespace

CoverReport verify_cover(const EvaluationMap& map, const StartSelector& select, const MirrorSetup& setup,
                         const std::vector<SymMatrix>& us) {
  std::vector<CoverSample> samples(us.size());
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(us.size()); ++k) {
    try {
      samples[static_cast<std::size_t>(k)] = run_one(map, select, setup, us[static_cast<std::size_t>(k)]);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return summarize(std::move(samples));
}

CoverReport verify_cover_sampled(const EvaluationMap& map, const StartSelector& select, const MirrorSetup& setup,
                                 std::size_t samples, std::uint64_t seed, std::optional<Index> block) {
  return verify_cover(map, select, setup, sample_feasible(setup, map.m(), samples, seed, block));
}

namespace serial {

CoverReport verify_cover(const EvaluationMap& map, const StartSelector& select, const MirrorSetup& setup,
                         const std::vector<SymMatrix>& us) {
  std::vector<CoverSample> samples;
  for (const auto& u : us) samples.push_back(run_one(map, select, setup, u));
  return summarize(std::move(samples));
}

}  // namespace serial

}  // namespace mdisc
