#include "mdisc/measure.hpp"

#include "mdisc/bounds.hpp"
#include "mdisc/errors.hpp"
#include "mdisc/parallel.hpp"
#include "mdisc/sampling.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace mdisc {

namespace {

void check(std::size_t samples, const MeasureOptions& options) {
  if (samples < 1) throw ValidationError("measure needs samples >= 1");
  if (options.block_size < 1) throw ValidationError("measure block size must be positive");
}

void fill_block(const EvaluationMap& map, Exponent q, std::uint64_t seed, std::size_t b, std::size_t begin,
                std::size_t end, bool antithetic, MeasureDraws& out) {
  Rng rng(derive_seed(seed, b));
  const auto n = static_cast<Index>(map.n());
  for (std::size_t k = begin; k < end; ++k) {
    const Eigen::VectorXd g = gaussian_vector(rng, n);
    out.values[k] = eval_discrepancy(map, g, q);
    if (antithetic) out.mirrored[k] = eval_discrepancy(map, -g, q);
  }
}

MeasureDraws allocate(std::size_t samples, const MeasureOptions& options) {
  MeasureDraws d;
  d.values.resize(samples);
  if (options.antithetic) d.mirrored.resize(samples);
  return d;
}

}  // namespace

MeasureDraws measure_draws(const EvaluationMap& map, Exponent q, std::size_t samples, std::uint64_t seed,
                           const MeasureOptions& options) {
  check(samples, options);
  MeasureDraws out = allocate(samples, options);
  const std::size_t bs = options.block_size;
  const std::size_t blocks = (samples + bs - 1) / bs;
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
  for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
    const auto ub = static_cast<std::size_t>(b);
    fill_block(map, q, seed, ub, ub * bs, std::min(samples, (ub + 1) * bs), options.antithetic, out);
  }
  return out;
}

namespace serial {

MeasureDraws measure_draws(const EvaluationMap& map, Exponent q, std::size_t samples, std::uint64_t seed,
                           const MeasureOptions& options) {
  check(samples, options);
  MeasureDraws out = allocate(samples, options);
  const std::size_t bs = options.block_size;
  for (std::size_t b = 0; b * bs < samples; ++b) {
    fill_block(map, q, seed, b, b * bs, std::min(samples, (b + 1) * bs), options.antithetic, out);
  }
  return out;
}

MeasureEstimate mc_gaussian_measure(const Instance& inst, double t, Exponent q, std::size_t samples,
                                    std::uint64_t seed, const MeasureOptions& options) {
  const EvaluationMap map(inst);
  return estimate_from_draws(serial::measure_draws(map, q, samples, seed, options), inst.n(), t, seed);
}

}  // namespace serial

MeasureEstimate estimate_from_draws(const MeasureDraws& draws, std::size_t n, double t, std::uint64_t seed) {
  MeasureEstimate est;
  est.n = n;
  est.t = t;
  est.seed = seed;
  est.samples = draws.values.size();
  for (std::size_t k = 0; k < draws.values.size(); ++k) {
    const bool hit = draws.values[k] <= t;
    est.hits += hit ? 1 : 0;
    if (!draws.mirrored.empty() && (draws.mirrored[k] <= t) != hit) ++est.antithetic_mismatches;
  }
  const double s = static_cast<double>(est.samples);
  est.censored = est.hits == 0;
  est.estimate = est.censored ? std::min(1.0, 3.0 / s) : static_cast<double>(est.hits) / s;
  const double p = static_cast<double>(est.hits) / s;
  est.half_width = 1.96 * std::sqrt(p * (1 - p) / s);
  est.log2_per_coord = n == 0 ? 0.0 : std::log2(est.estimate) / static_cast<double>(n);
  return est;
}

MeasureEstimate mc_gaussian_measure(const Instance& inst, double t, Exponent q, std::size_t samples,
                                    std::uint64_t seed, const MeasureOptions& options) {
  const EvaluationMap map(inst);
  return estimate_from_draws(measure_draws(map, q, samples, seed, options), inst.n(), t, seed);
}

std::vector<MeasureEstimate> mc_gaussian_measure(const Instance& inst, const std::vector<double>& ts, Exponent q,
                                                 std::size_t samples, std::uint64_t seed,
                                                 const MeasureOptions& options) {
  const EvaluationMap map(inst);
  const MeasureDraws draws = measure_draws(map, q, samples, seed, options);
  std::vector<MeasureEstimate> out;
  for (double t : ts) out.push_back(estimate_from_draws(draws, inst.n(), t, seed));
  return out;
}

MeasureSweep measure_exponent_sweep(const InstanceFamily& family, const ThresholdRule& rule,
                                    const std::vector<std::size_t>& ns, std::size_t samples, std::uint64_t seed,
                                    double alpha, const MeasureOptions& options) {
  if (ns.empty()) throw ValidationError("sweep needs at least one n");
  if (!(alpha > 0)) throw ValidationError("alpha must be positive");
  MeasureSweep sweep;
  sweep.alpha = alpha;
  sweep.bounded = true;
  sweep.collapsed = true;
  double worst = 0;
  for (std::size_t n : ns) {
    Instance inst = family(n);
    const double t = rule(inst);
    const std::uint64_t s = derive_seed(seed, n);
    MeasureEstimate est = mc_gaussian_measure(inst, t, inst.q, samples, s, options);
    worst = std::min(worst, est.log2_per_coord);
    if (est.censored) {
      sweep.bounded = false;
    } else {
      if (est.log2_per_coord < -alpha) sweep.bounded = false;
      if (est.log2_per_coord >= -alpha) sweep.collapsed = false;
    }
    sweep.rows.push_back({std::move(inst), est});
  }
  sweep.fitted_alpha = worst < 0 ? -worst : 0.0;
  return sweep;
}

CsvTable measure_table() {
  return CsvTable({"n", "m", "p", "q", "r", "h", "t", "samples", "hits", "estimate", "log2_per_coord",
                   "ci_halfwidth", "seed", "censored"});
}

void add_measure_row(CsvTable& table, const Instance& inst, Exponent q, const MeasureEstimate& est) {
  const auto r = static_cast<std::int64_t>(inst.rank_bound.value_or(inst.m));
  const auto h = static_cast<std::int64_t>(inst.block_size.value_or(inst.m));
  table.add_row({static_cast<std::uint64_t>(inst.n()), static_cast<std::int64_t>(inst.m), inst.p.to_string(),
                 q.to_string(), r, h, est.t, static_cast<std::uint64_t>(est.samples),
                 static_cast<std::uint64_t>(est.hits), est.estimate, est.log2_per_coord, est.half_width, est.seed,
                 est.censored});
}

}  // namespace mdisc
