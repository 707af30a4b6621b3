#pragma once

#include "mdisc/csv.hpp"
#include "mdisc/instance.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace mdisc {

struct MeasureOptions {
  bool antithetic = true;        // also evaluate -g and count disagreements
  std::size_t block_size = 4096;  // samples per derived-seed block
};

/// Estimate of gamma_n({x : ||sum x_i A_i||_{S_q} <= t}).
///
/// With zero hits the estimate is censored: estimate holds the rule-of-three
/// upper bound 3/samples and log2_per_coord is computed from it.
struct MeasureEstimate {
  std::size_t n = 0;
  double t = 0;
  std::size_t samples = 0;  // independent Gaussian draws
  std::size_t hits = 0;
  double estimate = 0;
  double log2_per_coord = 0;  // log2(estimate) / n
  double half_width = 0;      // 1.96 sqrt(estimate (1 - estimate) / samples)
  bool censored = false;
  std::size_t antithetic_mismatches = 0;  // draws where g and -g disagree
  std::uint64_t seed = 0;
};

/// Discrepancy ||sum g_i A_i||_{S_q} for each draw, and at -g when antithetic.
/// Block b uses seed derive_seed(seed, b); results are in draw order.
struct MeasureDraws {
  std::vector<double> values;
  std::vector<double> mirrored;  // empty unless antithetic
};

MeasureDraws measure_draws(const EvaluationMap& map, Exponent q, std::size_t samples, std::uint64_t seed,
                           const MeasureOptions& options = {});

/// Thresholds one set of draws at t.
MeasureEstimate estimate_from_draws(const MeasureDraws& draws, std::size_t n, double t, std::uint64_t seed);

MeasureEstimate mc_gaussian_measure(const Instance& inst, double t, Exponent q, std::size_t samples,
                                    std::uint64_t seed, const MeasureOptions& options = {});

/// Several thresholds over the same draws; estimates are non-decreasing in t.
std::vector<MeasureEstimate> mc_gaussian_measure(const Instance& inst, const std::vector<double>& ts, Exponent q,
                                                 std::size_t samples, std::uint64_t seed,
                                                 const MeasureOptions& options = {});

namespace serial {
MeasureDraws measure_draws(const EvaluationMap& map, Exponent q, std::size_t samples, std::uint64_t seed,
                           const MeasureOptions& options = {});
MeasureEstimate mc_gaussian_measure(const Instance& inst, double t, Exponent q, std::size_t samples,
                                    std::uint64_t seed, const MeasureOptions& options = {});
}  // namespace serial

using InstanceFamily = std::function<Instance(std::size_t n)>;
using ThresholdRule = std::function<double(const Instance& inst)>;

struct SweepRow {
  Instance instance;  // metadata only is used downstream
  MeasureEstimate estimate;
};

struct MeasureSweep {
  std::vector<SweepRow> rows;
  double alpha = 1.0;          // the fixed constant tested
  double fitted_alpha = 0;     // -min log2_per_coord; a lower bound when censored rows attain it
  bool bounded = false;        // every row uncensored with log2_per_coord >= -alpha
  bool collapsed = false;      // every row censored or below -alpha
};

/// Per n: build the instance, set t by the rule, estimate with seed
/// derive_seed(seed, n). Rows in the order of ns.
MeasureSweep measure_exponent_sweep(const InstanceFamily& family, const ThresholdRule& rule,
                                    const std::vector<std::size_t>& ns, std::size_t samples, std::uint64_t seed,
                                    double alpha = 1.0, const MeasureOptions& options = {});

/// Columns n, m, p, q, r, h, t, samples, hits, estimate, log2_per_coord,
/// ci_halfwidth, seed, censored.
CsvTable measure_table();
void add_measure_row(CsvTable& table, const Instance& inst, Exponent q, const MeasureEstimate& est);

}  // namespace mdisc
