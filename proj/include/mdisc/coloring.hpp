#pragma once

#include "mdisc/errors.hpp"
#include "mdisc/instance.hpp"
#include "mdisc/linalg.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace mdisc {

struct PartialColoringParams {
  double sigma = 3.0;
  double oracle_cap_factor = 50;  // separation-oracle calls per projection = factor * n_active
  double delta_freeze = 1e-6;
  double growth = 1.25;
  std::size_t max_retries = 8;
  double feasibility_tol = 1e-3;  // relative slack accepted when the cutting-plane loop stops
  std::uint64_t seed = 0;
  std::optional<Exponent> q;  // overrides the instance's target exponent

  void validate() const;
};

/// x is the increment found in one call; x + y is the running fractional
/// coloring. For full colorings y = 0 and x is the sign vector.
struct Coloring {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  std::vector<std::size_t> frozen;  // sorted, over all n coordinates
  double discrepancy = 0;           // ||sum x_i A_i||_{S_q}
  double target = 0;                // t requested
  double c = 0;                     // discrepancy / t
  std::size_t retries = 0;
  std::size_t oracle_calls = 0;
  std::size_t active = 0;  // coordinates with |y_i| < 1 at entry
  std::size_t newly_frozen = 0;
};

/// Raised when no retry freezes half the active coordinates.
class ColoringFailure : public Error {
 public:
  ColoringFailure(const std::string& what, Coloring best, std::optional<std::size_t> round = {})
      : Error(what), best_(std::move(best)), round_(round) {}
  const Coloring& best() const { return best_; }
  std::optional<std::size_t> round() const { return round_; }

 private:
  Coloring best_;
  std::optional<std::size_t> round_;
};

/// Gaussian projection onto the discrepancy body intersected with the
/// shifted cube, restricted to coordinates with |y_i| < 1.
Coloring partial_color(const Instance& inst, double t, const Eigen::VectorXd& y,
                       const PartialColoringParams& params);
Coloring partial_color(const EvaluationMap& map, Exponent q, double t, const Eigen::VectorXd& y,
                       const PartialColoringParams& params);

using BoundFn = std::function<double(std::size_t active)>;

/// s -> bound_all evaluated at n = s and the instance's (m, p, q, r, h).
BoundFn bound_fn_for(const Instance& inst, const std::string& bound_name);

struct RoundRecord {
  std::size_t active = 0;
  std::size_t frozen = 0;
  double target = 0;
  double discrepancy = 0;
  double c = 0;
  std::size_t retries = 0;
  std::size_t oracle_calls = 0;
};

struct FullColoring {
  Eigen::VectorXd x;  // entries exactly +-1
  double discrepancy = 0;
  std::vector<RoundRecord> rounds;
  double cleanup_discrepancy = 0;
  std::size_t cleanup_coordinates = 0;
  double round_sum = 0;  // sum of per-round discrepancies plus cleanup
  bool triangle_ok = true;
  std::optional<double> beta;
  std::optional<double> geometric_ratio;  // discrepancy / ((1 - 2^-beta)^-1 n^beta)
};

FullColoring full_color(const Instance& inst, const BoundFn& bound_fn,
                        const PartialColoringParams& params, std::optional<double> beta = {});

struct BruteForceResult {
  Eigen::VectorXd x;
  double value = 0;
  std::uint64_t evaluated = 0;
};

inline constexpr std::size_t kBruteForceCap = 22;

/// Exact minimum of ||sum x_i A_i||_{S_q} over x in {+-1}^n with x_1 = +1.
/// Gray-code walk split into OpenMP chunks; ties go to the lowest code.
BruteForceResult brute_force_min(const Instance& inst, Exponent q, std::size_t cap = kBruteForceCap);

namespace serial {
/// Reference: direct enumeration in binary order, each sum built from scratch.
BruteForceResult brute_force_min(const Instance& inst, Exponent q, std::size_t cap = kBruteForceCap);
}  // namespace serial

}  // namespace mdisc
