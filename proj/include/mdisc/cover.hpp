#pragma once

#include "mdisc/instance.hpp"
#include "mdisc/mirror.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace mdisc {

using BigInt = boost::multiprecision::cpp_int;

struct NetSizeBound {
  BigInt sum;    // sum_{t=0}^{n} C(t + 2n - 1, 2n - 1)
  BigInt bound;  // (n + 1) C(3n, n)
};

NetSizeBound net_size_bound(std::size_t n);
BigInt binomial(unsigned n, unsigned k);

inline constexpr std::size_t kCoverCap = 8;

/// Every iterate reachable from the starts within `budget` steps of mirror
/// descent with gradients from {+-A_i}. An iterate depends only on the
/// integer vector d = (#(+A_i) - #(-A_i))_i, so points are keyed by d with
/// ||d||_1 <= budget.
struct NetCover {
  std::size_t n = 0;
  std::size_t starts = 0;
  std::size_t budget = 0;
  BigInt multisets;           // count of gradient multisets of size <= budget, times |starts|
  std::size_t distinct = 0;   // points actually stored
  Eigen::MatrixXd images;     // n x distinct, column j = A(X_j)
  std::vector<std::size_t> start_of;  // start index per column
  double eta = 0;
  double d_max = 0;
  double radius_bound = 0;  // sqrt(2 D_max / (rho budget)), infinite for budget 0
};

NetCover enumerate_cover(const EvaluationMap& map, const std::vector<SymMatrix>& starts, const MirrorSetup& setup,
                         double d_max, std::optional<std::size_t> budget = {}, std::size_t n_cap = kCoverCap);

namespace serial {
NetCover enumerate_cover(const EvaluationMap& map, const std::vector<SymMatrix>& starts, const MirrorSetup& setup,
                         double d_max, std::optional<std::size_t> budget = {}, std::size_t n_cap = kCoverCap);
}

/// Random points of the setup's feasible set: densities (optionally block
/// diagonal with block size h) for the spectraplex, points of the S_{p*}
/// unit ball (half on the sphere) for Schatten.
std::vector<SymMatrix> sample_feasible(const MirrorSetup& setup, Index m, std::size_t count, std::uint64_t seed,
                                       std::optional<Index> block = {});

/// max over the given U of min_j ||A(U) - images_j||_inf.
double cover_radius(const NetCover& net, const EvaluationMap& map, const std::vector<SymMatrix>& us);

/// Picks the start X0 for a given U (e.g. the nearest net point).
using StartSelector = std::function<SymMatrix(const SymMatrix& u)>;

/// Start minimizing D_Phi(U, X0) over a finite list.
StartSelector nearest_start(const MirrorSetup& setup, std::vector<SymMatrix> starts);

struct CoverSample {
  double d = 0;  // D_Phi(U, X0)
  double best = 0;
  double bound = 0;
  bool held = false;
  std::size_t best_step = 0;
};

struct CoverReport {
  std::vector<CoverSample> samples;
  std::size_t successes = 0;
  double fraction = 0;
  double worst_ratio = 0;  // max best / bound over samples with bound > 0
};

/// Runs md_minimize for each U from its selected start with T = n and the
/// exact Bregman distance, recording whether min_s f_U(X_s) <= sqrt(2D/(rho n)).
CoverReport verify_cover(const EvaluationMap& map, const StartSelector& select, const MirrorSetup& setup,
                         const std::vector<SymMatrix>& us);
CoverReport verify_cover_sampled(const EvaluationMap& map, const StartSelector& select, const MirrorSetup& setup,
                                 std::size_t samples, std::uint64_t seed, std::optional<Index> block = {});

namespace serial {
CoverReport verify_cover(const EvaluationMap& map, const StartSelector& select, const MirrorSetup& setup,
                         const std::vector<SymMatrix>& us);
}

}  // namespace mdisc
