#pragma once

#include "mdisc/linalg.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace mdisc {

/// 1/2 Y + I/(2m). Positive definite with min eigenvalue >= 1/(2m) whenever Y is PSD.
SymMatrix mix_with_identity(const SymMatrix& y, Index m);

struct OpNetOptions {
  std::uint64_t seed = 0;
  std::size_t patience = 3000;    // h >= 3: stop after this many consecutive covered samples
  std::size_t max_points = 50000;  // per-block net size cap
};

inline constexpr Index kOpNetMaxBlock = 4;

/// Finite subset of S_h (PSD, trace one) covering S_h within `radius` in
/// operator norm. h = 1: {[1]}. radius >= 1 - 1/h: {I/h}. h = 2: S_2 is
/// isometric to a disk of radius 1/2 (X = I/2 + c (cos a, sin a; sin a, -cos a)
/// with op distance equal to the Euclidean one), covered exactly by a square
/// grid radially clipped to the disk. h = 3, 4: greedy net over random
/// densities, coverage audited empirically.
std::vector<SymMatrix> opnorm_net_spectraplex(Index h, double radius, const OpNetOptions& options = {});

struct EntropyNetOptions {
  std::size_t size_cap = 10'000'000;  // stored block candidates, and points when materializing
  OpNetOptions op;
};

/// Relative entropy net of the block-diagonal spectraplex S_m^h.
///
/// Stored factored: for every trace allocation value z in 0..N a list of
/// block candidates (z/N) * (op-net point at radius 1/z). The logical net is
/// { mix(diag(Y_1..Y_l)) : z in Z, Y_b in candidates(z_b) } with Z the
/// compositions of N into l parts.
class EntropyNet {
 public:
  Index m = 0;
  Index h = 0;            // block size after merging blocks until h m >= n
  Index h_requested = 0;
  std::size_t n = 0;
  Index blocks = 0;       // l = m / h
  int grid = 0;           // N = ceil(2 / eps)
  double eps = 0;         // op-norm net distance
  double declared_error = 0;  // max(1, log(2 h m / n))
  boost::multiprecision::cpp_int compositions;  // |Z|
  boost::multiprecision::cpp_int size;          // logical number of points
  std::vector<std::vector<SymMatrix>> candidates;  // [z][k], trace z/N each
  std::vector<std::vector<Eigen::MatrixXd>> candidate_logs;  // log(1/2 c + I/(2m)) per candidate

  std::size_t stored() const;
  /// Recomputes compositions, size and candidate_logs from the candidates.
  void prepare();

  struct Nearest {
    SymMatrix point;  // mixed, in the spectraplex
    double entropy = 0;  // S(X || point)
    std::vector<int> z;
    std::vector<std::size_t> choice;  // candidate index per block
  };
  /// Exact argmin over all logical points of S(X || Y), by dynamic programming
  /// over blocks: S(X||Y) = tr X log X - sum_b tr(X_b log Y_b).
  Nearest nearest(const SymMatrix& x) const;

  /// Every point, mixed. Throws CapacityError when size exceeds the cap.
  std::vector<SymMatrix> materialize(std::size_t cap) const;

  SymMatrix assemble(const std::vector<int>& z, const std::vector<std::size_t>& choice) const;

  nlohmann::json to_json(std::size_t materialize_cap = 0) const;
  static EntropyNet from_json(const nlohmann::json& j);
};

EntropyNet build_entropy_net(Index m, Index h, std::size_t n, const EntropyNetOptions& options = {});

void save_entropy_net(const EntropyNet& net, const std::filesystem::path& path, std::size_t materialize_cap = 0);
EntropyNet load_entropy_net(const std::filesystem::path& path);

struct NetErrorReport {
  std::vector<double> entropies;  // per trial, min over the net
  double max_entropy = 0;
  double declared = 0;
  double c_net = 0;  // max_entropy / declared
  double c_limit = 0;
  bool pass = false;
};

/// Samples X from the block-diagonal spectraplex with the requested block
/// size (diagonal when h = 1) and measures min_Y S(X || Y).
NetErrorReport net_error_sampled(const EntropyNet& net, std::size_t trials, std::uint64_t seed,
                                 double c_limit = 4.0);
NetErrorReport net_error(const EntropyNet& net, const std::vector<SymMatrix>& xs, double c_limit = 4.0);

namespace serial {
/// Reference: min over materialized points by direct relative entropy.
NetErrorReport net_error(const EntropyNet& net, const std::vector<SymMatrix>& xs, double c_limit = 4.0,
                         std::size_t cap = 200000);
}

/// Check of S(X || mix(Y)) <= log(2 m eps) + 1e-8. Throws
/// ValidationError if ||X - Y||_op > eps, eps < 1/m, or X, Y leave the spectraplex.
bool entropy_from_op_check(const SymMatrix& x, const SymMatrix& y, double eps);

struct OpEntropyReport {
  std::size_t trials = 0;
  std::size_t failures = 0;
  double worst_slack = -1e300;  // max of S(X || mix(Y)) - log(2 m eps)
};

/// Random (X, Y, eps) with eps uniform in [1/m, 1], Y a density and X a
/// density pulled toward Y until ||X - Y||_op <= eps; trial k uses
/// derive_seed(seed, k).
OpEntropyReport op_entropy_sampled(Index m, std::size_t trials, std::uint64_t seed);

}  // namespace mdisc
