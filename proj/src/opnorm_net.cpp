#include "mdisc/entropy_net.hpp"
#include "mdisc/errors.hpp"
#include "mdisc/sampling.hpp"

#include <cmath>

namespace mdisc {

SymMatrix mix_with_identity(const SymMatrix& y, Index m) {
  if (y.dim() != m) throw DimensionError("mix_with_identity: dimension mismatch");
  return 0.5 * y + (0.5 / static_cast<double>(m)) * SymMatrix::identity(m);
}

namespace {

// X = I/2 + [[c1, c2], [c2, -c1]]; eigenvalues 1/2 +- |c|.
SymMatrix disk_point(double c1, double c2) {
  Eigen::Matrix2d x;
  x << 0.5 + c1, c2, c2, 0.5 - c1;
  return SymMatrix::trusted(x);
}

std::vector<SymMatrix> disk_net(double radius) {
  const double spacing = std::sqrt(2.0) * radius;
  const double reach = 0.5 + radius;
  const int k = static_cast<int>(std::ceil(reach / spacing));
  std::vector<SymMatrix> out;
  std::vector<Eigen::Vector2d> seen;
  for (int i = -k; i <= k; ++i) {
    for (int j = -k; j <= k; ++j) {
      Eigen::Vector2d g(i * spacing, j * spacing);
      const double r = g.norm();
      if (r > reach) continue;
      if (r > 0.5) g *= 0.5 / r;  // projection onto the disk never increases distances
      bool dup = false;
      for (const auto& s : seen) dup = dup || (s - g).norm() < 1e-12;
      if (dup) continue;
      seen.push_back(g);
      out.push_back(disk_point(g(0), g(1)));
    }
  }
  return out;
}

double op_distance(const SymMatrix& a, const SymMatrix& b) { return schatten_norm(a - b, Exponent::infinity()); }

std::vector<SymMatrix> greedy_net(Index h, double radius, const OpNetOptions& options) {
  Rng rng(derive_seed(options.seed, static_cast<std::uint64_t>(h)));
  std::vector<SymMatrix> out = {(1.0 / static_cast<double>(h)) * SymMatrix::identity(h)};
  const double sqrt_h = std::sqrt(static_cast<double>(h));
  std::size_t streak = 0;
  while (streak < options.patience) {
    const SymMatrix x = random_density(rng, h);
    bool covered = false;
    for (const auto& p : out) {
      const double f = (x.matrix() - p.matrix()).norm();
      if (f / sqrt_h > radius) continue;  // ||D||_op >= ||D||_F / sqrt(h)
      if (f <= radius || op_distance(x, p) <= radius) {
        covered = true;
        break;
      }
    }
    if (covered) {
      ++streak;
      continue;
    }
    streak = 0;
    out.push_back(x);
    if (out.size() > options.max_points) {
      throw CapacityError("operator-norm net for h=" + std::to_string(h) + " at radius " + std::to_string(radius) +
                          " exceeds " + std::to_string(options.max_points) + " points");
    }
  }
  return out;
}

}  // namespace

std::vector<SymMatrix> opnorm_net_spectraplex(Index h, double radius, const OpNetOptions& options) {
  if (h < 1) throw ValidationError("block size must be positive");
  if (h > kOpNetMaxBlock) {
    throw CapacityError("operator-norm nets are supported for h <= " + std::to_string(kOpNetMaxBlock) +
                        ", got h=" + std::to_string(h));
  }
  if (!(radius > 0)) throw ValidationError("net radius must be positive");
  if (h == 1) return {SymMatrix::identity(1)};
  // Every X in S_h has eigenvalues in [0, 1], so ||X - I/h||_op <= 1 - 1/h.
  if (radius >= 1.0 - 1.0 / static_cast<double>(h)) return {(1.0 / static_cast<double>(h)) * SymMatrix::identity(h)};
  if (h == 2) return disk_net(radius);
  return greedy_net(h, radius, options);
}

}  // namespace mdisc
