#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace mdisc {

struct ProjectionOptions {
  std::size_t max_sweeps = 20000;
  double tolerance = 1e-10;  // on constraint violation / complementary slackness, relative to max(1, |b|)
};

/// Euclidean projection onto {z : lower <= z <= upper, <a_k, z> <= b_k for all k}.
///
/// Dual coordinate ascent over the half-space multipliers with the box kept
/// exact by clipping (Hildreth's method, the half-space case of Dykstra's
/// alternating projections): z(mu) = clip(g - sum_k mu_k a_k). Multipliers
/// persist between calls so that adding a cut warm-starts the next solve.
class BoxCutProjector {
 public:
  BoxCutProjector(Eigen::VectorXd lower, Eigen::VectorXd upper);

  void add_cut(Eigen::VectorXd normal, double offset);
  std::size_t cuts() const { return normals_.size(); }

  /// Drops cuts with zero multiplier, oldest first, until at most `keep` remain.
  void prune(std::size_t keep);

  struct Result {
    Eigen::VectorXd z;
    std::size_t sweeps = 0;
    double max_violation = 0;
    bool converged = false;
  };

  Result project(const Eigen::VectorXd& point, const ProjectionOptions& options = {});

  const Eigen::VectorXd& lower() const { return lower_; }
  const Eigen::VectorXd& upper() const { return upper_; }

 private:
  Eigen::VectorXd clip(const Eigen::VectorXd& v) const;

  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
  std::vector<Eigen::VectorXd> normals_;
  std::vector<double> offsets_;
  std::vector<double> sq_norms_;
  std::vector<double> multipliers_;
};

}  // namespace mdisc
