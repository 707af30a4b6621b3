#include "mdisc/projection.hpp"

#include "mdisc/errors.hpp"

#include <algorithm>
#include <cmath>

namespace mdisc {

BoxCutProjector::BoxCutProjector(Eigen::VectorXd lower, Eigen::VectorXd upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) throw DimensionError("box bounds differ in length");
  if ((lower_.array() > upper_.array()).any()) throw ValidationError("empty box");
}

void BoxCutProjector::add_cut(Eigen::VectorXd normal, double offset) {
  if (normal.size() != lower_.size()) throw DimensionError("cut normal has wrong length");
  const double sq = normal.squaredNorm();
  if (sq == 0.0) return;
  sq_norms_.push_back(sq);
  normals_.push_back(std::move(normal));
  offsets_.push_back(offset);
  multipliers_.push_back(0.0);
}

void BoxCutProjector::prune(std::size_t keep) {
  std::size_t excess = cuts() > keep ? cuts() - keep : 0;
  std::size_t w = 0;
  for (std::size_t k = 0; k < cuts(); ++k) {
    if (excess > 0 && multipliers_[k] == 0.0) {
      --excess;
      continue;
    }
    if (w != k) {
      normals_[w] = std::move(normals_[k]);
      offsets_[w] = offsets_[k];
      sq_norms_[w] = sq_norms_[k];
      multipliers_[w] = multipliers_[k];
    }
    ++w;
  }
  normals_.resize(w);
  offsets_.resize(w);
  sq_norms_.resize(w);
  multipliers_.resize(w);
}

Eigen::VectorXd BoxCutProjector::clip(const Eigen::VectorXd& v) const {
  return v.cwiseMax(lower_).cwiseMin(upper_);
}

BoxCutProjector::Result BoxCutProjector::project(const Eigen::VectorXd& point,
                                                 const ProjectionOptions& options) {
  if (point.size() != lower_.size()) throw DimensionError("projection point has wrong length");
  Eigen::VectorXd shift = Eigen::VectorXd::Zero(point.size());
  for (std::size_t k = 0; k < cuts(); ++k) {
    if (multipliers_[k] != 0.0) shift += multipliers_[k] * normals_[k];
  }
  Result out;
  out.z = clip(point - shift);
  if (cuts() == 0) {
    out.converged = true;
    return out;
  }
  for (out.sweeps = 1; out.sweeps <= options.max_sweeps; ++out.sweeps) {
    double worst = 0.0;
    for (std::size_t k = 0; k < cuts(); ++k) {
      const double scale = std::max(1.0, std::abs(offsets_[k]));
      const double violation = normals_[k].dot(out.z) - offsets_[k];
      const double next = std::max(0.0, multipliers_[k] + violation / sq_norms_[k]);
      // KKT residual: primal feasibility, plus slackness for active multipliers.
      const double residual = multipliers_[k] > 0.0 ? std::abs(violation) : std::max(0.0, violation);
      worst = std::max(worst, residual / scale);
      const double delta = next - multipliers_[k];
      if (delta != 0.0) {
        multipliers_[k] = next;
        shift += delta * normals_[k];
        out.z = clip(point - shift);
      }
    }
    out.max_violation = worst;
    if (worst <= options.tolerance) {
      out.converged = true;
      break;
    }
  }
  out.sweeps = std::min(out.sweeps, options.max_sweeps);
  // Report primal feasibility of the returned point.
  double viol = 0.0;
  for (std::size_t k = 0; k < cuts(); ++k) {
    viol = std::max(viol, (normals_[k].dot(out.z) - offsets_[k]) / std::max(1.0, std::abs(offsets_[k])));
  }
  out.max_violation = std::max(0.0, viol);
  return out;
}

}  // namespace mdisc
