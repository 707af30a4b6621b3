#pragma once

#include "mdisc/linalg.hpp"

#include <cstdint>
#include <random>

namespace mdisc {

using Rng = std::mt19937_64;

/// splitmix64 finalizer over (base, stream): independent per-block /
/// per-trial seeds that do not depend on scheduling.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

Eigen::VectorXd gaussian_vector(Rng& rng, Index n, double sigma = 1.0);

/// (G + G^T)/2 with iid standard normal G.
SymMatrix gaussian_symmetric(Rng& rng, Index m);

/// Random density matrix of the given rank (Wishart with `rank` columns,
/// trace-normalized). rank = 0 draws the rank uniformly from 1..m.
SymMatrix random_density(Rng& rng, Index m, Index rank = 0);

/// Block-diagonal density matrix with h x h blocks. Block weights are drawn
/// from a mix of regimes (uniform, sparse, single block) so that both spread
/// and concentrated states are exercised.
SymMatrix random_block_density(Rng& rng, Index m, Index h);

/// Symmetric U with ||U||_{S_p} = radius, radius drawn as u^{1/m^2} (so the
/// boundary is well represented) unless on_boundary is set.
SymMatrix random_schatten_ball(Rng& rng, Index m, Exponent p, bool on_boundary = false);

/// Haar-distributed orthogonal matrix via QR with sign correction.
Eigen::MatrixXd haar_orthogonal(Rng& rng, Index h);

}  // namespace mdisc
