#include "mdisc/sampling.hpp"

#include "mdisc/errors.hpp"

#include <algorithm>

namespace mdisc {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Eigen::VectorXd gaussian_vector(Rng& rng, Index n, double sigma) {
  std::normal_distribution<double> normal(0.0, sigma);
  Eigen::VectorXd g(n);
  for (Index i = 0; i < n; ++i) g(i) = normal(rng);
  return g;
}

SymMatrix gaussian_symmetric(Rng& rng, Index m) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(m, m);
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < m; ++i) g(i, j) = normal(rng);
  return SymMatrix::trusted(g);
}

SymMatrix random_density(Rng& rng, Index m, Index rank) {
  if (rank <= 0) rank = std::uniform_int_distribution<Index>(1, m)(rng);
  rank = std::min(rank, m);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(m, rank);
  for (Index j = 0; j < rank; ++j)
    for (Index i = 0; i < m; ++i) g(i, j) = normal(rng);
  Eigen::MatrixXd w = g * g.transpose();
  w /= w.trace();
  return SymMatrix::trusted(w);
}

SymMatrix random_block_density(Rng& rng, Index m, Index h) {
  if (h <= 0 || m % h != 0) throw ValidationError("block size must divide the dimension");
  const Index blocks = m / h;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::VectorXd weights = Eigen::VectorXd::Zero(blocks);
  switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0:  // flat Dirichlet
      for (Index b = 0; b < blocks; ++b) weights(b) = -std::log(1.0 - unif(rng));
      break;
    case 1: {  // a few active blocks
      const Index active = std::uniform_int_distribution<Index>(1, std::max<Index>(1, blocks / 2))(rng);
      for (Index k = 0; k < active; ++k) {
        weights(std::uniform_int_distribution<Index>(0, blocks - 1)(rng)) += unif(rng) + 1e-3;
      }
      break;
    }
    default:  // everything in one block
      weights(std::uniform_int_distribution<Index>(0, blocks - 1)(rng)) = 1.0;
  }
  weights /= weights.sum();
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(m, m);
  for (Index b = 0; b < blocks; ++b) {
    if (weights(b) == 0.0) continue;
    x.block(b * h, b * h, h, h) = weights(b) * random_density(rng, h).matrix();
  }
  return SymMatrix::trusted(x);
}

SymMatrix random_schatten_ball(Rng& rng, Index m, Exponent p, bool on_boundary) {
  SymMatrix u = gaussian_symmetric(rng, m);
  // Random spectrum shape: occasionally low rank.
  if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) {
    Spectrum s = sym_eig(u);
    const Index keep = std::uniform_int_distribution<Index>(1, m)(rng);
    for (Index j = keep; j < m; ++j) s.values(j) = 0.0;
    u = s.reconstruct();
  }
  double radius = 1.0;
  if (!on_boundary) {
    radius = std::pow(std::uniform_real_distribution<double>(0.0, 1.0)(rng),
                      1.0 / static_cast<double>(m * m));
  }
  const double norm = schatten_norm(u, p);
  if (norm == 0.0) return u;
  return (radius / norm) * u;
}

Eigen::MatrixXd haar_orthogonal(Rng& rng, Index h) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(h, h);
  for (Index j = 0; j < h; ++j)
    for (Index i = 0; i < h; ++i) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < h; ++j) {
    if (r(j, j) < 0) q.col(j) *= -1.0;
  }
  return q;
}

}  // namespace mdisc
