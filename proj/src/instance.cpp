#include "mdisc/instance.hpp"

#include "mdisc/errors.hpp"
#include "mdisc/sampling.hpp"

#include <sstream>

namespace mdisc {

namespace {

bool is_power_of_two(Index m) { return m >= 1 && (m & (m - 1)) == 0; }

double matrix_norm(const Eigen::MatrixXd& a, Exponent p) {
  return is_symmetric(a) ? schatten_norm(SymMatrix::trusted(a), p) : schatten_norm_general(a, p);
}

Index numerical_rank(const Eigen::MatrixXd& a) {
  Eigen::VectorXd mags;
  if (is_symmetric(a)) {
    mags = sym_eig(SymMatrix::trusted(a)).values.cwiseAbs();
  } else {
    mags = Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues();
  }
  if (mags.size() == 0) return 0;
  const double cutoff = 1e-10 * mags.maxCoeff();
  Index rank = 0;
  for (Index j = 0; j < mags.size(); ++j) {
    if (mags(j) > cutoff) ++rank;
  }
  return rank;
}

std::string describe(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

bool Instance::symmetric() const {
  for (const auto& a : matrices) {
    if (!is_symmetric(a)) return false;
  }
  return true;
}

void validate(const Instance& inst) {
  if (inst.m <= 0) throw ValidationError("instance dimension m must be positive");
  if (inst.matrices.empty()) throw ValidationError("instance must contain at least one matrix");
  if (inst.p.value() < 2.0) throw ValidationError("source exponent p must lie in [2, inf]");
  if (!(inst.p <= inst.q)) {
    throw ValidationError("need p <= q, got p=" + inst.p.to_string() + " q=" + inst.q.to_string());
  }
  if (inst.rank_bound && (*inst.rank_bound < 1 || *inst.rank_bound > inst.m)) {
    throw ValidationError("rank bound r must lie in [1, m]");
  }
  if (inst.block_size && (*inst.block_size < 1 || inst.m % *inst.block_size != 0)) {
    throw ValidationError("block size h must divide m");
  }
  for (std::size_t i = 0; i < inst.n(); ++i) {
    const auto& a = inst.matrices[i];
    const std::string name = "matrix " + std::to_string(i + 1);
    if (a.rows() != inst.m || a.cols() != inst.m) {
      throw ValidationError(name + " has shape " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + ", expected " + std::to_string(inst.m) +
                            "x" + std::to_string(inst.m));
    }
    if (!a.allFinite()) throw ValidationError(name + " has non-finite entries");
    const double norm = matrix_norm(a, inst.p);
    if (norm > 1.0 + 1e-8) {
      throw ValidationError(name + " violates ||A||_{S_p} <= 1: measured " + describe(norm) +
                            " (p=" + inst.p.to_string() + ")");
    }
    if (inst.rank_bound) {
      const Index rank = numerical_rank(a);
      if (rank > *inst.rank_bound) {
        throw ValidationError(name + " has numerical rank " + std::to_string(rank) +
                              " above the declared bound " + std::to_string(*inst.rank_bound));
      }
    }
    if (inst.block_size) {
      const Index h = *inst.block_size;
      for (Index c = 0; c < inst.m; ++c) {
        for (Index r = 0; r < inst.m; ++r) {
          if (r / h != c / h && a(r, c) != 0.0) {
            throw ValidationError(name + " has a nonzero entry (" + std::to_string(r + 1) + "," +
                                  std::to_string(c + 1) + ") outside its " + std::to_string(h) +
                                  "x" + std::to_string(h) + " diagonal blocks");
          }
        }
      }
    }
  }
}

EvaluationMap::EvaluationMap(const Instance& inst) : m_(inst.m), symmetric_(inst.symmetric()) {
  const Index n = static_cast<Index>(inst.n());
  flat_.resize(n, m_ * m_);
  for (Index i = 0; i < n; ++i) {
    flat_.row(i) = Eigen::Map<const Eigen::RowVectorXd>(inst.matrices[i].data(), m_ * m_);
  }
}

Eigen::VectorXd EvaluationMap::apply(const Eigen::MatrixXd& u) const {
  if (u.rows() != m_ || u.cols() != m_) throw DimensionError("evaluation map: wrong matrix shape");
  return flat_ * Eigen::Map<const Eigen::VectorXd>(u.data(), m_ * m_);
}

Eigen::MatrixXd EvaluationMap::combine(const Eigen::VectorXd& x) const {
  if (x.size() != flat_.rows()) {
    throw DimensionError("coloring has length " + std::to_string(x.size()) + ", instance has n=" +
                         std::to_string(flat_.rows()));
  }
  Eigen::VectorXd v = flat_.transpose() * x;
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), m_, m_);
}

SymMatrix EvaluationMap::combine_sym(const Eigen::VectorXd& x) const {
  if (!symmetric_) throw ValidationError("operation requires a symmetric instance");
  return SymMatrix::trusted(combine(x));
}

Eigen::MatrixXd EvaluationMap::matrix(std::size_t i) const {
  Eigen::RowVectorXd row = flat_.row(static_cast<Index>(i));
  return Eigen::Map<const Eigen::MatrixXd>(row.data(), m_, m_);
}

EvaluationMap EvaluationMap::restricted(const std::vector<std::size_t>& indices) const {
  EvaluationMap out;
  out.m_ = m_;
  out.symmetric_ = symmetric_;
  out.flat_.resize(static_cast<Index>(indices.size()), flat_.cols());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] >= n()) throw DimensionError("restricted index out of range");
    out.flat_.row(static_cast<Index>(k)) = flat_.row(static_cast<Index>(indices[k]));
  }
  return out;
}

Instance gen_random(const RandomSpec& spec) {
  if (spec.n == 0 || spec.m <= 0) throw ValidationError("random instance needs n >= 1 and m >= 1");
  if (spec.rank && (*spec.rank < 1 || *spec.rank > spec.m)) {
    throw ValidationError("rank bound r=" + std::to_string(*spec.rank) + " must lie in [1, m=" +
                          std::to_string(spec.m) + "]");
  }
  if (spec.block && (*spec.block < 1 || spec.m % *spec.block != 0)) {
    throw ValidationError("block size h=" + std::to_string(*spec.block) + " must divide m=" +
                          std::to_string(spec.m));
  }
  Rng rng(spec.seed);
  std::bernoulli_distribution coin(0.5);
  Instance inst;
  inst.m = spec.m;
  inst.p = spec.p;
  inst.q = spec.q;
  inst.rank_bound = spec.rank;
  inst.block_size = spec.block;
  inst.seed = spec.seed;
  inst.label = "random";
  const Index m = spec.m;
  const Index h = spec.block.value_or(m);
  const Index blocks = m / h;
  for (std::size_t i = 0; i < spec.n; ++i) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
    if (spec.rank) {
      for (Index j = 0; j < *spec.rank; ++j) {
        const Index b = blocks == 1 ? 0 : std::uniform_int_distribution<Index>(0, blocks - 1)(rng);
        Eigen::VectorXd u = Eigen::VectorXd::Zero(m);
        u.segment(b * h, h) = gaussian_vector(rng, h);
        a += (coin(rng) ? 1.0 : -1.0) * u * u.transpose();
      }
    } else {
      for (Index b = 0; b < blocks; ++b) {
        a.block(b * h, b * h, h, h) = gaussian_symmetric(rng, h).matrix();
      }
    }
    const double norm = schatten_norm(SymMatrix::trusted(a), spec.p);
    if (norm > 0.0) a /= norm;
    inst.matrices.push_back(std::move(a));
  }
  validate(inst);
  return inst;
}

Instance gen_diagonal_spencer(std::size_t n, Index m, std::uint64_t seed) {
  if (n == 0 || m <= 0) throw ValidationError("diagonal instance needs n >= 1 and m >= 1");
  Rng rng(seed);
  std::bernoulli_distribution coin(0.5);
  Instance inst;
  inst.m = m;
  inst.block_size = 1;
  inst.seed = seed;
  inst.label = "diagonal-spencer";
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::VectorXd d(m);
    for (Index j = 0; j < m; ++j) d(j) = coin(rng) ? 1.0 : -1.0;
    inst.matrices.push_back(d.asDiagonal().toDenseMatrix());
  }
  return inst;
}

Eigen::MatrixXd hadamard_matrix(Index m) {
  if (!is_power_of_two(m)) {
    throw ValidationError("Walsh-Hadamard matrix needs m a power of two, got " + std::to_string(m));
  }
  Eigen::MatrixXd h = Eigen::MatrixXd::Ones(1, 1);
  while (h.rows() < m) {
    const Index k = h.rows();
    Eigen::MatrixXd next(2 * k, 2 * k);
    next << h, h, h, -h;
    h = std::move(next);
  }
  return h;
}

Instance gen_hadamard_lower(Index m, Exponent p, bool symmetrize) {
  const Eigen::MatrixXd hadamard = hadamard_matrix(m);
  const double n = static_cast<double>(m * m);
  double scale = std::pow(n, -0.5 * p.reciprocal());
  if (symmetrize) scale *= std::pow(2.0, -p.reciprocal());
  Instance inst;
  inst.m = symmetrize ? 2 * m : m;
  inst.p = p;
  inst.label = symmetrize ? "hadamard-lower" : "hadamard-lower-raw";
  inst.matrices.resize(static_cast<std::size_t>(m * m));
  for (Index j = 0; j < m; ++j) {
    // (P_{j+1})_{r,c} = 1 iff r - c == j + 1 (mod m)
    Eigen::MatrixXd shift = Eigen::MatrixXd::Zero(m, m);
    for (Index c = 0; c < m; ++c) shift((c + j + 1) % m, c) = 1.0;
    for (Index i = 0; i < m; ++i) {
      const Eigen::MatrixXd raw = hadamard.row(i).transpose().asDiagonal() * shift;
      Eigen::MatrixXd a;
      if (symmetrize) {
        a = Eigen::MatrixXd::Zero(2 * m, 2 * m);
        a.topRightCorner(m, m) = raw;
        a.bottomLeftCorner(m, m) = raw.transpose();
      } else {
        a = raw;
      }
      inst.matrices[static_cast<std::size_t>(i + m * j)] = scale * a;
    }
  }
  return inst;
}

Instance gen_unit_diagonal(std::size_t n) {
  if (n < 1) throw ValidationError("unit diagonal family needs n >= 1");
  Instance inst;
  inst.m = static_cast<Index>(n);
  inst.block_size = 1;
  inst.label = "unit-diagonal";
  for (Index i = 0; i < inst.m; ++i) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(inst.m, inst.m);
    a(i, i) = 1.0;
    inst.matrices.push_back(std::move(a));
  }
  return inst;
}

Instance gen_rank1_lower(std::size_t n) {
  if (n < 2) throw ValidationError("rank-1 lower-bound family needs n >= 2");
  const Index m = static_cast<Index>(n);
  Instance inst;
  inst.m = m;
  inst.p = Exponent(2.0);
  inst.rank_bound = 1;
  inst.label = "rank1-lower";
  for (Index i = 0; i + 1 < m; ++i) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(m);
    v(i) = 1.0;
    v(m - 1) = 1.0;
    inst.matrices.push_back(0.5 * v * v.transpose());
  }
  inst.matrices.push_back(Eigen::MatrixXd::Zero(m, m));
  return inst;
}

double max_norm(const Instance& inst, Exponent p) {
  double top = 0.0;
  for (const auto& a : inst.matrices) top = std::max(top, matrix_norm(a, p));
  return top;
}

}  // namespace mdisc
