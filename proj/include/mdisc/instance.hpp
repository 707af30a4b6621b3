#pragma once

#include "mdisc/linalg.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mdisc {

/// A family A_1..A_n of m x m matrices with source/target exponents (p, q)
/// and optional structure metadata. Matrices are stored densely; all
/// generators except raw Hadamard mode produce symmetric matrices.
struct Instance {
  Index m = 0;
  Exponent p;
  Exponent q;
  std::optional<Index> rank_bound;
  std::optional<Index> block_size;
  std::vector<Eigen::MatrixXd> matrices;
  std::string label;
  std::optional<std::uint64_t> seed;

  std::size_t n() const { return matrices.size(); }
  bool symmetric() const;
};

/// Throws ValidationError naming the offending (1-based) matrix index and
/// the measured quantity.
void validate(const Instance& inst);

/// Precomputed linear map A(U) = (<A_1,U>, ..., <A_n,U>) and its adjoint
/// x -> sum_i x_i A_i, stored as an n x m^2 matrix.
class EvaluationMap {
 public:
  explicit EvaluationMap(const Instance& inst);

  std::size_t n() const { return static_cast<std::size_t>(flat_.rows()); }
  Index m() const { return m_; }
  bool symmetric() const { return symmetric_; }

  Eigen::VectorXd apply(const Eigen::MatrixXd& u) const;
  Eigen::MatrixXd combine(const Eigen::VectorXd& x) const;
  SymMatrix combine_sym(const Eigen::VectorXd& x) const;
  /// Row i reshaped, i.e. A_i.
  Eigen::MatrixXd matrix(std::size_t i) const;
  /// The map for the sub-family {A_i : i in indices}, in that order.
  EvaluationMap restricted(const std::vector<std::size_t>& indices) const;
  /// True when every A_i is exactly zero.
  bool all_zero() const { return flat_.size() == 0 || flat_.cwiseAbs().maxCoeff() == 0.0; }

 private:
  EvaluationMap() = default;
  Index m_ = 0;
  bool symmetric_ = true;
  Eigen::MatrixXd flat_;
};

struct RandomSpec {
  std::size_t n = 0;
  Index m = 0;
  Exponent p;
  Exponent q;  // target exponent recorded in the instance; must be >= p
  std::optional<Index> rank;
  std::optional<Index> block;
  std::uint64_t seed = 0;
};

/// Gaussian symmetric matrices (low rank: sum of r terms +-u u^T; block:
/// independent per block) normalized to ||A_i||_{S_p} = 1.
Instance gen_random(const RandomSpec& spec);

/// A_i = diag(a_i), a_i uniform in {+-1}^m; p = q = inf, h = 1.
Instance gen_diagonal_spencer(std::size_t n, Index m, std::uint64_t seed);

/// n = m^2 matrices D_i P_j built from the Sylvester-Hadamard matrix and
/// cyclic shifts, scaled by n^{-1/(2p)}. With symmetrize, each M becomes
/// [[0, M], [M^T, 0]] (2m x 2m) with an extra 2^{-1/p} so that the S_p bound
/// still holds.
Instance gen_hadamard_lower(Index m, Exponent p, bool symmetrize = true);

/// A_i = e_i e_i^T, m = n, p = q = inf, h = 1.
Instance gen_unit_diagonal(std::size_t n);

/// A_i = 1/2 (e_i + e_n)(e_i + e_n)^T for i < n and A_n = 0.
Instance gen_rank1_lower(std::size_t n);

/// Sylvester construction, entries +-1; m must be a power of two.
Eigen::MatrixXd hadamard_matrix(Index m);

/// Largest ||A_i||_{S_p} over the family (singular values when not symmetric).
double max_norm(const Instance& inst, Exponent p);

nlohmann::json to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);

void save_instance(const Instance& inst, const std::filesystem::path& path);
Instance load_instance(const std::filesystem::path& path);

inline constexpr const char* kInstanceExtension = ".mdi.json";

}  // namespace mdisc
