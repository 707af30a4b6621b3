#include "mdisc/bounds.hpp"
#include "mdisc/coloring.hpp"
#include "mdisc/parallel.hpp"

#include <omp.h>

#include <bit>
#include <limits>

namespace mdisc {

namespace {

double norm_of(const Eigen::MatrixXd& sum, bool symmetric, Exponent q,
               Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>& solver) {
  if (symmetric) {
    solver.compute(sum, Eigen::EigenvaluesOnly);
    return schatten_norm_of_values(solver.eigenvalues(), q);
  }
  return schatten_norm_general(sum, q);
}

void check_cap(const Instance& inst, std::size_t cap) {
  if (inst.n() == 0) throw ValidationError("empty instance");
  if (cap > kBruteForceCap) throw CapacityError("brute-force cap cannot exceed 22");
  if (inst.n() > cap) {
    throw CapacityError("brute force needs n <= " + std::to_string(cap) + ", got n=" + std::to_string(inst.n()));
  }
}

Eigen::VectorXd signs_from_code(std::uint64_t code, std::size_t n) {
  Eigen::VectorXd x = Eigen::VectorXd::Ones(static_cast<Index>(n));
  for (std::size_t b = 0; b + 1 < n; ++b) {
    if ((code >> b) & 1U) x(static_cast<Index>(b + 1)) = -1.0;
  }
  return x;
}

constexpr std::uint64_t kChunk = 1024;

}  // namespace

BruteForceResult brute_force_min(const Instance& inst, Exponent q, std::size_t cap) {
  check_cap(inst, cap);
  const std::size_t n = inst.n();
  const bool sym = inst.symmetric();
  const std::uint64_t total = std::uint64_t{1} << (n - 1);
  const std::uint64_t chunks = (total + kChunk - 1) / kChunk;

  // Per chunk minimum keyed by binary code so the reduction is order independent.
  double best_value = std::numeric_limits<double>::infinity();
  std::uint64_t best_code = 0;

#pragma omp parallel num_threads(worker_count())
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(inst.m);
    double local_value = std::numeric_limits<double>::infinity();
    std::uint64_t local_code = 0;
#pragma omp for schedule(dynamic)
    for (std::int64_t ci = 0; ci < static_cast<std::int64_t>(chunks); ++ci) {
      const std::uint64_t begin = static_cast<std::uint64_t>(ci) * kChunk;
      const std::uint64_t end = std::min(total, begin + kChunk);
      // Gray code g(c) = c ^ (c >> 1); bit b set means x_{b+1} = -1.
      std::uint64_t gray = begin ^ (begin >> 1);
      Eigen::VectorXd x = signs_from_code(gray, n);
      Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(inst.m, inst.m);
      for (std::size_t i = 0; i < n; ++i) sum += x(static_cast<Index>(i)) * inst.matrices[i];
      for (std::uint64_t c = begin; c < end; ++c) {
        if (c != begin) {
          const int bit = std::countr_zero(c);
          gray ^= std::uint64_t{1} << bit;
          const auto j = static_cast<Index>(bit + 1);
          sum -= (2.0 * x(j)) * inst.matrices[static_cast<std::size_t>(j)];
          x(j) = -x(j);
        }
        const double v = norm_of(sum, sym, q, solver);
        if (v < local_value || (v == local_value && gray < local_code)) {
          local_value = v;
          local_code = gray;
        }
      }
    }
#pragma omp critical
    {
      if (local_value < best_value || (local_value == best_value && local_code < best_code)) {
        best_value = local_value;
        best_code = local_code;
      }
    }
  }

  BruteForceResult out;
  out.x = signs_from_code(best_code, n);
  // Recompute from scratch to shed the accumulated update error.
  out.value = eval_discrepancy(inst, out.x, q);
  out.evaluated = total;
  return out;
}

namespace serial {

BruteForceResult brute_force_min(const Instance& inst, Exponent q, std::size_t cap) {
  check_cap(inst, cap);
  const std::size_t n = inst.n();
  const EvaluationMap map(inst);
  const std::uint64_t total = std::uint64_t{1} << (n - 1);
  BruteForceResult out;
  out.value = std::numeric_limits<double>::infinity();
  for (std::uint64_t code = 0; code < total; ++code) {
    const Eigen::VectorXd x = signs_from_code(code, n);
    const double v = eval_discrepancy(map, x, q);
    if (v < out.value) {
      out.value = v;
      out.x = x;
    }
  }
  out.evaluated = total;
  return out;
}

}  // namespace serial

}  // namespace mdisc
