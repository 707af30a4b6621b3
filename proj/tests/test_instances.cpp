#include "mdisc/bounds.hpp"
#include "mdisc/coloring.hpp"
#include "mdisc/errors.hpp"
#include "mdisc/instance.hpp"
#include "mdisc/sampling.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <random>
#include <fstream>
#include <sstream>

using namespace mdisc;

namespace {
const Exponent kInf = Exponent::infinity();

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("mdisc_test_" + name);
}

Index numerical_rank(const Eigen::MatrixXd& a) {
  const Spectrum s = sym_eig(a);
  const double top = s.values.cwiseAbs().maxCoeff();
  Index r = 0;
  for (Index j = 0; j < s.dim(); ++j) r += std::abs(s.values(j)) > 1e-10 * top ? 1 : 0;
  return r;
}
}  // namespace

TEST_SUITE("instances") {
  TEST_CASE("gen_random normalizes to unit Schatten norm") {
    const Instance inst = gen_random({4, 4, kInf, kInf, {}, {}, 7});
    REQUIRE(inst.n() == 4);
    for (const auto& a : inst.matrices) CHECK(std::abs(schatten_norm(SymMatrix(a), kInf) - 1.0) < 1e-10);
    const Instance p2 = gen_random({5, 6, Exponent(2), Exponent(4), {}, {}, 1});
    for (const auto& a : p2.matrices) CHECK(std::abs(schatten_norm(SymMatrix(a), Exponent(2)) - 1.0) < 1e-10);
  }

  TEST_CASE("gen_random rank-one matrices have one nonzero eigenvalue") {
    const Instance inst = gen_random({8, 8, kInf, kInf, Index{1}, {}, 3});
    for (const auto& a : inst.matrices) CHECK(numerical_rank(a) == 1);
    const Instance r3 = gen_random({6, 10, Exponent(3), kInf, Index{3}, {}, 4});
    for (const auto& a : r3.matrices) CHECK(numerical_rank(a) <= 3);
  }

  TEST_CASE("gen_random block structure") {
    const Instance inst = gen_random({6, 8, kInf, kInf, {}, Index{2}, 5});
    for (const auto& a : inst.matrices) {
      for (Index i = 0; i < 8; ++i) {
        for (Index j = 0; j < 8; ++j) {
          if (i / 2 != j / 2) CHECK(a(i, j) == 0.0);
        }
      }
    }
    CHECK_NOTHROW(validate(inst));
    const Instance both = gen_random({6, 8, kInf, kInf, Index{1}, Index{4}, 5});
    CHECK_NOTHROW(validate(both));
  }

  TEST_CASE("gen_random is deterministic per seed") {
    const RandomSpec spec{5, 6, Exponent(2), kInf, Index{2}, {}, 99};
    CHECK(to_json(gen_random(spec)).dump() == to_json(gen_random(spec)).dump());
    RandomSpec other = spec;
    other.seed = 100;
    CHECK(to_json(gen_random(spec)).dump() != to_json(gen_random(other)).dump());
  }

  TEST_CASE("gen_random rejects inconsistent structure") {
    CHECK_THROWS_AS(gen_random({4, 4, kInf, kInf, Index{5}, {}, 0}), ValidationError);
    CHECK_THROWS_AS(gen_random({4, 6, kInf, kInf, {}, Index{4}, 0}), ValidationError);
    CHECK_THROWS_AS(gen_random({4, 4, kInf, Exponent(2), {}, {}, 0}), Error);
  }

  TEST_CASE("diagonal Spencer instance") {
    const Instance inst = gen_diagonal_spencer(4, 4, 0);
    CHECK(inst.block_size == Index{1});
    for (const auto& a : inst.matrices) {
      CHECK(schatten_norm(SymMatrix(a), kInf) == 1.0);
      CHECK((a - Eigen::MatrixXd(a.diagonal().asDiagonal())).norm() == 0.0);
      CHECK((a.diagonal().cwiseAbs().array() == 1.0).all());
    }
    // Best coloring by exhaustive search, constant recorded (not asserted tight).
    const auto best = serial::brute_force_min(inst, kInf);
    const double bound = std::sqrt(4 * std::log(2.0));
    MESSAGE("diag Spencer n=m=4 seed 0: brute-force min " << best.value << ", C = " << best.value / bound);
    CHECK(best.value <= 4.0);
    CHECK(best.value / bound < 3.0);
  }

  TEST_CASE("Hadamard family, m = 2 raw") {
    const Instance inst = gen_hadamard_lower(2, kInf, false);
    REQUIRE(inst.n() == 4);
    Eigen::MatrixXd swap(2, 2);
    swap << 0, 1, 1, 0;
    bool found = false;
    for (const auto& a : inst.matrices) found = found || (a - swap).norm() < 1e-15;
    CHECK(found);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        if (i != j) CHECK(frob_inner(inst.matrices[i], inst.matrices[j]) == 0.0);
      }
    }
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(4);
    CHECK(std::pow(eval_discrepancy(inst, ones, Exponent(2)), 2) == doctest::Approx(8.0));
  }

  TEST_CASE("Hadamard family Parseval identity") {
    Rng rng(8);
    for (Index m : {2, 4, 8}) {
      for (Exponent p : {kInf, Exponent(2), Exponent(4)}) {
        for (bool sym : {false, true}) {
          const Instance inst = gen_hadamard_lower(m, p, sym);
          const double n = static_cast<double>(inst.n());
          // Squared scale of each matrix and the Frobenius mass of the unscaled family.
          double scale2 = std::pow(n, -p.reciprocal());
          double mass = static_cast<double>(m);
          if (sym) {
            scale2 *= std::pow(2.0, -2.0 * p.reciprocal());
            mass *= 2.0;
          }
          for (int trial = 0; trial < 100; ++trial) {
            Eigen::VectorXd x(static_cast<Index>(inst.n()));
            for (Index i = 0; i < x.size(); ++i) x(i) = std::uniform_real_distribution<double>(-1, 1)(rng);
            const double f2 = std::pow(eval_discrepancy(inst, x, Exponent(2)), 2);
            CHECK(std::abs(f2 - mass * x.squaredNorm() * scale2) <= 1e-8 * std::max(1.0, f2));
          }
          CHECK(max_norm(inst, p) <= 1 + 1e-8);
          if (sym) CHECK(inst.symmetric());
        }
      }
    }
    CHECK_THROWS_AS(gen_hadamard_lower(3, kInf), ValidationError);
  }

  TEST_CASE("rank-one lower-bound family") {
    const Instance inst = gen_rank1_lower(3);
    Eigen::MatrixXd a1(3, 3);
    a1 << 1, 0, 1, 0, 0, 0, 1, 0, 1;
    a1 *= 0.5;
    CHECK((inst.matrices[0] - a1).norm() < 1e-15);
    CHECK(inst.matrices[2].norm() == 0.0);
    CHECK(inst.p == Exponent(2));
    CHECK(inst.q.is_infinite());
    const Instance big = gen_rank1_lower(10);
    for (std::size_t i = 0; i + 1 < big.n(); ++i) CHECK(big.matrices[i].norm() == doctest::Approx(1.0));
    CHECK_THROWS_AS(gen_rank1_lower(1), ValidationError);
  }

  TEST_CASE("rank-one family: column norm lower bound for partial colorings") {
    // Column n of sum x_i A_i is (x_1/2, ..., x_{n-1}/2, s/2) with s = sum_{i<n} x_i,
    // so its norm is at least (1/2) sqrt(#{i < n : |x_i| = 1}).
    Rng rng(17);
    for (std::size_t n : {6, 8, 12, 16}) {
      const Instance inst = gen_rank1_lower(n);
      const EvaluationMap map(inst);
      for (int trial = 0; trial < 200; ++trial) {
        Eigen::VectorXd x(static_cast<Index>(n));
        for (Index i = 0; i < x.size(); ++i) x(i) = std::uniform_real_distribution<double>(-1, 1)(rng);
        std::vector<Index> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), rng);
        for (std::size_t k = 0; k < (n + 1) / 2; ++k) x(idx[k]) = rng() % 2 ? 1.0 : -1.0;
        std::size_t full = 0;
        for (Index i = 0; i + 1 < x.size(); ++i) full += std::abs(x(i)) == 1.0 ? 1 : 0;
        const double col = (map.combine(x) * Eigen::VectorXd::Unit(static_cast<Index>(n), static_cast<Index>(n - 1))).norm();
        CHECK(col >= 0.5 * std::sqrt(static_cast<double>(full)) - 1e-12);
        CHECK(full + 1 >= (n + 1) / 2);
      }
    }
  }

  TEST_CASE("save and load round trip") {
    const std::vector<Instance> family = {
        gen_random({3, 4, Exponent(3), kInf, Index{2}, Index{2}, 1}), gen_diagonal_spencer(5, 3, 2),
        gen_hadamard_lower(2, Exponent(2)), gen_hadamard_lower(2, kInf, false), gen_rank1_lower(4)};
    for (const auto& inst : family) {
      const auto path = temp_path("roundtrip" + std::string(kInstanceExtension));
      save_instance(inst, path);
      const Instance back = load_instance(path);
      CHECK(to_json(back).dump() == to_json(inst).dump());
      CHECK(back.p == inst.p);
      CHECK(back.label == inst.label);
      std::filesystem::remove(path);
    }
  }

  TEST_CASE("load rejects invalid and malformed files") {
    nlohmann::json j = to_json(gen_random({2, 3, kInf, kInf, {}, {}, 4}));
    for (auto& row : j["matrices"][0]) {
      for (auto& v : row) v = v.get<double>() * 1.5;
    }
    const auto bad = temp_path("bad.mdi.json");
    std::ofstream(bad) << j.dump();
    try {
      load_instance(bad);
      FAIL("expected validation error");
    } catch (const ValidationError& e) {
      const std::string what = e.what();
      CHECK(what.find("matrix 1") != std::string::npos);
      CHECK(what.find("1.5") != std::string::npos);
    }
    const std::string text = to_json(gen_diagonal_spencer(2, 2, 0)).dump();
    const auto trunc = temp_path("trunc.mdi.json");
    std::ofstream(trunc) << text.substr(0, text.size() / 2);
    CHECK_THROWS_AS(load_instance(trunc), ParseError);
    std::filesystem::remove(bad);
    std::filesystem::remove(trunc);
  }

  TEST_CASE("validation of structure metadata") {
    Instance inst = gen_random({2, 4, kInf, kInf, {}, {}, 4});
    inst.rank_bound = 1;
    CHECK_THROWS_AS(validate(inst), ValidationError);
    inst.rank_bound.reset();
    inst.block_size = 2;
    CHECK_THROWS_AS(validate(inst), ValidationError);
    inst.block_size.reset();
    inst.q = Exponent(2);
    CHECK_THROWS_AS(validate(inst), ValidationError);
  }

  TEST_CASE("evaluation map") {
    const Instance inst = gen_random({3, 3, kInf, kInf, {}, {}, 2});
    const EvaluationMap map(inst);
    const Eigen::Vector3d x(1, -0.5, 2);
    const Eigen::MatrixXd direct = inst.matrices[0] - 0.5 * inst.matrices[1] + 2 * inst.matrices[2];
    CHECK((map.combine(x) - direct).norm() < 1e-14);
    const Eigen::MatrixXd u = Eigen::MatrixXd::Identity(3, 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(map.apply(u)(static_cast<Index>(i)) == doctest::Approx(inst.matrices[i].trace()));
    CHECK_THROWS_AS(map.combine(Eigen::VectorXd::Ones(2)), DimensionError);
    const EvaluationMap sub = map.restricted({2, 0});
    CHECK((sub.combine(Eigen::Vector2d(1, 1)) - inst.matrices[0] - inst.matrices[2]).norm() < 1e-14);
  }
}
