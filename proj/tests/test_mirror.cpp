#include "mdisc/cover.hpp"
#include "mdisc/entropy_net.hpp"
#include "mdisc/errors.hpp"
#include "mdisc/mirror.hpp"
#include "mdisc/sampling.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace mdisc;

namespace {

Instance random_sym(std::size_t n, Index m, std::uint64_t seed, Exponent p = Exponent::infinity()) {
  RandomSpec spec;
  spec.n = n;
  spec.m = m;
  spec.p = p;
  spec.q = Exponent::infinity();
  spec.seed = seed;
  return gen_random(spec);
}

// Taylor series; independent of the eigen-solver path.
Eigen::MatrixXd expm_series(const Eigen::MatrixXd& a) {
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(a.rows(), a.cols());
  Eigen::MatrixXd sum = term;
  for (int k = 1; k < 60; ++k) {
    term = term * a / k;
    sum += term;
  }
  return sum;
}

SymMatrix interior(const SymMatrix& y) { return mix_with_identity(y, y.dim()); }

}  // namespace

TEST_SUITE("mirror_descent") {
  TEST_CASE("eta_for plug-in values") {
    CHECK(eta_for(1, 0.5, std::log(4.0), 4) == doctest::Approx(std::sqrt(std::log(4.0) / 4)));
    CHECK(eta_for(1, 1, 0.5, 2) == doctest::Approx(std::sqrt(0.5)));
    CHECK(eta_for(2, 1, 3, 10) / eta_for(2, 1, 3, 20) == doctest::Approx(std::sqrt(2.0)));
    CHECK_THROWS_AS(eta_for(1, 0.5, 0, 4), ValidationError);
    CHECK_THROWS_AS(eta_for(1, 0.5, 1, 0), ValidationError);
  }

  TEST_CASE("spectraplex iterate from I/m is the normalized exponential") {
    Rng rng(5);
    const Index m = 5;
    const SymMatrix a = gaussian_symmetric(rng, m);
    MirrorState st(MirrorSetup::spectraplex(), (1.0 / m) * SymMatrix::identity(m), 0.3);
    st.add_gradient(a);
    const Eigen::MatrixXd e = expm_series(-0.3 * a.matrix());
    CHECK((md_iterate(st).matrix() - e / e.trace()).cwiseAbs().maxCoeff() < 1e-10);
  }

  TEST_CASE("zero gradient sum returns the start") {
    Rng rng(6);
    const SymMatrix x0 = random_density(rng, 4);
    MirrorState st(MirrorSetup::spectraplex(), interior(x0), 0.5);
    CHECK((md_iterate(st).matrix() - st.x0().matrix()).cwiseAbs().maxCoeff() < 1e-10);
    const SymMatrix y = gaussian_symmetric(rng, 4);
    MirrorState sc(MirrorSetup::schatten(1.5), y, 0.5);
    CHECK((md_iterate(sc).matrix() - y.matrix()).cwiseAbs().maxCoeff() < 1e-10);
  }

  TEST_CASE("schatten gradient round trip and finite differences") {
    Rng rng(7);
    for (double ps : {1.5, 2.0, 1.2}) {
      const MirrorSetup setup = MirrorSetup::schatten(ps);
      for (int trial = 0; trial < 10; ++trial) {
        const SymMatrix x = gaussian_symmetric(rng, 4);
        const SymMatrix back = mirror_inverse(setup, mirror_gradient(setup, x));
        CHECK((back.matrix() - x.matrix()).cwiseAbs().maxCoeff() < 1e-7);
      }
      // Directional derivative of Phi along symmetric E equals <grad Phi, E>.
      const SymMatrix x = gaussian_symmetric(rng, 3);
      const SymMatrix e = gaussian_symmetric(rng, 3);
      const double h = 1e-6;
      const double fd = (mirror_potential(setup, x + h * e) - mirror_potential(setup, x - h * e)) / (2 * h);
      CHECK(fd == doctest::Approx(frob_inner(mirror_gradient(setup, x), e)).epsilon(1e-5));
    }
  }

  TEST_CASE("spectraplex iterates stay in the spectraplex") {
    const Instance inst = random_sym(12, 6, 3);
    const EvaluationMap map(inst);
    Rng rng(8);
    const SymMatrix u = random_density(rng, 6);
    const MdRun run = md_minimize(map, u, (1.0 / 6) * SymMatrix::identity(6), MirrorSetup::spectraplex(), 12);
    CHECK(in_spectraplex(run.final_iterate, 1e-8));
    CHECK(run.values.size() == 13);
  }

  TEST_CASE("subgradient conventions") {
    const Instance inst = gen_diagonal_spencer(5, 4, 2);
    const EvaluationMap map(inst);
    Rng rng(9);
    const SymMatrix u = random_density(rng, 4);
    const Subgradient zero = subgrad_fU(inst, u, u);
    CHECK(zero.index == 0);
    CHECK(zero.sign == 1.0);
    CHECK(zero.value == 0.0);
    const SymMatrix x = random_density(rng, 4);
    const Subgradient g = subgrad_fU(inst, x, u);
    // Direct scan is the definition.
    double best = -1;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < inst.n(); ++i) {
      const double v = std::abs((inst.matrices[i].array() * (x.matrix() - u.matrix()).array()).sum());
      if (v > best + 1e-15) {
        best = v;
        arg = i;
      }
    }
    CHECK(g.index == arg);
    CHECK(g.value == doctest::Approx(best));
    // Diagonal family: coordinate-wise max of |A(X) - A(U)|.
    CHECK(g.value == doctest::Approx((map.apply(x.matrix()) - map.apply(u.matrix())).cwiseAbs().maxCoeff()));
  }

  TEST_CASE("U = X0 gives value 0 at step 0") {
    const Instance inst = random_sym(8, 4, 4);
    const EvaluationMap map(inst);
    Rng rng(10);
    const SymMatrix u = interior(random_density(rng, 4));
    const MdRun run = md_minimize(map, u, u, MirrorSetup::spectraplex(), 8);
    CHECK(run.best_value == 0.0);
    CHECK(run.best_step == 0);
    CHECK(run.guarantee_held);
  }

  TEST_CASE("spectraplex m=16 n=32 within 2 sqrt(log m / n)") {
    const Index m = 16;
    const std::size_t n = 32;
    const Instance inst = random_sym(n, m, 11);
    const EvaluationMap map(inst);
    CHECK(lipschitz_constant(map, MirrorSetup::spectraplex()) == doctest::Approx(1.0));
    Rng rng(12);
    for (int trial = 0; trial < 5; ++trial) {
      const SymMatrix u = random_density(rng, m);
      const MdRun run = md_minimize(map, u, (1.0 / m) * SymMatrix::identity(m), MirrorSetup::spectraplex(), n);
      CHECK(run.d_actual <= std::log(double(m)) + 1e-12);
      CHECK(run.best_value <= 2 * std::sqrt(std::log(double(m)) / n) + 1e-6);
      CHECK(run.guarantee_held);
    }
  }

  TEST_CASE("replaying a permuted gradient sequence reproduces X_T") {
    const Instance inst = random_sym(10, 5, 13);
    const EvaluationMap map(inst);
    Rng rng(14);
    const SymMatrix u = random_density(rng, 5);
    const SymMatrix x0 = (1.0 / 5) * SymMatrix::identity(5);
    for (const MirrorSetup& setup : {MirrorSetup::spectraplex(), MirrorSetup::schatten(1.5)}) {
      const MdRun run = md_minimize(map, setup.kind() == MirrorSetup::Kind::spectraplex ? u : 0.5 * u,
                                    setup.kind() == MirrorSetup::Kind::spectraplex ? x0 : SymMatrix::zero(5), setup, 10);
      std::vector<Subgradient> gs = run.gradients;
      std::shuffle(gs.begin(), gs.end(), std::mt19937(3));
      MirrorState st(setup, setup.kind() == MirrorSetup::Kind::spectraplex ? x0 : SymMatrix::zero(5), run.eta);
      for (const auto& g : gs) st.add_gradient(inst.matrices[g.index], g.sign);
      CHECK((md_iterate(st).matrix() - run.final_iterate.matrix()).cwiseAbs().maxCoeff() < 1e-10);
    }
  }

  TEST_CASE("Bregman non-negativity and Pinsker") {
    Rng rng(15);
    for (int trial = 0; trial < 50; ++trial) {
      const SymMatrix x = random_density(rng, 4);
      const SymMatrix y = interior(random_density(rng, 4));
      const double d = bregman(MirrorSetup::spectraplex(), x, y);
      CHECK(d >= -1e-12);
      CHECK(d >= 0.5 * std::pow(schatten_norm(x - y, Exponent(1)), 2) - 1e-10);
      const SymMatrix a = gaussian_symmetric(rng, 4);
      const SymMatrix b = gaussian_symmetric(rng, 4);
      CHECK(bregman(MirrorSetup::schatten(1.5), a, b) >= -1e-10);
    }
  }

  TEST_CASE("schatten setup from 0: success on 200 samples, m=16, n=32") {
    const double ps = 1.5;
    const Exponent p = Exponent(ps).conjugate();
    const Instance inst = random_sym(32, 16, 16, p);
    const EvaluationMap map(inst);
    const MirrorSetup setup = MirrorSetup::schatten(ps);
    CHECK(lipschitz_constant(map, setup) == doctest::Approx(1.0));
    const auto us = sample_feasible(setup, 16, 200, 17);
    const CoverReport rep = verify_cover(map, nearest_start(setup, {SymMatrix::zero(16)}), setup, us);
    CHECK(rep.fraction == 1.0);
    for (const auto& s : rep.samples) CHECK(s.d <= (p.value() - 1) / 2 + 1e-9);
  }

  TEST_CASE("infeasible U and non-positive-definite starts are rejected") {
    CHECK_THROWS_AS(check_feasible(MirrorSetup::spectraplex(), 2.0 * SymMatrix::identity(2)), ValidationError);
    CHECK_THROWS_AS(check_feasible(MirrorSetup::schatten(2), 2.0 * SymMatrix::identity(2)), ValidationError);
    Eigen::Matrix2d e1 = Eigen::Matrix2d::Zero();
    e1(0, 0) = 1;
    CHECK_THROWS_AS(MirrorState(MirrorSetup::spectraplex(), SymMatrix(e1), 0.1), DomainError);
    CHECK_THROWS_AS(MirrorSetup::schatten(2.5), DomainError);
  }
}

TEST_SUITE("cover") {
  TEST_CASE("net_size_bound small values") {
    CHECK(net_size_bound(1).sum == 3);
    CHECK(net_size_bound(1).bound == 6);
    CHECK(net_size_bound(2).sum == 15);
  }

  TEST_CASE("net_size_bound matches Pascal's triangle up to n = 64") {
    for (unsigned n = 1; n <= 64; ++n) {
      boost::multiprecision::cpp_int sum = 0;
      for (unsigned t = 0; t <= n; ++t) sum += oracle::pascal(t + 2 * n - 1, 2 * n - 1);
      const NetSizeBound b = net_size_bound(n);
      CHECK(b.sum == sum);
      CHECK(b.bound == (n + 1) * oracle::pascal(3 * n, n));
      CHECK(b.sum <= b.bound);
    }
  }

  TEST_CASE("n=2 cover within the counting bound and the radius bound") {
    const Index m = 4;
    const Instance inst = random_sym(2, m, 18);
    const EvaluationMap map(inst);
    const MirrorSetup setup = MirrorSetup::spectraplex();
    const double d_max = std::log(double(m));
    const NetCover net = enumerate_cover(map, {(1.0 / m) * SymMatrix::identity(m)}, setup, d_max);
    CHECK(net.multisets == 15);
    CHECK(net.distinct <= 15);
    CHECK(net.distinct == 13);  // |d|_1 <= 2 in Z^2
    const auto us = sample_feasible(setup, m, 300, 19);
    CHECK(cover_radius(net, map, us) <= std::sqrt(2 * d_max / (setup.rho() * 2)) + 1e-9);
  }

  TEST_CASE("zero budget gives the images of the starts") {
    const Instance inst = random_sym(3, 3, 20);
    const EvaluationMap map(inst);
    Rng rng(21);
    const std::vector<SymMatrix> starts = {interior(random_density(rng, 3)),
                                           (1.0 / 3) * SymMatrix::identity(3)};
    const NetCover net = enumerate_cover(map, starts, MirrorSetup::spectraplex(), 1.0, std::size_t{0});
    REQUIRE(net.distinct == 2);
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK((net.images.col(Index(j)) - map.apply(starts[j].matrix())).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  TEST_CASE("parallel and serial enumeration agree") {
    for (std::size_t n : {1u, 2u, 3u, 4u}) {
      const Instance inst = random_sym(n, 3, 22 + n);
      const EvaluationMap map(inst);
      const std::vector<SymMatrix> starts = {(1.0 / 3) * SymMatrix::identity(3)};
      for (const MirrorSetup& setup : {MirrorSetup::spectraplex(), MirrorSetup::schatten(1.5)}) {
        const auto st = setup.kind() == MirrorSetup::Kind::spectraplex ? starts : std::vector{SymMatrix::zero(3)};
        const NetCover a = enumerate_cover(map, st, setup, 0.7);
        const NetCover b = serial::enumerate_cover(map, st, setup, 0.7);
        REQUIRE(a.distinct == b.distinct);
        CHECK(a.multisets == b.multisets);
        CHECK((a.images - b.images).cwiseAbs().maxCoeff() < 1e-9);
      }
    }
  }

  TEST_CASE("n=4 spectraplex cover radius") {
    const Index m = 3;
    const Instance inst = random_sym(4, m, 30);
    const EvaluationMap map(inst);
    const MirrorSetup setup = MirrorSetup::spectraplex();
    const double d_max = std::log(double(m));
    const NetCover net = enumerate_cover(map, {(1.0 / m) * SymMatrix::identity(m)}, setup, d_max);
    CHECK(BigInt(net.distinct) <= net_size_bound(4).sum);
    const auto us = sample_feasible(setup, m, 200, 31);
    CHECK(cover_radius(net, map, us) <= net.radius_bound + 1e-9);
  }

  TEST_CASE("caps and preconditions") {
    const Instance inst = random_sym(9, 2, 40);
    const EvaluationMap map(inst);
    CHECK_THROWS_AS(enumerate_cover(map, {0.5 * SymMatrix::identity(2)}, MirrorSetup::spectraplex(), 1.0),
                    CapacityError);
    CHECK_THROWS_AS(net_size_bound(0), ValidationError);
  }

  TEST_CASE("parallel and serial verify_cover agree") {
    const Instance inst = random_sym(12, 6, 41);
    const EvaluationMap map(inst);
    const MirrorSetup setup = MirrorSetup::spectraplex();
    const auto us = sample_feasible(setup, 6, 40, 42, Index(2));
    const auto sel = nearest_start(setup, {(1.0 / 6) * SymMatrix::identity(6)});
    const CoverReport a = verify_cover(map, sel, setup, us);
    const CoverReport b = serial::verify_cover(map, sel, setup, us);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t k = 0; k < a.samples.size(); ++k) CHECK(a.samples[k].best == b.samples[k].best);
    CHECK(a.fraction == 1.0);
  }
}
