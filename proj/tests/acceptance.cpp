// Acceptance run: one PASS/FAIL line per criterion, artifacts as CSV.
// Usage: mdisc_acceptance [artifact-dir]

#include "cli/commands.hpp"
#include "mdisc/bounds.hpp"
#include "mdisc/coloring.hpp"
#include "mdisc/cover.hpp"
#include "mdisc/csv.hpp"
#include "mdisc/entropy_net.hpp"
#include "mdisc/measure.hpp"
#include "mdisc/sampling.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

using namespace mdisc;
namespace fs = std::filesystem;

namespace {

const Exponent kInf = Exponent::infinity();

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) { return format_double(v); }

// ------------------------------------------------------------ criteria

Outcome md_guarantee() {
  std::ostringstream d;
  bool pass = true;
  auto run = [&](const MirrorSetup& setup, Index m, std::uint64_t seed) {
    RandomSpec spec;
    spec.n = 2 * static_cast<std::size_t>(m);
    spec.m = m;
    spec.p = setup.kind() == MirrorSetup::Kind::spectraplex ? kInf : Exponent(setup.p_star()).conjugate();
    spec.q = kInf;
    spec.seed = seed;
    const Instance inst = gen_random(spec);
    const EvaluationMap map(inst);
    const SymMatrix x0 = setup.kind() == MirrorSetup::Kind::spectraplex
                             ? (1.0 / static_cast<double>(m)) * SymMatrix::identity(m)
                             : SymMatrix::zero(m);
    const CoverReport rep = verify_cover_sampled(map, nearest_start(setup, {x0}), setup, 200, seed + 1);
    pass = pass && rep.samples.size() == 200 && rep.successes == 200;
    d << setup.name() << " m=" << m << ": " << rep.successes << "/200 (worst best/bound " << fmt(rep.worst_ratio)
      << "); ";
  };
  for (Index m : {Index(8), Index(16), Index(32)}) run(MirrorSetup::spectraplex(), m, 100 + m);
  for (double ps : {1.5, 2.0}) run(MirrorSetup::schatten(ps), 16, 200 + static_cast<std::uint64_t>(ps * 10));
  return {pass, d.str()};
}

Outcome op_entropy_inequality() {
  std::ostringstream d;
  bool pass = true;
  for (Index m : {Index(4), Index(8), Index(16)}) {
    const OpEntropyReport rep = op_entropy_sampled(m, 1000, 300 + m);
    pass = pass && rep.trials == 1000 && rep.failures == 0;
    d << "m=" << m << ": " << rep.failures << " failures, worst slack " << fmt(rep.worst_slack) << "; ";
  }
  return {pass, d.str()};
}

Outcome entropy_nets(const fs::path& artifacts) {
  std::ostringstream d;
  bool pass = true;
  CsvTable table({"m", "h", "n", "h_eff", "blocks", "N", "stored", "size", "size_cap", "trials", "declared_error",
                  "max_entropy", "c_net", "pass"});
  const EntropyNetOptions options;
  for (auto [m, h, n] : {std::tuple{8, 1, 8}, {8, 2, 8}, {16, 1, 8}}) {
    const EntropyNet net = build_entropy_net(m, h, std::size_t(n), options);
    const NetErrorReport rep = net_error_sampled(net, 1000, 400 + m + h, 4.0);
    const bool within_cap = net.stored() <= options.size_cap;
    pass = pass && rep.pass && rep.c_net <= 4.0 && within_cap;
    table.add_row({std::int64_t(m), std::int64_t(h), std::int64_t(n), static_cast<std::int64_t>(net.h),
                   static_cast<std::int64_t>(net.blocks), static_cast<std::int64_t>(net.grid),
                   static_cast<std::uint64_t>(net.stored()), net.size.str(),
                   static_cast<std::uint64_t>(options.size_cap), std::uint64_t{1000}, rep.declared,
                   rep.max_entropy, rep.c_net, rep.pass});
    d << "(" << m << "," << h << "," << n << ") c_net " << fmt(rep.c_net) << " stored " << net.stored() << "; ";
  }
  table.save(artifacts / "entropy_net_cnet.csv");
  return {pass, d.str()};
}

Outcome counting() {
  std::ostringstream d;
  bool pass = true;
  for (unsigned n = 1; n <= 64; ++n) {
    BigInt sum = 0;
    for (unsigned t = 0; t <= n; ++t) sum += oracle::pascal(t + 2 * n - 1, 2 * n - 1);
    const NetSizeBound b = net_size_bound(n);
    pass = pass && b.sum == sum && b.bound == BigInt(n + 1) * oracle::pascal(3 * n, n) && b.sum <= b.bound;
  }
  d << "exact values n<=64 " << (pass ? "match" : "differ") << "; ";
  for (std::size_t n = 1; n <= 4; ++n) {
    const Index m = 3;
    const Instance inst = gen_random({n, m, kInf, kInf, {}, {}, 500 + n});
    const EvaluationMap map(inst);
    const MirrorSetup setup = MirrorSetup::spectraplex();
    const double d_max = std::log(double(m));
    const NetCover net = enumerate_cover(map, {(1.0 / m) * SymMatrix::identity(m)}, setup, d_max);
    const double radius = cover_radius(net, map, sample_feasible(setup, m, 300, 600 + n));
    const double allowed = std::sqrt(2 * d_max / (setup.rho() * double(n)));
    const bool ok = BigInt(net.distinct) <= net_size_bound(n).bound && radius <= allowed + 1e-9;
    pass = pass && ok;
    d << "n=" << n << ": " << net.distinct << " points, radius " << fmt(radius) << " <= " << fmt(allowed) << "; ";
  }
  return {pass, d.str()};
}

Outcome lower_bounds() {
  std::ostringstream d;
  bool pass = true;
  for (std::size_t n : {8u, 12u, 16u}) {
    const double v = brute_force_min(gen_rank1_lower(n), kInf).value;
    const double need = 0.5 * std::sqrt(double(n - 1)) * (1 - 1e-9);
    pass = pass && v >= need;
    d << "rank-1 n=" << n << ": " << fmt(v) << " >= " << fmt(need) << "; ";
  }
  Rng rng(700);
  for (Index m : {Index(2), Index(4)}) {
    // p = inf applies no scaling, so these are the unscaled D_i P_j.
    const Instance raw = gen_hadamard_lower(m, kInf, false);
    const double n = double(raw.n());
    const double v = brute_force_min(raw, kInf).value;
    double parseval = 0;
    for (int trial = 0; trial < 200; ++trial) {
      Eigen::VectorXd x(static_cast<Index>(raw.n()));
      for (Index i = 0; i < x.size(); ++i) x(i) = std::uniform_real_distribution<double>(-1, 1)(rng);
      Eigen::MatrixXd s = Eigen::MatrixXd::Zero(m, m);
      for (Index i = 0; i < x.size(); ++i) s += x(i) * raw.matrices[std::size_t(i)];
      parseval = std::max(parseval, std::abs(s.squaredNorm() - double(m) * x.squaredNorm()));
    }
    pass = pass && v >= std::sqrt(n) * (1 - 1e-9) && parseval <= 1e-8;
    d << "hadamard m=" << m << ": " << fmt(v) << " >= " << fmt(std::sqrt(n)) << ", Parseval error "
      << fmt(parseval) << "; ";
  }
  return {pass, d.str()};
}

Outcome coloring_pipeline(const fs::path& artifacts) {
  std::ostringstream d;
  bool pass = true;
  CsvTable table({"family", "n", "m", "seeds", "successes", "fitted_c", "reference"});
  const std::size_t seeds = 20;
  auto sweep = [&](const std::string& family, std::size_t n, const std::function<Instance(std::uint64_t)>& make,
                   const std::string& bound, const std::string& reference, double ref_value, double limit) {
    std::size_t ok = 0;
    double fitted = 0;
    for (std::size_t k = 0; k < seeds; ++k) {
      const std::uint64_t seed = derive_seed(800 + n, k);
      const Instance inst = make(seed);
      PartialColoringParams params;
      params.seed = derive_seed(seed, 1);
      try {
        const FullColoring fc = full_color(inst, bound_fn_for(inst, bound), params);
        ++ok;
        fitted = std::max(fitted, fc.discrepancy / ref_value);
      } catch (const ColoringFailure&) {
      }
    }
    const bool good = double(ok) >= 0.95 * double(seeds) && fitted <= limit;
    pass = pass && good;
    table.add_row({family, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(n),
                   static_cast<std::uint64_t>(seeds), static_cast<std::uint64_t>(ok), fitted, reference});
    d << family << " n=" << n << ": " << ok << "/" << seeds << ", C " << fmt(fitted) << "; ";
  };
  for (std::size_t n : {16u, 32u, 64u}) {
    const double ref = std::sqrt(double(n) * std::log(2.0));
    sweep("diagonal-spencer", n, [n](std::uint64_t s) { return gen_diagonal_spencer(n, Index(n), s); }, "spencer",
          "sqrt(n log(2m/n))", ref, 6.0);
  }
  for (std::size_t n : {16u, 32u, 64u}) {
    sweep("lowrank-r1", n,
          [n](std::uint64_t s) { return gen_random({n, Index(n), kInf, kInf, Index(1), {}, s}); }, "lowrank",
          "sqrt(n)", std::sqrt(double(n)), 8.0);
  }
  table.save(artifacts / "coloring_fitted_c.csv");
  return {pass, d.str()};
}

Outcome measure() {
  std::ostringstream d;
  const MeasureEstimate est = mc_gaussian_measure(gen_unit_diagonal(8), 2.0, kInf, 100000, 900);
  const double exact = std::pow(2 * oracle::phi(2.0) - 1, 8);
  const bool close = std::abs(est.estimate - exact) <= 3 * est.half_width;
  d << "estimate " << fmt(est.estimate) << " vs " << fmt(exact) << " (half-width " << fmt(est.half_width) << "); ";

  const MeasureSweep spencer = measure_exponent_sweep(
      [](std::size_t n) { return gen_diagonal_spencer(n, Index(n), 901); },
      [](const Instance& inst) {
        const double n = double(inst.n());
        return std::sqrt(n * std::log(2.0 * double(inst.m) / n));
      },
      {6, 8, 10, 12, 14}, 100000, 902, 1.0);
  d << "spencer sweep alpha=1: " << (spencer.bounded ? "bounded" : "not bounded") << ", worst exponent "
    << fmt(-spencer.fitted_alpha) << "; ";

  const MeasureSweep rank1 = measure_exponent_sweep([](std::size_t n) { return gen_rank1_lower(n); },
                                                    [](const Instance& i) { return 0.1 * std::sqrt(double(i.n())); },
                                                    {8, 12, 16}, 100000, 903, 1.0);
  d << "rank-1 t=0.1 sqrt(n): " << (rank1.collapsed ? "collapsed" : "not collapsed");
  for (const auto& r : rank1.rows)
    d << " [n=" << r.estimate.n << " " << (r.estimate.censored ? "<= " : "") << fmt(r.estimate.log2_per_coord) << "]";
  return {close && spencer.bounded && rank1.collapsed, d.str()};
}

Outcome cli_only(const fs::path& artifacts) {
  std::ostringstream d;
  const fs::path inst = artifacts / "cli_spencer16.mdi.json";
  const std::vector<std::vector<std::string>> commands = {
      {"gen", "--family", "diagonal-spencer", "--n", "16", "--m", "16", "--out", inst.string()},
      {"solve", "--instance", inst.string(), "--report", (artifacts / "cli_solve.csv").string()},
      {"bounds", "--n", "16,64", "--m", "16", "--out", (artifacts / "cli_bounds.csv").string()},
      {"mdcheck", "--m", "4", "--samples", "10", "--out", (artifacts / "cli_mdcheck.csv").string()},
      {"netcheck", "--m", "4", "--n", "4", "--trials", "50", "--lemma-trials", "50", "--out",
       (artifacts / "cli_netcheck.csv").string()},
      {"measure", "--family", "unit-diagonal", "--n", "8", "--t", "2", "--samples", "5000", "--out",
       (artifacts / "cli_measure.csv").string()},
      {"sweep", "--kind", "coloring", "--family", "diagonal-spencer", "--n", "8,16", "--seeds", "2", "--out",
       (artifacts / "cli_sweep.csv").string()},
  };
  bool pass = true;
  for (auto args : commands) {
    const std::string name = args.front();
    args.insert(args.begin(), "mdisc");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    bool ok = code == cli::kExitOk;
    if (ok && name != "gen") {
      try {
        ok = !load_csv(args[args.size() - 1]).rows().empty();
      } catch (const std::exception&) {
        ok = false;
      }
    }
    pass = pass && ok;
    d << name << (ok ? " ok" : " FAILED (exit " + std::to_string(code) + ")") << "; ";
  }
  return {pass, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path artifacts = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_artifacts");
  fs::create_directories(artifacts);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"mirror-descent guarantee", md_guarantee},
      {"operator-to-entropy inequality", op_entropy_inequality},
      {"relative-entropy nets", [&] { return entropy_nets(artifacts); }},
      {"cover counting", counting},
      {"lower-bound families", lower_bounds},
      {"coloring pipeline", [&] { return coloring_pipeline(artifacts); }},
      {"gaussian measure", measure},
      {"cli and csv only", [&] { return cli_only(artifacts); }},
  };

  int failures = 0;
  for (const auto& [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << " (" << std::fixed;
    std::cout.precision(1);
    std::cout << secs << " s): " << o.detail << '\n' << std::defaultfloat;
    std::cout.flush();
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
  return failures == 0 ? 0 : 1;
}
