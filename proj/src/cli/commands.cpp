#include "cli/commands.hpp"

#include "cli/config.hpp"
#include "mdisc/bounds.hpp"
#include "mdisc/coloring.hpp"
#include "mdisc/cover.hpp"
#include "mdisc/csv.hpp"
#include "mdisc/entropy_net.hpp"
#include "mdisc/errors.hpp"
#include "mdisc/measure.hpp"
#include "mdisc/mirror.hpp"
#include "mdisc/parallel.hpp"
#include "mdisc/sampling.hpp"

#include <CLI11.hpp>

#include <omp.h>

#include <chrono>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>

namespace mdisc::cli {

namespace {

const std::vector<std::string> kFamilies = {"random", "diagonal-spencer", "unit-diagonal", "hadamard", "rank1-lower"};

struct Common {
  std::uint64_t seed = 0;
  std::string out;
  int workers = 0;  // 0: default resolution
  std::string config;
};

void add_common(CLI::App* sub, Common& c, const std::string& out_help) {
  sub->add_option("--seed", c.seed, "Base seed");
  sub->add_option("--out", c.out, out_help);
  sub->add_option("--workers", c.workers, "Worker threads (default: MDISC_WORKERS, then all cores)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--config", c.config, "JSON config; command-line flags win");
}

void add_family(CLI::App* sub, FamilySpec& f) {
  sub->add_option("--family", f.family, "Instance family")->check(CLI::IsMember(kFamilies));
  sub->add_option("--n", f.n, "Number of matrices");
  sub->add_option("--m", f.m, "Matrix dimension");
  sub->add_option("--r", f.r, "Rank bound (random family)");
  sub->add_option("--h", f.h, "Block size (random family)");
  sub->add_option("--p", f.p, "Source exponent, 1..inf");
  sub->add_option("--q", f.q, "Target exponent, 1..inf");
  sub->add_flag("--raw", f.raw, "Hadamard: keep the non-symmetric matrices");
}

// Writes to the --out path, or to `fallback` when none was given.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error("cannot open '" + path + "' for writing");
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

nlohmann::json vector_json(const Eigen::VectorXd& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Exponent exponent_of(const std::string& text) { return Exponent::parse(text); }

std::string bound_for_report(const std::string& name, bool full) {
  return full && name == "schatten" ? "schatten_full" : name;
}

BoundInputs inputs_for(const Instance& inst, std::size_t n) {
  BoundInputs in;
  in.n = static_cast<double>(n);
  in.m = static_cast<double>(inst.m);
  in.p = inst.p;
  in.q = inst.q;
  if (inst.rank_bound) in.r = static_cast<double>(*inst.rank_bound);
  if (inst.block_size) in.h = static_cast<double>(*inst.block_size);
  return in;
}

std::optional<double> beta_for(const Instance& inst) {
  const double beta = 0.5 + inst.q.reciprocal() - inst.p.reciprocal();
  return beta > 1e-12 ? std::optional<double>(beta) : std::nullopt;
}

// ---------------------------------------------------------------- gen

int cmd_gen(const FamilySpec& f, const Common& c, std::ostream& out) {
  FamilySpec spec = f;
  spec.seed = c.seed;
  const Instance inst = make_instance(spec);
  validate(inst);
  Sink sink(c.out, out);
  sink.get() << to_json(inst).dump() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- solve

struct SolveOptions {
  std::string instance;
  std::string mode = "full";
  std::string bound = "auto";
  std::string q;
  double t = 0;  // partial: 0 means the bound at n
  double c_limit = 6.0;
  bool brute_force = false;
  std::string report;
  PartialColoringParams params;
};

CsvTable solve_table() {
  std::vector<std::string> h = {"instance", "label", "mode", "status", "n", "m", "p", "q", "r", "h", "seed",
                                "bound_name", "bound", "discrepancy", "ratio", "c_limit", "c_max", "retries",
                                "oracle_calls", "rounds", "triangle_ok", "brute_force_min", "achieved_over_optimal"};
  for (const auto& name : BoundReport::names()) h.push_back("ratio_" + name);
  return CsvTable(h);
}

int cmd_solve(const SolveOptions& o, const Common& c, std::ostream& out, std::ostream& err) {
  if (o.instance.empty()) throw ValidationError("solve needs --instance");
  if (o.mode != "full" && o.mode != "partial") throw ValidationError("--mode must be full or partial");
  const Instance inst = load_instance(o.instance);
  const std::size_t n = inst.n();
  const Exponent q = o.q.empty() ? inst.q : exponent_of(o.q);
  Instance target = inst;
  target.q = q;
  const std::string bound_name = o.bound == "auto" ? default_bound(target) : o.bound;
  const bool full = o.mode == "full";
  PartialColoringParams params = o.params;
  params.seed = c.seed;
  params.q = q;
  const BoundFn bound_fn = bound_fn_for(target, bound_name);
  const BoundReport all = bound_all(inputs_for(target, n));
  const double bound = all.get(bound_for_report(bound_name, full));

  nlohmann::json col;
  col["format"] = "mdisc-coloring";
  col["instance"] = o.instance;
  col["mode"] = o.mode;
  col["seed"] = c.seed;
  col["q"] = q.to_string();
  std::string status = "ok";
  double disc = 0, c_max = 0;
  std::size_t retries = 0, calls = 0, rounds = 0;
  bool triangle = true;
  Eigen::VectorXd x;
  int code = kExitOk;
  try {
    if (full) {
      const FullColoring fc = full_color(target, bound_fn, params, beta_for(target));
      x = fc.x;
      disc = fc.discrepancy;
      rounds = fc.rounds.size();
      triangle = fc.triangle_ok;
      nlohmann::json rs = nlohmann::json::array();
      for (const auto& r : fc.rounds) {
        c_max = std::max(c_max, r.c);
        retries += r.retries;
        calls += r.oracle_calls;
        rs.push_back({{"active", r.active}, {"frozen", r.frozen}, {"target", r.target},
                      {"discrepancy", r.discrepancy}, {"c", r.c}, {"retries", r.retries}});
      }
      col["rounds"] = rs;
      col["cleanup_coordinates"] = fc.cleanup_coordinates;
      col["cleanup_discrepancy"] = fc.cleanup_discrepancy;
      if (fc.geometric_ratio) col["geometric_ratio"] = *fc.geometric_ratio;
    } else {
      const double t = o.t > 0 ? o.t : bound_fn(n);
      const Coloring pc = partial_color(target, t, Eigen::VectorXd::Zero(static_cast<Index>(n)), params);
      x = pc.x;
      disc = pc.discrepancy;
      c_max = pc.c;
      retries = pc.retries;
      calls = pc.oracle_calls;
      col["target"] = t;
      col["frozen"] = pc.frozen;
    }
  } catch (const ColoringFailure& e) {
    status = "failed";
    x = e.best().x;
    disc = e.best().discrepancy;
    c_max = e.best().c;
    retries = e.best().retries;
    calls = e.best().oracle_calls;
    col["error"] = e.what();
    if (e.round()) col["failed_round"] = *e.round();
    err << "solve: " << e.what() << '\n';
    code = kExitHard;
  }
  const double measured = full ? disc / bound : c_max;
  if (status == "ok" && measured > o.c_limit) {
    status = "over_bound";
    code = kExitOverBound;
  }
  col["status"] = status;
  col["x"] = vector_json(x);
  col["discrepancy"] = disc;
  col["bound_name"] = bound_for_report(bound_name, full);
  col["bound"] = bound;

  double opt = std::numeric_limits<double>::quiet_NaN();
  if (o.brute_force) {
    opt = brute_force_min(target, q).value;
    col["brute_force_min"] = opt;
  }
  if (!c.out.empty()) {
    std::ofstream f(c.out);
    if (!f) throw Error("cannot open '" + c.out + "' for writing");
    f << col.dump(2) << '\n';
  }

  CsvTable table = solve_table();
  std::vector<CsvCell> row = {o.instance,
                              inst.label,
                              o.mode,
                              status,
                              static_cast<std::uint64_t>(n),
                              static_cast<std::int64_t>(inst.m),
                              inst.p.to_string(),
                              q.to_string(),
                              static_cast<std::int64_t>(inst.rank_bound.value_or(inst.m)),
                              static_cast<std::int64_t>(inst.block_size.value_or(inst.m)),
                              c.seed,
                              bound_for_report(bound_name, full),
                              bound,
                              disc,
                              disc / bound,
                              o.c_limit,
                              c_max,
                              static_cast<std::uint64_t>(retries),
                              static_cast<std::uint64_t>(calls),
                              static_cast<std::uint64_t>(rounds),
                              triangle,
                              opt,
                              o.brute_force && opt > 0 ? disc / opt : std::numeric_limits<double>::quiet_NaN()};
  for (const auto& name : BoundReport::names()) row.push_back(disc / all.get(name));
  table.add_row(row);
  Sink sink(o.report, out);
  table.write(sink.get());
  return code;
}

// ---------------------------------------------------------------- bounds

struct BoundsOptions {
  std::vector<double> n, m, r, h;
  std::vector<std::string> p = {"inf"}, q = {"inf"};
};

int cmd_bounds(const BoundsOptions& o, const Common& c, std::ostream& out) {
  if (o.n.empty() || o.m.empty()) throw ValidationError("bounds needs --n and --m");
  CsvTable table({"n", "m", "p", "q", "r", "h", "name", "value", "in_regime"});
  const std::vector<double> rs = o.r.empty() ? std::vector<double>{0} : o.r;
  const std::vector<double> hs = o.h.empty() ? std::vector<double>{0} : o.h;
  for (double n : o.n)
    for (double m : o.m)
      for (const auto& p : o.p)
        for (const auto& q : o.q)
          for (double r : rs)
            for (double h : hs) {
              BoundInputs in;
              in.n = n;
              in.m = m;
              in.p = exponent_of(p);
              in.q = exponent_of(q);
              if (r > 0) in.r = r;
              if (h > 0) in.h = h;
              const BoundReport rep = bound_all(in);
              for (const auto& name : BoundReport::names()) {
                const bool ok = std::find(rep.out_of_regime.begin(), rep.out_of_regime.end(), name) ==
                                rep.out_of_regime.end();
                table.add_row({n, m, in.p.to_string(), in.q.to_string(), in.r.value_or(m), in.h.value_or(m), name,
                               rep.get(name), ok});
              }
            }
  Sink sink(c.out, out);
  table.write(sink.get());
  return kExitOk;
}

// ---------------------------------------------------------------- mdcheck

struct MdOptions {
  std::string setup = "spectraplex";
  double p_star = 1.5;
  Index m = 16;
  std::size_t n = 0;  // default 2m
  Index h = 0;        // block size of the sampled U (spectraplex)
  std::size_t samples = 200;
  std::string starts = "identity";
  std::size_t net_cap = 200000;
  std::string instance;
};

int cmd_mdcheck(const MdOptions& o, const Common& c, std::ostream& out, std::ostream& err) {
  if (o.setup != "spectraplex" && o.setup != "schatten") throw ValidationError("--setup must be spectraplex or schatten");
  const MirrorSetup setup = o.setup == "spectraplex" ? MirrorSetup::spectraplex() : MirrorSetup::schatten(o.p_star);
  Instance inst;
  if (!o.instance.empty()) {
    inst = load_instance(o.instance);
  } else {
    RandomSpec spec;
    spec.m = o.m;
    spec.n = o.n > 0 ? o.n : 2 * static_cast<std::size_t>(o.m);
    spec.p = o.setup == "spectraplex" ? Exponent::infinity() : Exponent(o.p_star).conjugate();
    spec.q = Exponent::infinity();
    spec.seed = derive_seed(c.seed, 0);
    inst = gen_random(spec);
  }
  const EvaluationMap map(inst);
  const Index m = inst.m;
  std::vector<SymMatrix> starts;
  if (o.starts == "identity") {
    starts.push_back(o.setup == "spectraplex" ? (1.0 / static_cast<double>(m)) * SymMatrix::identity(m)
                                              : SymMatrix::zero(m));
  } else if (o.starts == "net") {
    if (o.setup != "spectraplex") throw ValidationError("--starts net needs the spectraplex setup");
    starts = build_entropy_net(m, o.h > 0 ? o.h : 1, inst.n()).materialize(o.net_cap);
  } else {
    throw ValidationError("--starts must be identity or net");
  }
  std::optional<Index> block;
  if (o.h > 0) block = o.h;
  const CoverReport rep = verify_cover_sampled(map, nearest_start(setup, starts), setup, o.samples,
                                               derive_seed(c.seed, 1), block);

  CsvTable table({"setup", "p_star", "m", "n", "h", "starts", "seed", "sample", "d", "best", "bound", "held",
                  "best_step"});
  for (std::size_t k = 0; k < rep.samples.size(); ++k) {
    const auto& s = rep.samples[k];
    table.add_row({setup.name(), o.setup == "spectraplex" ? 0.0 : o.p_star, static_cast<std::int64_t>(m),
                   static_cast<std::uint64_t>(inst.n()), static_cast<std::int64_t>(o.h > 0 ? o.h : m),
                   static_cast<std::uint64_t>(starts.size()), c.seed, static_cast<std::uint64_t>(k), s.d, s.best,
                   s.bound, s.held, static_cast<std::uint64_t>(s.best_step)});
    if (!s.held) {
      err << "mdcheck: guarantee violated at sample " << k << ": best " << format_double(s.best) << " > bound "
          << format_double(s.bound) << " (D = " << format_double(s.d) << ")\n";
    }
  }
  Sink sink(c.out, out);
  table.write(sink.get());
  err << "mdcheck: success fraction " << rep.fraction << " over " << rep.samples.size() << " samples\n";
  return rep.successes == rep.samples.size() ? kExitOk : kExitHard;
}

// ---------------------------------------------------------------- netcheck

struct NetOptions {
  Index m = 8;
  Index h = 1;
  std::size_t n = 8;
  std::size_t trials = 1000;
  double c_limit = 4.0;
  std::size_t lemma_trials = 1000;
  std::string net_out;
  std::size_t materialize_cap = 0;
};

int cmd_netcheck(const NetOptions& o, const Common& c, std::ostream& out, std::ostream& err) {
  const EntropyNet net = build_entropy_net(o.m, o.h, o.n);
  const NetErrorReport rep = net_error_sampled(net, o.trials, derive_seed(c.seed, 0), o.c_limit);
  const OpEntropyReport lemma = op_entropy_sampled(o.m, o.lemma_trials, derive_seed(c.seed, 1));
  if (!o.net_out.empty()) save_entropy_net(net, o.net_out, o.materialize_cap);

  CsvTable table({"m", "h", "h_eff", "n", "seed", "trials", "N", "blocks", "stored", "size", "compositions",
                  "declared_error", "max_entropy", "c_net", "c_limit", "pass", "lemma_trials", "lemma_failures",
                  "lemma_worst_slack"});
  table.add_row({static_cast<std::int64_t>(o.m), static_cast<std::int64_t>(o.h), static_cast<std::int64_t>(net.h),
                 static_cast<std::uint64_t>(o.n), c.seed, static_cast<std::uint64_t>(o.trials),
                 static_cast<std::int64_t>(net.grid), static_cast<std::int64_t>(net.blocks),
                 static_cast<std::uint64_t>(net.stored()), net.size.str(), net.compositions.str(), net.declared_error,
                 rep.max_entropy, rep.c_net, o.c_limit, rep.pass, static_cast<std::uint64_t>(lemma.trials),
                 static_cast<std::uint64_t>(lemma.failures), lemma.trials ? lemma.worst_slack : 0.0});
  Sink sink(c.out, out);
  table.write(sink.get());
  if (!rep.pass) {
    err << "netcheck: c_net " << format_double(rep.c_net) << " exceeds " << format_double(o.c_limit) << '\n';
  }
  if (lemma.failures > 0) {
    err << "netcheck: operator-to-entropy inequality failed on " << lemma.failures << " of " << lemma.trials
        << " pairs (worst slack " << format_double(lemma.worst_slack) << ")\n";
  }
  return rep.pass && lemma.failures == 0 ? kExitOk : kExitHard;
}

// ---------------------------------------------------------------- measure

ThresholdRule parse_rule(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  const auto number = [&] {
    try {
      return std::stod(arg);
    } catch (const std::exception&) {
      throw ValidationError("threshold rule '" + text + "' needs a numeric argument");
    }
  };
  if (head == "spencer") {
    return [](const Instance& i) {
      const double n = static_cast<double>(i.n());
      return std::sqrt(n * std::log(2.0 * std::max(static_cast<double>(i.m), n) / n));
    };
  }
  if (head == "sqrtn") {
    const double c = number();
    return [c](const Instance& i) { return c * std::sqrt(static_cast<double>(i.n())); };
  }
  if (head == "const") {
    const double c = number();
    return [c](const Instance&) { return c; };
  }
  if (head == "inf") return [](const Instance&) { return std::numeric_limits<double>::infinity(); };
  if (head == "bound") {
    BoundInputs probe;
    probe.n = probe.m = 1;
    bound_all(probe).get(arg);  // rejects unknown names
    return [arg](const Instance& i) { return bound_all(inputs_for(i, i.n())).get(arg); };
  }
  throw ValidationError("unknown threshold rule '" + text + "' (spencer, sqrtn:c, const:t, inf, bound:name)");
}

struct MeasureCmd {
  FamilySpec family;
  std::string instance;
  std::vector<double> t;
  std::string t_rule;
  std::size_t samples = 100000;
  bool no_antithetic = false;
  std::size_t block_size = 4096;
};

CsvTable measure_csv() {
  CsvTable base = measure_table();
  std::vector<std::string> h = {"family"};
  h.insert(h.end(), base.header().begin(), base.header().end());
  return CsvTable(h);
}

void add_labeled_row(CsvTable& table, const Instance& inst, Exponent q, const MeasureEstimate& est) {
  CsvTable tmp = measure_table();
  add_measure_row(tmp, inst, q, est);
  std::vector<CsvCell> row = {inst.label};
  for (const auto& cell : tmp.rows().front()) row.emplace_back(cell);
  table.add_row(row);
}

int cmd_measure(const MeasureCmd& o, const Common& c, std::ostream& out) {
  FamilySpec f = o.family;
  f.seed = c.seed;
  const Instance inst = o.instance.empty() ? make_instance(f) : load_instance(o.instance);
  std::vector<double> ts = o.t;
  if (!o.t_rule.empty()) ts.push_back(parse_rule(o.t_rule)(inst));
  if (ts.empty()) throw ValidationError("measure needs --t or --t-rule");
  MeasureOptions mo;
  mo.antithetic = !o.no_antithetic;
  mo.block_size = o.block_size;
  const Exponent q = o.instance.empty() ? exponent_of(f.q) : inst.q;
  Instance target = inst;
  target.q = q;
  const auto ests = mc_gaussian_measure(target, ts, q, o.samples, c.seed, mo);
  CsvTable table = measure_csv();
  for (const auto& e : ests) add_labeled_row(table, target, q, e);
  Sink sink(c.out, out);
  table.write(sink.get());
  return kExitOk;
}

// ---------------------------------------------------------------- sweep

struct SweepOptions {
  std::string kind = "coloring";
  FamilySpec family;
  std::vector<std::size_t> ns;
  std::vector<Index> ms;  // empty: m = n
  std::size_t seeds = 1;
  std::string bound = "auto";
  double c_limit = 6.0;
  std::string t_rule = "spencer";
  std::size_t samples = 100000;
  double alpha = 1.0;
  PartialColoringParams params;
};

struct ColoringRow {
  Instance inst;
  std::uint64_t seed = 0;
  std::string bound_name;
  double bound = 0;
  double disc = 0;
  double c_max = 0;
  std::size_t retries = 0;
  std::size_t calls = 0;
  std::string status;
  std::string error;
  double seconds = 0;
};

int sweep_coloring(const SweepOptions& o, const Common& c, std::ostream& out, std::ostream& err) {
  struct Point {
    std::size_t n;
    Index m;
    std::size_t k;
  };
  std::vector<Point> grid;
  for (std::size_t n : o.ns) {
    const std::vector<Index> ms = o.ms.empty() ? std::vector<Index>{static_cast<Index>(n)} : o.ms;
    for (Index m : ms)
      for (std::size_t k = 0; k < o.seeds; ++k) grid.push_back({n, m, k});
  }
  std::vector<ColoringRow> rows(grid.size());
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
  for (std::int64_t g = 0; g < static_cast<std::int64_t>(grid.size()); ++g) {
    const Point& pt = grid[static_cast<std::size_t>(g)];
    ColoringRow& row = rows[static_cast<std::size_t>(g)];
    try {
      const auto t0 = std::chrono::steady_clock::now();
      FamilySpec f = o.family;
      f.n = pt.n;
      f.m = pt.m;
      row.seed = derive_seed(c.seed, pt.k);
      f.seed = row.seed;
      row.inst = make_instance(f);
      row.bound_name = o.bound == "auto" ? default_bound(row.inst) : o.bound;
      row.bound = bound_all(inputs_for(row.inst, row.inst.n())).get(bound_for_report(row.bound_name, true));
      PartialColoringParams params = o.params;
      params.seed = row.seed;
      try {
        const FullColoring fc =
            full_color(row.inst, bound_fn_for(row.inst, row.bound_name), params, beta_for(row.inst));
        row.disc = fc.discrepancy;
        for (const auto& r : fc.rounds) {
          row.c_max = std::max(row.c_max, r.c);
          row.retries += r.retries;
          row.calls += r.oracle_calls;
        }
        row.status = row.disc / row.bound > o.c_limit ? "over_bound" : "ok";
      } catch (const ColoringFailure& e) {
        row.status = "failed";
        row.error = e.what();
        row.disc = e.best().discrepancy;
      }
      row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);

  CsvTable table({"family", "n", "m", "p", "q", "r", "h", "seed", "bound_name", "bound", "discrepancy", "ratio",
                  "c_max", "retries", "oracle_calls", "status", "seconds"});
  std::size_t failed = 0, over = 0;
  double worst = 0;
  for (const auto& r : rows) {
    table.add_row({r.inst.label, static_cast<std::uint64_t>(r.inst.n()), static_cast<std::int64_t>(r.inst.m),
                   r.inst.p.to_string(), r.inst.q.to_string(),
                   static_cast<std::int64_t>(r.inst.rank_bound.value_or(r.inst.m)),
                   static_cast<std::int64_t>(r.inst.block_size.value_or(r.inst.m)), r.seed, r.bound_name, r.bound,
                   r.disc, r.disc / r.bound, r.c_max, static_cast<std::uint64_t>(r.retries),
                   static_cast<std::uint64_t>(r.calls), r.status, r.seconds});
    if (r.status == "failed") {
      ++failed;
      err << "sweep: n=" << r.inst.n() << " m=" << r.inst.m << " seed=" << r.seed << " failed: " << r.error << '\n';
    } else {
      worst = std::max(worst, r.disc / r.bound);
    }
    if (r.status == "over_bound") ++over;
  }
  Sink sink(c.out, out);
  table.write(sink.get());
  err << "sweep: " << rows.size() - failed << "/" << rows.size() << " colorings succeeded, max ratio "
      << format_double(worst) << '\n';
  if (failed > 0) return kExitHard;
  return over > 0 ? kExitOverBound : kExitOk;
}

int sweep_measure(const SweepOptions& o, const Common& c, std::ostream& out, std::ostream& err) {
  const FamilySpec base = o.family;
  const Index fixed_m = o.ms.empty() ? 0 : o.ms.front();
  const MeasureSweep sweep = measure_exponent_sweep(
      [&](std::size_t n) {
        FamilySpec f = base;
        f.n = n;
        f.m = fixed_m > 0 ? fixed_m : static_cast<Index>(n);
        f.seed = derive_seed(c.seed, n);
        return make_instance(f);
      },
      parse_rule(o.t_rule), o.ns, o.samples, c.seed, o.alpha);
  CsvTable base_table = measure_csv();
  std::vector<std::string> h = {"t_rule"};
  h.insert(h.end(), base_table.header().begin(), base_table.header().end());
  CsvTable table(h);
  for (const auto& row : sweep.rows) {
    CsvTable tmp = measure_csv();
    add_labeled_row(tmp, row.instance, row.instance.q, row.estimate);
    std::vector<CsvCell> cells = {o.t_rule};
    for (const auto& cell : tmp.rows().front()) cells.emplace_back(cell);
    table.add_row(cells);
  }
  Sink sink(c.out, out);
  table.write(sink.get());
  err << "sweep: alpha " << format_double(o.alpha) << ", fitted alpha " << format_double(sweep.fitted_alpha)
      << (sweep.bounded ? ", bounded" : "") << (sweep.collapsed ? ", collapsed" : "") << '\n';
  return kExitOk;
}

int cmd_sweep(const SweepOptions& o, const Common& c, std::ostream& out, std::ostream& err) {
  if (o.ns.empty()) throw ValidationError("sweep needs --n (a list)");
  if (o.kind == "coloring") return sweep_coloring(o, c, out, err);
  if (o.kind == "measure") return sweep_measure(o, c, out, err);
  throw ValidationError("--kind must be coloring or measure");
}

void add_params(CLI::App* sub, PartialColoringParams& p) {
  sub->add_option("--sigma", p.sigma, "Gaussian scale of the partial-coloring step");
  sub->add_option("--oracle-cap-factor", p.oracle_cap_factor, "Separation-oracle calls per active coordinate");
  sub->add_option("--delta-freeze", p.delta_freeze, "Freeze threshold");
  sub->add_option("--growth", p.growth, "Target growth per retry");
  sub->add_option("--max-retries", p.max_retries, "Retries per partial coloring");
  sub->add_option("--feasibility-tol", p.feasibility_tol, "Relative slack on the discrepancy constraint");
}

}  // namespace

Instance make_instance(const FamilySpec& f) {
  const Exponent p = exponent_of(f.p);
  const Exponent q = exponent_of(f.q);
  Instance inst;
  if (f.family == "random") {
    RandomSpec spec;
    spec.n = f.n;
    spec.m = f.m;
    spec.p = p;
    spec.q = q;
    if (f.r > 0) spec.rank = f.r;
    if (f.h > 0) spec.block = f.h;
    spec.seed = f.seed;
    return gen_random(spec);
  }
  if (f.family == "diagonal-spencer") {
    inst = gen_diagonal_spencer(f.n, f.m > 0 ? f.m : static_cast<Index>(f.n), f.seed);
  } else if (f.family == "unit-diagonal") {
    inst = gen_unit_diagonal(f.n);
  } else if (f.family == "hadamard") {
    if (f.m <= 0) throw ValidationError("hadamard family needs --m");
    inst = gen_hadamard_lower(f.m, p, !f.raw);
    return inst;
  } else if (f.family == "rank1-lower") {
    inst = gen_rank1_lower(f.n);
  } else {
    throw ValidationError("unknown family '" + f.family + "'");
  }
  inst.q = q;
  return inst;
}

std::string default_bound(const Instance& inst) {
  if (!inst.p.is_infinite() || !inst.q.is_infinite()) return "schatten";
  if (inst.block_size && *inst.block_size == 1) return "spencer";
  if (inst.rank_bound && *inst.rank_bound < inst.m) return "lowrank";
  if (inst.block_size && *inst.block_size < inst.m) return "block";
  return "matrix_spencer_conj";
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Matrix discrepancy toolkit", "mdisc"};
  app.set_help_flag("--help", "Print this help message and exit");  // -h would shadow --h (block size)
  app.require_subcommand(1);
  Common common;

  FamilySpec gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate an instance file (.mdi.json)");
  add_family(gen_cmd, gen);
  add_common(gen_cmd, common, "Instance path (default: stdout)");

  SolveOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "Partial or full coloring of an instance");
  solve_cmd->add_option("--instance", solve.instance, "Instance file");
  solve_cmd->add_option("--mode", solve.mode, "full or partial");
  solve_cmd->add_option("--bound", solve.bound, "Bound name for targets and ratios (default: auto)");
  solve_cmd->add_option("--q", solve.q, "Target exponent (default: the instance's)");
  solve_cmd->add_option("--t", solve.t, "Partial mode target (default: the bound at n)");
  solve_cmd->add_option("--c-limit", solve.c_limit, "Ratio above which the exit code is 2");
  solve_cmd->add_flag("--brute-force", solve.brute_force, "Also compute the exact optimum (n <= 22)");
  solve_cmd->add_option("--report", solve.report, "Report CSV path (default: stdout)");
  add_params(solve_cmd, solve.params);
  add_common(solve_cmd, common, "Coloring JSON path");

  BoundsOptions bounds;
  auto* bounds_cmd = app.add_subcommand("bounds", "Closed-form bound table");
  bounds_cmd->add_option("--n", bounds.n, "n values")->delimiter(',');
  bounds_cmd->add_option("--m", bounds.m, "m values")->delimiter(',');
  bounds_cmd->add_option("--p", bounds.p, "p values")->delimiter(',');
  bounds_cmd->add_option("--q", bounds.q, "q values")->delimiter(',');
  bounds_cmd->add_option("--r", bounds.r, "rank bounds")->delimiter(',');
  bounds_cmd->add_option("--h", bounds.h, "block sizes")->delimiter(',');
  add_common(bounds_cmd, common, "CSV path (default: stdout)");

  MdOptions md;
  auto* md_cmd = app.add_subcommand("mdcheck", "Sampled check of the mirror-descent guarantee");
  md_cmd->add_option("--setup", md.setup, "spectraplex or schatten");
  md_cmd->add_option("--p-star", md.p_star, "Schatten mirror-map exponent in (1, 2]");
  md_cmd->add_option("--m", md.m, "Matrix dimension");
  md_cmd->add_option("--n", md.n, "Number of matrices (default 2m)");
  md_cmd->add_option("--h", md.h, "Block size of sampled U");
  md_cmd->add_option("--samples", md.samples, "Sampled U");
  md_cmd->add_option("--starts", md.starts, "identity or net");
  md_cmd->add_option("--net-cap", md.net_cap, "Largest entropy net used as starts");
  md_cmd->add_option("--instance", md.instance, "Instance file (default: random)");
  add_common(md_cmd, common, "CSV path (default: stdout)");

  NetOptions net;
  auto* net_cmd = app.add_subcommand("netcheck", "Sampled relative-entropy net error");
  net_cmd->add_option("--m", net.m, "Matrix dimension");
  net_cmd->add_option("--h", net.h, "Block size");
  net_cmd->add_option("--n", net.n, "n");
  net_cmd->add_option("--trials", net.trials, "Sampled X");
  net_cmd->add_option("--c-limit", net.c_limit, "Largest accepted c_net");
  net_cmd->add_option("--lemma-trials", net.lemma_trials, "Random pairs for the entropy-from-operator-norm check");
  net_cmd->add_option("--net-out", net.net_out, "Write the net as JSON");
  net_cmd->add_option("--materialize-cap", net.materialize_cap, "Include all points in --net-out up to this size");
  add_common(net_cmd, common, "CSV path (default: stdout)");

  MeasureCmd measure;
  auto* measure_cmd = app.add_subcommand("measure", "Monte-Carlo Gaussian measure of a discrepancy body");
  add_family(measure_cmd, measure.family);
  measure_cmd->add_option("--instance", measure.instance, "Instance file (overrides the family)");
  measure_cmd->add_option("--t", measure.t, "Thresholds")->delimiter(',');
  measure_cmd->add_option("--t-rule", measure.t_rule, "spencer, sqrtn:c, const:t, inf, bound:name");
  measure_cmd->add_option("--samples", measure.samples, "Gaussian draws");
  measure_cmd->add_flag("--no-antithetic", measure.no_antithetic, "Skip the -g evaluation");
  measure_cmd->add_option("--block-size", measure.block_size, "Draws per seeded block");
  add_common(measure_cmd, common, "CSV path (default: stdout)");

  SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Grid of colorings or measure estimates");
  sweep_cmd->add_option("--kind", sweep.kind, "coloring or measure");
  sweep_cmd->add_option("--family", sweep.family.family, "Instance family")->check(CLI::IsMember(kFamilies));
  sweep_cmd->add_option("--n", sweep.ns, "n values")->delimiter(',');
  sweep_cmd->add_option("--m", sweep.ms, "m values (default m = n)")->delimiter(',');
  sweep_cmd->add_option("--r", sweep.family.r, "Rank bound (random family)");
  sweep_cmd->add_option("--h", sweep.family.h, "Block size (random family)");
  sweep_cmd->add_option("--p", sweep.family.p, "Source exponent");
  sweep_cmd->add_option("--q", sweep.family.q, "Target exponent");
  sweep_cmd->add_option("--seeds", sweep.seeds, "Seeds per grid point");
  sweep_cmd->add_option("--bound", sweep.bound, "Bound name (default: auto)");
  sweep_cmd->add_option("--c-limit", sweep.c_limit, "Ratio above which the exit code is 2");
  sweep_cmd->add_option("--t-rule", sweep.t_rule, "Measure threshold rule");
  sweep_cmd->add_option("--samples", sweep.samples, "Gaussian draws per point");
  sweep_cmd->add_option("--alpha", sweep.alpha, "Exponent constant tested by measure sweeps");
  add_params(sweep_cmd, sweep.params);
  add_common(sweep_cmd, common, "CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitHard;
  }

  CLI::App* sub = app.get_subcommands().front();
  int code = kExitHard;
  try {
    if (!common.config.empty()) apply_config(*sub, load_config(common.config));
    if (common.workers > 0) set_workers(common.workers);
    const std::string name = sub->get_name();
    if (name == "gen") code = cmd_gen(gen, common, out);
    if (name == "solve") code = cmd_solve(solve, common, out, err);
    if (name == "bounds") code = cmd_bounds(bounds, common, out);
    if (name == "mdcheck") code = cmd_mdcheck(md, common, out, err);
    if (name == "netcheck") code = cmd_netcheck(net, common, out, err);
    if (name == "measure") code = cmd_measure(measure, common, out);
    if (name == "sweep") code = cmd_sweep(sweep, common, out, err);
  } catch (const std::exception& e) {
    err << "mdisc " << sub->get_name() << ": " << e.what() << '\n';
    code = kExitHard;
  }
  set_workers(std::nullopt);
  return code;
}

}  // namespace mdisc::cli
