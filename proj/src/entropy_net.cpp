#include "mdisc/entropy_net.hpp"

#include "mdisc/errors.hpp"
#include "mdisc/parallel.hpp"
#include "mdisc/sampling.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>

namespace mdisc {

using boost::multiprecision::cpp_int;

namespace {

constexpr const char* kNetFormat = "mdisc-entropy-net";

cpp_int choose(unsigned n, unsigned k) {
  if (k > n) return 0;
  cpp_int out = 1;
  for (unsigned i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

Index smallest_factor(Index v) {
  for (Index d = 2; d * d <= v; ++d) {
    if (v % d == 0) return d;
  }
  return v;
}

nlohmann::json matrix_json(const Eigen::MatrixXd& a) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index r = 0; r < a.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Index c = 0; c < a.cols(); ++c) row.push_back(a(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& rows, Index dim) {
  if (!rows.is_array() || static_cast<Index>(rows.size()) != dim) throw ParseError("net matrix has wrong shape");
  Eigen::MatrixXd a(dim, dim);
  for (Index r = 0; r < dim; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != dim) throw ParseError("net matrix has wrong shape");
    for (Index c = 0; c < dim; ++c) a(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return a;
}

// All compositions of total into parts non-negative summands, lexicographic.
void compositions_of(int total, Index parts, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<Index>(cur.size()) == parts - 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int v = 0; v <= total; ++v) {
    cur.push_back(v);
    compositions_of(total - v, parts, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::size_t EntropyNet::stored() const {
  std::size_t s = 0;
  for (const auto& c : candidates) s += c.size();
  return s;
}

void EntropyNet::prepare() {
  if (static_cast<int>(candidates.size()) != grid + 1) throw ValidationError("net needs candidates for z = 0..N");
  compositions = choose(static_cast<unsigned>(grid + blocks - 1), static_cast<unsigned>(blocks - 1));
  // ways[s]: number of block tuples over the blocks so far with traces summing to s/N.
  std::vector<cpp_int> ways(static_cast<std::size_t>(grid) + 1, 0);
  ways[0] = 1;
  for (Index b = 0; b < blocks; ++b) {
    std::vector<cpp_int> next(ways.size(), 0);
    for (int s = 0; s <= grid; ++s) {
      if (ways[static_cast<std::size_t>(s)] == 0) continue;
      for (int z = 0; s + z <= grid; ++z) {
        next[static_cast<std::size_t>(s + z)] += ways[static_cast<std::size_t>(s)] * candidates[static_cast<std::size_t>(z)].size();
      }
    }
    ways = std::move(next);
  }
  size = ways[static_cast<std::size_t>(grid)];

  candidate_logs.assign(candidates.size(), {});
  const double floor = 0.5 / static_cast<double>(m);
  for (std::size_t z = 0; z < candidates.size(); ++z) {
    for (const auto& c : candidates[z]) {
      candidate_logs[z].push_back(mat_log(0.5 * c + floor * SymMatrix::identity(h)).matrix());
    }
  }
}

EntropyNet build_entropy_net(Index m, Index h, std::size_t n, const EntropyNetOptions& options) {
  if (m < 1 || h < 1 || n < 1) throw ValidationError("entropy net needs m, h, n >= 1");
  if (m % h != 0) throw ValidationError("block size h=" + std::to_string(h) + " must divide m=" + std::to_string(m));
  EntropyNet net;
  net.m = m;
  net.h_requested = h;
  net.n = n;
  // Merge blocks until h m >= n.
  while (static_cast<double>(h) * static_cast<double>(m) < static_cast<double>(n) && h < m) h *= smallest_factor(m / h);
  if (h > kOpNetMaxBlock && h > 1) {
    throw CapacityError("entropy nets support block size h <= " + std::to_string(kOpNetMaxBlock) +
                        " (after merging), got h=" + std::to_string(h));
  }
  net.h = h;
  net.blocks = m / h;
  const double l = static_cast<double>(net.blocks);
  const double nn = static_cast<double>(n);
  net.eps = std::max(static_cast<double>(h), l > nn ? std::log(l / nn) : 0.0) / nn;
  net.grid = static_cast<int>(std::ceil(2.0 / net.eps - 1e-9));
  net.declared_error = std::max(1.0, std::log(2.0 * static_cast<double>(h) * static_cast<double>(m) / nn));

  net.candidates.resize(static_cast<std::size_t>(net.grid) + 1);
  net.candidates[0] = {SymMatrix::zero(h)};
  std::size_t stored = 1;
  for (int z = 1; z <= net.grid; ++z) {
    // Radius h / n_b with n_b = z h, scaled by z / N: distance 1/N <= eps/2.
    const double scale = static_cast<double>(z) / net.grid;
    for (auto& p : opnorm_net_spectraplex(h, 1.0 / z, options.op)) net.candidates[static_cast<std::size_t>(z)].push_back(scale * p);
    stored += net.candidates[static_cast<std::size_t>(z)].size();
    if (stored > options.size_cap) {
      throw CapacityError("entropy net block candidates exceed the cap of " + std::to_string(options.size_cap));
    }
  }
  net.prepare();
  return net;
}

SymMatrix EntropyNet::assemble(const std::vector<int>& z, const std::vector<std::size_t>& choice) const {
  if (static_cast<Index>(z.size()) != blocks || choice.size() != z.size()) throw DimensionError("wrong block count");
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(m, m);
  for (Index b = 0; b < blocks; ++b) {
    const auto& c = candidates.at(static_cast<std::size_t>(z[static_cast<std::size_t>(b)]))
                        .at(choice[static_cast<std::size_t>(b)]);
    y.block(b * h, b * h, h, h) = c.matrix();
  }
  return mix_with_identity(SymMatrix::trusted(y), m);
}

EntropyNet::Nearest EntropyNet::nearest(const SymMatrix& x) const {
  if (x.dim() != m) throw DimensionError("net point dimension mismatch");
  const auto nb = static_cast<std::size_t>(blocks);
  const auto ng = static_cast<std::size_t>(grid) + 1;
  // gain[b][z] = max_k tr(X_b log Y_{z,k}), pick[b][z] the argmax.
  std::vector<std::vector<double>> gain(nb, std::vector<double>(ng));
  std::vector<std::vector<std::size_t>> pick(nb, std::vector<std::size_t>(ng, 0));
  for (std::size_t b = 0; b < nb; ++b) {
    const Eigen::MatrixXd xb = x.matrix().block(static_cast<Index>(b) * h, static_cast<Index>(b) * h, h, h);
    for (std::size_t z = 0; z < ng; ++z) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < candidate_logs[z].size(); ++k) {
        const double v = (xb.array() * candidate_logs[z][k].array()).sum();
        if (v > best) {
          best = v;
          pick[b][z] = k;
        }
      }
      gain[b][z] = best;
    }
  }
  // total[b][s]: best sum over blocks 0..b with allocations summing to s.
  const double ninf = -std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> total(nb, std::vector<double>(ng, ninf));
  std::vector<std::vector<int>> arg(nb, std::vector<int>(ng, 0));
  for (std::size_t s = 0; s < ng; ++s) {
    total[0][s] = gain[0][s];
    arg[0][s] = static_cast<int>(s);
  }
  for (std::size_t b = 1; b < nb; ++b) {
    for (std::size_t s = 0; s < ng; ++s) {
      for (std::size_t z = 0; z <= s; ++z) {
        const double v = total[b - 1][s - z] + gain[b][z];
        if (v > total[b][s]) {
          total[b][s] = v;
          arg[b][s] = static_cast<int>(z);
        }
      }
    }
  }
  Nearest out;
  out.z.assign(nb, 0);
  out.choice.assign(nb, 0);
  std::size_t s = ng - 1;
  for (std::size_t b = nb; b-- > 0;) {
    const int z = arg[b][s];
    out.z[b] = z;
    out.choice[b] = pick[b][static_cast<std::size_t>(z)];
    s -= static_cast<std::size_t>(z);
  }
  out.point = assemble(out.z, out.choice);
  out.entropy = neg_entropy(sym_eig(x)) - total[nb - 1][ng - 1];
  return out;
}

std::vector<SymMatrix> EntropyNet::materialize(std::size_t cap) const {
  if (size > cap) {
    throw CapacityError("entropy net has " + size.str() + " points (|Z| = " + compositions.str() +
                        "), above the materialization cap of " + std::to_string(cap));
  }
  std::vector<std::vector<int>> zs;
  std::vector<int> cur;
  compositions_of(grid, blocks, cur, zs);
  std::vector<std::size_t> offset(zs.size() + 1, 0);
  for (std::size_t i = 0; i < zs.size(); ++i) {
    std::size_t count = 1;
    for (int z : zs[i]) count *= candidates[static_cast<std::size_t>(z)].size();
    offset[i + 1] = offset[i] + count;
  }
  std::vector<SymMatrix> out(offset.back());
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(zs.size()); ++i) {
    const auto& z = zs[static_cast<std::size_t>(i)];
    std::vector<std::size_t> choice(z.size(), 0);
    for (std::size_t k = offset[static_cast<std::size_t>(i)]; k < offset[static_cast<std::size_t>(i) + 1]; ++k) {
      out[k] = assemble(z, choice);
      // Mixed-radix increment, last block fastest.
      for (std::size_t b = choice.size(); b-- > 0;) {
        if (++choice[b] < candidates[static_cast<std::size_t>(z[b])].size()) break;
        choice[b] = 0;
      }
    }
  }
  return out;
}

nlohmann::json EntropyNet::to_json(std::size_t materialize_cap) const {
  nlohmann::json j;
  j["format"] = kNetFormat;
  j["version"] = 1;
  j["m"] = m;
  j["h"] = h;
  j["h_requested"] = h_requested;
  j["n"] = n;
  j["blocks"] = blocks;
  j["N"] = grid;
  j["eps"] = eps;
  j["declared_error"] = declared_error;
  j["compositions"] = compositions.str();
  j["size"] = size.str();
  nlohmann::json cands = nlohmann::json::array();
  for (const auto& list : candidates) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : list) arr.push_back(matrix_json(c.matrix()));
    cands.push_back(std::move(arr));
  }
  j["block_candidates"] = std::move(cands);
  if (materialize_cap > 0 && size <= materialize_cap) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : materialize(materialize_cap)) pts.push_back(matrix_json(p.matrix()));
    j["points"] = std::move(pts);
  }
  return j;
}

EntropyNet EntropyNet::from_json(const nlohmann::json& j) {
  EntropyNet net;
  try {
    if (j.value("format", std::string()) != kNetFormat) throw ParseError("not an entropy net file");
    net.m = j.at("m").get<Index>();
    net.h = j.at("h").get<Index>();
    net.h_requested = j.at("h_requested").get<Index>();
    net.n = j.at("n").get<std::size_t>();
    net.blocks = j.at("blocks").get<Index>();
    net.grid = j.at("N").get<int>();
    net.eps = j.at("eps").get<double>();
    net.declared_error = j.at("declared_error").get<double>();
    if (net.m < 1 || net.h < 1 || net.blocks * net.h != net.m || net.grid < 1) throw ParseError("inconsistent net header");
    for (const auto& list : j.at("block_candidates")) {
      std::vector<SymMatrix> cands;
      for (const auto& rows : list) cands.emplace_back(matrix_from_json(rows, net.h));
      net.candidates.push_back(std::move(cands));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed entropy net: ") + e.what());
  }
  net.prepare();
  return net;
}

void save_entropy_net(const EntropyNet& net, const std::filesystem::path& path, std::size_t materialize_cap) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << net.to_json(materialize_cap).dump() << '\n';
}

EntropyNet load_entropy_net(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open net file '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("cannot parse '" + path.string() + "': " + e.what());
  }
  return EntropyNet::from_json(j);
}

namespace {

NetErrorReport finish_report(std::vector<double> entropies, double declared, double c_limit) {
  NetErrorReport rep;
  rep.entropies = std::move(entropies);
  rep.declared = declared;
  rep.c_limit = c_limit;
  for (double e : rep.entropies) rep.max_entropy = std::max(rep.max_entropy, e);
  rep.c_net = rep.max_entropy / declared;
  rep.pass = rep.c_net <= c_limit;
  return rep;
}

}  // namespace

NetErrorReport net_error(const EntropyNet& net, const std::vector<SymMatrix>& xs, double c_limit) {
  std::vector<double> ent(xs.size());
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(xs.size()); ++i) {
    ent[static_cast<std::size_t>(i)] = net.nearest(xs[static_cast<std::size_t>(i)]).entropy;
  }
  return finish_report(std::move(ent), net.declared_error, c_limit);
}

NetErrorReport net_error_sampled(const EntropyNet& net, std::size_t trials, std::uint64_t seed, double c_limit) {
  std::vector<SymMatrix> xs;
  xs.reserve(trials);
  for (std::size_t i = 0; i < trials; ++i) {
    Rng rng(derive_seed(seed, i));
    xs.push_back(random_block_density(rng, net.m, net.h_requested));
  }
  return net_error(net, xs, c_limit);
}

namespace serial {

NetErrorReport net_error(const EntropyNet& net, const std::vector<SymMatrix>& xs, double c_limit, std::size_t cap) {
  const std::vector<SymMatrix> points = net.materialize(cap);
  std::vector<double> ent;
  for (const auto& x : xs) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : points) best = std::min(best, quantum_rel_entropy(x, p));
    ent.push_back(best);
  }
  return finish_report(std::move(ent), net.declared_error, c_limit);
}

}  // namespace serial

bool entropy_from_op_check(const SymMatrix& x, const SymMatrix& y, double eps) {
  const Index m = x.dim();
  if (y.dim() != m) throw DimensionError("X and Y differ in dimension");
  if (!in_spectraplex(x) || !in_spectraplex(y)) throw ValidationError("X and Y must lie in the spectraplex");
  if (eps < (1.0 - 1e-12) / static_cast<double>(m)) throw ValidationError("the inequality needs eps >= 1/m");
  const double dist = schatten_norm(x - y, Exponent::infinity());
  if (dist > eps * (1 + 1e-12) + 1e-15) {
    throw ValidationError("||X - Y||_op = " + std::to_string(dist) + " exceeds eps = " + std::to_string(eps));
  }
  return quantum_rel_entropy(x, mix_with_identity(y, m)) <= std::log(2.0 * static_cast<double>(m) * eps) + 1e-8;
}

OpEntropyReport op_entropy_sampled(Index m, std::size_t trials, std::uint64_t seed) {
  if (m < 1) throw ValidationError("the inequality check needs m >= 1");
  std::vector<double> slack(trials);
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(trials); ++k) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
    const double inv_m = 1.0 / static_cast<double>(m);
    const double eps = inv_m + (1.0 - inv_m) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const SymMatrix y = random_density(rng, m, k % 3 == 0 ? 1 : 0);
    SymMatrix x = random_density(rng, m, k % 2 == 0 ? 1 : 0);
    const double d = schatten_norm(x - y, Exponent::infinity());
    if (d > eps) x = y + (eps / d) * (x - y);
    slack[static_cast<std::size_t>(k)] =
        quantum_rel_entropy(x, mix_with_identity(y, m)) - std::log(2.0 * static_cast<double>(m) * eps);
  }
  OpEntropyReport rep;
  rep.trials = trials;
  for (double s : slack) {
    rep.failures += s > 1e-8 ? 1 : 0;
    rep.worst_slack = std::max(rep.worst_slack, s);
  }
  return rep;
}

}  // namespace mdisc
