#include "mdisc/errors.hpp"
#include "mdisc/instance.hpp"

#include <fstream>

namespace mdisc {

namespace {

constexpr const char* kFormatTag = "mdisc-instance";
constexpr int kFormatVersion = 1;

nlohmann::json exponent_json(Exponent p) {
  if (p.is_infinite()) return "inf";
  return p.value();
}

Exponent exponent_from_json(const nlohmann::json& j, const char* key) {
  if (j.is_string()) return Exponent::parse(j.get<std::string>());
  if (j.is_number()) return Exponent(j.get<double>());
  throw ParseError(std::string("field '") + key + "' must be a number or \"inf\"");
}

template <class T>
std::optional<T> optional_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

nlohmann::json to_json(const Instance& inst) {
  nlohmann::json j;
  j["format"] = kFormatTag;
  j["version"] = kFormatVersion;
  j["n"] = inst.n();
  j["m"] = inst.m;
  j["p"] = exponent_json(inst.p);
  j["q"] = exponent_json(inst.q);
  j["r"] = inst.rank_bound ? nlohmann::json(*inst.rank_bound) : nlohmann::json(nullptr);
  j["h"] = inst.block_size ? nlohmann::json(*inst.block_size) : nlohmann::json(nullptr);
  j["label"] = inst.label;
  j["seed"] = inst.seed ? nlohmann::json(*inst.seed) : nlohmann::json(nullptr);
  nlohmann::json mats = nlohmann::json::array();
  for (const auto& a : inst.matrices) {
    nlohmann::json rows = nlohmann::json::array();
    for (Index r = 0; r < a.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (Index c = 0; c < a.cols(); ++c) row.push_back(a(r, c));
      rows.push_back(std::move(row));
    }
    mats.push_back(std::move(rows));
  }
  j["matrices"] = std::move(mats);
  return j;
}

Instance instance_from_json(const nlohmann::json& j) {
  Instance inst;
  try {
    if (j.value("format", std::string()) != kFormatTag) {
      throw ParseError("not an instance file (missing format tag '" + std::string(kFormatTag) + "')");
    }
    if (j.at("version").get<int>() != kFormatVersion) throw ParseError("unsupported instance version");
    const auto n = j.at("n").get<std::size_t>();
    inst.m = j.at("m").get<Index>();
    inst.p = exponent_from_json(j.at("p"), "p");
    inst.q = exponent_from_json(j.at("q"), "q");
    inst.rank_bound = optional_field<Index>(j, "r");
    inst.block_size = optional_field<Index>(j, "h");
    inst.label = j.value("label", std::string());
    inst.seed = optional_field<std::uint64_t>(j, "seed");
    const auto& mats = j.at("matrices");
    if (!mats.is_array() || mats.size() != n) {
      throw ParseError("expected " + std::to_string(n) + " matrices, found " +
                       std::to_string(mats.is_array() ? mats.size() : 0));
    }
    for (std::size_t i = 0; i < n; ++i) {
      const auto& rows = mats[i];
      if (!rows.is_array() || static_cast<Index>(rows.size()) != inst.m) {
        throw ParseError("matrix " + std::to_string(i + 1) + " does not have m rows");
      }
      Eigen::MatrixXd a(inst.m, inst.m);
      for (Index r = 0; r < inst.m; ++r) {
        const auto& row = rows[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Index>(row.size()) != inst.m) {
          throw ParseError("matrix " + std::to_string(i + 1) + " row " + std::to_string(r + 1) +
                           " does not have m entries");
        }
        for (Index c = 0; c < inst.m; ++c) a(r, c) = row[static_cast<std::size_t>(c)].get<double>();
      }
      inst.matrices.push_back(std::move(a));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed instance: ") + e.what());
  }
  validate(inst);
  return inst;
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << to_json(inst).dump(1) << '\n';
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open instance file '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("cannot parse '" + path.string() + "': " + e.what());
  }
  return instance_from_json(j);
}

}  // namespace mdisc
