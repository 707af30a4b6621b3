#pragma once

#include "mdisc/instance.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>

namespace mdisc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitHard = 1;
inline constexpr int kExitOverBound = 2;

/// Generator arguments shared by gen, measure, mdcheck and sweep.
struct FamilySpec {
  std::string family = "random";  // random | diagonal-spencer | unit-diagonal | hadamard | rank1-lower
  std::size_t n = 0;
  Index m = 0;
  Index r = 0;  // 0: full rank
  Index h = 0;  // 0: a single block
  std::string p = "inf";
  std::string q = "inf";
  bool raw = false;  // hadamard: keep the non-symmetric D_i P_j
  std::uint64_t seed = 0;
};

Instance make_instance(const FamilySpec& spec);

/// Bound used as the per-round target and for the reported ratio when the
/// user does not name one: spencer for diagonal p = q = inf families, lowrank
/// or block when that structure is recorded, schatten for finite exponents,
/// matrix_spencer_conj otherwise.
std::string default_bound(const Instance& inst);

/// Entry point of the mdisc executable. Returns the process exit code:
/// 0 all checks passed, 2 valid coloring above the bound, 1 hard failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mdisc::cli
