#ifndef FINSLER_RUN_HPP
#define FINSLER_RUN_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "finsler/linalg.hpp"
#include "finsler/verify.hpp"

namespace finsler {
namespace run {

inline constexpr const char* kToolVersion = "0.1.0";

/// Exit codes shared by every subcommand.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitUsage = 3;

struct Options {
  std::string spec_path;  // optional user spec file; builtins resolve either way
  std::uint64_t seed = 42;
  double tol = 1e-8;
  int samples = 200;
  SampleBox box;
  std::string json_path;  // write the machine-readable report here when set
  verify::RaisingMetric interp = verify::RaisingMetric::root;
  bool irreducible_asserted = false;
};

int cmd_builtin_list(std::ostream& out);

int cmd_eval(const Options& opts, const std::string& metric, const Vec& x, const Vec& y,
             std::ostream& out);

/// which is one of "dual-flat" (one metric), "projective", "conformal" (two).
int cmd_check(const Options& opts, const std::string& which,
              const std::vector<std::string>& metrics, std::ostream& out);

int cmd_geodesic(const Options& opts, const std::string& metric, const Vec& x0, const Vec& y0,
                 double t_end, double step, const std::string& csv_path, std::ostream& out);

/// Shortest round-trip decimal form of a double (CSV/console formatting).
std::string fmt_double(double v);

}  // namespace run
}  // namespace finsler

#endif
