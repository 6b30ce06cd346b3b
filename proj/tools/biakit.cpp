// Command-line front end: construct schemes, verify them, run link
// simulations, and emit the analytic DoF curve. Same flags and seeds give
// byte-identical outputs; no timestamps are written anywhere.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bia/channel.hpp"
#include "bia/dof.hpp"
#include "bia/scheme.hpp"
#include "bia/scheme_io.hpp"
#include "bia/simulator.hpp"
#include "bia/verifier.hpp"
#include "bia/version.hpp"

namespace {

// 0 success, 1 verification failure, 2 usage error, 3 construction infeasible
constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;

void write_text(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(out_path);
  if (!os) throw std::invalid_argument("cannot open " + out_path + " for writing");
  os << text;
}

std::string meta_line(const bia::Scheme& s, std::uint64_t seed, const std::string& extra) {
  std::ostringstream os;
  os << bia::kToolName << " v" << bia::kToolVersion << " K=" << s.K << " r=" << s.r
     << " n=" << s.n << " M=" << s.modes << " seed=" << seed;
  if (!extra.empty()) os << " " << extra;
  return os.str();
}

void warn_if_suboptimal(int K, int r) {
  const int best = bia::optimal_r(K);
  if (r != best) {
    std::cerr << "warning: r=" << r << " is suboptimal for K=" << K << " (optimal r=" << best
              << ", sum DoF " << bia::sum_dof_formula(K, best).str() << ")\n";
  }
}

struct ConstructArgs {
  int K = 0;
  int r = 0;  // 0 means optimal_r(K)
  bool pad_b = false;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
};

int run_construct(const ConstructArgs& a) {
  if (a.format != "json")
    throw std::invalid_argument("construct emits the scheme JSON; --format " + a.format +
                                " is not supported");
  const int r = a.r == 0 ? bia::optimal_r(a.K) : a.r;
  if (a.r != 0) warn_if_suboptimal(a.K, a.r);
  const bia::Scheme s = bia::build_scheme(a.K, r, a.pad_b);
  write_text(a.out, bia::scheme_to_json(s, a.seed).dump(2) + "\n");
  return kExitOk;
}

struct VerifyArgs {
  std::string scheme_path;
  int seeds = 3;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
};

int run_verify(const VerifyArgs& a) {
  const bia::Scheme s = bia::load_scheme(a.scheme_path);
  const bia::VerificationReport rep = bia::verify_scheme(s, a.seeds, a.seed);
  if (a.format == "csv") {
    write_text(a.out, bia::report_to_csv(rep));
  } else {
    write_text(a.out, bia::report_to_json(rep).dump(2) + "\n");
  }
  return rep.all_pass ? kExitOk : kExitVerifyFail;
}

struct SimulateArgs {
  std::string scheme_path;
  int K = 0;
  int r = 0;
  bool pad_b = false;
  std::vector<double> snr_db;
  int trials = 500;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
};

// CSV and JSON companion paths derived from one --out base.
std::pair<std::string, std::string> simulate_paths(const std::string& out) {
  const auto ends_with = [](const std::string& s, const std::string& suf) {
    return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
  };
  if (ends_with(out, ".csv")) {
    return {out, out.substr(0, out.size() - 4) + ".json"};
  }
  if (ends_with(out, ".json")) {
    return {out.substr(0, out.size() - 5) + ".csv", out};
  }
  return {out + ".csv", out + ".json"};
}

int run_simulate(const SimulateArgs& a) {
  bia::Scheme s;
  if (!a.scheme_path.empty()) {
    s = bia::load_scheme(a.scheme_path);
  } else if (a.K > 0) {
    const int r = a.r == 0 ? bia::optimal_r(a.K) : a.r;
    if (a.r != 0) warn_if_suboptimal(a.K, a.r);
    s = bia::build_scheme(a.K, r, a.pad_b);
  } else {
    throw std::invalid_argument("simulate needs --scheme <file> or --K");
  }

  std::vector<double> snr = a.snr_db;
  if (snr.empty()) snr = {30, 35, 40, 45, 50, 55, 60};

  const bia::VerificationReport rep =
      bia::verify_scheme(s, 3, bia::derive_seed(a.seed, 0x56455249ULL));
  if (!rep.all_pass) {
    std::cerr << "error: scheme failed verification; simulation refused\n";
    return kExitVerifyFail;
  }

  const bia::RateCurve curve = bia::estimate_rates(s, snr, a.trials, a.seed);

  std::ostringstream extra;
  extra << "simulate trials=" << a.trials;
  const std::string csv = bia::rate_curve_csv(curve, s, meta_line(s, a.seed, extra.str()));

  bia::Json summary;
  summary["tool"] = bia::tool_json();
  summary["params"] = bia::params_json(s, a.seed);
  summary["trials"] = curve.trials;
  summary["snr_db"] = curve.snr_db;
  summary["per_user_rate"] = curve.per_user_rate;
  summary["sum_rate"] = curve.sum_rate;
  summary["dof_slope"] = curve.dof_slope;
  summary["dof_slope_ci"] = curve.dof_slope_ci;
  summary["discard_rate"] = curve.discard_rate;
  const std::string summary_text = summary.dump(2) + "\n";

  if (a.out.empty()) {
    std::cout << (a.format == "csv" ? csv : summary_text);
    return kExitOk;
  }
  const auto [csv_path, json_path] = simulate_paths(a.out);
  write_text(csv_path, csv);
  write_text(json_path, summary_text);
  return kExitOk;
}

struct BoundsArgs {
  int K_min = 0;
  int K_max = 0;
  std::string out;
  std::string format = "csv";
};

int run_bounds(const BoundsArgs& a) {
  const auto rows = bia::outer_bound_curve(a.K_min, a.K_max);
  if (a.format == "json") {
    bia::Json j;
    j["tool"] = bia::tool_json();
    bia::Json p;
    p["K_min"] = a.K_min;
    p["K_max"] = a.K_max;
    j["params"] = std::move(p);
    bia::Json list = bia::Json::array();
    for (const auto& row : rows) {
      bia::Json e;
      e["K"] = row.K;
      e["r_star"] = row.r_star;
      e["dof_num"] = row.dof_num;
      e["dof_den"] = row.dof_den;
      e["dof_decimal"] = row.dof_decimal;
      e["sqrtK_over_2"] = row.sqrtK_over_2;
      list.push_back(std::move(e));
    }
    j["rows"] = std::move(list);
    write_text(a.out, j.dump(2) + "\n");
  } else {
    std::ostringstream os;
    std::ostringstream meta;
    meta << bia::kToolName << " v" << bia::kToolVersion << " bounds K_min=" << a.K_min
         << " K_max=" << a.K_max;
    bia::write_bounds_csv(os, rows, meta.str());
    write_text(a.out, os.str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"blind interference alignment: scheme construction, verification, and simulation"};
  app.require_subcommand(1);
  std::ostringstream version;
  version << bia::kToolName << " " << bia::kToolVersion;
  app.set_version_flag("--version", version.str());

  ConstructArgs ca;
  CLI::App* construct = app.add_subcommand("construct", "build a scheme and write its JSON");
  construct->add_option("--K", ca.K, "number of users")->required()->check(CLI::PositiveNumber);
  construct->add_option("--r", ca.r, "antenna modes (default: optimal for K)")
      ->check(CLI::PositiveNumber);
  construct->add_flag("--pad-b", ca.pad_b, "extend B to all C(K,K-r) rows");
  construct->add_option("--seed", ca.seed, "seed recorded in the output");
  construct->add_option("--out", ca.out, "output path (default: stdout)");
  construct->add_option("--format", ca.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));

  VerifyArgs va;
  CLI::App* verify = app.add_subcommand("verify", "run the full check set on a scheme file");
  verify->add_option("--scheme", va.scheme_path, "scheme JSON file")->required();
  verify->add_option("--seeds", va.seeds, "number of independent channel seeds")
      ->check(CLI::PositiveNumber);
  verify->add_option("--seed", va.seed, "master seed for channel values");
  verify->add_option("--out", va.out, "report path (default: stdout)");
  verify->add_option("--format", va.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}));

  SimulateArgs sa;
  CLI::App* simulate = app.add_subcommand("simulate", "Monte-Carlo rate curve for a scheme");
  simulate->add_option("--scheme", sa.scheme_path, "scheme JSON file");
  simulate->add_option("--K", sa.K, "construct on the fly for K users")->check(CLI::PositiveNumber);
  simulate->add_option("--r", sa.r, "antenna modes (default: optimal for K)")
      ->check(CLI::PositiveNumber);
  simulate->add_flag("--pad-b", sa.pad_b, "extend B to all C(K,K-r) rows");
  simulate->add_option("--snr-db", sa.snr_db, "comma-separated SNR points in dB")
      ->delimiter(',');
  simulate->add_option("--trials", sa.trials, "Monte-Carlo trials per SNR point")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sa.seed, "master seed for channels");
  simulate->add_option("--out", sa.out, "output base; writes <base>.csv and <base>.json");
  simulate->add_option("--format", sa.format, "stdout format when --out is absent")
      ->check(CLI::IsMember({"json", "csv"}));

  BoundsArgs ba;
  CLI::App* bounds = app.add_subcommand("bounds", "analytic sum-DoF curve over a range of K");
  bounds->add_option("--K-min", ba.K_min, "first K")->required()->check(CLI::PositiveNumber);
  bounds->add_option("--K-max", ba.K_max, "last K")->required()->check(CLI::PositiveNumber);
  bounds->add_option("--out", ba.out, "output path (default: stdout)");
  bounds->add_option("--format", ba.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (construct->parsed()) return run_construct(ca);
    if (verify->parsed()) return run_verify(va);
    if (simulate->parsed()) return run_simulate(sa);
    if (bounds->parsed()) return run_bounds(ba);
    std::cerr << "error: no subcommand\n";
    return kExitUsage;
  } catch (const bia::SchemeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const bia::SchemeFileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const bia::VerificationRefusal& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerifyFail;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
