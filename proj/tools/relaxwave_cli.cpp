// relaxwave: command-line front end.
//
//   relaxwave check   SYSTEM.json
//   relaxwave reduce  SYSTEM.json
//   relaxwave curves  SYSTEM.json [--xi-min --xi-max --xi-count]
//   relaxwave solve   SYSTEM.json --times 1,10 [--profile exact|diffusion|diffusion_refined|expwave|all]
//   relaxwave rates   SYSTEM.json --pq inf,1 --pq 2,2 [--refined]
//   relaxwave kernels SYSTEM.json [--regime low|mid|high|all] [--r 1] [--refined]
//
// Data goes to files under --out (report.json plus CSV tables); diagnostics
// go to stderr. Exit status: 0 success, 1 condition failure, 2 I/O or
// numerical error.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "relaxwave/io.hpp"

namespace fs = std::filesystem;
using namespace relaxwave;

namespace {

struct Config {
  std::string system_path;
  int grid_n = 1 << 14;
  double grid_l = 2200.0;
  double sigma = 1.0;
  std::vector<std::string> amplitude;
  std::vector<std::string> pq;
  std::vector<double> times;
  bool refined = false;
  double tol = 0.15;
  std::string out = ".";
  std::string format = "both";
  // curves
  double xi_min = 1e-3, xi_max = 1e3;
  int xi_count = 400;
  // solve
  std::string profile = "all";
  // kernels
  std::string regime = "all";
  std::string r = "1";
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

class Output {
 public:
  Output(const Config& cfg, std::string command, const SystemDef& sys)
      : dir_(cfg.out), command_(std::move(command)), system_(sys.name()),
        json_(cfg.format == "json" || cfg.format == "both"), csv_(cfg.format == "csv" || cfg.format == "both") {
    report_["command"] = command_;
    report_["system"] = io::system_to_json(sys);
    report_["generated"] = timestamp();
  }

  io::json& report() { return report_; }

  void table(const std::string& name, io::CsvTable t) {
    if (!csv_) return;
    t.metadata = "relaxwave " + command_ + " system=" + system_ + " generated=" + timestamp();
    const auto path = dir_ / (name + ".csv");
    io::write_text(path, t.str());
    std::cerr << "wrote " << path.string() << "\n";
  }

  void finish() {
    if (!json_) return;
    const auto path = dir_ / "report.json";
    io::write_text(path, report_.dump(2) + "\n");
    std::cerr << "wrote " << path.string() << "\n";
  }

 private:
  fs::path dir_;
  std::string command_;
  std::string system_;
  bool json_, csv_;
  io::json report_;
};

profiles::GridSpec grid_of(const Config& cfg) { return profiles::GridSpec::make(cfg.grid_l, cfg.grid_n); }

profiles::InitialData datum_of(const Config& cfg, const SystemDef& sys) {
  CVector v = CVector::Zero(sys.n());
  if (cfg.amplitude.empty()) {
    v(0) = 1.0;
  } else {
    if (static_cast<Eigen::Index>(cfg.amplitude.size()) != sys.n())
      throw Error(Errc::ShapeError, "--amplitude needs one value per component");
    for (std::size_t k = 0; k < cfg.amplitude.size(); ++k) v(static_cast<Eigen::Index>(k)) = std::stod(cfg.amplitude[k]);
  }
  return profiles::InitialData::gaussian(v, cfg.sigma);
}

std::vector<std::pair<double, double>> pq_of(const Config& cfg) {
  std::vector<std::pair<double, double>> out;
  for (const auto& token : cfg.pq) {
    const auto parts = split(token, ',');
    if (parts.size() != 2) throw Error(Errc::ParseError, "--pq expects 'p,q', got '" + token + "'");
    out.emplace_back(rates::parse_exponent(parts[0]), rates::parse_exponent(parts[1]));
  }
  if (out.empty()) out = {{rates::kInf, 1.0}, {2.0, 1.0}, {2.0, 2.0}};
  return out;
}

void print_condition(const char* name, const structure::ConditionResult& r) {
  std::cerr << "  " << name << ": " << (r.holds ? "holds" : "fails");
  if (!r.reason.empty()) std::cerr << " (" << r.reason << ")";
  std::cerr << "  " << r.evidence << "\n";
}

int cmd_check(const Config& cfg, const SystemDef& sys) {
  Output out(cfg, "check", sys);
  const auto rep = structure::check_all(sys);
  out.report()["conditions"] = io::to_json(rep);
  out.table("conditions", io::conditions_csv(rep));
  out.finish();
  std::cerr << sys.name() << ": m = " << rep.m << ", theta_est = " << rep.theta_est << "\n";
  print_condition("A ", rep.condA);
  print_condition("B ", rep.condB);
  print_condition("C ", rep.condC);
  print_condition("C'", rep.condCprime);
  print_condition("D ", rep.condD);
  print_condition("S ", rep.condS);
  // C' and S only sharpen the rates; A-D are the standing hypotheses.
  const bool ok = rep.condA.holds && rep.condB.holds && rep.condC.holds && rep.condD.holds;
  return ok ? 0 : 1;
}

int cmd_reduce(const Config& cfg, const SystemDef& sys) {
  Output out(cfg, "reduce", sys);
  const auto red = reduction::reduce_low(sys);
  const auto hf = reduction::reduce_high(sys);
  const auto fast = reduction::fast_groups(sys);
  out.report()["low"] = io::to_json(red);
  out.report()["high"] = io::to_json(hf);
  out.report()["fast_groups"] = io::to_json(fast);

  io::CsvTable t;
  t.header = {"kind", "branch", "sub", "speed", "re_rate", "im_rate", "mult"};
  for (std::size_t j = 0; j < red.branches.size(); ++j)
    for (std::size_t l = 0; l < red.branches[j].sub.size(); ++l) {
      const auto& s = red.branches[j].sub[l];
      t.rows.push_back({"diffusion", std::to_string(j + 1), std::to_string(l + 1), io::format_number(red.branches[j].c),
                        io::format_number(s.d.real()), io::format_number(s.d.imag()), std::to_string(s.mult)});
    }
  for (std::size_t j = 0; j < hf.branches.size(); ++j)
    for (std::size_t l = 0; l < hf.branches[j].sub.size(); ++l) {
      const auto& s = hf.branches[j].sub[l];
      t.rows.push_back({"high", std::to_string(j + 1), std::to_string(l + 1), io::format_number(hf.branches[j].alpha),
                        io::format_number(s.beta.real()), io::format_number(s.beta.imag()), std::to_string(s.mult)});
    }
  for (const auto& g : fast)
    t.rows.push_back({"fast", std::to_string(g.k_index), "1", "0", io::format_number(g.e.real()),
                      io::format_number(g.e.imag()), std::to_string(g.mult)});
  out.table("branches", t);
  out.finish();
  std::cerr << sys.name() << ": " << red.h << " diffusion branch(es), " << hf.s << " high-frequency branch(es), "
            << fast.size() << " fast group(s)\n";
  return 0;
}

int cmd_curves(const Config& cfg, const SystemDef& sys) {
  Output out(cfg, "curves", sys);
  const auto xi = reduction::log_space(cfg.xi_min, cfg.xi_max, cfg.xi_count);
  const auto samples = reduction::sample_eigencurves(sys, xi);
  out.report()["eigencurves"] = io::to_json(samples);
  out.table("eigencurves", io::eigencurves_csv(samples));
  const auto red = reduction::reduce_low(sys);
  const auto hf = reduction::reduce_high(sys);
  const auto orders = reduction::expansion_order_check(sys, red, hf);
  out.report()["expansion_order"] = io::to_json(orders);
  out.table("expansion_order", io::expansion_csv(orders));
  out.finish();
  for (const auto& b : orders.low)
    std::cerr << "low branch " << b.branch + 1 << "." << b.sub + 1 << ": residual slope " << b.slope << "\n";
  for (const auto& b : orders.high)
    std::cerr << "high branch " << b.branch + 1 << "." << b.sub + 1 << ": residual slope " << b.slope << "\n";
  std::cerr << "symmetric gain: " << (orders.symmetric_gain ? "yes" : "no") << "\n";
  return 0;
}

int cmd_solve(const Config& cfg, const SystemDef& sys) {
  Output out(cfg, "solve", sys);
  const profiles::Solver solver(sys, grid_of(cfg), datum_of(cfg, sys));
  std::vector<profiles::Profile> which;
  const std::pair<const char*, profiles::Profile> names[] = {{"exact", profiles::Profile::Exact},
                                                             {"diffusion", profiles::Profile::Diffusion},
                                                             {"diffusion_refined", profiles::Profile::DiffusionRefined},
                                                             {"expwave", profiles::Profile::ExpWave}};
  for (const auto& [name, p] : names) {
    const bool in_all = p != profiles::Profile::DiffusionRefined || cfg.refined;
    if (cfg.profile == name || (cfg.profile == "all" && in_all)) which.push_back(p);
  }
  if (which.empty()) throw Error(Errc::InvalidArgument, "unknown profile '" + cfg.profile + "'");
  const auto times = cfg.times.empty() ? std::vector<double>{0.0, 1.0, 10.0} : cfg.times;
  io::json snaps = io::json::array();
  for (double t : times)
    for (auto p : which) {
      const auto sol = solver.solve(t, p);
      io::json norms;
      for (double q : {1.0, 2.0, rates::kInf}) norms[rates::format_exponent(q)] = rates::lp_norm(sol, q).value;
      snaps.push_back(io::json{{"profile", std::string(profiles::to_string(p))}, {"t", t}, {"norms", norms}});
      out.table("solution_" + std::string(profiles::to_string(p)) + "_t" + io::format_number(t), io::solution_csv(sol));
    }
  out.report()["grid"] = io::json{{"N", cfg.grid_n}, {"L", cfg.grid_l}};
  out.report()["snapshots"] = snaps;
  out.finish();
  return 0;
}

int cmd_rates(const Config& cfg, const SystemDef& sys) {
  Output out(cfg, "rates", sys);
  rates::RateOptions opts;
  if (!cfg.times.empty()) opts.times = cfg.times;
  opts.margin = cfg.tol;
  const auto rep = rates::verify_theorem(sys, grid_of(cfg), datum_of(cfg, sys), pq_of(cfg), cfg.refined, opts);
  out.report()["rates"] = io::to_json(rep);
  out.table("rates", io::rates_csv(rep));
  out.finish();
  for (const auto& e : rep.entries)
    std::cerr << e.kind << " (p,q)=(" << rates::format_exponent(e.p) << "," << rates::format_exponent(e.q)
              << "): fitted " << e.fitted_slope << ", bound " << e.theorem_slope << " -> "
              << (e.pass ? "pass" : "FAIL") << "\n";
  return rep.all_pass() ? 0 : 1;
}

int cmd_kernels(const Config& cfg, const SystemDef& sys) {
  Output out(cfg, "kernels", sys);
  const auto red = reduction::reduce_low(sys);
  const auto hf = reduction::reduce_high(sys);
  const double r = rates::parse_exponent(cfg.r);
  std::vector<rates::Regime> regimes;
  if (cfg.regime == "low" || cfg.regime == "all") regimes.push_back(rates::Regime::Low);
  if (cfg.regime == "mid" || cfg.regime == "all") regimes.push_back(rates::Regime::Mid);
  if (cfg.regime == "high" || cfg.regime == "all") regimes.push_back(rates::Regime::High);
  if (regimes.empty()) throw Error(Errc::InvalidArgument, "unknown regime '" + cfg.regime + "'");
  io::json scans = io::json::array();
  for (auto regime : regimes) {
    rates::KernelScanOptions opts;
    opts.refined = cfg.refined;
    if (!cfg.times.empty()) opts.times = cfg.times;
    const auto scan = rates::kernel_norm_scan(sys, red, hf, r, regime, opts);
    scans.push_back(io::to_json(scan));
    out.table("kernels_" + std::string(rates::to_string(regime)), io::kernel_scan_csv(scan));
    for (const auto& row : scan.rows)
      std::cerr << rates::to_string(regime) << " " << row.quantity << ": " << row.fit << " fit slope "
                << (row.fitted ? io::format_number(row.result.slope) : std::string("n/a")) << "\n";
  }
  out.report()["kernels"] = scans;
  out.finish();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral reductions and decay profiles of 1-D partially dissipative hyperbolic systems"};
  app.require_subcommand(1);
  Config cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("system", cfg.system_path, "System definition (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", cfg.out, "Output directory");
    sub->add_option("--format", cfg.format, "Output formats")->check(CLI::IsMember({"json", "csv", "both"}));
  };
  auto grid = [&](CLI::App* sub) {
    sub->add_option("--grid-n", cfg.grid_n, "Grid points (power of two)")->check(CLI::Range(16, 1 << 20));
    sub->add_option("--grid-l", cfg.grid_l, "Domain half-length")->check(CLI::PositiveNumber);
    sub->add_option("--sigma", cfg.sigma, "Gaussian datum width")->check(CLI::PositiveNumber);
    sub->add_option("--amplitude", cfg.amplitude, "Datum amplitude vector (comma list)")->delimiter(',');
  };

  auto* check = app.add_subcommand("check", "Check conditions A, B, C, C', D, S");
  common(check);
  auto* reduce = app.add_subcommand("reduce", "Low/high-frequency reductions and fast-decay groups");
  common(reduce);
  auto* curves = app.add_subcommand("curves", "Eigenvalue curves and expansion orders");
  common(curves);
  curves->add_option("--xi-min", cfg.xi_min, "Smallest frequency")->check(CLI::PositiveNumber);
  curves->add_option("--xi-max", cfg.xi_max, "Largest frequency")->check(CLI::PositiveNumber);
  curves->add_option("--xi-count", cfg.xi_count, "Number of log-spaced frequencies")->check(CLI::Range(2, 100000));
  auto* solve = app.add_subcommand("solve", "Solution snapshots of u and the profiles");
  common(solve);
  grid(solve);
  solve->add_option("--times", cfg.times, "Times (comma list)")->delimiter(',');
  solve->add_option("--profile", cfg.profile, "Profile")
      ->check(CLI::IsMember({"exact", "diffusion", "diffusion_refined", "expwave", "all"}));
  solve->add_flag("--refined", cfg.refined, "Include the refined diffusion profile with --profile all");
  auto* rates_cmd = app.add_subcommand("rates", "Decay-rate verification");
  common(rates_cmd);
  grid(rates_cmd);
  rates_cmd->add_option("--pq", cfg.pq, "Exponent pair 'p,q' (repeatable, 'inf' allowed)");
  rates_cmd->add_option("--times", cfg.times, "Time ladder (comma list)")->delimiter(',');
  rates_cmd->add_flag("--refined", cfg.refined, "Use the refined profile and exponents");
  rates_cmd->add_option("--tol", cfg.tol, "Slope margin")->check(CLI::NonNegativeNumber);
  auto* kernels = app.add_subcommand("kernels", "Fourier-kernel norm scans");
  common(kernels);
  kernels->add_option("--regime", cfg.regime, "Frequency regime")->check(CLI::IsMember({"low", "mid", "high", "all"}));
  kernels->add_option("--r", cfg.r, "Norm exponent in xi ('inf' allowed)");
  kernels->add_option("--times", cfg.times, "Times (comma list)")->delimiter(',');
  kernels->add_flag("--refined", cfg.refined, "Use the refined kernel in the low regime");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    const auto sys = io::load_system(cfg.system_path);
    if (*check) return cmd_check(cfg, sys);
    if (*reduce) return cmd_reduce(cfg, sys);
    if (*curves) return cmd_curves(cfg, sys);
    if (*solve) return cmd_solve(cfg, sys);
    if (*rates_cmd) return cmd_rates(cfg, sys);
    if (*kernels) return cmd_kernels(cfg, sys);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case Errc::ConditionViolation:
      case Errc::ReductionMissing:
      case Errc::MissingPj1: return 1;
      default: return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
