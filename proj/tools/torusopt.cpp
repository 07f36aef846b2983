// Command-line front end. Exit codes: 0 all checks pass, 1 a mathematical
// check failed, 2 usage or input error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "torusopt/apxbounds.hpp"
#include "torusopt/io.hpp"
#include "torusopt/parallel.hpp"
#include "torusopt/search.hpp"
#include "torusopt/theta.hpp"

using namespace torusopt;

namespace {

constexpr int kPass = 0, kCheckFailed = 1, kUsage = 2;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

// JSON to stdout, and to path when given.
void emit(const Json& j, const std::string& path) {
  const std::string text = j.dump(2) + "\n";
  if (!path.empty()) write_file(path, text);
  std::cout << text;
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  std::vector<double> v;
  for (int i = 0; i < count; ++i) v.push_back(count == 1 ? lo : lo * std::pow(hi / lo, double(i) / (count - 1)));
  return v;
}

struct ThetaArgs {
  double c = 1;
  std::vector<double> x, t;
  int order = 0;
};

int run_theta(const ThetaArgs& a) {
  Json out;
  out["c"] = a.c;
  Json xs = Json::array();
  for (double x : a.x) {
    xs.push_back({{"x", x},
                  {"theta", theta(a.c, x)},
                  {"theta_fourier", theta_fourier(a.c, x)},
                  {"theta_gauss", theta_gauss(a.c, x)}});
  }
  Json ts = Json::array();
  for (double t : a.t) {
    const auto e = theta_tilde(a.c, t, a.order);
    ts.push_back({{"t", t}, {"value", e.value}, {"derivs", e.derivs}, {"trunc_bound", e.trunc_bound}});
  }
  if (!a.x.empty()) out["x"] = xs;
  if (!a.t.empty()) out["t"] = ts;
  emit(out, "");
  return kPass;
}

struct EnergyArgs {
  std::string config_path, json_out;
  double a = 1;
};

int run_energy(const EnergyArgs& a) {
  const auto cfg = config_from_json(read_json(a.config_path));
  const GaussParam<double> p(a.a, cfg.lattice());
  Json out;
  out["a"] = a.a;
  out["config"] = config_to_json(cfg);
  out["energy"] = to_json(config_energy(cfg, p));
  emit(out, a.json_out);
  return kPass;
}

struct CertifyArgs {
  double a1 = 1, beta = 1;
  int grid = kDefaultGrid;
  std::string json_out;
};

int run_certify(const CertifyArgs& a) {
  const auto r = certify(a.a1, a.beta, a.grid);
  emit(to_json(r), a.json_out);
  return r.verdict ? kPass : kCheckFailed;
}

struct ScanArgs {
  std::vector<double> beta{1 / std::sqrt(3.0), 0.65, 1, std::sqrt(3.0), 2, 5};
  std::vector<double> a1;
  double a1_min = 0.1, a1_max = 50;
  int a1_count = 20;
  int grid = kDefaultGrid;
  std::string out;
};

int run_scan(const ScanArgs& a) {
  const auto a1 = a.a1.empty() ? log_spaced(a.a1_min, a.a1_max, a.a1_count) : a.a1;
  if (a.beta.empty() || a1.empty()) throw std::invalid_argument("scan: beta and a1 lists must be non-empty");
  for (double v : a.beta) if (!(v > 0)) throw std::invalid_argument("scan: beta values must be positive");
  for (double v : a1) if (!(v > 0)) throw std::invalid_argument("scan: a1 values must be positive");
  std::string csv = scan_csv_header();
  bool all = true;
  for (double beta : a.beta) {
    for (double x : a1) {
      const auto r = certify(x, beta, a.grid);
      all = all && r.verdict;
      csv += scan_csv_row(r);
    }
  }
  if (a.out.empty()) {
    std::cout << csv;
  } else {
    write_file(a.out, csv);
  }
  return all ? kPass : kCheckFailed;
}

struct LedgerArgs {
  std::string suite = "all";
  LedgerOptions opt;
  std::string json_out;
};

int run_ledger_cmd(const LedgerArgs& a) {
  const Suite s = a.suite == "A" ? Suite::A : a.suite == "B" ? Suite::B : a.suite == "C" ? Suite::C : Suite::All;
  const auto entries = run_ledger(s, a.opt);
  Json arr = Json::array();
  int failed = 0;
  for (const auto& e : entries) {
    arr.push_back(to_json(e));
    failed += !e.holds;
  }
  if (a.json_out.empty()) {
    std::cout << arr.dump(2) << "\n";
  } else {
    write_file(a.json_out, arr.dump(2) + "\n");
    std::cout << "suite " << a.suite << ": " << entries.size() << " entries, " << failed << " failed\n";
  }
  return failed == 0 ? kPass : kCheckFailed;
}

struct SearchArgs {
  int n = 4, m = 2;
  double a = 1, beta = 1;
  int restarts = 0;
  std::uint64_t seed = 1;
  int max_iters = SearchConfig{}.max_iters;
  std::string json_out;
};

Json search_meta(const SearchArgs& a, const SearchConfig& sc, const RectLattice<double>& L) {
  Json m;
  m["n"] = sc.n;
  m["m"] = a.m;
  m["beta"] = a.beta;
  m["r"] = {L.r[0], L.r[1]};
  m["restarts"] = sc.restarts;
  m["seed"] = sc.seed;
  m["max_iters"] = sc.max_iters;
  return m;
}

SearchConfig search_config(const SearchArgs& a, int default_restarts) {
  SearchConfig sc;
  sc.n = a.n;
  sc.restarts = a.restarts > 0 ? a.restarts : default_restarts;
  sc.seed = a.seed;
  sc.max_iters = a.max_iters;
  return sc;
}

int run_optimize(const SearchArgs& a) {
  const auto L = rect_lattice_m(a.beta, a.m);
  const auto sc = search_config(a, kEnergyRestarts);
  const GaussParam<double> p(a.a, L);
  const auto r = minimize_energy(p, sc);
  Json out;
  out["meta"] = search_meta(a, sc, L);
  out["meta"]["a"] = a.a;
  out["result"] = to_json(r);
  if (sc.n == 2 * a.m) {
    out["canonical_value"] = config_energy(canonical_config(a.beta, a.m), p).energy_normalized;
  }
  if (sc.n == 4 && a.m == 2) {
    out["lp_bound"] = long_double_string(lp_bound(build_magic<long double>(a.a, a.beta), 4));
  }
  emit(out, a.json_out);
  return kPass;
}

int run_pack(const SearchArgs& a) {
  const auto L = rect_lattice_m(a.beta, a.m);
  const auto sc = search_config(a, kPackingRestarts);
  const auto r = maximize_packing(L, sc);
  Json out;
  out["meta"] = search_meta(a, sc, L);
  out["result"] = to_json(r);
  bool ok = true;
  if (sc.n == 2 * a.m) {
    const double bound = pigeonhole_bound(L, sc.n);
    out["canonical_value"] = packing_radius(canonical_config(a.beta, a.m));
    out["pigeonhole_bound"] = bound;
    // The pigeonhole argument needs beta >= 1/sqrt3.
    if (a.beta >= 1 / std::sqrt(3.0)) ok = r.best_value <= bound + 1e-9;
  }
  emit(out, a.json_out);
  return ok ? kPass : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LP magic functions and periodic Gaussian energy on rectangular tori"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)");

  ThetaArgs theta_args;
  auto* th = app.add_subcommand("theta", "Jacobi theta function and its Chebyshev form");
  th->add_option("--c", theta_args.c, "Parameter c > 0")->required()->check(CLI::PositiveNumber);
  th->add_option("--x", theta_args.x, "Points x for theta(c; x)");
  th->add_option("--t", theta_args.t, "Points t in [-1, 1] for theta~(c; t)");
  th->add_option("--order", theta_args.order, "t-derivative order")->check(CLI::Range(0, kMaxThetaOrder));

  EnergyArgs energy_args;
  auto* en = app.add_subcommand("energy", "Energy of a configuration read from JSON");
  en->add_option("--config", energy_args.config_path, "Configuration JSON")->required();
  en->add_option("--a", energy_args.a, "Gaussian parameter a > 0")->required()->check(CLI::PositiveNumber);
  en->add_option("--json-out", energy_args.json_out);

  CertifyArgs cert_args;
  auto* ce = app.add_subcommand("certify", "Build and check the magic function at (a1, beta)");
  ce->add_option("--a1", cert_args.a1)->required()->check(CLI::PositiveNumber);
  ce->add_option("--beta", cert_args.beta)->required()->check(CLI::PositiveNumber);
  ce->add_option("--grid", cert_args.grid)->check(CLI::Range(64, 1 << 14));
  ce->add_option("--json-out", cert_args.json_out);

  ScanArgs scan_args;
  auto* sc = app.add_subcommand("scan", "Certificate scan over beta x a1, CSV output");
  sc->add_option("--beta", scan_args.beta, "beta values")->capture_default_str();
  sc->add_option("--a1", scan_args.a1, "a1 values (overrides the log-spaced range)");
  sc->add_option("--a1-min", scan_args.a1_min)->check(CLI::PositiveNumber);
  sc->add_option("--a1-max", scan_args.a1_max)->check(CLI::PositiveNumber);
  sc->add_option("--a1-count", scan_args.a1_count)->check(CLI::Range(1, 100000));
  sc->add_option("--grid", scan_args.grid)->check(CLI::Range(64, 1 << 14));
  sc->add_option("--out", scan_args.out, "CSV path (default stdout)");

  LedgerArgs ledger_args;
  auto* le = app.add_subcommand("ledger", "Theta bound ledgers");
  le->add_option("--suite", ledger_args.suite)->check(CLI::IsMember({"A", "B", "C", "all"}));
  le->add_option("--grid-size", ledger_args.opt.grid_size)->check(CLI::Range(2, 1000000));
  le->add_option("--a-min", ledger_args.opt.a_min)->check(CLI::PositiveNumber);
  le->add_option("--a-max", ledger_args.opt.a_max)->check(CLI::PositiveNumber);
  le->add_option("--json-out", ledger_args.json_out);

  SearchArgs opt_args, pack_args;
  pack_args.beta = 1;
  auto add_search = [](CLI::App* cmd, SearchArgs& s, bool with_a) {
    cmd->add_option("--n", s.n, "Point count")->check(CLI::Range(1, 16));
    if (with_a) cmd->add_option("--a", s.a, "Gaussian parameter a > 0")->check(CLI::PositiveNumber);
    cmd->add_option("--beta", s.beta)->check(CLI::PositiveNumber);
    cmd->add_option("--m", s.m, "Lattice r = (1, m beta)")->check(CLI::Range(1, 1000));
    cmd->add_option("--restarts", s.restarts, "Restarts (default 50 energy, 200 packing)")->check(CLI::Range(1, 1000000));
    cmd->add_option("--seed", s.seed);
    cmd->add_option("--max-iters", s.max_iters)->check(CLI::Range(1, 100000000));
    cmd->add_option("--json-out", s.json_out);
  };
  auto* op = app.add_subcommand("optimize", "Multistart energy minimization");
  add_search(op, opt_args, true);
  auto* pk = app.add_subcommand("pack", "Multistart packing-radius maximization");
  add_search(pk, pack_args, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  set_num_threads(threads);
  try {
    if (*th) return run_theta(theta_args);
    if (*en) return run_energy(energy_args);
    if (*ce) return run_certify(cert_args);
    if (*sc) return run_scan(scan_args);
    if (*le) return run_ledger_cmd(ledger_args);
    if (*op) return run_optimize(opt_args);
    if (*pk) return run_pack(pack_args);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
