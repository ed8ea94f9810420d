// Command-line front end: index, certificate, spectrum, minors, simulate,
// sweep-L and envelope.
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hypocert/bgk_sim.hpp"
#include "hypocert/decay_certificate.hpp"
#include "hypocert/hermite_basis.hpp"
#include "hypocert/hypo_index.hpp"
#include "hypocert/io.hpp"
#include "hypocert/operator_assembly.hpp"
#include "hypocert/spectral_gap.hpp"

using namespace hypocert;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kVerification = 2;

struct RunConfig {
  std::string command;
  int d = 1;
  double L = 2.0 * std::numbers::pi;
  std::string basis;  // empty: tensor in 1D, energy otherwise
  int trunc = 0;      // 0: 4 x minimum block size
  std::vector<double> kappa;
  int kmax = 0;
  std::optional<double> alpha;
  double epsilon = 0.02;
  double tmax = 100.0;
  double dt = 2.0;
  double gamma = 0.0;
  double tol_rank = 1e-10;
  std::string out;
  std::string format;
  unsigned seed = 0;
  double from = 0.1, to = 50.0;
  int points = 100;
  double E0 = 15.0;

  Variant variant() const {
    if (basis.empty()) return d == 1 ? Variant::tensor : Variant::energy;
    return variant_from_string(basis);
  }
  int N() const { return trunc > 0 ? trunc : 4 * min_block_size(d); }

  json to_json() const {
    json j = {{"command", command}, {"dim", d},         {"L", L},           {"basis", to_string(variant())},
              {"trunc", N()},       {"kmax", kmax},     {"epsilon", epsilon}, {"tmax", tmax},
              {"dt", dt},           {"gamma", gamma},   {"tol_rank", tol_rank}, {"format", format},
              {"seed", seed}};
    j["kappa"] = kappa;
    j["alpha"] = alpha ? json(*alpha) : json(nullptr);
    if (command == "sweep-L") j.update({{"from", from}, {"to", to}, {"points", points}});
    if (command == "envelope") j["E0"] = E0;
    return j;
  }
};

std::string csv_header(const RunConfig& cfg) { return "# config: " + cfg.to_json().dump() + "\n"; }

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw UsageError("cannot open output file " + cfg.out);
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int run_index(const RunConfig& cfg) {
  const OperatorPair pair = OperatorPair::bgk(cfg.d, cfg.variant(), cfg.N(), cfg.L);
  const double kappa = cfg.kappa.empty() ? 1.0 : cfg.kappa.front();
  require(kappa > 0.0, "--kappa must be positive for the index");
  const CMatrix C1 = (pair.ell() * kappa * pair.L1).cast<cdouble>();
  const CMatrix C2 = pair.L2.cast<cdouble>();
  const IndexReport rep = hypocoercivity_index(C1, C2, cfg.tol_rank);
  const InvarianceReport inv = check_invariance_conditions(C1, C2, cfg.tol_rank);
  const bool spectral = is_hypocoercive_spectral(C1, C2, 1e-12);
  const bool agree = rep.criteria_agree && rep.hypocoercive() == inv.B3 && inv.B3 == inv.B4 &&
                     rep.hypocoercive() == spectral;
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << csv_header(cfg) << "j,rank,kernel_rank\n";
    for (std::size_t j = 0; j < rep.rank_profile.size(); ++j)
      os << j << ',' << rep.rank_profile[j] << ',' << rep.kernel_profile[j] << '\n';
    emit(cfg, os.str());
  } else {
    json j = {{"config", cfg.to_json()},
              {"tau", rep.tau ? json(*rep.tau) : json(nullptr)},
              {"hypocoercive", rep.hypocoercive()},
              {"rank_profile", rep.rank_profile},
              {"kernel_profile", rep.kernel_profile},
              {"kernel_dim", rep.kernel_dim},
              {"coercivity_constant", rep.coercivity_constant},
              {"tol", rep.tol},
              {"B3", inv.B3},
              {"B4", inv.B4},
              {"spectral", spectral},
              {"criteria_agree", agree}};
    emit(cfg, dump(j));
  }
  return agree ? kOk : kVerification;
}

int run_certificate(const RunConfig& cfg) {
  const DecayCertificate c = certify(cfg.d, cfg.L, cfg.kmax);
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << csv_header(cfg) << "kappa,min_eig\n";
    for (const auto& v : c.verified) os << csv_number(v.kappa) << ',' << csv_number(v.min_eig) << '\n';
    emit(cfg, os.str());
  } else {
    json j = to_json(c);
    j["config"] = cfg.to_json();
    emit(cfg, dump(j));
  }
  if (!c.valid) std::cerr << "certificate verification failed at kappa = " << c.offending_kappa << '\n';
  return c.valid ? kOk : kVerification;
}

int run_spectrum(const RunConfig& cfg) {
  std::vector<double> kappas = cfg.kappa;
  if (kappas.empty()) {
    kappas = cfg.d == 1 ? std::vector<double>{} : first_moduli(cfg.d, cfg.kmax);
    if (cfg.d == 1)
      for (int k = 1; k <= cfg.kmax; ++k) kappas.push_back(k);
  }
  const GapReport rep = spectral_gap(cfg.d, cfg.L, kappas, cfg.N());
  if (cfg.format == "json") {
    json j = to_json(rep);
    j["config"] = cfg.to_json();
    emit(cfg, dump(j));
  } else {
    emit(cfg, csv_header(cfg) + to_csv(rep));
  }
  return kOk;
}

int run_minors(const RunConfig& cfg) {
  const double kappa = cfg.kappa.empty() ? 1.0 : cfg.kappa.front();
  const double ell = 2.0 * std::numbers::pi / cfg.L;
  const double alpha = *cfg.alpha;
  const MinorTable t = minors(cfg.d, kappa, alpha, ell);
  const std::vector<double> brute =
      principal_minors(D_block_from_operators(cfg.d, kappa, alpha, ell), minors_trailing(cfg.d));
  if (cfg.format == "json") {
    json j = to_json(t);
    j["determinant"] = brute;
    j["config"] = cfg.to_json();
    emit(cfg, dump(j));
  } else {
    std::ostringstream os;
    os << csv_header(cfg) << "j,delta,determinant\n";
    for (std::size_t i = 0; i < t.delta.size(); ++i)
      os << i + 1 << ',' << csv_number(t.delta[i]) << ',' << csv_number(brute[i]) << '\n';
    emit(cfg, os.str());
  }
  return kOk;
}

int run_simulate(const RunConfig& cfg) {
  SimConfig sc;
  sc.d = cfg.d;
  sc.L = cfg.L;
  sc.eps = cfg.epsilon;
  sc.kmax = cfg.kmax;
  sc.N = cfg.N();
  sc.tmax = cfg.tmax;
  sc.dt = cfg.dt;
  sc.gamma = cfg.gamma;
  sc.seed = cfg.seed;
  if (cfg.alpha) sc.alpha = *cfg.alpha;
  const Trajectory tr = simulate(sc);
  if (cfg.format == "json") {
    json j = manifest(tr);
    json rows = json::array();
    for (const auto& r : tr.rows)
      rows.push_back({{"t", r.t},
                      {"entropy", r.entropy},
                      {"h_norm", r.h_norm},
                      {"l1", std::isnan(r.l1) ? json(nullptr) : json(r.l1)},
                      {"envelope", r.envelope}});
    j["rows"] = rows;
    j["cli"] = cfg.to_json();
    emit(cfg, dump(j));
  } else {
    emit(cfg, csv_header(cfg) + "# run: " + manifest(tr).dump() + "\n" + to_csv(tr));
  }
  return kOk;
}

int run_sweep(const RunConfig& cfg) {
  require(cfg.from > 0.0 && cfg.to > cfg.from, "need 0 < --from < --to");
  require(cfg.points >= 2, "--points must be at least 2");
  std::ostringstream os;
  json rows = json::array();
  os << csv_header(cfg) << "L,alpha_plus,alpha_star,mu,two_mu\n";
  for (int i = 0; i < cfg.points; ++i) {
    const double L = cfg.from * std::pow(cfg.to / cfg.from, static_cast<double>(i) / (cfg.points - 1));
    const DecayCertificate c = certify(cfg.d, L, 0);
    os << csv_number(L) << ',' << csv_number(c.alpha_plus) << ',' << csv_number(c.alpha_star) << ','
       << csv_number(c.mu) << ',' << csv_number(2.0 * c.mu) << '\n';
    rows.push_back({{"L", L}, {"alpha_plus", c.alpha_plus}, {"alpha_star", c.alpha_star}, {"mu", c.mu}});
  }
  if (cfg.format == "json")
    emit(cfg, dump({{"config", cfg.to_json()}, {"rows", rows}}));
  else
    emit(cfg, os.str());
  return kOk;
}

int run_envelope(const RunConfig& cfg) {
  const DecayCertificate c = certify(cfg.d, cfg.L, 0);
  const double ti = t_init(c.C_d, cfg.E0, c.lambda);
  const int steps = static_cast<int>(std::llround(cfg.tmax / cfg.dt));
  std::ostringstream os;
  json rows = json::array();
  os << csv_header(cfg) << "# t_init=" << csv_number(ti) << " lambda=" << csv_number(c.lambda)
     << " C_d=" << csv_number(c.C_d) << "\n"
     << "t,envelope,exponential_branch\n";
  for (int i = 0; i <= steps; ++i) {
    const double t = i * cfg.dt;
    const double exp_branch = std::sqrt(c.C_d * cfg.E0) * std::exp(-0.5 * c.lambda * t);
    const double env = decay_envelope(t, c.C_d, cfg.E0, c.lambda);
    os << csv_number(t) << ',' << csv_number(env) << ',' << csv_number(exp_branch) << '\n';
    rows.push_back({{"t", t}, {"envelope", env}, {"exponential_branch", exp_branch}});
  }
  if (cfg.format == "json")
    emit(cfg, dump({{"config", cfg.to_json()},
                    {"t_init", ti},
                    {"lambda", c.lambda},
                    {"C_d", c.C_d},
                    {"rows", rows}}));
  else
    emit(cfg, os.str());
  return kOk;
}

// Fill in the subcommand-specific defaults so that the echoed config is
// the one actually used.
void resolve_defaults(RunConfig& cfg) {
  if (cfg.kmax == 0) {
    if (cfg.command == "certificate") cfg.kmax = 50;
    if (cfg.command == "spectrum") cfg.kmax = 5;
    if (cfg.command == "simulate") cfg.kmax = cfg.d == 1 ? 128 : 4;
  }
  if (cfg.command == "simulate" && cfg.trunc == 0 && cfg.d == 1) cfg.trunc = 64;
  if (cfg.command == "minors" && !cfg.alpha) cfg.alpha = certify(cfg.d, cfg.L, 0).alpha_star;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hypocoercivity certificates for linearised BGK models on the torus"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--dim", cfg.d, "space dimension")->check(CLI::Range(1, 3));
    sub->add_option("--L", cfg.L, "torus side length")->check(CLI::PositiveNumber);
    sub->add_option("--out", cfg.out, "output file (default: stdout)");
    sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", cfg.seed, "random seed");
  };
  auto* index = app.add_subcommand("index", "hypocoercivity index of the BGK pair");
  auto* cert = app.add_subcommand("certificate", "closed-form decay certificate");
  auto* spec = app.add_subcommand("spectrum", "spectral gaps of the truncated generators");
  auto* mins = app.add_subcommand("minors", "minor table at given kappa and alpha");
  auto* sim = app.add_subcommand("simulate", "modal time evolution");
  auto* sweep = app.add_subcommand("sweep-L", "certified rate as a function of L");
  auto* env = app.add_subcommand("envelope", "two-timescale decay envelope");
  for (auto* s : {index, cert, spec, mins, sim, sweep, env}) common(s);

  for (auto* s : {index, spec, sim}) {
    s->add_option("--basis", cfg.basis, "tensor or energy")->check(CLI::IsMember({"tensor", "energy"}));
    s->add_option("--trunc", cfg.trunc, "number of Hermite functions")->check(CLI::Range(1, 2000));
  }
  for (auto* s : {index, spec, mins}) s->add_option("--kappa", cfg.kappa, "mode modulus (list for spectrum)");
  for (auto* s : {cert, spec, sim})
    s->add_option("--kmax", cfg.kmax, "moduli to verify / to scan / Fourier cut-off")->check(CLI::PositiveNumber);
  for (auto* s : {mins, sim}) s->add_option("--alpha", cfg.alpha, "override alpha_star")->check(CLI::NonNegativeNumber);
  index->add_option("--tol-rank", cfg.tol_rank, "relative rank tolerance")->check(CLI::PositiveNumber);
  sim->add_option("--epsilon", cfg.epsilon, "container width")->check(CLI::Range(0.0, 1.0));
  sim->add_option("--gamma", cfg.gamma, "Sobolev weight exponent")->check(CLI::NonNegativeNumber);
  for (auto* s : {sim, env}) {
    s->add_option("--tmax", cfg.tmax, "final time")->check(CLI::NonNegativeNumber);
    s->add_option("--dt", cfg.dt, "sampling step")->check(CLI::PositiveNumber);
  }
  sweep->add_option("--from", cfg.from, "smallest L")->check(CLI::PositiveNumber);
  sweep->add_option("--to", cfg.to, "largest L")->check(CLI::PositiveNumber);
  sweep->add_option("--points", cfg.points, "number of L values")->check(CLI::Range(2, 100000));
  env->add_option("--E0", cfg.E0, "initial entropy")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  cfg.command = chosen->get_name();
  if (cfg.format.empty())
    cfg.format = (cfg.command == "index" || cfg.command == "certificate") ? "json" : "csv";

  try {
    resolve_defaults(cfg);
    if (cfg.command == "index") return run_index(cfg);
    if (cfg.command == "certificate") return run_certificate(cfg);
    if (cfg.command == "spectrum") return run_spectrum(cfg);
    if (cfg.command == "minors") return run_minors(cfg);
    if (cfg.command == "simulate") return run_simulate(cfg);
    if (cfg.command == "sweep-L") return run_sweep(cfg);
    return run_envelope(cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kVerification;
  }
}
