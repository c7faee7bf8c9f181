#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "macrobell/bell.hpp"
#include "macrobell/distributions.hpp"
#include "macrobell/errors.hpp"
#include "macrobell/states.hpp"
#include "macrobell/version.hpp"

namespace {

using namespace macrobell;

struct RunConfig {
  std::string mode = "quadrature";
  double r0 = 1.1;
  std::vector<double> alpha;
  std::vector<double> sigma;
  std::vector<int> n;
  std::vector<double> angles = {0.0, -0.7853981633974483, 1.5707963267948966,
                                -2.356194490192345};
  bool psi_scan = false;
  double eta = 1.0;
  double tail_tol = 1e-10;
  double tol = 1e-4;
  int jobs = 1;
  unsigned long long seed = 0;
  std::string out;
};

ChSettings settings_of(const RunConfig& cfg) {
  return {cfg.angles[0], cfg.angles[1], cfg.angles[2], cfg.angles[3]};
}

std::string join_sig12(const std::vector<double>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) s += ",";
    s += format_sig12(v[k]);
  }
  return s;
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(cfg.out, std::ios::binary);
  if (!os) throw ConfigError("cannot open output file: " + cfg.out);
  os << text;
}

std::string header(const RunConfig& cfg, const std::string& sub,
                   const std::string& mode_note, int n_max) {
  std::ostringstream os;
  os << "# macrobell " << kVersion << " " << sub << "\n";
  os << "# mode=" << mode_note << " r0=" << format_sig12(cfg.r0)
     << " tail_tol=" << format_sig12(cfg.tail_tol)
     << " tol=" << format_sig12(cfg.tol) << " eta=" << format_sig12(cfg.eta)
     << " n_max=" << n_max << " grid_step=" << format_sig12(GridSpec{}.step)
     << " jobs=" << cfg.jobs << " seed=" << cfg.seed << "\n";
  os << "# angles=" << join_sig12(cfg.angles) << "\n";
  return os.str();
}

int run_fig2(const RunConfig& cfg) {
  if (cfg.alpha.empty()) throw ConfigError("fig2 needs at least one alpha");
  const ChSettings st = settings_of(cfg);
  SchmidtState state = pair_coherent_coeffs(cfg.r0, cfg.tail_tol);
  const double sigma0 = sigma_cutoff(quadrature_source(state), st, cfg.tol);
  std::ostringstream os;
  os << header(cfg, "fig2", "exact;sigma_c_quad=alpha*quadrature_sigma0",
               state.n_max);
  os << "alpha,S,sigma_c,sigma_c_quad\n";
  for (double alpha : cfg.alpha) {
    state.alpha = state.beta = alpha;
    const BellSource src = exact_source(state);
    const double s0 = ch_ratio(src, st, NoiseModel{0.0, 1.0}).s;
    const double sc = sigma_cutoff(src, st, cfg.tol);
    os << format_sig12(alpha) << "," << format_sig12(s0) << ","
       << format_sig12(sc) << "," << format_sig12(alpha * sigma0) << "\n";
  }
  emit(cfg, os.str());
  return 0;
}

int run_fig3(const RunConfig& cfg) {
  if (cfg.sigma.empty()) throw ConfigError("fig3 needs at least one sigma");
  const double alpha = cfg.alpha.empty() ? 10.0 : cfg.alpha.front();
  const ChSettings st = settings_of(cfg);
  SchmidtState state = pair_coherent_coeffs(cfg.r0, cfg.tail_tol);
  state.alpha = state.beta = alpha;
  const ChKernel exact(exact_source(state), st);
  const ChKernel quad(quadrature_source(state), st);
  std::ostringstream os;
  os << header(cfg, "fig3",
               "exact;S_quad=quadrature at sigma/alpha, alpha=" +
                   format_sig12(alpha),
               state.n_max);
  os << "sigma,S,S_quad\n";
  // S is nonincreasing for sigma > 0; the sharp sigma = 0 classification
  // weighs a zero outcome fully, so that row sits outside the ordering.
  double prev_sigma = -1.0, prev_s = 0.0;
  for (double sigma : cfg.sigma) {
    const double s = exact.eval(NoiseModel{sigma, 1.0}).s;
    const double sq = quad.eval(NoiseModel{sigma / alpha, cfg.eta}).s;
    if (prev_sigma > 0.0 && sigma > prev_sigma && s > prev_s + 1e-9)
      throw NumericalGuardError("S increased along the sigma sweep");
    prev_sigma = sigma;
    prev_s = s;
    os << format_sig12(sigma) << "," << format_sig12(s) << ","
       << format_sig12(sq) << "\n";
  }
  emit(cfg, os.str());
  return 0;
}

int run_fig4(const RunConfig& cfg) {
  if (cfg.n.empty()) throw ConfigError("fig4 needs at least one N");
  std::ostringstream os;
  os << header(cfg, "fig4", "spin;angles=(0,psi,2psi,3psi)", 0);
  os << "N,psi_opt,S,sigma_c\n";
  for (int N : cfg.n) {
    const auto [psi, ev] = optimize_psi(N, NoiseModel{0.0, 1.0});
    const ChSettings st{0.0, psi, 2.0 * psi, 3.0 * psi};
    const double sc = sigma_cutoff(spin_source(N), st, cfg.tol);
    os << N << "," << format_sig12(psi) << "," << format_sig12(ev.s) << ","
       << format_sig12(sc) << "\n";
  }
  emit(cfg, os.str());
  return 0;
}

int run_eval(const RunConfig& cfg) {
  const double sigma = cfg.sigma.empty() ? 0.0 : cfg.sigma.front();
  const NoiseModel noise{sigma, cfg.eta};
  std::ostringstream os;
  double psi_opt = 0.0;
  ChEvaluation ev;
  int n_max = 0;
  if (cfg.mode == "spin") {
    const int N = cfg.n.empty() ? 1 : cfg.n.front();
    if (cfg.psi_scan) {
      std::tie(psi_opt, ev) = optimize_psi(N, noise);
    } else {
      ev = ch_ratio(spin_source(N), settings_of(cfg), noise);
    }
  } else {
    if (cfg.psi_scan)
      throw ConfigError("--psi-scan applies to the spin mode only");
    SchmidtState state = pair_coherent_coeffs(cfg.r0, cfg.tail_tol);
    state.alpha = state.beta = cfg.alpha.empty() ? 10.0 : cfg.alpha.front();
    n_max = state.n_max;
    const BellSource src = cfg.mode == "exact" ? exact_source(state)
                                               : quadrature_source(state);
    ev = ch_ratio(src, settings_of(cfg), noise);
  }
  os << header(cfg, "eval", cfg.mode, n_max);
  os << "quantity,value\n";
  if (cfg.psi_scan) os << "psi_opt," << format_sig12(psi_opt) << "\n";
  os << "S," << format_sig12(ev.s) << "\n";
  os << "P_pp_theta_phi," << format_sig12(ev.p_pp_theta_phi) << "\n";
  os << "P_pp_theta_phip," << format_sig12(ev.p_pp_theta_phip) << "\n";
  os << "P_pp_thetap_phi," << format_sig12(ev.p_pp_thetap_phi) << "\n";
  os << "P_pp_thetap_phip," << format_sig12(ev.p_pp_thetap_phip) << "\n";
  os << "P_plus_A," << format_sig12(ev.p_a) << "\n";
  os << "P_plus_B," << format_sig12(ev.p_b) << "\n";
  emit(cfg, os.str());
  return 0;
}

void add_common(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--r0", cfg.r0, "signal pump parameter");
  cmd->add_option("--angles", cfg.angles,
                  "theta,phi,theta',phi' in radians")
      ->delimiter(',')
      ->expected(4);
  cmd->add_option("--eta", cfg.eta, "detector efficiency (quadrature mode)");
  cmd->add_option("--tail-tol", cfg.tail_tol,
                  "truncation tail bound for the state coefficients");
  cmd->add_option("--tol", cfg.tol, "bisection tolerance for sigma_c");
  cmd->add_option("--jobs", cfg.jobs, "worker threads");
  cmd->add_option("--seed", cfg.seed, "run seed, recorded in the header");
  cmd->add_option("--out", cfg.out, "output file (default: stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bell-CH ratio tables for photon-number measurements under "
               "Gaussian readout noise"};
  app.require_subcommand(1);
  RunConfig cfg;

  CLI::App* fig2 = app.add_subcommand(
      "fig2", "per-alpha table: alpha,S,sigma_c,sigma_c_quad");
  fig2->add_option("--alpha", cfg.alpha, "local-oscillator amplitudes")
      ->required()
      ->delimiter(',');
  add_common(fig2, cfg);

  CLI::App* fig3 = app.add_subcommand(
      "fig3", "noise sweep at fixed alpha: sigma,S,S_quad");
  fig3->add_option("--sigma", cfg.sigma, "readout noise widths (photons)")
      ->required()
      ->delimiter(',');
  fig3->add_option("--alpha", cfg.alpha, "local-oscillator amplitude")
      ->delimiter(',');
  add_common(fig3, cfg);

  CLI::App* fig4 = app.add_subcommand(
      "fig4", "optimized spin table: N,psi_opt,S,sigma_c");
  fig4->add_option("--n", cfg.n, "pair numbers N")->required()->delimiter(',');
  add_common(fig4, cfg);

  CLI::App* eval = app.add_subcommand("eval", "single-point dump: quantity,value");
  eval->add_option("--mode", cfg.mode, "exact | quadrature | spin")
      ->check(CLI::IsMember({"exact", "quadrature", "spin"}));
  eval->add_option("--alpha", cfg.alpha, "local-oscillator amplitude")
      ->delimiter(',');
  eval->add_option("--sigma", cfg.sigma, "readout noise width")
      ->delimiter(',');
  eval->add_option("--n", cfg.n, "pair number N (spin mode)")->delimiter(',');
  eval->add_flag("--psi-scan", cfg.psi_scan,
                 "optimize psi over (0, pi/2] instead of fixed angles");
  add_common(eval, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    set_default_jobs(cfg.jobs);
    if (fig2->parsed()) return run_fig2(cfg);
    if (fig3->parsed()) return run_fig3(cfg);
    if (fig4->parsed()) return run_fig4(cfg);
    return run_eval(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalGuardError& e) {
    std::cerr << "numerical guard: " << e.what() << "\n";
    return 3;
  }
}
