#include "mkinv/run.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "mkinv/csv.hpp"
#include "mkinv/error.hpp"
#include "mkinv/expression.hpp"
#include "mkinv/invariants.hpp"
#include "mkinv/model_config.hpp"
#include "mkinv/regularisation.hpp"

namespace mkinv {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double require(const std::optional<double>& value, const std::string& command, const std::string& flag) {
  if (!value) throw Error(ErrorCode::InvalidConfig, "run", command + " requires --" + flag);
  return *value;
}

class Output {
 public:
  explicit Output(const std::string& dir) : dir_(dir) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw Error(ErrorCode::IoError, "emit_report", "cannot create output directory '" + dir + "': " + ec.message());
  }

  std::ofstream open(const std::string& name) const {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "emit_report", "cannot write '" + (dir_ / name).string() + "'");
    return out;
  }

  void json_file(const std::string& name, const json& doc) const {
    auto out = open(name);
    out << doc.dump(2) << '\n';
    finish(out, name);
  }

  void vector_csv(const std::string& name, const WeightedStateSpace& space, const Vector& values) const {
    auto out = open(name);
    write_vector_csv(out, space, values);
    finish(out, name);
  }

  void trajectory_csv(const std::string& name, const Trajectory& traj) const {
    auto out = open(name);
    out << "t,index,value\n";
    for (size_t i = 0; i < traj.times.size(); ++i) {
      for (Eigen::Index k = 0; k < traj.values[i].size(); ++k) {
        out << format_double(traj.times[i]) << ',' << k << ',' << format_double(traj.values[i][k]) << '\n';
      }
    }
    finish(out, name);
  }

  void finish(std::ofstream& out, const std::string& name) const {
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "emit_report", "failed writing '" + (dir_ / name).string() + "'");
  }

 private:
  fs::path dir_;
};

struct Session {
  const RunConfig& config;
  std::ostream& log;
  Output output;
  SpectralDecomposition dec;

  Vector data() const {
    if (!config.gCsv.empty()) {
      std::ifstream in(config.gCsv);
      if (!in) throw Error(ErrorCode::IoError, "run", "cannot open '" + config.gCsv + "'");
      return read_vector_csv(in, dec.space());
    }
    if (config.g.empty()) throw Error(ErrorCode::InvalidConfig, "run", config.command + " requires --g or --g-csv");
    return parse_function_literal(config.g, dec.space(), &dec, config.seed);
  }

  double horizon() const { return require(config.horizon, config.command, "T"); }

  PhiFunction phi_function(double T) const {
    std::map<std::string, double> params{{"T", T},
                                         {"c", config.phiC.value_or(1.0)},
                                         {"tStar", config.tStar.value_or(1.0)},
                                         {"tau", config.tau.value_or(T)},
                                         {"alpha", config.alpha}};
    return phi::make(config.phi, params);
  }

  json base_summary() const {
    return {{"command", config.command},
            {"model", config.model},
            {"n", dec.size()},
            {"lambdaMax", dec.lambda_max()},
            {"seed", config.seed}};
  }
};

int cmd_decompose(Session& s) {
  auto values = s.output.open("eigenvalues.csv");
  values << "index,lambda\n";
  for (Eigen::Index k = 0; k < s.dec.size(); ++k) values << k << ',' << format_double(s.dec.eigenvalues()[k]) << '\n';
  s.output.finish(values, "eigenvalues.csv");

  auto modes = s.output.open("modes.csv");
  modes << "mode,index,x,value\n";
  for (Eigen::Index k = 0; k < s.dec.size(); ++k) {
    for (Eigen::Index i = 0; i < s.dec.size(); ++i) {
      modes << k << ',' << i << ',' << format_double(s.dec.space().points()[i]) << ','
            << format_double(s.dec.eigenvectors()(i, k)) << '\n';
    }
  }
  s.output.finish(modes, "modes.csv");

  json summary = s.base_summary();
  summary["lambdaMin"] = s.dec.eigenvalues()[0];
  summary["orthonormalityResidual"] = s.dec.orthonormality_residual();
  summary["symmetryResidual"] = check_m_symmetry(s.dec.generator().matrix(), s.dec.space());
  summary["totalMass"] = s.dec.space().total_mass();
  s.output.json_file("summary.json", summary);
  s.log << "decomposed " << s.dec.size() << " states, lambda_max = " << format_double(s.dec.lambda_max()) << '\n';
  return kExitOk;
}

int cmd_invert(Session& s) {
  const double T = s.horizon();
  const Vector g = s.data();
  const InverseProblem problem(s.dec, T, g);
  const ConditioningReport report = membership_criterion(problem, s.config.alpha, s.config.quadrature);
  s.output.json_file("report.json", to_json(report));
  s.log << "amplification log10 = " << format_double(report.amplificationLog10) << " (" << to_string(report.flag)
        << ")\n";

  const Vector f = invert_spectral(problem);
  s.output.vector_csv("f.csv", s.dec.space(), f);
  const double gnorm = s.dec.space().norm(g);
  json summary = s.base_summary();
  summary.update(to_json(report));
  summary["T"] = T;
  summary["alpha"] = s.config.alpha;
  summary["normG"] = gnorm;
  summary["normF"] = s.dec.space().norm(f);
  summary["minF"] = f.minCoeff();
  summary["maxF"] = f.maxCoeff();
  summary["roundTripResidual"] = s.dec.space().norm(semigroup_apply(s.dec, T, f) - g) / gnorm;
  summary["membershipSpectral"] = finite_or_null(report.membershipSpectral);
  summary["besselRelativeDeviation"] = nullptr;
  if (report.lambdaMax * T <= InversionOptions{}.conditioningCap) {
    const Vector fb = invert_bessel(problem, s.config.alpha, s.config.quadrature);
    summary["besselRelativeDeviation"] = s.dec.space().norm(fb - f) / s.dec.space().norm(f);
  }
  s.output.json_file("summary.json", summary);
  return kExitOk;
}

int cmd_regularise(Session& s) {
  const double T = s.horizon();
  const double gamma = require(s.config.gamma, "regularise", "gamma");
  const Vector g = s.data();
  const RegularisationConfig config{gamma, s.phi_function(T), T};
  const Vector f = regularised_solve(s.dec, config, g);
  s.output.vector_csv("f.csv", s.dec.space(), f);
  const Vector best = (1.0 - gamma) * f;
  const double gnorm = s.dec.space().norm(g);
  json summary = s.base_summary();
  summary["T"] = T;
  summary["gamma"] = gamma;
  summary["phi"] = config.phi.name;
  summary["phiParameters"] = config.phi.parameters;
  summary["normG"] = gnorm;
  summary["normF"] = s.dec.space().norm(f);
  summary["residual"] = regularised_residual(s.dec, config, g, f);
  summary["objective"] = variational_objective(s.dec, config, g, best);
  summary["gradientNorm"] = s.dec.space().norm(variational_gradient(s.dec, config, g, best)) / gnorm;
  s.output.json_file("summary.json", summary);
  s.log << "regularised residual = " << format_double(summary["residual"].get<double>()) << '\n';
  return kExitOk;
}

int cmd_mixture(Session& s) {
  const double T = s.horizon();
  const MixtureModel model(s.dec, require(s.config.gamma, "mixture", "gamma"), require(s.config.tStar, "mixture", "tstar"));
  const Vector g = s.data();
  const MixtureInverse inv = mixture_invert(model, T, g);
  s.output.vector_csv("f.csv", s.dec.space(), inv.f);
  json summary = s.base_summary();
  summary["T"] = T;
  summary["gamma"] = model.gamma();
  summary["tStar"] = model.tStar();
  summary["amplification"] = inv.amplification;
  summary["amplificationLog10"] = std::log10(inv.amplification);
  summary["bound"] = inv.bound;
  summary["residual"] = inv.residual;
  summary["normF"] = s.dec.space().norm(inv.f);
  summary["normG"] = s.dec.space().norm(g);
  s.output.json_file("summary.json", summary);
  s.log << "mixture inverse amplification " << format_double(inv.amplification) << " <= bound "
        << format_double(inv.bound) << '\n';
  return kExitOk;
}

int cmd_sweep(Session& s) {
  const double T = s.horizon();
  const Vector g = s.data();
  std::vector<double> gammas = s.config.gammas;
  if (gammas.empty()) {
    for (int k = 1; k <= 8; ++k) gammas.push_back(std::pow(10.0, -k));
  }
  const auto rows = gamma_convergence_study(s.dec, s.phi_function(T), T, g, gammas);
  auto out = s.output.open("sweep.csv");
  out << "gamma,error,residual\n";
  bool decreasing = true;
  for (size_t i = 0; i < rows.size(); ++i) {
    out << format_double(rows[i].gamma) << ',' << format_double(rows[i].error) << ','
        << format_double(rows[i].residual) << '\n';
    if (i > 0 && !(rows[i].error < rows[i - 1].error)) decreasing = false;
  }
  s.output.finish(out, "sweep.csv");
  const InverseProblem problem(s.dec, T, g);
  const double reference = s.dec.space().norm(invert_spectral(problem));
  json summary = s.base_summary();
  summary["T"] = T;
  summary["phi"] = s.config.phi;
  summary["strictlyDecreasing"] = decreasing;
  summary["finalError"] = rows.back().error;
  summary["finalRelativeError"] = rows.back().error / reference;
  summary["amplificationLog10"] = membership_criterion(problem, s.config.alpha, s.config.quadrature).amplificationLog10;
  s.output.json_file("summary.json", summary);
  return kExitOk;
}

int cmd_diagnose(Session& s) {
  const double T = s.horizon();
  const Vector g = s.data();
  const double alpha = s.config.alpha;
  const InverseProblem problem(s.dec, T, g);
  const ConditioningReport report = membership_criterion(problem, alpha, s.config.quadrature);
  s.output.json_file("report.json", to_json(report));

  auto laplace = s.output.open("laplace.csv");
  laplace << "s,lhs,rhs\n";
  double laplaceDev = 0.0;
  for (double sv : {0.0, 0.5, 1.0, 4.0}) {
    const LaplacePair p = laplace_diagnostic(s.dec, alpha, g, sv, s.config.quadrature);
    laplace << format_double(sv) << ',' << format_double(p.lhs) << ',' << format_double(p.rhs) << '\n';
    laplaceDev = std::max(laplaceDev, std::abs(p.lhs - p.rhs));
  }
  s.output.finish(laplace, "laplace.csv");

  const PicardResult picard = picard_j_alpha(s.dec, alpha, g, 1.0, 10);
  auto pc = s.output.open("picard.csv");
  pc << "n,supError,bound\n";
  bool picardOk = true;
  for (size_t n = 0; n < picard.supErrors.size(); ++n) {
    pc << n << ',' << format_double(picard.supErrors[n]) << ',' << format_double(picard.bounds[n]) << '\n';
    picardOk = picardOk && picard.supErrors[n] <= picard.bounds[n];
  }
  s.output.finish(pc, "picard.csv");

  json summary = s.base_summary();
  summary.update(to_json(report));
  summary["T"] = T;
  summary["alpha"] = alpha;
  summary["laplaceMaxDeviation"] = laplaceDev;
  summary["picardBoundHolds"] = picardOk;
  summary["jAlphaMaxRelativeDeviation"] = nullptr;
  if (s.dec.lambda_max() <= 50.0) {
    double worst = 0.0;
    for (double t : {0.1, 1.0, 5.0}) {
      const Vector a = j_alpha_spectral(s.dec, alpha, t, g);
      const Vector b = j_alpha_quadrature(s.dec, alpha, t, g, s.config.quadrature);
      worst = std::max(worst, s.dec.space().norm(a - b) / s.dec.space().norm(a));
    }
    summary["jAlphaMaxRelativeDeviation"] = worst;
  }
  s.output.json_file("summary.json", summary);
  s.log << "flag " << to_string(report.flag) << ", Laplace deviation " << format_double(laplaceDev) << '\n';
  return kExitOk;
}

int cmd_pde(Session& s) {
  const double T = s.horizon();
  const Vector g = s.data();
  const int steps = std::max(2, s.config.timeSteps);
  std::vector<double> grid;
  for (int i = 0; i <= steps; ++i) grid.push_back(i == steps ? T : T * i / steps);
  json summary = s.base_summary();
  summary["T"] = T;
  if (s.config.gamma) {
    const MixtureModel model(s.dec, *s.config.gamma, s.config.tStar.value_or(1.0));
    const PideResult result = regularised_pide_solve(model, g, T, grid);
    s.output.trajectory_csv("trajectory.csv", result.trajectory);
    summary["equation"] = "regularised_pide";
    summary["gamma"] = model.gamma();
    summary["tStar"] = model.tStar();
    summary["growthExponent"] = result.growthExponent;
    summary["residual"] = regularised_pide_residual(model, g, T, 0.5 * T);
  } else {
    const InverseProblem problem(s.dec, T, g);
    const Trajectory traj = solve_backward_cauchy(problem, grid);
    s.output.trajectory_csv("trajectory.csv", traj);
    summary["equation"] = "backward_cauchy";
    summary["amplificationLog10"] = membership_criterion(problem, s.config.alpha, s.config.quadrature).amplificationLog10;
    summary["residual"] = backward_cauchy_residual(problem, 0.5 * T);
  }
  s.output.json_file("summary.json", summary);
  s.log << "residual at T/2 = " << format_double(summary["residual"].get<double>()) << '\n';
  return kExitOk;
}

int cmd_check(Session& s) {
  InvariantOptions options;
  options.horizon = s.config.horizon.value_or(1.0);
  options.seed = s.config.seed;
  const auto results = run_invariant_suite(s.dec, options);
  json list = json::array();
  int failed = 0, passed = 0, skipped = 0;
  for (const CheckResult& r : results) {
    list.push_back({{"name", r.name},
                    {"status", to_string(r.status)},
                    {"value", finite_or_null(r.value)},
                    {"threshold", r.threshold},
                    {"note", r.note}});
    failed += r.status == CheckStatus::Fail;
    passed += r.status == CheckStatus::Pass;
    skipped += r.status == CheckStatus::Skip;
    s.log << to_string(r.status) << ' ' << r.name << ' ' << format_double(r.value);
    if (!r.note.empty()) s.log << " (" << r.note << ')';
    s.log << '\n';
  }
  s.output.json_file("check.json", list);
  json summary = s.base_summary();
  summary["T"] = options.horizon;
  summary["passed"] = passed;
  summary["failed"] = failed;
  summary["skipped"] = skipped;
  s.output.json_file("summary.json", summary);
  return failed == 0 ? kExitOk : kExitCheckFailed;
}

}  // namespace

json to_json(const ConditioningReport& report) {
  return {{"lambdaMax", report.lambdaMax},
          {"amplificationLog10", report.amplificationLog10},
          {"membershipSpectralLog10", finite_or_null(report.membershipSpectralLog10)},
          {"membershipQuadrature", report.membershipQuadrature ? json(*report.membershipQuadrature) : json(nullptr)},
          {"flag", to_string(report.flag)}};
}

int run(const RunConfig& config, std::ostream& log) {
  try {
    Output output(config.out);
    try {
      if (config.model.empty()) throw Error(ErrorCode::InvalidConfig, "run", "--model is required");
      Session s{config, log, output, spectral_decompose(load_model(config.model))};
      const std::string& c = config.command;
      if (c == "decompose") return cmd_decompose(s);
      if (c == "invert") return cmd_invert(s);
      if (c == "regularise") return cmd_regularise(s);
      if (c == "mixture") return cmd_mixture(s);
      if (c == "sweep") return cmd_sweep(s);
      if (c == "diagnose") return cmd_diagnose(s);
      if (c == "pde") return cmd_pde(s);
      if (c == "check") return cmd_check(s);
      throw Error(ErrorCode::InvalidConfig, "run", "unknown command '" + c + "'");
    } catch (const Error& e) {
      const int code = is_numerical(e.code()) ? kExitNumerical : kExitValidation;
      json details = json::object();
      for (const auto& [key, value] : e.details()) details[key] = finite_or_null(value);
      output.json_file("error.json", {{"code", to_string(e.code())},
                                      {"operation", e.operation()},
                                      {"message", e.what()},
                                      {"details", details},
                                      {"exitCode", code}});
      log << "error [" << to_string(e.code()) << "] in " << e.operation() << ": " << e.what() << '\n';
      return code;
    }
  } catch (const Error& e) {
    log << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace mkinv
