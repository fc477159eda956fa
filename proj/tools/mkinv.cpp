// Command-line front end: mkinv <command> --model <file|name> [options]

#include <iostream>

#include <CLI11.hpp>

#include "mkinv/run.hpp"

int main(int argc, char** argv) {
  mkinv::RunConfig config;
  CLI::App app{"Spectral inversion of symmetric Markov semigroups"};
  app.add_option("command", config.command, "decompose | invert | regularise | mixture | sweep | diagnose | pde | check")
      ->required()
      ->check(CLI::IsMember(mkinv::run_commands()));
  app.add_option("--model", config.model, "model JSON file or bundled model name")->required();
  app.add_option("--T", config.horizon, "time horizon T");
  app.add_option("--alpha", config.alpha, "resolvent parameter alpha")->capture_default_str();
  app.add_option("--gamma", config.gamma, "mixing weight gamma in (0, 1)");
  app.add_option("--tstar", config.tStar, "jump-kernel horizon T*");
  app.add_option("--phi", config.phi, "tikhonov_exp | constant | jump_mixture | resolvent_mixture")
      ->capture_default_str();
  app.add_option("--phi-c", config.phiC, "value of the constant phi");
  app.add_option("--tau", config.tau, "jump-clock rate of the mixture phi families (default T)");
  app.add_option("--g", config.g, "expression for g in x, e.g. \"x^2\" or \"random(42)\"");
  app.add_option("--g-csv", config.gCsv, "read g from an index,x,m,value CSV");
  app.add_option("--gammas", config.gammas, "gamma list for sweep (default 1e-1 .. 1e-8)");
  app.add_option("--steps", config.timeSteps, "time steps of pde trajectories")->capture_default_str();
  app.add_option("--out", config.out, "output directory")->capture_default_str();
  app.add_option("--seed", config.seed, "seed for bare `random` and the check suite")->capture_default_str();
  app.add_option("--tail-tol", config.quadrature.tailTol, "quadrature tail tolerance")->capture_default_str();
  app.add_option("--rel-tol", config.quadrature.relTol, "quadrature relative tolerance")->capture_default_str();
  app.add_option("--panels", config.quadrature.panels, "initial quadrature panels")->capture_default_str();
  app.add_option("--points-per-panel", config.quadrature.pointsPerPanel, "Gauss-Legendre order")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : mkinv::kExitValidation;
  }
  return mkinv::run(config, std::cerr);
}
