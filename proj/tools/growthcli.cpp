#include <string>

#include "CLI11.hpp"
#include "cuspgrowth/cli_commands.hpp"

int main(int argc, char** argv) {
  growth::RunConfig cfg;
  CLI::App app{
      "growthcli: growth functions, Poincare series, and boundary audits for cusp-uniform "
      "actions (half-plane matrix groups and cusped Cayley graphs)"};
  app.add_option("--spec", cfg.spec_path, "group-spec JSON file")->required();
  app.add_option("--command", cfg.command,
                 "growth | exponent | dop | shadow-audit | theorem-audit")
      ->required();
  app.add_option("--out", cfg.out_path, "output path (default: stdout)");
  app.add_option("--format", cfg.format, "csv | json-like | text (default text)");
  app.add_option("--seed", cfg.seed, "seed for sampled audits (recorded in output)");
  app.add_option("--delta-width", cfg.delta_width, "annulus half-width Delta (default 1)");
  app.add_option("--shadow-r", cfg.shadow_r, "shadow/cone radius r (default 3)");
  app.add_option("--eps", cfg.eps, "transition epsilon (default 1)");
  app.add_option("--big-r", cfg.big_r, "transition R (default 4)");
  app.add_option("--s", cfg.s_override, "series exponent s (default 1.05 * delta_hat)");
  app.add_option("--cutoff-t", cfg.cutoff_t, "measure approximant cutoff T (default 2)");
  std::string window;
  app.add_option("--window", window, "fit/ratio window n1:n2 (default per backend)");
  app.add_option("--ceiling", cfg.ceiling, "ratio ceiling for audit verdicts (default 3)");
  app.add_option("--kind", cfg.kind, "growth kind: orbit|horoball|parabolic|cone|partial_cone");
  app.add_option("--center", cfg.center, "center element, e.g. 'T' or 'S*T' (default e)");
  app.add_option("--centers", cfg.centers, "theorem-audit cone centers, comma-separated");
  CLI11_PARSE(app, argc, argv);

  if (!window.empty()) {
    const auto colon = window.find(':');
    if (colon == std::string::npos) {
      std::fprintf(stderr, "error: --window expects n1:n2\n");
      return 2;
    }
    try {
      cfg.window_lo = std::stoi(window.substr(0, colon));
      cfg.window_hi = std::stoi(window.substr(colon + 1));
    } catch (const std::exception&) {
      std::fprintf(stderr, "error: --window expects integers n1:n2\n");
      return 2;
    }
  }
  return growth::run_command(cfg);
}
