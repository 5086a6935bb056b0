#ifndef CUSPGROWTH_CLI_COMMANDS_HPP
#define CUSPGROWTH_CLI_COMMANDS_HPP

#include <cstdint>
#include <string>

namespace growth {

// One reproducible run: spec file + command + overrides. Every output
// embeds the full parameter echo (including seed and truncation), and
// identical configs rerender byte-identically.
struct RunConfig {
  std::string spec_path;
  std::string command;  // growth | exponent | dop | shadow-audit | theorem-audit
  std::string out_path;
  std::string format = "text";  // csv | json-like | text
  std::uint64_t seed = 1;

  double delta_width = 1.0;
  double shadow_r = 3.0;
  double eps = 1.0;
  double big_r = 4.0;
  double s_override = -1.0;  // < 0: use 1.05 * delta_hat
  double cutoff_t = 2.0;
  int window_lo = -1, window_hi = -1;  // -1: backend default
  double ceiling = 3.0;

  std::string kind = "orbit";  // growth: orbit|horoball|parabolic|cone|partial_cone
  std::string center = "e";
  std::string centers;  // theorem-audit cone centers, comma-separated words
};

// Exit status: 0 ok, 1 audit inconclusive/inconsistent, 2 input error.
int run_command(const RunConfig& cfg);

}  // namespace growth

#endif
