// hyperwave: transforms, N-term curves, verification suites and
// isotropic/hyperbolic comparisons from flags or a `key = value` config.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hyperwave/commands.hpp"

namespace {

using hyperwave::CommandOptions;
using hyperwave::ExitCode;

int code(ExitCode c) { return static_cast<int>(c); }

struct Raw {
  double q = 0.0, s = 0.0, r = 0.0, tau = 0.0;
  int jmax = 0;
};

int emit(const std::string &path, const std::string &text) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    return code(ExitCode::ok);
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) {
    std::cerr << "hyperwave: cannot write " << path << '\n';
    return code(ExitCode::io);
  }
  return code(ExitCode::ok);
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Hybrid-regularity wavelet approximation tools"};
  app.set_config("--config", "", "Flat `key = value` file; flags override it");
  app.require_subcommand(1, 1);

  CommandOptions o;
  Raw raw;
  std::string out_path;
  std::vector<std::string> p_grid;
  app.add_option("--basis", o.basis, "haar | maskfile=PATH")->capture_default_str();
  app.add_option("--n", o.n, "Spatial dimension")->check(CLI::Range(1, 3))->capture_default_str();
  auto *jmax = app.add_option("--jmax", raw.jmax, "Finest level (suite: largest level)");
  auto *q = app.add_option("--q", raw.q, "Isotropic regularity q");
  auto *s = app.add_option("--s", raw.s, "Mixed regularity s");
  auto *r = app.add_option("--r", raw.r, "Approximation rate r");
  auto *tau = app.add_option("--tau", raw.tau, "Besov tau written to CSV");
  app.add_option("--p", p_grid, "p grid, e.g. 0.6,1,2")->delimiter(',');
  app.add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  app.add_option("--out", out_path, "Output file (stdout if omitted)");
  app.add_option("--in", o.in, "Input coefficient or array file");
  app.add_option("--suite", o.suite, "Verification suite or 'all'")->capture_default_str();
  app.add_option("--system", o.system, "hyper | iso")->capture_default_str();
  app.add_option("--kind", o.kind, "smooth | point_kink | tensor_kink | random_decay");
  app.add_option("--direction", o.direction, "forward | inverse")->capture_default_str();
  app.add_option("--beta", o.beta, "Kink exponent")->capture_default_str();
  app.add_option("--nmin", o.nmin, "Smallest N of the doubling grid")->capture_default_str();
  app.add_option("--nmax", o.nmax, "Largest N of the doubling grid")->capture_default_str();

  auto *transform = app.add_subcommand("transform", "Forward or inverse transform");
  auto *nterm = app.add_subcommand("nterm", "Best N-term error curve and fitted rate");
  auto *verify = app.add_subcommand("verify", "Run verification suites, write a report");
  auto *compare = app.add_subcommand("compare", "Isotropic versus hyperbolic N-term errors");
  for (auto *sub : {transform, nterm, verify, compare})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::FileError &e) {
    std::cerr << "hyperwave: " << e.what() << '\n';
    return code(ExitCode::io);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : code(ExitCode::validation);
  }
  if (*jmax)
    o.jmax = raw.jmax;
  if (*q)
    o.q = raw.q;
  if (*s)
    o.s = raw.s;
  if (*r)
    o.r = raw.r;
  if (*tau)
    o.tau = raw.tau;
  for (const auto &v : p_grid)
    o.p += (o.p.empty() ? "" : ",") + v;

  std::ostringstream text;
  try {
    if (*transform) {
      hyperwave::cmd_transform(o, text);
      return emit(out_path, text.str());
    }
    if (*nterm) {
      const auto sum = hyperwave::cmd_nterm(o, text);
      std::cerr << "rate " << hyperwave::detail::format17(sum.rate) << '\n';
      return emit(out_path, text.str());
    }
    if (*verify) {
      const bool pass = hyperwave::cmd_verify(o, text);
      if (const int rc = emit(out_path, text.str()); rc != 0)
        return rc;
      std::cerr << (pass ? "PASS" : "FAIL") << '\n';
      return code(pass ? ExitCode::ok : ExitCode::check_failed);
    }
    if (*compare) {
      const auto sum = hyperwave::cmd_compare(o, text);
      std::cerr << "rate_iso " << hyperwave::detail::format17(sum.rate_iso) << "\nrate_hyper "
                << hyperwave::detail::format17(sum.rate_hyper) << '\n';
      return emit(out_path, text.str());
    }
  } catch (const hyperwave::Error &e) {
    std::cerr << "hyperwave: " << e.what() << '\n';
    return code(hyperwave::exit_code_for(e.code()));
  } catch (const std::exception &e) {
    std::cerr << "hyperwave: " << e.what() << '\n';
    return code(ExitCode::validation);
  }
  return code(ExitCode::validation);
}
