#pragma once

// Batch commands behind the command-line front end. Each command reads its
// inputs, writes one output stream and returns a result; argument parsing
// and exit-code mapping live in the executable.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hyperwave/basis1d.hpp"
#include "hyperwave/detail/numeric.hpp"
#include "hyperwave/error.hpp"
#include "hyperwave/nterm.hpp"
#include "hyperwave/suites.hpp"
#include "hyperwave/tensorbasis.hpp"
#include "hyperwave/testfunctions.hpp"

namespace hyperwave {

enum class ExitCode : int { ok = 0, check_failed = 1, io = 2, validation = 3 };

/// Exit code for an error: unreadable or malformed input files map to the
/// I/O code, everything else is a validation error.
inline ExitCode exit_code_for(ErrorCode code) {
  return code == ErrorCode::IoError || code == ErrorCode::ParseError ? ExitCode::io
                                                                     : ExitCode::validation;
}

/// Flags shared by all commands; unset optionals take per-command defaults.
struct CommandOptions {
  std::string basis = "haar";
  int n = 2;
  std::optional<int> jmax;
  std::optional<double> q;
  std::optional<double> s;
  std::optional<double> r;
  std::optional<double> tau;
  std::string p; ///< comma-separated p grid
  std::uint64_t seed = 1;
  std::string in;
  std::string suite = "all";
  std::string system = "hyper";
  std::string kind;
  std::string direction = "forward";
  double beta = 0.5;
  std::int64_t nmin = 16;
  std::int64_t nmax = 4096;
};

inline constexpr int kTransformDefaultLevel = 6;
inline constexpr int kNTermDefaultLevel = 8;
inline constexpr int kCompareDefaultLevel = 10;

/// "haar" or "maskfile=PATH".
inline BasisSpec load_basis(const std::string &selector) {
  if (selector == "haar")
    return make_haar_basis(0);
  const std::string prefix = "maskfile=";
  if (selector.rfind(prefix, 0) == 0)
    return read_mask_file(selector.substr(prefix.size()));
  throw Error(ErrorCode::UnknownKind, "basis must be 'haar' or 'maskfile=PATH', got '" + selector + "'");
}

inline std::vector<double> parse_p_grid(const std::string &list) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (tok.find_first_not_of(" \t") != std::string::npos)
      out.push_back(detail::parse_exponent(tok));
  return out;
}

namespace detail {

inline std::ifstream open_input(const std::string &path) {
  require(!path.empty(), ErrorCode::IoError, "no input file given (--in)");
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::IoError, "cannot open " + path);
  return in;
}

inline CoeffVector read_coeff_file(const std::string &path, const BasisSpec &spec) {
  auto in = open_input(path);
  auto c = read_coeffs(in);
  require(c.basis == spec.name(), ErrorCode::BasisMismatch,
          "coefficient file was written for basis '" + c.basis + "', not '" + spec.name() + "'");
  spec.check_level(c.max_level);
  return c;
}

inline SampleParams sample_params(const CommandOptions &o) {
  SampleParams sp;
  sp.beta = o.beta;
  sp.q = o.q.value_or(0.0);
  sp.r = o.r.value_or(1.0);
  sp.seed = o.seed;
  return sp;
}

/// Single-scale coefficients of the generator named by --kind.
inline NdArray generate(const CommandOptions &o, const BasisSpec &spec, int level) {
  const auto kind = parse_kind(o.kind);
  return samples_to_single_scale(sample_function(kind, sample_params(o), spec, o.n, level));
}

/// Coefficients from --in, or from a generator when --kind is set.
inline CoeffVector nterm_input(const CommandOptions &o, const BasisSpec &spec, System sys,
                               int level) {
  if (o.kind.empty())
    return read_coeff_file(o.in, spec);
  const auto a = generate(o, spec, level);
  return sys == System::hyperbolic ? hyper_forward(spec, a) : iso_forward(spec, a);
}

} // namespace detail

/// Forward: array file (--in) or generator (--kind) to a coefficient file.
/// Inverse: coefficient file to an array file.
inline void cmd_transform(const CommandOptions &o, std::ostream &out) {
  const auto spec = load_basis(o.basis);
  const System sys = parse_system(o.system);
  check_dimension(o.n);
  if (sys == System::isotropic)
    detail::require_iso_dim(o.n);
  if (o.direction == "forward") {
    NdArray a = [&] {
      if (!o.kind.empty())
        return detail::generate(o, spec, o.jmax.value_or(kTransformDefaultLevel));
      auto in = detail::open_input(o.in);
      return read_array(in, spec);
    }();
    if (sys == System::isotropic)
      detail::require_iso_dim(a.n);
    write_coeffs(out, sys == System::hyperbolic ? hyper_forward(spec, std::move(a))
                                                : iso_forward(spec, std::move(a)));
  } else if (o.direction == "inverse") {
    const auto c = detail::read_coeff_file(o.in, spec);
    write_array(out, spec, c.system == System::hyperbolic ? hyper_inverse(spec, c) : iso_inverse(spec, c));
  } else {
    throw Error(ErrorCode::UnknownKind, "direction must be 'forward' or 'inverse'");
  }
}

struct NTermSummary {
  double rate = 0.0;
};

/// Error curve E_N over the doubling grid nmin..nmax plus the fitted rate.
inline NTermSummary cmd_nterm(const CommandOptions &o, std::ostream &out) {
  const auto spec = load_basis(o.basis);
  const System sys = parse_system(o.system);
  const auto u = detail::nterm_input(o, spec, sys, o.jmax.value_or(kNTermDefaultLevel));
  const double q = o.q.value_or(0.0);
  const double r = o.r.value_or(1.0);
  const double tau = o.tau.value_or(1.0 / (r + 0.5));
  const auto grid = doubling_grid(o.nmin, o.nmax);
  const auto curve = error_curve(u, q, grid);
  write_curve_csv(out, curve, r, tau, spec.name(), u.n, o.seed);
  return {fit_rate(curve, o.nmin, o.nmax)};
}

/// Runs one suite or all of them; returns whether every check passed.
inline bool cmd_verify(const CommandOptions &o, std::ostream &out) {
  const auto spec = load_basis(o.basis);
  SuiteOptions so;
  so.m_max = o.jmax;
  so.p = parse_p_grid(o.p);
  so.q = o.q;
  so.s = o.s;
  so.r = o.r;
  so.seed = o.seed;
  std::vector<Suite> suites;
  if (o.suite == "all") {
    for (const auto &[name, s] : suite_names())
      suites.push_back(s);
  } else {
    suites.push_back(parse_suite(o.suite));
  }
  std::vector<CheckRow> rows;
  for (Suite s : suites) {
    auto part = run_suite(s, spec, so);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  write_report_csv(out, rows);
  return all_pass(rows);
}

struct CompareSummary {
  double rate_iso = 0.0;
  double rate_hyper = 0.0;
};

/// Isotropic and hyperbolic N-term errors of one sampled function (n = 2).
inline CompareSummary cmd_compare(const CommandOptions &o, std::ostream &out) {
  const auto spec = load_basis(o.basis);
  detail::require_iso_dim(o.n);
  require(!o.kind.empty(), ErrorCode::UnknownKind, "compare needs --kind");
  const auto a = detail::generate(o, spec, o.jmax.value_or(kCompareDefaultLevel));
  const double q = o.q.value_or(0.0);
  const auto grid = doubling_grid(o.nmin, o.nmax);
  const auto hyper = error_curve(hyper_forward(spec, a), q, grid);
  const auto iso = error_curve(iso_forward(spec, a), q, grid);
  out << "N,E_N_iso,E_N_hyper,q,kind,basis,n,seed\n";
  for (std::size_t i = 0; i < grid.size(); ++i)
    out << grid[i] << ',' << detail::format17(iso.errors[i].second) << ','
        << detail::format17(hyper.errors[i].second) << ',' << detail::format17(q) << ',' << o.kind
        << ',' << spec.name() << ',' << o.n << ',' << o.seed << '\n';
  return {fit_rate(iso, o.nmin, o.nmax), fit_rate(hyper, o.nmin, o.nmax)};
}

} // namespace hyperwave
