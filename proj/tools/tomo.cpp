#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tomo/errors.hpp"
#include "tomo/io.hpp"
#include "tomo/kernels.hpp"
#include "tomo/operators.hpp"
#include "tomo/quadratic.hpp"
#include "tomo/scheme.hpp"
#include "tomo/symplectic.hpp"
#include "tomo/thick.hpp"
#include "tomo/verify.hpp"

using namespace tomo;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kBadInput = 2, kTruncated = 3, kNonConvergent = 4 };

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::TruncatedSupport: return kTruncated;
    case ErrorKind::NonConvergent:
    case ErrorKind::CalibrationUnstable: return kNonConvergent;
    default: return kBadInput;
  }
}

// Inline JSON when the argument starts with '{', a file path otherwise.
std::string json_arg(const std::string& arg) {
  const auto pos = arg.find_first_not_of(" \t\n");
  if (pos != std::string::npos && arg[pos] == '{') return arg;
  return io::read_file(arg);
}

// Writes to `path`, or stdout when empty; `body` receives the stream.
template <class F>
void emit(const std::string& path, F&& body) {
  if (path.empty() || path == "-") {
    body(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::BadInput, "cannot write '" + path + "'");
  body(out);
}

// Summary lines go to stderr when the data goes to stdout.
std::ostream& info(const std::string& output) {
  return (output.empty() || output == "-") ? std::cerr : std::cout;
}

double span_max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

PhaseSpaceGrid square_grid(double reach) {
  const int n = static_cast<int>(std::ceil(2.0 * reach / 0.1)) + 1;
  return make_grid(-reach, reach, -reach, reach, n, n);
}

struct ForwardArgs {
  std::string scheme = "symplectic";
  std::string state, op, window, grid, output;
  std::string x_range, theta_range = "0:pi:64", mu_range, nu_range;
  int dim = kDefaultDim;
  bool quantum = false;
};

int cmd_forward(const ForwardArgs& a) {
  const Scheme scheme = scheme_from_string(a.scheme);
  if (a.state.empty() == a.op.empty())
    throw Error(ErrorKind::BadInput, "forward needs exactly one of --state or --operator");
  if (scheme == Scheme::Thick && a.window.empty())
    throw Error(ErrorKind::BadInput, "thick scheme needs --window");
  if (scheme != Scheme::Thick && !a.window.empty())
    throw Error(ErrorKind::BadInput, "--window applies to the thick scheme only");

  std::vector<double> xs, th, mus, nus;
  double reach = 8.0;
  if (scheme == Scheme::Quadratic) {
    const QuadraticLattice lattice;
    xs = a.x_range.empty() ? lattice.x_axis() : io::parse_range(a.x_range);
    mus = a.mu_range.empty() ? lattice.center_axis() : io::parse_range(a.mu_range);
    nus = a.nu_range.empty() ? lattice.center_axis() : io::parse_range(a.nu_range);
    double x_top = 0.0;
    for (double x : xs) x_top = std::max(x_top, x);
    reach = std::max(reach, std::max(span_max_abs(mus), span_max_abs(nus)) + std::sqrt(x_top) + 0.5);
  } else {
    xs = io::parse_range(a.x_range.empty() ? "-6:6:121" : a.x_range);
    th = io::parse_range(a.theta_range, true);
    reach = std::max(reach, span_max_abs(xs) + 3.0);
  }
  const PhaseSpaceGrid grid = a.grid.empty() ? square_grid(reach) : io::parse_grid(json_arg(a.grid));

  std::optional<WindowFunction> window;
  std::string window_json;
  if (scheme == Scheme::Thick) {
    window = io::parse_window(json_arg(a.window));
    window_json = io::window_to_json(*window);
  }

  Tomogram w;
  if (!a.state.empty() && !a.quantum) {
    const PhaseSpaceFunction f = eval_state(io::parse_state(json_arg(a.state)), grid);
    switch (scheme) {
      case Scheme::Symplectic: w = radon_forward_grid(f, xs, th); break;
      case Scheme::Thick: w = thick_forward_grid(f, *window, xs, th); break;
      case Scheme::Quadratic: w = circle_forward_grid(f, xs, mus, nus); break;
    }
  } else {
    // Quantum route: Tr(A phi_hat(x)) at every lattice point.
    const Operator op = a.op.empty() ? density_matrix(io::parse_state(json_arg(a.state)), a.dim)
                                     : io::parse_operator(json_arg(a.op));
    const SchemeSpec spec = scheme == Scheme::Thick       ? SchemeSpec::thick(*window)
                            : scheme == Scheme::Quadratic ? SchemeSpec::quadratic()
                                                          : SchemeSpec::symplectic();
    w.scheme = scheme;
    w.x_axis = xs;
    if (scheme == Scheme::Quadratic) {
      w.mu_axis = mus;
      w.nu_axis = nus;
      for (double m : mus)
        for (double n : nus)
          for (double x : xs) w.points.push_back({x, m, n});
    } else {
      w.theta_axis = th;
      for (double t : th)
        for (double x : xs) w.points.push_back({x, std::cos(t), std::sin(t)});
    }
    for (const auto& x : w.points) w.values.push_back(tomographic_symbol(op, spec, x));
  }

  emit(a.output, [&](std::ostream& out) { io::write_tomogram_csv(out, w, window_json); });

  const std::vector<cplx> norms =
      scheme == Scheme::Quadratic ? center_integrals(w) : slice_integrals(w);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (cplx v : norms) {
    lo = std::min(lo, v.real());
    hi = std::max(hi, v.real());
  }
  info(a.output) << "scheme=" << to_string(scheme) << " rows=" << w.values.size()
                 << " slices=" << norms.size() << " slice_integral_min=" << lo
                 << " slice_integral_max=" << hi << '\n';
  return kOk;
}

struct InvertArgs {
  std::string input, output, grid, calib, reference;
};

int cmd_invert(const InvertArgs& a) {
  std::ifstream in(a.input);
  if (!in) throw Error(ErrorKind::BadInput, "cannot open '" + a.input + "'");
  const io::TomogramFile file = io::read_tomogram_csv(in);
  const Tomogram& w = file.tomogram;

  PhaseSpaceFunction rec = PhaseSpaceFunction::zero(make_grid(0, 1, 0, 1, 2, 2));
  switch (w.scheme) {
    case Scheme::Symplectic: {
      const PhaseSpaceGrid target =
          a.grid.empty() ? make_grid(-5, 5, -5, 5, 101, 101) : io::parse_grid(json_arg(a.grid));
      rec = radon_inverse(w, target);
      break;
    }
    case Scheme::Thick:
      throw Error(ErrorKind::BadInput,
                  "thick tomograms have no stable classical inverse (window spectral zeros); "
                  "invert the ideal tomogram instead");
    case Scheme::Quadratic: {
      if (a.calib.empty())
        throw Error(ErrorKind::BadInput,
                    "quadratic inversion needs --calib FILE (create one with `tomo calibrate`)");
      const Calibration cal = io::parse_calibration(io::read_file(a.calib));
      const PhaseSpaceGrid target =
          a.grid.empty() ? make_grid(-4, 4, -4, 4, 41, 41) : io::parse_grid(json_arg(a.grid));
      QuadraticInverseOptions opt;
      opt.c = cal.c;
      rec = quadratic_inverse(w, target, opt);
      break;
    }
  }
  emit(a.output, [&](std::ostream& out) { io::write_phase_csv(out, rec); });
  if (!a.reference.empty()) {
    const StateSpec ref = io::parse_state(json_arg(a.reference));
    info(a.output) << "round_trip_rel_l2=" << relative_l2(rec, eval_state(ref, rec.grid())) << '\n';
  }
  return kOk;
}

struct KernelArgs {
  std::string request, window, output, mode = "closed";
};

int cmd_kernel(const KernelArgs& a) {
  const io::KernelRequest r = io::parse_kernel_request(json_arg(a.request));
  SchemeSpec spec;
  switch (r.scheme) {
    case Scheme::Symplectic: spec = SchemeSpec::symplectic(); break;
    case Scheme::Quadratic: spec = SchemeSpec::quadratic(); break;
    case Scheme::Thick: {
      const std::string wj = !a.window.empty() ? json_arg(a.window) : r.window;
      if (wj.empty()) throw Error(ErrorKind::BadInput, "thick kernel needs a window");
      spec = SchemeSpec::thick(io::parse_window(wj));
      break;
    }
  }
  KernelMode mode;
  if (a.mode == "closed") mode = KernelMode::ClosedForm;
  else if (a.mode == "oracle") mode = KernelMode::Oracle;
  else throw Error(ErrorKind::BadInput, "--mode must be closed or oracle");

  TestFunction test;
  test.eps = r.eps;
  test.eps_m = r.eps_m;
  const KernelValue v = KernelEvaluator(spec, mode)(r.x1, r.x2, r.x3, test);
  const nlohmann::json j{{"re", v.value.real()}, {"im", v.value.imag()},
                         {"error_estimate", v.error_estimate}};
  emit(a.output, [&](std::ostream& out) { out << j.dump() << '\n'; });
  return kOk;
}

int cmd_calibrate(const std::string& output) {
  const Calibration cal = calibrate_inverse_constant();
  emit(output, [&](std::ostream& out) { out << io::calibration_to_json(cal) << '\n'; });
  info(output) << "c=" << cal.c << '\n';
  return kOk;
}

int cmd_verify(const VerifyOptions& opt, const std::string& output) {
  const VerifyReport report = run_verify(opt);
  emit(output, [&](std::ostream& out) { out << report.to_json() << '\n'; });
  int failed = 0;
  for (const auto& c : report.checks) failed += c.passed ? 0 : 1;
  info(output) << report.checks.size() - failed << '/' << report.checks.size() << " checks passed\n";
  return report.all_passed() ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tomographic transforms, star-product kernels and verification"};
  app.require_subcommand(1);

  ForwardArgs fa;
  auto* fwd = app.add_subcommand("forward", "Tomogram of a state or operator (CSV)");
  fwd->add_option("--scheme", fa.scheme, "symplectic | thick | quadratic")->capture_default_str();
  fwd->add_option("--state", fa.state, "state JSON (file or inline)");
  fwd->add_option("--operator", fa.op, "operator JSON (file or inline); quantum route");
  fwd->add_flag("--quantum", fa.quantum, "quantum route for --state: Tr(rho phi_hat), rho truncated at --dim");
  fwd->add_option("--dim", fa.dim, "truncation dimension for --quantum")->capture_default_str();
  fwd->add_option("--window", fa.window, "window JSON (file or inline), thick scheme");
  fwd->add_option("--grid", fa.grid, "source phase-space grid JSON");
  fwd->add_option("--X", fa.x_range, "X lattice lo:hi:count");
  fwd->add_option("--theta", fa.theta_range, "angles lo:hi:count, hi excluded")->capture_default_str();
  fwd->add_option("--mu", fa.mu_range, "quadratic centre mu lattice lo:hi:count");
  fwd->add_option("--nu", fa.nu_range, "quadratic centre nu lattice lo:hi:count");
  fwd->add_option("-o,--output", fa.output, "output CSV (stdout if omitted)");

  InvertArgs ia;
  auto* inv = app.add_subcommand("invert", "Phase-space reconstruction from a tomogram CSV");
  inv->add_option("input", ia.input, "tomogram CSV")->required();
  inv->add_option("-o,--output", ia.output, "output CSV q,p,re,im (stdout if omitted)");
  inv->add_option("--grid", ia.grid, "target grid JSON");
  inv->add_option("--calib", ia.calib, "calibration JSON (quadratic scheme)");
  inv->add_option("--reference", ia.reference, "state JSON; prints the relative L2 error");

  KernelArgs ka;
  auto* ker = app.add_subcommand("kernel", "Smeared star-product kernel value");
  ker->add_option("--request", ka.request, "kernel request JSON (file or inline)")->required();
  ker->add_option("--window", ka.window, "window JSON for the thick scheme");
  ker->add_option("--mode", ka.mode, "closed | oracle")->capture_default_str();
  ker->add_option("-o,--output", ka.output, "output JSON (stdout if omitted)");

  std::string cal_out;
  auto* cal = app.add_subcommand("calibrate", "Calibrate the quadratic inverse constant");
  cal->add_option("-o,--output", cal_out, "calibration JSON (stdout if omitted)");

  VerifyOptions vo;
  std::string v_out;
  auto* ver = app.add_subcommand("verify", "Run the invariant suites");
  ver->add_option("--suite", vo.suite, "classical | quantum | kernels | all")->capture_default_str();
  ver->add_option("--dim", vo.dim, "truncation dimension")->capture_default_str();
  ver->add_option("--seed", vo.seed, "seed for sampled points")->capture_default_str();
  ver->add_option("-o,--output", v_out, "report JSON (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadInput;
  }

  try {
    if (*fwd) return cmd_forward(fa);
    if (*inv) return cmd_invert(ia);
    if (*ker) return cmd_kernel(ka);
    if (*cal) return cmd_calibrate(cal_out);
    if (*ver) return cmd_verify(vo, v_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }
  return kBadInput;
}
