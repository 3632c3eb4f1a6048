#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "tomo/operators.hpp"
#include "tomo/phase_space.hpp"
#include "tomo/quadratic.hpp"
#include "tomo/thick.hpp"
#include "tomo/tomogram.hpp"

namespace tomo::io {

// Text formats: JSON for specs, CSV for sampled data. Parse failures throw
// Error(BadInput).

StateSpec parse_state(std::string_view json);
std::string state_to_json(const StateSpec& spec);

/// {"q":[min,max,n],"p":[min,max,n]}
PhaseSpaceGrid parse_grid(std::string_view json);

WindowFunction parse_window(std::string_view json);
std::string window_to_json(const WindowFunction& xi);

Operator parse_operator(std::string_view json);
std::string operator_to_json(const Operator& a);

Calibration parse_calibration(std::string_view json);
std::string calibration_to_json(const Calibration& cal);

struct KernelRequest {
  Scheme scheme = Scheme::Quadratic;
  TomographicPoint x1, x2, x3;
  double eps = 0.05;
  double eps_m = 0.0;
  std::string window;  // window JSON, thick only
};
KernelRequest parse_kernel_request(std::string_view json);

/// First line `# scheme=NAME`, then a header row. Symplectic and thick:
/// X,theta,mu,nu,value; quadratic: X,mu,nu,value. A value_im column is added
/// when any value is complex. Thick tomograms may carry `# window=JSON`.
void write_tomogram_csv(std::ostream& out, const Tomogram& w, std::string_view window_json = {});
/// Inverse of write_tomogram_csv; rebuilds the X x theta or X x mu x nu
/// lattice when the rows fill one. Without a scheme line, a theta column
/// implies the symplectic scheme.
struct TomogramFile {
  Tomogram tomogram;
  std::string window_json;
};
TomogramFile read_tomogram_csv(std::istream& in);

/// q,p,re,im rows, q slowest.
void write_phase_csv(std::ostream& out, const PhaseSpaceFunction& f);

/// `lo:hi:count` with `pi` accepted as a factor or on its own (e.g. 0:pi:64, -2pi:2pi:9).
/// Returns the inclusive linspace; with `half_open`, hi is excluded (count steps of (hi-lo)/count).
std::vector<double> parse_range(std::string_view spec, bool half_open = false);

std::string read_file(const std::string& path);

}  // namespace tomo::io
