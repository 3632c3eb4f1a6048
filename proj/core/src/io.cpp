#include "tomo/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "tomo/errors.hpp"

namespace tomo::io {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::BadInput, what); }

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    bad(std::string(what) + ": " + e.what());
  }
}

template <class T>
T get(const json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) bad(std::string(what) + ": missing \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    bad(std::string(what) + ": field \"" + key + "\": " + e.what());
  }
}

TomographicPoint point(const json& j, const char* key) {
  const auto v = get<std::vector<double>>(j, key, "kernel request");
  if (v.size() != 3) bad(std::string("kernel request: \"") + key + "\" needs [X, mu, nu]");
  return {v[0], v[1], v[2]};
}

std::string trim(std::string_view s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

double to_double(std::string_view s, const char* what) {
  const std::string t = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    bad(std::string(what) + ": not a number: '" + t + "'");
  return v;
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Sorted distinct values, merging those closer than a relative 1e-9.
std::vector<double> distinct(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v)
    if (out.empty() || std::abs(x - out.back()) > 1e-9 * std::max(1.0, std::abs(x)))
      out.push_back(x);
  return out;
}

std::size_t index_of(const std::vector<double>& axis, double x) {
  auto it = std::lower_bound(axis.begin(), axis.end(), x - 1e-9 * std::max(1.0, std::abs(x)));
  return static_cast<std::size_t>(it - axis.begin());
}

}  // namespace

StateSpec parse_state(std::string_view text) {
  const json j = parse_json(text, "state");
  const auto kind = get<std::string>(j, "kind", "state");
  StateSpec s;
  if (kind == "coherent") {
    const auto a = get<std::vector<double>>(j, "alpha", "state");
    if (a.size() != 2) bad("state: alpha needs [re, im]");
    s = StateSpec::coherent({a[0], a[1]});
  } else if (kind == "fock") {
    s = StateSpec::fock(get<int>(j, "n", "state"));
  } else if (kind == "thermal") {
    s = StateSpec::thermal(get<double>(j, "nbar", "state"));
  } else if (kind == "gaussian-classical") {
    const auto m = get<std::vector<double>>(j, "mean", "state");
    const auto c = get<std::vector<std::vector<double>>>(j, "cov", "state");
    if (m.size() != 2 || c.size() != 2 || c[0].size() != 2 || c[1].size() != 2)
      bad("state: gaussian-classical needs mean [q,p] and a 2x2 cov");
    Eigen::Matrix2d cov;
    cov << c[0][0], c[0][1], c[1][0], c[1][1];
    s = StateSpec::gaussian({m[0], m[1]}, cov);
  } else {
    bad("state: unknown kind '" + kind + "'");
  }
  try {
    s.validate();
  } catch (const Error& e) {
    bad(e.what());
  }
  return s;
}

std::string state_to_json(const StateSpec& s) {
  json j;
  switch (s.kind) {
    case StateKind::Coherent:
      j = {{"kind", "coherent"}, {"alpha", {s.alpha.real(), s.alpha.imag()}}};
      break;
    case StateKind::Fock:
      j = {{"kind", "fock"}, {"n", s.n}};
      break;
    case StateKind::Thermal:
      j = {{"kind", "thermal"}, {"nbar", s.nbar}};
      break;
    case StateKind::GaussianClassical:
      j = {{"kind", "gaussian-classical"},
           {"mean", {s.mean(0), s.mean(1)}},
           {"cov", {{s.cov(0, 0), s.cov(0, 1)}, {s.cov(1, 0), s.cov(1, 1)}}}};
      break;
  }
  return j.dump();
}

PhaseSpaceGrid parse_grid(std::string_view text) {
  const json j = parse_json(text, "grid");
  const auto q = get<std::vector<double>>(j, "q", "grid");
  const auto p = get<std::vector<double>>(j, "p", "grid");
  if (q.size() != 3 || p.size() != 3) bad("grid: q and p need [min, max, n]");
  try {
    return make_grid(q[0], q[1], p[0], p[1], static_cast<int>(q[2]), static_cast<int>(p[2]));
  } catch (const Error& e) {
    bad(e.what());
  }
}

WindowFunction parse_window(std::string_view text) {
  const json j = parse_json(text, "window");
  const auto kind = get<std::string>(j, "kind", "window");
  try {
    if (kind == "rectangular") return WindowFunction::rectangular(get<double>(j, "delta", "window"));
    if (kind == "gaussian") return WindowFunction::gaussian(get<double>(j, "sigma", "window"));
    if (kind == "custom")
      return WindowFunction::custom(get<std::vector<double>>(j, "Y", "window"),
                                    get<std::vector<double>>(j, "Xi", "window"));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::BadInput) throw;
    bad(e.what());
  }
  bad("window: unknown kind '" + kind + "'");
}

std::string window_to_json(const WindowFunction& xi) {
  switch (xi.kind()) {
    case WindowKind::Rectangular:
      return json{{"kind", "rectangular"}, {"delta", xi.delta()}}.dump();
    case WindowKind::Gaussian:
      return json{{"kind", "gaussian"}, {"sigma", xi.sigma()}}.dump();
    case WindowKind::Custom: {
      std::vector<double> v = xi.xi_samples();
      for (double& x : v) x *= xi.amplitude();
      return json{{"kind", "custom"}, {"Y", xi.y_samples()}, {"Xi", v}}.dump();
    }
  }
  return {};
}

Operator parse_operator(std::string_view text) {
  const json j = parse_json(text, "operator");
  const int dim = get<int>(j, "dim", "operator");
  const auto re = get<std::vector<std::vector<double>>>(j, "re", "operator");
  std::vector<std::vector<double>> im;
  if (j.contains("im")) im = get<std::vector<std::vector<double>>>(j, "im", "operator");
  if (dim < 2) bad("operator: dim must be >= 2");
  auto square = [dim](const std::vector<std::vector<double>>& m) {
    if (static_cast<int>(m.size()) != dim) return false;
    return std::all_of(m.begin(), m.end(),
                       [dim](const auto& row) { return static_cast<int>(row.size()) == dim; });
  };
  if (!square(re) || (!im.empty() && !square(im))) bad("operator: re/im must be dim x dim");
  Operator a = Operator::zero(dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) a.matrix(r, c) = {re[r][c], im.empty() ? 0.0 : im[r][c]};
  return a;
}

std::string operator_to_json(const Operator& a) {
  std::vector<std::vector<double>> re(a.dim, std::vector<double>(a.dim));
  auto im = re;
  for (int r = 0; r < a.dim; ++r)
    for (int c = 0; c < a.dim; ++c) {
      re[r][c] = a.matrix(r, c).real();
      im[r][c] = a.matrix(r, c).imag();
    }
  return json{{"dim", a.dim}, {"re", re}, {"im", im}}.dump();
}

Calibration parse_calibration(std::string_view text) {
  const json j = parse_json(text, "calibration");
  Calibration cal;
  cal.c = get<double>(j, "c", "calibration");
  if (j.contains("per_reference"))
    cal.per_reference = get<std::vector<double>>(j, "per_reference", "calibration");
  if (!(cal.c > 0.0) || !std::isfinite(cal.c)) bad("calibration: c must be positive");
  return cal;
}

std::string calibration_to_json(const Calibration& cal) {
  return json{{"c", cal.c}, {"per_reference", cal.per_reference}}.dump(2);
}

KernelRequest parse_kernel_request(std::string_view text) {
  const json j = parse_json(text, "kernel request");
  KernelRequest r;
  try {
    r.scheme = scheme_from_string(get<std::string>(j, "scheme", "kernel request"));
  } catch (const Error& e) {
    bad(e.what());
  }
  r.x1 = point(j, "x1");
  r.x2 = point(j, "x2");
  r.x3 = point(j, "x3");
  if (!j.contains("test")) bad("kernel request: missing \"test\"");
  const json& t = j.at("test");
  r.eps = get<double>(t, "eps", "kernel request test");
  if (t.contains("eps_m")) r.eps_m = get<double>(t, "eps_m", "kernel request test");
  if (!(r.eps > 0.0)) bad("kernel request: test.eps must be positive");
  if (j.contains("window")) r.window = j.at("window").dump();
  return r;
}

void write_tomogram_csv(std::ostream& out, const Tomogram& w, std::string_view window_json) {
  w.validate();
  const bool complex_values =
      std::any_of(w.values.begin(), w.values.end(), [](cplx v) { return v.imag() != 0.0; });
  const bool quadratic = w.scheme == Scheme::Quadratic;
  out << "# scheme=" << to_string(w.scheme) << '\n';
  if (!window_json.empty()) out << "# window=" << window_json << '\n';
  out << (quadratic ? "X,mu,nu,value" : "X,theta,mu,nu,value") << (complex_values ? ",value_im" : "")
      << '\n';
  out << std::setprecision(17);
  const std::size_t nx = w.x_axis.size();
  for (std::size_t i = 0; i < w.values.size(); ++i) {
    const TomographicPoint& x = w.points[i];
    out << x.X << ',';
    if (!quadratic) {
      double theta = std::atan2(x.nu, x.mu);
      if (w.has_theta_lattice()) theta = w.theta_axis[i / nx];
      out << theta << ',';
    }
    out << x.mu << ',' << x.nu << ',' << w.values[i].real();
    if (complex_values) out << ',' << w.values[i].imag();
    out << '\n';
  }
}

TomogramFile read_tomogram_csv(std::istream& in) {
  TomogramFile file;
  std::optional<Scheme> scheme;
  std::vector<std::string> header;
  std::string line;
  std::map<std::string, std::size_t> col;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      const std::string body = trim(std::string_view(t).substr(1));
      if (body.rfind("scheme=", 0) == 0) {
        try {
          scheme = scheme_from_string(trim(std::string_view(body).substr(7)));
        } catch (const Error& e) {
          bad(std::string("tomogram CSV: ") + e.what());
        }
      } else if (body.rfind("window=", 0) == 0) {
        file.window_json = body.substr(7);
      }
      continue;
    }
    if (header.empty()) {
      header = split(t, ',');
      for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
      for (const char* need : {"X", "mu", "nu", "value"})
        if (!col.count(need)) bad(std::string("tomogram CSV: header lacks column ") + need);
      continue;
    }
    const auto cells = split(t, ',');
    if (cells.size() != header.size())
      bad("tomogram CSV: row has " + std::to_string(cells.size()) + " cells, header has " +
          std::to_string(header.size()));
    std::vector<double> row(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) row[i] = to_double(cells[i], "tomogram CSV");
    rows.push_back(std::move(row));
  }
  if (header.empty() || rows.empty()) bad("tomogram CSV: no data rows");
  const bool has_theta = col.count("theta") > 0;
  if (!scheme) {
    if (!has_theta) bad("tomogram CSV: missing '# scheme=' line");
    scheme = Scheme::Symplectic;
  }
  if (*scheme != Scheme::Quadratic && !has_theta)
    bad("tomogram CSV: " + std::string(to_string(*scheme)) + " tomograms need a theta column");

  Tomogram& w = file.tomogram;
  w.scheme = *scheme;
  const std::size_t cx = col["X"], cm = col["mu"], cn = col["nu"], cv = col["value"];
  const bool has_im = col.count("value_im") > 0;
  const std::size_t ci = has_im ? col["value_im"] : 0;
  auto value = [&](const std::vector<double>& r) { return cplx(r[cv], has_im ? r[ci] : 0.0); };

  std::vector<double> xs, a1, a2;
  for (const auto& r : rows) {
    xs.push_back(r[cx]);
    if (*scheme == Scheme::Quadratic) {
      a1.push_back(r[cm]);
      a2.push_back(r[cn]);
    } else {
      a1.push_back(r[col["theta"]]);
    }
  }
  const auto ux = distinct(xs);
  const auto u1 = distinct(a1);
  const auto u2 = *scheme == Scheme::Quadratic ? distinct(a2) : std::vector<double>{0.0};
  const bool lattice = ux.size() * u1.size() * u2.size() == rows.size();

  if (!lattice) {
    for (const auto& r : rows) {
      w.points.push_back({r[cx], r[cm], r[cn]});
      w.values.push_back(value(r));
    }
    w.validate();
    return file;
  }
  const std::size_t nx = ux.size();
  w.x_axis = ux;
  w.points.resize(rows.size());
  w.values.assign(rows.size(), cplx(0.0));
  std::vector<char> seen(rows.size(), 0);
  if (*scheme == Scheme::Quadratic) {
    w.mu_axis = u1;
    w.nu_axis = u2;
  } else {
    w.theta_axis = u1;
  }
  for (const auto& r : rows) {
    const std::size_t ix = index_of(ux, r[cx]);
    std::size_t idx;
    if (*scheme == Scheme::Quadratic)
      idx = (index_of(u1, r[cm]) * u2.size() + index_of(u2, r[cn])) * nx + ix;
    else
      idx = index_of(u1, r[col["theta"]]) * nx + ix;
    if (seen[idx]) bad("tomogram CSV: duplicate lattice point");
    seen[idx] = 1;
    w.points[idx] = {r[cx], r[cm], r[cn]};
    w.values[idx] = value(r);
  }
  w.validate();
  return file;
}

void write_phase_csv(std::ostream& out, const PhaseSpaceFunction& f) {
  const auto& g = f.grid();
  out << "q,p,re,im\n" << std::setprecision(17);
  for (int i = 0; i < g.n_q; ++i)
    for (int j = 0; j < g.n_p; ++j) {
      const cplx v = f.values()(i, j);
      out << g.q(i) << ',' << g.p(j) << ',' << v.real() << ',' << v.imag() << '\n';
    }
}

namespace {

// "2.5", "pi", "-pi", "2pi", "pi/2", "-3*pi/4"
double parse_number(std::string_view s) {
  std::string t = trim(s);
  if (t.empty()) bad("range: empty bound");
  double sign = 1.0;
  if (t[0] == '-' || t[0] == '+') {
    if (t[0] == '-') sign = -1.0;
    t.erase(0, 1);
  }
  const auto pi_pos = t.find("pi");
  if (pi_pos == std::string::npos) return sign * to_double(t, "range");
  std::string factor = t.substr(0, pi_pos);
  std::string rest = t.substr(pi_pos + 2);
  if (!factor.empty() && factor.back() == '*') factor.pop_back();
  double v = kPi * (factor.empty() ? 1.0 : to_double(factor, "range"));
  if (!rest.empty()) {
    if (rest[0] != '/') bad("range: cannot parse '" + t + "'");
    v /= to_double(std::string_view(rest).substr(1), "range");
  }
  return sign * v;
}

}  // namespace

std::vector<double> parse_range(std::string_view spec, bool half_open) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3) bad("range: expected lo:hi:count, got '" + std::string(spec) + "'");
  const double lo = parse_number(parts[0]);
  const double hi = parse_number(parts[1]);
  const double count = to_double(parts[2], "range count");
  if (count < 1 || count != std::floor(count)) bad("range: count must be a positive integer");
  const int n = static_cast<int>(count);
  if (!(hi > lo) && n > 1) bad("range: need lo < hi");
  if (n == 1) return {lo};
  if (!half_open) return linspace(lo, hi, n);
  std::vector<double> v(n);
  for (int k = 0; k < n; ++k) v[k] = lo + (hi - lo) * k / n;
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace tomo::io
