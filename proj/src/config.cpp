#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "jsflow/errors.hpp"
#include "jsflow/sim.hpp"

namespace jsflow::sim {

namespace {

struct KeySpec {
  const char* key;
  const char* value;
  const char* section;
};

// Order here is the order print-config uses.
constexpr KeySpec kKeys[] = {
    {"Re", "0.0325", "model (dimensionless block)"},
    {"Wi", "0.45", nullptr},
    {"mu_s", "0.03", nullptr},
    {"xi", "0.7", nullptr},
    {"q", "1", nullptr},
    {"rho_ratio", "6.3", nullptr},
    {"alpha", "4.115", nullptr},
    {"K", "auto", nullptr},
    {"r_s", "", "model (dimensional block; leave empty to use the dimensionless block)"},
    {"r_c", "", nullptr},
    {"rho_s", "", nullptr},
    {"rho_f", "", nullptr},
    {"eta_s", "", nullptr},
    {"eta_p", "", nullptr},
    {"lambda", "", nullptr},
    {"g", "", nullptr},
    {"height", "16", "mesh"},
    {"h_near", "0.05", nullptr},
    {"h_far", "0.5", nullptr},
    {"refine", "0", nullptr},
    {"mesh_seed", "12345", nullptr},
    {"mesh_file", "", nullptr},
    {"h_t", "0.001", "time stepping"},
    {"gradient_recovery", "consistent", nullptr},
    {"t_end", "30", nullptr},
    {"threads", "0", nullptr},
    {"seed", "12345", nullptr},
    {"out_dir", ".", "outputs"},
    {"series_every", "1", nullptr},
    {"probe_every", "10", nullptr},
    {"wake_every", "100", nullptr},
    {"vtk_every", "0", nullptr},
    {"checkpoint_every", "0", nullptr},
    {"restart", "", nullptr},
    {"probes", "standard", nullptr},
    {"kappa_end", "30", "rheology"},
    {"kappa_points", "601", nullptr},
    {"xi_list", "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8", nullptr},
    {"channel_nodes", "101", "shear1d"},
    {"wall_speed", "8", nullptr},
    {"channel_Re", "0.01", nullptr},
    {"ramp_time", "10", nullptr},
    {"shear_h", "0.0005", nullptr},
    {"steady_tol", "1e-9", nullptr},
    {"shear_t_max", "400", nullptr},
};

constexpr const char* kDimensionless[] = {"Re", "Wi", "mu_s", "rho_ratio", "alpha"};
constexpr const char* kDimensional[] = {"r_s", "r_c", "rho_s", "rho_f", "eta_s", "eta_p", "lambda", "g"};

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

double parse_double(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  double x = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), x);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size() || !std::isfinite(x))
    throw InvalidParameter("'" + key + "' needs a number, got '" + v + "'");
  return x;
}

Vec2 parse_point(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw InvalidParameter("probe position must be r,z: '" + text + "'");
  return {parse_double("probes", text.substr(0, comma)), parse_double("probes", text.substr(comma + 1))};
}

}  // namespace

DerivedGroups derive_dimensionless(const DimensionalInputs& in, double xi, double q) {
  for (double v : {in.r_s, in.r_c, in.rho_s, in.rho_f, in.eta_s, in.eta_p, in.lambda, in.g})
    if (!(v > 0.0)) throw InvalidParameter("dimensional inputs must all be positive");
  if (!(in.rho_s > in.rho_f)) throw InvalidParameter("sphere density must exceed fluid density for the sphere to fall");
  DerivedGroups d;
  const double eta = in.eta_s + in.eta_p;
  d.alpha = in.r_c / in.r_s;
  d.K = sphere::wall_correction(d.alpha);
  d.U_N = 2.0 * in.r_s * in.r_s * (in.rho_s - in.rho_f) * in.g / (9.0 * eta * d.K);
  d.params.Re = in.rho_f * d.U_N * in.r_s / eta;
  d.params.Wi = in.lambda * d.U_N / in.r_s;
  d.params.mu_s = in.eta_s / eta;
  d.params.xi = xi;
  d.params.q = q;
  d.rho_ratio = in.rho_s / in.rho_f;
  d.params.validate();
  return d;
}

RunConfig::RunConfig() {
  for (const auto& k : kKeys) values_[k.key] = k.value;
}

void RunConfig::set(const std::string& key_in, const std::string& value_in) {
  const std::string key = trim(key_in), value = trim(value_in);
  if (!values_.count(key)) throw InvalidParameter("unknown configuration key '" + key + "'");
  values_[key] = value;
  explicit_[key] = true;
}

void RunConfig::load(std::istream& is) {
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw FormatError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    set(line.substr(0, eq), line.substr(eq + 1));
  }
}

void RunConfig::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open config file " + path.string());
  load(in);
}

std::string RunConfig::to_text() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& k : kKeys) {
    if (k.section) {
      os << (first ? "" : "\n") << "# " << k.section << '\n';
      first = false;
    }
    os << k.key << " = " << values_.at(k.key) << '\n';
  }
  return os.str();
}

std::string RunConfig::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw InvalidParameter("unknown configuration key '" + key + "'");
  return it->second;
}

double RunConfig::number(const std::string& key) const { return parse_double(key, get(key)); }

long RunConfig::integer(const std::string& key) const {
  const double x = number(key);
  if (x != std::floor(x)) throw InvalidParameter("'" + key + "' needs an integer");
  return long(x);
}

bool RunConfig::flag(const std::string& key) const {
  const std::string v = get(key);
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off" || v.empty()) return false;
  throw InvalidParameter("'" + key + "' needs a boolean");
}

DerivedGroups RunConfig::groups() const {
  validate();
  DerivedGroups d;
  if (!get("r_s").empty()) {
    DimensionalInputs in{number("r_s"),   number("r_c"),   number("rho_s"),  number("rho_f"),
                         number("eta_s"), number("eta_p"), number("lambda"), number("g")};
    d = derive_dimensionless(in, number("xi"), number("q"));
  } else {
    d.params = JsParams{number("Re"), number("Wi"), number("mu_s"), number("xi"), number("q")};
    d.params.validate();
    d.rho_ratio = number("rho_ratio");
    d.alpha = number("alpha");
    d.K = get("K") == "auto" ? sphere::wall_correction(d.alpha) : number("K");
    d.U_N = 1.0;
  }
  if (get("K") != "auto") d.K = number("K");
  return d;
}

mesh::SphereMeshOptions RunConfig::mesh_options() const {
  mesh::SphereMeshOptions o;
  o.alpha = groups().alpha;
  o.height = number("height");
  o.h_near = number("h_near");
  o.h_far = number("h_far");
  o.seed = unsigned(integer("mesh_seed"));
  return o;
}

std::vector<Probe> RunConfig::probes() const {
  const std::string spec = get("probes");
  if (spec.empty() || spec == "none") return {};
  if (spec == "standard") return {{"x1", {1.2293, 0.0}}, {"x2", {0.5, 0.5 * number("height") - 0.5}}};
  std::vector<Probe> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ';')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto at = item.find('@');
    if (at == std::string::npos || at == 0) throw InvalidParameter("probe must be name@r,z: '" + item + "'");
    const std::string name = item.substr(0, at);
    if (name.find_first_of("/\\ ") != std::string::npos) throw InvalidParameter("bad probe name '" + name + "'");
    out.push_back({name, parse_point(item.substr(at + 1))});
  }
  return out;
}

fem::GradientRecovery RunConfig::gradient_recovery() const {
  const std::string v = get("gradient_recovery");
  if (v == "consistent") return fem::GradientRecovery::Consistent;
  if (v == "lumped") return fem::GradientRecovery::Lumped;
  throw InvalidParameter("gradient_recovery must be consistent or lumped, got '" + v + "'");
}

void RunConfig::validate() const {
  bool dimensional = false, any_dimensional = false, dimensionless = false;
  for (const char* k : kDimensional) {
    if (!get(k).empty()) any_dimensional = true;
    if (is_set(k) && !get(k).empty()) dimensional = true;
  }
  for (const char* k : kDimensionless) dimensionless |= is_set(k);
  if (dimensional && dimensionless)
    throw InvalidParameter("set either the dimensionless groups or the dimensional inputs, not both");
  if (any_dimensional)
    for (const char* k : kDimensional)
      if (get(k).empty()) throw InvalidParameter(std::string("dimensional block is missing '") + k + "'");
  if (!(number("h_t") > 0.0)) throw InvalidParameter("h_t must be positive");
  if (!(number("t_end") >= 0.0)) throw InvalidParameter("t_end must be non-negative");
  for (const char* k : {"series_every", "probe_every", "wake_every", "vtk_every", "checkpoint_every", "refine", "threads"})
    if (integer(k) < 0) throw InvalidParameter(std::string("'") + k + "' must be non-negative");
  (void)gradient_recovery();
  if (integer("series_every") < 1) throw InvalidParameter("series_every must be at least 1");
}

}  // namespace jsflow::sim
