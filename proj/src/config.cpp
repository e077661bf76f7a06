#include "hencky/config.hpp"

#include "hencky/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace hencky::config {

namespace {

std::string trim(const std::string& s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v)
{
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  return x;
}

int to_int(const std::string& key, const std::string& v)
{
  int x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& v)
{
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

} // namespace

RunConfig::RunConfig() { spec.material = materials::MaterialParams::reference_set(materials::Model::ExpHencky); }

materials::MaterialParams RunConfig::material() const
{
  materials::MaterialParams m = spec.material;
  if (spec.id == bench::CaseId::MPoint)
    m.dim = dim == 0 ? 3 : dim;
  else
    m.dim = bench::case_dim(spec.id);
  return m;
}

bench::CaseSpec RunConfig::case_spec() const
{
  bench::CaseSpec s = spec;
  s.material = material();
  return s;
}

int RunConfig::resolved_threads() const { return threads > 0 ? threads : fem::threads_from_environment(); }

void RunConfig::validate() const
{
  if (dim != 0 && dim != 2 && dim != 3) throw ConfigError("dim must be 2 or 3");
  if (dim != 0 && spec.id != bench::CaseId::MPoint && dim != bench::case_dim(spec.id))
    throw ConfigError("dim = " + std::to_string(dim) + " conflicts with case " + bench::to_string(spec.id) +
                      ", which is " + std::to_string(bench::case_dim(spec.id)) + "D");
  case_spec().validate();
  newton.validate();
  if (threads < 0 || threads > 256) throw ConfigError("threads must be in [0, 256]");
  if (!(stretch_min > 0.0) || !(stretch_max > stretch_min)) throw ConfigError("need 0 < stretch_min < stretch_max");
  if (points < 2) throw ConfigError("points must be >= 2");
  if (out.empty()) throw ConfigError("out must not be empty");
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& value)
{
  auto& m = c.spec.material;
  if (key == "case") c.spec.id = bench::case_from_string(value);
  else if (key == "model") {
    try {
      m.model = materials::model_from_string(value);
    } catch (const Error&) {
      throw ConfigError("model: unknown model '" + value + "'");
    }
  }
  else if (key == "dim") c.dim = to_int(key, value);
  else if (key == "mu") m.mu = to_double(key, value);
  else if (key == "kappa") m.kappa = to_double(key, value);
  else if (key == "k") m.k = to_double(key, value);
  else if (key == "khat") m.khat = to_double(key, value);
  else if (key == "jm") m.jm = to_double(key, value);
  else if (key == "mesh_density") c.spec.mesh_density = to_int(key, value);
  else if (key == "steps") c.spec.steps = to_int(key, value);
  else if (key == "target") c.spec.target = to_double(key, value);
  else if (key == "tol_abs") c.newton.tol_abs = to_double(key, value);
  else if (key == "tol_rel") c.newton.tol_rel = to_double(key, value);
  else if (key == "tol_increment") c.newton.tol_increment = to_double(key, value);
  else if (key == "max_iter") c.newton.max_iter = to_int(key, value);
  else if (key == "max_step_cuts") c.newton.max_step_cuts = to_int(key, value);
  else if (key == "threads") c.threads = to_int(key, value);
  else if (key == "out") c.out = value;
  else if (key == "stretch_min") c.stretch_min = to_double(key, value);
  else if (key == "stretch_max") c.stretch_max = to_double(key, value);
  else if (key == "points") c.points = to_int(key, value);
  else if (key == "input") c.input = value;
  else if (key == "verify_structural") c.verify_structural = to_bool(key, value);
  else throw ConfigError("unknown key '" + key + "'");
}

RunConfig parse_config(std::istream& in, RunConfig base)
{
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    try {
      apply_setting(base, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base)
{
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path);
  try {
    return parse_config(in, std::move(base));
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void write_config(std::ostream& out, const RunConfig& c)
{
  const auto& m = c.spec.material;
  out << std::setprecision(17);
  out << "case = " << bench::to_string(c.spec.id) << '\n';
  out << "model = " << materials::to_string(m.model) << '\n';
  out << "dim = " << c.dim << '\n';
  out << "mu = " << m.mu << '\n';
  out << "kappa = " << m.kappa << '\n';
  out << "k = " << m.k << '\n';
  out << "khat = " << m.khat << '\n';
  out << "jm = " << m.jm << '\n';
  out << "mesh_density = " << c.spec.mesh_density << '\n';
  out << "steps = " << c.spec.steps << '\n';
  out << "target = " << c.spec.target << '\n';
  out << "tol_abs = " << c.newton.tol_abs << '\n';
  out << "tol_rel = " << c.newton.tol_rel << '\n';
  out << "tol_increment = " << c.newton.tol_increment << '\n';
  out << "max_iter = " << c.newton.max_iter << '\n';
  out << "max_step_cuts = " << c.newton.max_step_cuts << '\n';
  out << "threads = " << c.threads << '\n';
  out << "out = " << c.out << '\n';
  out << "stretch_min = " << c.stretch_min << '\n';
  out << "stretch_max = " << c.stretch_max << '\n';
  out << "points = " << c.points << '\n';
  out << "input = " << c.input << '\n';
  out << "verify_structural = " << (c.verify_structural ? "true" : "false") << '\n';
}

std::string to_text(const RunConfig& cfg)
{
  std::ostringstream s;
  write_config(s, cfg);
  return s.str();
}

} // namespace hencky::config
