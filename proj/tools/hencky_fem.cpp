// hencky_fem: command-line driver for the benchmark cases, the material-point
// driver, calibration and the self-verification suite.

#include "hencky/bench.hpp"
#include "hencky/config.hpp"
#include "hencky/error.hpp"
#include "hencky/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>

namespace {

using namespace hencky;

enum Exit { kOk = 0, kConfig = 1, kAborted = 2, kVerifyFailed = 3 };

struct Overrides
{
  std::string config_path;
  std::map<std::string, std::string> values;
};

void add_common(CLI::App* sub, Overrides& o)
{
  sub->add_option("config", o.config_path, "key = value settings file")->check(CLI::ExistingFile);
  const std::pair<const char*, const char*> flags[] = {
      {"--case", "case"},       {"--model", "model"}, {"--mu", "mu"},     {"--kappa", "kappa"},
      {"--k", "k"},             {"--khat", "khat"},   {"--jm", "jm"},     {"--mesh-density", "mesh_density"},
      {"--steps", "steps"},     {"--target", "target"}, {"--out", "out"}, {"--threads", "threads"},
      {"--dim", "dim"},         {"--input", "input"}, {"--points", "points"}};
  for (const auto& [flag, key] : flags) {
    const std::string k = key;
    sub->add_option_function<std::string>(flag, [&o, k](const std::string& v) { o.values[k] = v; },
                                          "overrides '" + k + "'");
  }
  sub->add_flag_function("--no-structural", [&o](std::int64_t) { o.values["verify_structural"] = "false"; },
                         "verify: skip the structural benchmarks");
}

config::RunConfig resolve(const Overrides& o)
{
  config::RunConfig c;
  if (!o.config_path.empty()) c = config::load_config(o.config_path);
  for (const auto& [k, v] : o.values) {
    try {
      config::apply_setting(c, k, v);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("command line: ") + e.what());
    }
  }
  c.validate();
  return c;
}

std::filesystem::path prepare_out(const config::RunConfig& c)
{
  std::filesystem::path dir(c.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + c.out + ": " + ec.message());
  return dir;
}

std::ofstream open_report(const std::filesystem::path& dir, const config::RunConfig& c)
{
  std::ofstream r(dir / "report.txt");
  if (!r) throw IoError("cannot write " + (dir / "report.txt").string());
  r << "# settings\n" << config::to_text(c) << '\n';
  return r;
}

int cmd_run(const config::RunConfig& c)
{
  const bench::CaseSpec spec = c.case_spec();
  if (spec.id == bench::CaseId::MPoint) throw ConfigError("case mpoint has no mesh; use the mpoint command");
  const auto dir = prepare_out(c);
  const std::string stem = bench::output_stem(spec);
  const auto run = bench::run_case(spec, c.newton, c.resolved_threads());
  const auto& rep = run.result.report;

  std::ofstream r = open_report(dir, c);
  r << "# " << stem << ": " << run.setup.mesh.num_elements() << " elements, " << run.setup.mesh.num_nodes()
    << " nodes, " << run.setup.mesh.num_dofs() << " dofs, " << run.setup.dofs.free_dofs().size() << " free\n";
  r << "step,factor,iterations,cuts,displacement,resultant,final_residual\n" << std::setprecision(10);
  for (const auto& s : rep.steps)
    r << s.step << ',' << s.factor << ',' << s.iterations << ',' << s.cuts << ',' << s.displacement << ','
      << s.resultant << ',' << (s.residuals.empty() ? 0.0 : s.residuals.back()) << '\n';
  r << "# completed " << (rep.completed ? "yes" : "no") << (rep.failure.empty() ? "" : ": " + rep.failure) << '\n';
  r << "# wall " << rep.wall_seconds << " s, max iterations " << rep.max_iterations() << '\n';

  bench::write_curves((dir / (stem + ".csv")).string(), run.curve);
  if (!run.result.system.gauss.empty())
    bench::write_fields((dir / (stem + ".vtk")).string(), run.setup.mesh, run.result.u, run.result.system.gauss, stem);

  std::cout << stem << ": " << rep.steps.size() << " steps, max " << rep.max_iterations() << " iterations, "
            << std::setprecision(4) << rep.wall_seconds << " s\n";
  if (!rep.completed) {
    std::cerr << "aborted: " << rep.failure << '\n';
    return kAborted;
  }
  return kOk;
}

int cmd_mpoint(config::RunConfig c)
{
  c.spec.id = bench::CaseId::MPoint;
  const auto material = c.material();
  const auto dir = prepare_out(c);
  std::vector<double> stretches;
  for (int i = 0; i < c.points; ++i)
    stretches.push_back(c.stretch_min + (c.stretch_max - c.stretch_min) * i / (c.points - 1));
  const auto pts = bench::material_point_uniaxial(material, stretches);
  const std::string stem = bench::output_stem(c.case_spec());

  std::ofstream r = open_report(dir, c);
  r << "stretch,lateral_stretch,nominal_stress,converged\n" << std::setprecision(10);
  int failed = 0;
  for (const auto& p : pts) {
    r << p.stretch << ',' << p.lateral << ',' << p.nominal << ',' << (p.converged ? 1 : 0) << '\n';
    failed += !p.converged;
  }
  bench::write_curves((dir / (stem + ".csv")).string(), bench::uniaxial_curve(material, pts));
  std::cout << stem << ": " << pts.size() - failed << " of " << pts.size() << " points\n";
  if (failed) {
    std::cerr << failed << " points did not converge\n";
    return kAborted;
  }
  return kOk;
}

int cmd_fit(const config::RunConfig& c)
{
  if (c.input.empty()) throw ConfigError("fit needs an input CSV (--input or 'input =')");
  std::ifstream in(c.input);
  if (!in) throw IoError("cannot read " + c.input);
  const auto rec = bench::read_curves(in);
  if (rec.columns.size() < 2) throw IoError(c.input + ": need stretch and nominal stress columns");
  std::vector<std::pair<double, double>> data;
  // mpoint output carries the lateral stretch in column 1
  const auto named = std::find(rec.columns.begin(), rec.columns.end(), "nominal_stress");
  const size_t col = named == rec.columns.end() ? 1 : named - rec.columns.begin();
  for (const auto& row : rec.rows) data.emplace_back(row[0], row[col]);
  const auto fit = bench::fit_uniaxial(data);

  const auto dir = prepare_out(c);
  std::ofstream r = open_report(dir, c);
  r << std::setprecision(17) << "mu = " << fit.mu << "\nk = " << fit.k << "\nresidual = " << fit.residual
    << "\niterations = " << fit.iterations << '\n';
  bench::CurveRecord curve;
  curve.tag = "fit";
  curve.columns = {"stretch", "measured", "fitted"};
  for (const auto& [l, s] : data) curve.rows.push_back({l, s, bench::uniaxial_incompressible_stress(fit.mu, fit.k, l)});
  bench::write_curves((dir / "fit.csv").string(), curve);
  std::cout << std::setprecision(6) << "mu = " << fit.mu << " k = " << fit.k << " residual = " << fit.residual << '\n';
  return kOk;
}

int cmd_verify(const config::RunConfig& c)
{
  verify::Options opt;
  opt.structural = c.verify_structural;
  opt.threads = c.resolved_threads();
  bool ok = true;
  verify::run_all(opt, [&ok](const verify::Check& chk) {
    std::cout << verify::format(chk) << std::endl;
    ok = ok && chk.passed;
  });
  return ok ? kOk : kVerifyFailed;
}

int cmd_mesh_info(const config::RunConfig& c)
{
  const auto spec = c.case_spec();
  if (spec.id == bench::CaseId::MPoint) throw ConfigError("case mpoint has no mesh");
  const auto s = bench::generate_case(spec);
  std::cout << "elements=" << s.mesh.num_elements() << " nodes=" << s.mesh.num_nodes() << " dofs=" << s.mesh.num_dofs()
            << '\n';
  return kOk;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Finite strain benchmarks with exponentiated Hencky and reference models"};
  app.require_subcommand(1);
  Overrides o;
  auto* run = app.add_subcommand("run", "solve a finite element case; writes report.txt, <stem>.csv, <stem>.vtk");
  auto* mpoint = app.add_subcommand("mpoint", "homogeneous uniaxial curve of the material point");
  auto* fit = app.add_subcommand("fit", "fit mu and k of the incompressible uniaxial formula to a CSV");
  auto* ver = app.add_subcommand("verify", "run the verification suite");
  auto* info = app.add_subcommand("mesh-info", "print element, node and dof counts of a case");
  for (auto* s : {run, mpoint, fit, ver, info}) add_common(s, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    const config::RunConfig c = resolve(o);
    if (*run) return cmd_run(c);
    if (*mpoint) return cmd_mpoint(c);
    if (*fit) return cmd_fit(c);
    if (*ver) return cmd_verify(c);
    return cmd_mesh_info(c);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kConfig;
  } catch (const FitFailure& e) {
    std::cerr << "fit failed: " << e.what() << '\n';
    return kAborted;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kAborted;
  }
}
