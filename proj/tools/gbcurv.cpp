#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>

#include "curvmeasure/curvature.hpp"
#include "curvmeasure/error.hpp"
#include "curvmeasure/fd_eigen.hpp"
#include "curvmeasure/report.hpp"
#include "curvmeasure/spectra.hpp"
#include "curvmeasure/surface_file.hpp"

using namespace curvmeasure;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitUsage = 64;

struct Output {
  bool json = false;
  std::string report_path;
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

int emit(const Output& o, const std::string& command, const Json& args, const std::string& digest,
         const Json& results, std::optional<bool> pass, const Json& tolerances,
         const std::string& final_line = {}) {
  Json report = {{"command", command}, {"arguments", args},   {"inputs_digest", digest},
                 {"results", results}, {"tolerances", tolerances}};
  if (pass) report["pass"] = *pass;
  std::string text = o.json ? render_json(report) : render_text(report);
  if (!o.json && !final_line.empty()) text += final_line + "\n";
  write_text(o.report_path, text);
  return !pass || *pass ? kExitPass : kExitFail;
}

std::string file_digest(const std::string& path) { return fnv1a64_hex(read_file(path)); }

std::vector<double> log_radii(double rmin, double rmax, int n) {
  if (!(rmin > 0) || !(rmax > rmin) || n < 2) throw ValidationError("radii", "need 0 < rmin < rmax and samples >= 2");
  std::vector<double> r(n);
  for (int i = 0; i < n; ++i) r[i] = rmin * std::pow(rmax / rmin, static_cast<double>(i) / (n - 1));
  return r;
}

std::string fmt_fit(const CountingReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "fit: c0 = %.17g +/- %.3g, p = %.6g, 95%% interval [%.6g, %.6g], 0.25 %s",
                r.c0, r.c0_stderr, r.p, r.p_lo, r.p_hi,
                r.quarter_in_interval ? "inside interval" : "outside interval");
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curvature measures of glued surfaces and spectra of doubles"};
  app.require_subcommand(1);
  app.fallthrough();
  Output out;
  app.add_flag("--json", out.json, "Emit the report as JSON");
  app.add_option("--report", out.report_path, "Write the report to this file instead of stdout");

  std::string file, seam_id, region = "all", domain_name, bc_name = "double", constant = "paper", csv_path;
  double verify_tol = 0, measure_tol = 0, quad_tol = 0, poly_tol = 0, mtol = 0;
  double tx = 0, ty = 0, t_seam = 0, rmin = 0, rmax = 0, tmax = -1;
  int samples = 8, fd_grid = 0, count = 20;
  std::vector<double> lengths, invariance, size, t_values;
  ConjectureOptions copt;

  auto* verify = app.add_subcommand("verify", "Check total curvature against 2 pi chi");
  verify->add_option("file", file, "Surface file")->required();
  verify->add_option("--tol", verify_tol, "Defect tolerance")->default_val(1e-5);
  verify->add_option("--measure-tol", mtol, "Quadrature tolerance")->default_val(1e-10);

  auto* measure = app.add_subcommand("measure", "Curvature measure of a region");
  measure->add_option("file", file, "Surface file")->required();
  measure->add_option("--region", region, "all; none; patch:ID[:s1a:s1b:s2a:s2b]; seam:ID[:t0:t1]; cone:ID");
  measure->add_option("--tol", measure_tol, "Quadrature tolerance")->default_val(1e-9);

  auto* quad = app.add_subcommand("quadcheck", "Geodesic quadrilateral angle identity across a seam");
  quad->add_option("file", file, "Surface file")->required();
  quad->add_option("--seam", seam_id, "Seam id")->required();
  quad->add_option("--tx", tx, "Seam parameter of the first foot")->default_val(0.25);
  quad->add_option("--ty", ty, "Seam parameter of the second foot")->default_val(0.75);
  quad->add_option("--lengths", lengths, "Perpendicular lengths x1,y1,x2,y2")->delimiter(',')->required();
  quad->add_option("--invariance", invariance, "Common perpendicular lengths for the invariance check")
      ->delimiter(',');
  quad->add_option("--tol", quad_tol, "Defect tolerance")->default_val(1e-5);

  auto* disc = app.add_subcommand("discasym", "Area of small balls centred on a seam");
  disc->add_option("file", file, "Surface file")->required();
  disc->add_option("--seam", seam_id, "Seam id")->required();
  disc->add_option("--t", t_seam, "Seam parameter of the centre")->default_val(0.5);
  disc->add_option("--rmin", rmin, "Smallest radius")->default_val(0.02);
  disc->add_option("--rmax", rmax, "Largest radius")->default_val(0.1);
  disc->add_option("--samples", samples, "Number of radii")->default_val(8);
  disc->add_option("--csv", csv_path, "CSV of r, area, residual");

  auto* spec = app.add_subcommand("spectrum", "Eigenvalues of a model domain");
  spec->add_option("--domain", domain_name, "square, rectangle, equilateral, isosceles-right, disc")->required();
  spec->add_option("--size", size, "Side length(s) or radius")->delimiter(',');
  spec->add_option("--bc", bc_name, "dirichlet, neumann, double")->default_val("double");
  spec->add_option("--tmax", tmax, "Largest eigenvalue");
  spec->add_option("--fd-grid", fd_grid, "Use the finite-element oracle with this many cells per side");
  spec->add_option("--count", count, "Number of finite-element eigenvalues")->default_val(20);
  spec->add_option("--out", csv_path, "CSV output file (default stdout)");

  auto* conj = app.add_subcommand("conjecture", "Averaged counting error of the double");
  conj->add_option("--domain", domain_name, "Domain")->required();
  conj->add_option("--size", size, "Side length(s) or radius")->delimiter(',');
  conj->add_option("--tmax", tmax, "Largest t")->required();
  conj->add_option("--constant", constant, "paper, corner or custom:<c>")->default_val("paper");
  conj->add_option("--tmin", copt.t_min, "Smallest t")->default_val(10.0);
  conj->add_option("--grid", copt.grid, "Number of log-spaced t values")->default_val(2000);
  conj->add_option("--bootstrap", copt.bootstrap, "Bootstrap resamples")->default_val(400);
  conj->add_option("--seed", copt.seed, "Bootstrap seed")->default_val(20240917);
  conj->add_option("--out", csv_path, "CSV of t, N, Ntilde, diff, A");

  auto* weyl = app.add_subcommand("weyl", "Two-term Weyl residuals of a model domain");
  weyl->add_option("--domain", domain_name, "Domain")->required();
  weyl->add_option("--size", size, "Side length(s) or radius")->delimiter(',');
  weyl->add_option("--bc", bc_name, "dirichlet, neumann, double")->default_val("double");
  weyl->add_option("--t", t_values, "t values")->delimiter(',')->required();

  auto* poly = app.add_subcommand("polyhedron", "Angle defects of a polyhedral surface");
  poly->add_option("file", file, "Surface file with a polyhedron section")->required();
  poly->add_option("--tol", poly_tol, "Defect tolerance")->default_val(1e-9);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (command == "verify") {
      const std::string digest = file_digest(file);
      const SurfaceDocument doc = load_surface(file);
      Json results = Json::object();
      bool pass = true;
      if (!doc.patches.empty()) {
        const CurvatureMeasure m = compute_curvature_measure(build(doc), mtol);
        const GaussBonnetReport r = verify_gauss_bonnet(m, verify_tol);
        results["gauss_bonnet"] = to_json(r);
        results["parts"] = to_json(m);
        pass = pass && r.pass;
      }
      if (doc.polyhedron) {
        const PolyhedronReport r = polyhedron_curvature(doc.polyhedron->vertices, doc.polyhedron->chi, verify_tol);
        results["polyhedron"] = to_json(r);
        pass = pass && r.pass;
      }
      if (doc.patches.empty() && !doc.polyhedron) throw ValidationError("patches", "no patches to glue");
      return emit(out, command, {{"file", file}}, digest, results, pass, {{"defect", verify_tol}, {"quadrature", mtol}});
    }
    if (command == "measure") {
      const std::string digest = file_digest(file);
      const CurvatureMeasure m = compute_curvature_measure(build(load_surface(file)), std::min(measure_tol, 1e-10));
      const MeasureValue v = measure_of(m, parse_region(m.surface(), region), measure_tol);
      return emit(out, command, {{"file", file}, {"region", region}}, digest, to_json(v), std::nullopt,
                  {{"quadrature", measure_tol}});
    }
    if (command == "quadcheck") {
      const std::string digest = file_digest(file);
      const GluedSurface s = build(load_surface(file));
      const std::size_t k = s.seam_index(seam_id);
      if (lengths.size() != 4) throw ValidationError("lengths", "expected four lengths x1,y1,x2,y2");
      const QuadReport q = quadrilateral_angle_check(s, k, tx, ty, lengths, quad_tol);
      Json results = {{"quadrilateral", to_json(q)}};
      bool pass = q.pass;
      Json args = {{"file", file}, {"seam", seam_id}, {"tx", tx}, {"ty", ty}, {"lengths", lengths}};
      if (!invariance.empty()) {
        const LengthInvarianceReport li = length_invariance_check(s, k, tx, ty, invariance);
        results["length_invariance"] = to_json(li);
        args["invariance"] = invariance;
        pass = pass && li.pass;
      }
      return emit(out, command, args, digest, results, pass, {{"defect", quad_tol}});
    }
    if (command == "discasym") {
      const std::string digest = file_digest(file);
      const GluedSurface s = build(load_surface(file));
      const DiscAsymReport r = disc_area_asymptotics(s, s.seam_index(seam_id), t_seam, log_radii(rmin, rmax, samples));
      if (!csv_path.empty()) {
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < r.radii.size(); ++i) rows.push_back({r.radii[i], r.area[i], r.residuals[i]});
        write_text(csv_path, render_csv({"r", "area", "residual"}, rows));
      }
      return emit(out, command,
                  {{"file", file}, {"seam", seam_id}, {"t", t_seam}, {"rmin", rmin}, {"rmax", rmax}, {"samples", samples}},
                  digest, to_json(r), r.pass, {{"c2_relative", 0.005}, {"c3_relative", 0.02}});
    }
    if (command == "spectrum" || command == "weyl" || command == "conjecture") {
      const DomainSpec d = DomainSpec::parse(domain_name, size);
      const Json dom = {{"domain", d.name()}, {"size", d.shape == Shape::Rectangle ? Json{d.a, d.b} : Json{d.a}}};
      if (command == "spectrum") {
        const BoundaryCondition bc = parse_boundary_condition(bc_name);
        Json args = dom;
        args["bc"] = to_string(bc);
        std::string csv;
        Json results;
        if (fd_grid > 0) {
          const FdResult fr = fd_eigenvalues(d, bc, fd_grid, count);
          const double top = fr.eigenvalues.back() * 2 + 100;
          const std::vector<double> exact = d.shape == Shape::Disc ? std::vector<double>{} : spectrum(d, bc, top);
          std::vector<std::vector<double>> rows;
          double worst = 0;
          for (std::size_t i = 0; i < fr.eigenvalues.size(); ++i) {
            const double e = exact[i];
            const double rel = e == 0 ? std::abs(fr.eigenvalues[i]) : std::abs(fr.eigenvalues[i] - e) / e;
            worst = std::max(worst, rel);
            rows.push_back({static_cast<double>(i + 1), fr.eigenvalues[i], e, rel});
          }
          csv = render_csv({"index", "fd", "exact", "rel_error"}, rows);
          args["fd_grid"] = fd_grid;
          args["count"] = count;
          results = {{"count", fr.eigenvalues.size()}, {"iterations", fr.iterations},
                     {"unknowns", fr.unknowns}, {"max_rel_error", worst}};
        } else {
          if (!(tmax >= 0)) throw ValidationError("tmax", "--tmax (nonnegative) or --fd-grid is required");
          const std::vector<double> ev = spectrum(d, bc, tmax);
          std::vector<std::vector<double>> rows;
          for (const auto& g : group_multiplicities(ev)) rows.push_back({g.value, static_cast<double>(g.multiplicity)});
          csv = render_csv({"eigenvalue", "multiplicity"}, rows);
          args["tmax"] = tmax;
          results = {{"count", ev.size()}, {"distinct", rows.size()}};
        }
        if (csv_path.empty() || csv_path == "-") {
          write_text("", csv);
          return kExitPass;
        }
        write_text(csv_path, csv);
        return emit(out, command, args, fnv1a64_hex(args.dump()), results, std::nullopt, Json::object());
      }
      if (command == "weyl") {
        const BoundaryCondition bc = parse_boundary_condition(bc_name);
        Json args = dom;
        args["bc"] = to_string(bc);
        args["t"] = t_values;
        Json rows = Json::array();
        for (const auto& r : weyl_ivrii_residuals(d, bc, t_values))
          rows.push_back({{"t", r.t}, {"n", r.n}, {"residual", r.residual}, {"scaled", r.scaled},
                          {"uncorrected", r.uncorrected}});
        return emit(out, command, args, fnv1a64_hex(args.dump()),
                    {{"rows", rows}, {"boundary_coefficient", d.perimeter() / (4 * std::numbers::pi)}}, std::nullopt,
                    Json::object());
      }
      const ConstantMode mode = ConstantMode::parse(constant);
      const CountingReport r = conjecture_test(d, tmax, mode, copt);
      if (!csv_path.empty()) {
        std::vector<std::vector<double>> rows;
        for (const auto& row : r.rows) rows.push_back({row.t, row.n, row.ntilde, row.diff, row.a});
        write_text(csv_path, render_csv({"t", "N", "Ntilde", "diff", "A"}, rows));
      }
      Json args = dom;
      args["tmax"] = tmax;
      args["constant"] = mode.to_string();
      args["tmin"] = copt.t_min;
      args["grid"] = copt.grid;
      args["bootstrap"] = copt.bootstrap;
      args["seed"] = copt.seed;
      return emit(out, command, args, fnv1a64_hex(args.dump()), to_json(r), std::nullopt,
                  {{"consistent_if_p_at_least", 0.20}, {"mismatch_tail_std_factor", 3.0}}, fmt_fit(r));
    }
    if (command == "polyhedron") {
      const std::string digest = file_digest(file);
      const SurfaceDocument doc = load_surface(file);
      if (!doc.polyhedron) throw ValidationError("polyhedron", "the file has no polyhedron section");
      const PolyhedronReport r = polyhedron_curvature(doc.polyhedron->vertices, doc.polyhedron->chi, poly_tol);
      return emit(out, command, {{"file", file}}, digest, to_json(r), r.pass, {{"defect", poly_tol}});
    }
  } catch (const ValidationError& e) {
    if (out.json) {
      Json v = Json::array();
      for (const auto& x : e.violations()) v.push_back({{"path", x.path}, {"message", x.message}});
      write_text("", render_json({{"command", command}, {"error", {{"kind", "validation"}, {"violations", v}}}}));
    }
    std::cerr << "gbcurv: " << e.what() << "\n";
    return kExitInput;
  } catch (const InputError& e) {
    if (out.json)
      write_text("", render_json({{"command", command}, {"error", {{"kind", "input"}, {"message", e.what()}}}}));
    std::cerr << "gbcurv: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    if (out.json)
      write_text("", render_json({{"command", command}, {"error", {{"kind", "numerical"}, {"message", e.what()}}}}));
    std::cerr << "gbcurv: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}
