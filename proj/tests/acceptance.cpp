#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <json.hpp>
#include <numbers>
#include <string>
#include <sys/wait.h>

#include "curvmeasure/bessel.hpp"
#include "curvmeasure/curvature.hpp"
#include "curvmeasure/fd_eigen.hpp"
#include "curvmeasure/spectra.hpp"
#include "curvmeasure/surface_file.hpp"

using namespace curvmeasure;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
const fs::path kData = CURVMEASURE_DATA_DIR;
const std::string kCli = GBCURV_PATH;

struct Outcome {
  bool pass;
  std::string detail;
};

GluedSurface surface(const std::string& name) { return build(load_surface(kData / "surfaces" / (name + ".json"))); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Run {
  int exit_code;  // -1 when killed by a signal
  std::string out;
};

Run run(const std::string& args, const std::string& env = {}) {
  const std::string cmd = env + (env.empty() ? "" : " ") + "'" + kCli + "' " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, {}};
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

// ---------------------------------------------------------------------------

Outcome gauss_bonnet_totality() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  std::string failed;
  for (const char* name : {"double_square", "double_disc", "two_hemispheres", "disc_hemisphere", "double_triangle"}) {
    const CurvatureMeasure m = compute_curvature_measure(surface(name));
    const double d = std::abs(m.total().value - 2 * kPi * m.surface().euler_characteristic());
    worst = std::max(worst, d);
    if (!(d <= 1e-5)) failed += std::string(" ") + name;
  }
  for (const char* name : {"cube", "tetrahedron"}) {
    const SurfaceDocument doc = load_surface(kData / "surfaces" / (std::string(name) + ".json"));
    const PolyhedronReport r = polyhedron_curvature(doc.polyhedron->vertices, doc.polyhedron->chi);
    const double d = std::abs(r.total - 2 * kPi * doc.polyhedron->chi);
    worst = std::max(worst, d);
    if (!(d <= 1e-5)) failed += std::string(" ") + name;
  }
  const double secs = seconds_since(t0);
  const bool pass = failed.empty() && secs <= 10;
  return {pass, fmt("max |mu(M) - 2 pi chi| = %.2e over 7 surfaces (tol 1e-5), %.2f s (limit 10 s)%s", worst, secs,
                    failed.empty() ? "" : (" failing:" + failed).c_str())};
}

Outcome decomposition() {
  const CurvatureMeasure dd = compute_curvature_measure(surface("double_disc"));
  const CurvatureMeasure hh = compute_curvature_measure(surface("two_hemispheres"));
  const CurvatureMeasure sq = compute_curvature_measure(surface("double_square"));
  const double e1 = std::abs(dd.seam_total().value - 4 * kPi), e2 = std::abs(dd.ac_total().value);
  const double e3 = std::abs(hh.ac_total().value - 4 * kPi), e4 = std::abs(hh.seam_total().value);
  double e5 = 0;
  for (const auto& a : sq.atoms()) e5 = std::max(e5, std::abs(a.mass - kPi));
  const bool pass = e1 <= 1e-6 && e2 <= 1e-8 && e3 <= 1e-6 && e4 <= 1e-8 && sq.atoms().size() == 4 && e5 <= 1e-12;
  return {pass, fmt("disc: |seam-4pi| %.1e, |ac| %.1e; hemispheres: |ac-4pi| %.1e, |seam| %.1e; square: %zu atoms, "
                    "max |atom-pi| %.1e",
                    e1, e2, e3, e4, sq.atoms().size(), e5)};
}

Outcome construction_identity() {
  double worst = 0, spread = 0;
  bool ok = true;
  auto quad = [&](const GluedSurface& s, double tx, double ty, std::vector<double> l) {
    const QuadReport q = quadrilateral_angle_check(s, 0, tx, ty, l);
    worst = std::max(worst, q.defect);
    ok = ok && q.defect <= 1e-5;
  };
  const GluedSurface strip = surface("flat_strip"), dd = surface("double_disc"), hh = surface("two_hemispheres");
  quad(strip, 0.25, 0.75, {0.1, 0.2, 0.1, 0.3});
  for (double arc : {0.02, 0.05, 0.1}) quad(dd, 0.3, 0.3 + arc, {0.1, 0.1, 0.1, 0.1});
  quad(hh, 0.1, 0.15, {0.05, 0.05, 0.05, 0.05});
  quad(hh, 0.4, 0.42, {0.02, 0.03, 0.02, 0.01});
  for (const GluedSurface* s : {&strip, &dd}) {
    const LengthInvarianceReport li = length_invariance_check(*s, 0, 0.3, 0.4, {0.05, 0.1, 0.2});
    spread = std::max({spread, li.spread1, li.spread2});
    ok = ok && li.flat && li.spread1 <= 1e-7 && li.spread2 <= 1e-7;
  }
  return {ok, fmt("max quadrilateral defect %.2e over 6 cases (tol 1e-5); max flat length spread %.2e over 3 lengths "
                  "(tol 1e-7)",
                  worst, spread)};
}

Outcome disc_asymptotics() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> radii;
  for (int i = 0; i < 8; ++i) radii.push_back(0.02 * std::pow(5.0, i / 7.0));
  std::string detail;
  bool ok = true;
  for (const char* name : {"double_disc", "disc_hemisphere", "two_hemispheres"}) {
    const DiscAsymReport r = disc_area_asymptotics(surface(name), 0, 0.5, radii);
    const double ks = std::abs(r.kappa1 + r.kappa2);
    const bool c2 = std::abs(r.c2 - kPi) / kPi <= 0.005;
    const bool c3 = std::abs(3 * std::abs(r.c3) - ks) <= 0.02 * std::max(1.0, ks);
    ok = ok && c2 && c3;
    detail += fmt("%s c2=%.6f 3|c3|=%.5f vs %.5f; ", name, r.c2, 3 * std::abs(r.c3), ks);
  }
  const double secs = seconds_since(t0);
  ok = ok && secs <= 60;
  return {ok, detail + fmt("%.2f s (limit 60 s)", secs)};
}

Outcome reflection_fd() {
  const auto t0 = std::chrono::steady_clock::now();
  const FdResult fd = fd_eigenvalues(DomainSpec::square(), BoundaryCondition::Double, 128, 20);
  const auto exact = double_spectrum(DomainSpec::square(), 400);
  double worst = 0;
  for (int i = 0; i < 20; ++i) {
    const double err = exact[i] == 0 ? std::abs(fd.eigenvalues[i]) : std::abs(fd.eigenvalues[i] - exact[i]) / exact[i];
    worst = std::max(worst, err);
  }
  return {worst <= 0.01, fmt("max relative error of first 20 merged eigenvalues %.2e (tol 1e-2), grid 128, %.2f s",
                             worst, seconds_since(t0))};
}

double series_j(int nu, double x, bool derivative) {
  auto j = [](int n, double y) {
    double term = std::pow(y / 2, n) / std::tgamma(n + 1.0), sum = term;
    for (int k = 1; k < 200; ++k) {
      term *= -(y * y / 4) / (k * (k + n));
      sum += term;
    }
    return sum;
  };
  if (!derivative) return j(nu, x);
  return nu == 0 ? -j(1, x) : 0.5 * (j(nu - 1, x) - j(nu + 1, x));
}

double bisect_zero(int nu, bool derivative, double a, double b) {
  double fa = series_j(nu, a, derivative);
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (a + b), fm = series_j(nu, m, derivative);
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

Outcome enumeration_exactness() {
  long lattice = 0;
  for (long m = 0; m * m * kPi * kPi <= 50; ++m)
    for (long n = 0; (m * m + n * n) * kPi * kPi <= 50; ++n) lattice += 1 + (m > 0 && n > 0);
  const std::size_t n50 = counting(double_spectrum(DomainSpec::square(), 50), 50);

  const double z1 = std::abs(bessel_zeros(0, 3, false).at(0) - bisect_zero(0, false, 2, 3));
  const double z2 = std::abs(bessel_zeros(1, 4, false).at(0) - bisect_zero(1, false, 3.5, 4));
  const double z3 = std::abs(bessel_zeros(1, 2, true).at(0) - bisect_zero(1, true, 1.5, 2));

  bool jumps = true;
  for (auto d : {DomainSpec::square(), DomainSpec::equilateral(), DomainSpec::isosceles_right(), DomainSpec::disc()})
    for (auto bc : {BoundaryCondition::Dirichlet, BoundaryCondition::Neumann, BoundaryCondition::Double}) {
      const auto spec = spectrum(d, bc, 6000);
      if (spec.size() < 100) {
        jumps = false;
        continue;
      }
      std::size_t seen = 0;
      for (const auto& g : group_multiplicities(spec)) {
        if (seen >= 100) break;
        const std::size_t below = g.value > 0 ? counting(spec, std::nextafter(g.value, -1.0)) : 0;
        jumps = jumps && counting(spec, g.value) - below == g.multiplicity;
        seen += g.multiplicity;
      }
    }
  const bool pass = n50 == 11 && lattice == 11 && z1 <= 1e-10 && z2 <= 1e-10 && z3 <= 1e-10 && jumps;
  return {pass, fmt("N(50) = %zu (lattice scan %ld); zero errors j01 %.1e, j11 %.1e, j'11 %.1e (tol 1e-10); "
                    "jumps = multiplicities on 12 spectra: %s",
                    n50, lattice, z1, z2, z3, jumps ? "yes" : "no")};
}

Outcome weyl_cancellation() {
  const auto d = DomainSpec::square();
  const auto dbl = weyl_ivrii_residuals(d, BoundaryCondition::Double, {1e3, 1e4, 1e5});
  const auto dir = weyl_ivrii_residuals(d, BoundaryCondition::Dirichlet, {1e3, 1e4, 1e5});
  bool ok = true;
  for (const auto& r : dbl) ok = ok && std::abs(r.scaled) <= 0.35;
  const bool growing = std::abs(dbl[0].scaled) < std::abs(dbl[1].scaled) && std::abs(dbl[1].scaled) < std::abs(dbl[2].scaled);
  ok = ok && !growing;
  const double L = 1 / kPi;
  double worst = 0;
  for (const auto& r : dir) worst = std::max(worst, std::abs(std::abs(r.uncorrected) - L) / L);
  ok = ok && worst <= 0.2;
  return {ok, fmt("double |residual|/sqrt(t) = %.4f, %.4f, %.4f (limit 0.35, monotone growth: %s); Dirichlet "
                  "uncorrected/sqrt(t) within %.1f%% of 1/pi (limit 20%%)",
                  std::abs(dbl[0].scaled), std::abs(dbl[1].scaled), std::abs(dbl[2].scaled), growing ? "yes" : "no",
                  100 * worst)};
}

Outcome conjecture_instrumentation() {
  const auto t0 = std::chrono::steady_clock::now();
  auto report = [](const std::string& constant) {
    const Run r = run("conjecture --json --domain square --tmax 1e6 --constant " + constant);
    return r.exit_code == 0 ? nlohmann::json::parse(r.out) : nlohmann::json();
  };
  const auto paper = report("paper");
  const auto c1 = report("custom:1"), c10 = report("custom:10"), c0 = report("custom:0");
  const double secs = seconds_since(t0);
  if (paper.is_null() || c1.is_null() || c10.is_null() || c0.is_null()) return {false, "conjecture command failed"};
  const auto& pr = paper["results"];
  const bool reported = pr.contains("c0") && pr.contains("c0_stderr") && pr.contains("p") && pr.contains("p_interval") &&
                        pr.contains("quarter_in_interval");
  const double v1 = c1["results"]["c0"], v10 = c10["results"]["c0"], v0 = c0["results"]["c0"];
  const double e1 = std::abs(v1 + 1) / 1, e10 = std::abs(v10 + 10) / 10;
  const bool recover = e1 <= 0.01 && e10 <= 0.01;
  const double offset = std::max(std::abs((v1 - v0) + 1), std::abs((v10 - v0) + 10));
  const bool pass = reported && recover && secs <= 300;
  return {pass, fmt("c0(custom:1) = %.6f (rel err %.1f%%), c0(custom:10) = %.6f (rel err %.2f%%), tol 1%%; "
                    "offset c0(c)-c0(0)+c max %.1e; c0(custom:0) = %.6f; p = %.4f in [%.4f, %.4f], 0.25 %s; %.2f s "
                    "(limit 300 s)",
                    v1, 100 * e1, v10, 100 * e10, offset, v0, pr["p"].get<double>(), pr["p_interval"][0].get<double>(),
                    pr["p_interval"][1].get<double>(), pr["quarter_in_interval"].get<bool>() ? "inside" : "outside",
                    secs)};
}

Outcome robustness() {
  std::size_t files = 0, good = 0;
  std::string bad;
  std::vector<fs::path> paths;
  for (const auto& e : fs::directory_iterator(kData / "malformed")) paths.push_back(e.path());
  std::sort(paths.begin(), paths.end());
  for (const auto& p : paths) {
    ++files;
    const Run r = run("verify --json '" + p.string() + "'");
    bool ok = r.exit_code == 2;
    if (ok) {
      const auto j = nlohmann::json::parse(r.out, nullptr, false);
      ok = !j.is_discarded() && j["error"]["kind"] == "validation" && !j["error"]["violations"].empty() &&
           !j["error"]["violations"][0]["path"].get<std::string>().empty();
    }
    if (ok)
      ++good;
    else
      bad += " " + p.stem().string() + "(exit " + std::to_string(r.exit_code) + ")";
  }
  bool identical = true;
  const std::vector<std::string> commands = {
      "verify --json '" + (kData / "surfaces" / "two_hemispheres.json").string() + "'",
      "verify '" + (kData / "surfaces" / "cube_patches.json").string() + "'",
      "discasym --json '" + (kData / "surfaces" / "disc_hemisphere.json").string() + "' --seam rim",
      "quadcheck '" + (kData / "surfaces" / "two_hemispheres.json").string() + "' --seam equator --lengths 0.05,0.05,0.05,0.05",
      "conjecture --domain square --tmax 1e5 --constant corner --out -",
      "spectrum --domain disc --bc double --tmax 2000",
  };
  for (const auto& c : commands) {
    const Run a = run(c, "GB_THREADS=1"), b = run(c, "GB_THREADS=4"), again = run(c, "GB_THREADS=4");
    identical = identical && a.exit_code >= 0 && a.out == b.out && b.out == again.out && !a.out.empty();
  }
  const bool pass = good == files && files > 0 && identical;
  return {pass, fmt("%zu/%zu malformed files -> ValidationError with path, exit 2%s; repeated runs (1 and 4 threads) "
                    "byte-identical: %s",
                    good, files, bad.c_str(), identical ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"Gauss-Bonnet totality", gauss_bonnet_totality},
      {"measure decomposition", decomposition},
      {"geodesic quadrilateral identity", construction_identity},
      {"disc-area asymptotics", disc_asymptotics},
      {"reflection at finite-element level", reflection_fd},
      {"spectral enumeration exactness", enumeration_exactness},
      {"Weyl boundary-term cancellation", weyl_cancellation},
      {"conjecture instrumentation", conjecture_instrumentation},
      {"robustness and determinism", robustness},
  };
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty())
    for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) which.push_back(i);
  int failures = 0;
  for (int k : which) {
    if (k < 1 || k > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "unknown criterion %d\n", k);
      return 64;
    }
    Outcome o;
    try {
      o = criteria[k - 1].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  [%d] %s: %s\n", o.pass ? "PASS" : "FAIL", k, criteria[k - 1].first, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures ? 1 : 0;
}
