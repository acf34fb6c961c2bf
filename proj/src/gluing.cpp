#include "curvmeasure/gluing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <set>

namespace curvmeasure {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;
constexpr int kPhiSamples = 200;
constexpr double kPhiSlopeMin = 1e-3;
constexpr double kPhiSlopeMax = 1e3;
constexpr double kThetaCrossCheck = 1e-6;

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

std::string idx(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

}  // namespace

double ConePoint::angle_sum() const {
  double s = 0.0;
  for (const auto& c : cycle) s += c.theta;
  return s;
}

double ConePoint::mass() const { return kTwoPi - angle_sum(); }

double BoundaryJunction::angle_sum() const {
  double s = 0.0;
  for (const auto& c : corners) s += c.theta;
  return s;
}

std::size_t GluedSurface::patch_index(const std::string& id) const {
  for (std::size_t i = 0; i < patches_.size(); ++i)
    if (patches_[i].id() == id) return i;
  throw ValidationError("patch", "unknown patch '" + id + "'");
}

std::size_t GluedSurface::seam_index(const std::string& id) const {
  for (std::size_t i = 0; i < seams_.size(); ++i)
    if (seams_[i].id == id) return i;
  throw ValidationError("seam", "unknown seam '" + id + "'");
}

std::size_t GluedSurface::cone_index(const std::string& id) const {
  for (std::size_t i = 0; i < cone_points_.size(); ++i)
    if (cone_points_[i].id == id) return i;
  throw ValidationError("cone_point", "unknown cone point '" + id + "'");
}

GluedSurface build(std::vector<MetricPatch> patches, std::vector<SeamSpec> seam_specs,
                   std::vector<ConePointSpec> cone_specs) {
  std::vector<Violation> bad;
  GluedSurface s;

  // Patches.
  std::map<std::string, std::size_t> patch_by_id;
  for (std::size_t i = 0; i < patches.size(); ++i) {
    const std::string path = idx("patches", i);
    if (!patch_by_id.emplace(patches[i].id(), i).second)
      bad.push_back({path + ".id", "duplicate patch id '" + patches[i].id() + "'"});
    auto v = patches[i].validate(path);
    bad.insert(bad.end(), v.begin(), v.end());
  }
  if (!bad.empty()) throw ValidationError(std::move(bad));

  // Global vertex numbering: patch offset + vertex index.
  std::vector<std::size_t> offset(patches.size() + 1, 0);
  for (std::size_t i = 0; i < patches.size(); ++i)
    offset[i + 1] = offset[i] + (patches[i].boundary_is_loop() ? 0 : patches[i].boundary().size());
  UnionFind uf(offset.back());
  std::set<std::pair<std::size_t, std::size_t>> direct;  // vertex pairs glued by a seam end
  std::vector<std::vector<bool>> glued(patches.size());
  for (std::size_t i = 0; i < patches.size(); ++i) glued[i].assign(patches[i].boundary().size(), false);

  // Seams.
  std::set<std::string> seam_ids;
  for (std::size_t k = 0; k < seam_specs.size(); ++k) {
    const SeamSpec& spec = seam_specs[k];
    const std::string path = idx("seams", k);
    Seam seam;
    seam.id = spec.id.empty() ? "s" + std::to_string(k) : spec.id;
    if (!seam_ids.insert(seam.id).second) bad.push_back({path + ".id", "duplicate seam id '" + seam.id + "'"});

    bool refs_ok = true;
    auto resolve = [&](const ArcRef& ref, const std::string& side, std::size_t& pi, std::size_t& ai) {
      const auto it = patch_by_id.find(ref.patch);
      if (it == patch_by_id.end()) {
        bad.push_back({path + "." + side + ".patch", "unknown patch '" + ref.patch + "'"});
        refs_ok = false;
        return;
      }
      pi = it->second;
      const auto a = patches[pi].arc_index(ref.arc);
      if (!a) {
        bad.push_back({path + "." + side + ".arc", "unknown arc '" + ref.arc + "' in patch '" + ref.patch + "'"});
        refs_ok = false;
        return;
      }
      ai = *a;
      if (glued[pi][ai]) {
        bad.push_back({path + "." + side + ".arc",
                       "arc '" + ref.arc + "' of patch '" + ref.patch +
                           "' is already glued; more than two boundary arcs along one seam is not a surface"});
        refs_ok = false;
        return;
      }
      glued[pi][ai] = true;
    };
    resolve(spec.side1, "side1", seam.patch1, seam.arc1);
    resolve(spec.side2, "side2", seam.patch2, seam.arc2);
    if (!refs_ok) continue;

    // phi: endpoints, strict monotonicity, derivative bounds.
    bool phi_ok = true;
    double increasing = 0.0;
    try {
      const double p0 = spec.phi.eval(0.0);
      const double p1 = spec.phi.eval(1.0);
      auto is_end = [](double x) { return std::abs(x) <= 1e-9 || std::abs(x - 1) <= 1e-9; };
      if (!is_end(p0) || !is_end(p1) || std::abs(p0 - p1) < 0.5) {
        bad.push_back({path + ".phi", "phi must map {0,1} onto {0,1} (phi(0)=" + std::to_string(p0) +
                                          ", phi(1)=" + std::to_string(p1) + ")"});
        phi_ok = false;
      }
      increasing = p1 - p0;
      double prev = p0;
      for (int i = 0; i <= kPhiSamples && phi_ok; ++i) {
        const double t = static_cast<double>(i) / kPhiSamples;
        const Jet2 j = spec.phi.eval_jet2(t);
        const double slope = std::abs(j.du);
        if (slope < kPhiSlopeMin || slope > kPhiSlopeMax) {
          bad.push_back({path + ".phi", "|phi'(" + std::to_string(t) + ")| = " + std::to_string(slope) +
                                            " outside [" + std::to_string(kPhiSlopeMin) + ", " +
                                            std::to_string(kPhiSlopeMax) + "]"});
          phi_ok = false;
        } else if (i > 0 && (j.value - prev) * increasing <= 0) {
          bad.push_back({path + ".phi", "phi is not strictly monotone near t=" + std::to_string(t)});
          phi_ok = false;
        }
        prev = j.value;
      }
    } catch (const Error& e) {
      bad.push_back({path + ".phi", e.what()});
      phi_ok = false;
    }
    if (!phi_ok) continue;
    seam.phi = spec.phi;
    seam.orientation = increasing > 0 ? Orientation::Preserving : Orientation::Reversing;
    if (spec.orientation && *spec.orientation != seam.orientation)
      bad.push_back({path + ".orientation", "declared orientation disagrees with the monotonicity of phi"});

    const bool loop1 = patches[seam.patch1].boundary_is_loop();
    const bool loop2 = patches[seam.patch2].boundary_is_loop();
    if (loop1 != loop2) {
      bad.push_back({path, "a closed boundary loop can only be glued to another closed loop"});
      continue;
    }
    seam.loop = loop1;
    if (!seam.loop) {
      const std::size_t n1 = patches[seam.patch1].boundary().size();
      const std::size_t n2 = patches[seam.patch2].boundary().size();
      const std::size_t s1 = offset[seam.patch1] + seam.arc1;
      const std::size_t e1 = offset[seam.patch1] + (seam.arc1 + 1) % n1;
      std::size_t s2 = offset[seam.patch2] + seam.arc2;
      std::size_t e2 = offset[seam.patch2] + (seam.arc2 + 1) % n2;
      if (seam.orientation == Orientation::Reversing) std::swap(s2, e2);
      uf.unite(s1, s2);
      uf.unite(e1, e2);
      direct.insert({std::min(s1, s2), std::max(s1, s2)});
      direct.insert({std::min(e1, e2), std::max(e1, e2)});
    }

    const MetricPatch& P1 = patches[seam.patch1];
    const MetricPatch& P2 = patches[seam.patch2];
    seam.length1 = integrate_boundary(P1, P1.boundary()[seam.arc1], [](double) { return 1.0; }).value;
    seam.length2 = integrate_boundary(P2, P2.boundary()[seam.arc2], [](double) { return 1.0; }).value;
    s.seams_.push_back(std::move(seam));
  }
  if (!bad.empty()) throw ValidationError(std::move(bad));

  // Vertex classes.
  auto vertex_patch = [&](std::size_t g) {
    const auto it = std::upper_bound(offset.begin(), offset.end(), g);
    return static_cast<std::size_t>(it - offset.begin()) - 1;
  };
  std::map<std::size_t, std::vector<std::size_t>> classes;
  for (std::size_t g = 0; g < offset.back(); ++g) classes[uf.find(g)].push_back(g);
  auto vertex_interior = [&](std::size_t g) {
    const std::size_t pi = vertex_patch(g);
    const std::size_t n = patches[pi].boundary().size();
    const std::size_t v = g - offset[pi];
    return glued[pi][v] && glued[pi][(v + n - 1) % n];
  };
  auto corner_name = [&](std::size_t g) -> std::string {
    const std::size_t pi = vertex_patch(g);
    for (const auto& c : patches[pi].corners())
      if (c.vertex == g - offset[pi]) return c.id;
    return "";
  };
  auto describe = [&](std::size_t g) {
    const std::size_t pi = vertex_patch(g);
    const std::string c = corner_name(g);
    return "patch '" + patches[pi].id() + "' vertex " + std::to_string(g - offset[pi]) +
           (c.empty() ? "" : " (corner '" + c + "')");
  };

  // Cone points.
  std::set<std::size_t> covered_classes;
  for (std::size_t k = 0; k < cone_specs.size(); ++k) {
    const ConePointSpec& spec = cone_specs[k];
    const std::string path = idx("cone_points", k);
    ConePoint cp;
    cp.id = spec.id;
    std::vector<std::size_t> gverts;
    bool ok = true;
    if (spec.cycle.empty()) {
      bad.push_back({path + ".cycle", "cone point has an empty cycle"});
      continue;
    }
    for (std::size_t j = 0; j < spec.cycle.size(); ++j) {
      const std::string cpath = idx(path + ".cycle", j);
      const auto& e = spec.cycle[j];
      const auto it = patch_by_id.find(e.patch);
      if (it == patch_by_id.end()) {
        bad.push_back({cpath + ".patch", "unknown patch '" + e.patch + "'"});
        ok = false;
        continue;
      }
      const MetricPatch& P = patches[it->second];
      const auto v = P.corner_vertex(e.corner);
      if (!v || P.boundary_is_loop()) {
        bad.push_back({cpath + ".corner", "unknown corner '" + e.corner + "' in patch '" + e.patch + "'"});
        ok = false;
        continue;
      }
      ConeCorner cc{it->second, *v, e.corner, P.interior_angle(*v)};
      if (!(cc.theta > 0 && cc.theta < kTwoPi)) {
        bad.push_back({cpath, "interior angle " + std::to_string(cc.theta) + " outside (0, 2pi)"});
        ok = false;
      }
      if (e.theta && std::abs(*e.theta - cc.theta) > kThetaCrossCheck) {
        bad.push_back({cpath + ".theta", "declared angle " + std::to_string(*e.theta) +
                                             " differs from the computed angle " + std::to_string(cc.theta)});
        ok = false;
      }
      gverts.push_back(offset[cc.patch] + cc.vertex);
      cp.cycle.push_back(cc);
    }
    if (!ok) continue;

    const std::size_t root = uf.find(gverts.front());
    std::set<std::size_t> listed(gverts.begin(), gverts.end());
    if (listed.size() != gverts.size()) {
      bad.push_back({path + ".cycle", "a corner appears twice in the cycle"});
      continue;
    }
    bool same_class = true;
    for (std::size_t g : gverts)
      if (uf.find(g) != root) same_class = false;
    if (!same_class) {
      bad.push_back({path + ".cycle", "corners are not identified to a single point by the seams"});
      continue;
    }
    const auto& members = classes[root];
    if (members.size() != gverts.size()) {
      std::string missing;
      for (std::size_t g : members)
        if (!listed.count(g)) missing += (missing.empty() ? "" : ", ") + describe(g);
      bad.push_back({path + ".cycle", "cycle omits identified corners: " + missing});
      continue;
    }
    bool interior = true;
    for (std::size_t g : members) interior = interior && vertex_interior(g);
    if (!interior) {
      bad.push_back({path, "cone point lies on the free boundary"});
      continue;
    }
    if (gverts.size() > 1) {
      for (std::size_t j = 0; j < gverts.size(); ++j) {
        const std::size_t a = gverts[j];
        const std::size_t b = gverts[(j + 1) % gverts.size()];
        if (!direct.count({std::min(a, b), std::max(a, b)})) {
          bad.push_back({idx(path + ".cycle", (j + 1) % gverts.size()),
                         "not glued by a seam to the previous corner in the cycle"});
          break;
        }
      }
    }
    covered_classes.insert(root);
    s.cone_points_.push_back(std::move(cp));
  }

  if (!bad.empty()) throw ValidationError(std::move(bad));

  // Every interior junction must be a declared cone point; boundary
  // junctions are recorded for the free-boundary Gauss-Bonnet term.
  for (const auto& [root, members] : classes) {
    bool interior = true;
    for (std::size_t g : members) interior = interior && vertex_interior(g);
    if (interior) {
      if (!covered_classes.count(root))
        bad.push_back({"cone_points", "seam junction at " + describe(members.front()) +
                                          " is not declared as a cone point"});
      continue;
    }
    BoundaryJunction bj;
    for (std::size_t g : members) {
      const std::size_t pi = vertex_patch(g);
      const std::size_t v = g - offset[pi];
      bj.corners.push_back({pi, v, corner_name(g), patches[pi].interior_angle(v)});
    }
    s.boundary_junctions_.push_back(std::move(bj));
  }
  if (!bad.empty()) throw ValidationError(std::move(bad));

  for (std::size_t i = 0; i < patches.size(); ++i)
    for (std::size_t a = 0; a < patches[i].boundary().size(); ++a)
      if (!glued[i][a]) s.free_boundary_.push_back({i, a});

  int chi = 0;
  for (const auto& p : patches) chi += p.euler_characteristic();
  for (const auto& seam : s.seams_)
    if (!seam.loop) chi += 1;
  for (const auto& [root, members] : classes) chi -= static_cast<int>(members.size()) - 1;
  s.chi_ = chi;
  s.patches_ = std::move(patches);
  return s;
}

int euler_characteristic(const GluedSurface& s) { return s.euler_characteristic(); }

SeamPoint seam_point(const GluedSurface& s, std::size_t seam_index, double t) {
  const Seam& seam = s.seams().at(seam_index);
  const MetricPatch& P1 = s.patches()[seam.patch1];
  const MetricPatch& P2 = s.patches()[seam.patch2];
  const BoundaryArc& a1 = P1.boundary()[seam.arc1];
  const BoundaryArc& a2 = P2.boundary()[seam.arc2];
  const Jet2 phi = seam.phi.eval_jet2(t);
  const double tau = std::clamp(phi.value, 0.0, 1.0);
  SeamPoint sp;
  sp.phi = tau;
  sp.point1 = a1.point(t);
  sp.point2 = a2.point(tau);
  sp.kappa1 = geodesic_curvature(P1, a1, t);
  sp.kappa2 = geodesic_curvature(P2, a2, tau);
  sp.speed1 = P1.speed(a1, t);
  sp.speed2 = P2.speed(a2, tau) * std::abs(phi.du);
  return sp;
}

}  // namespace curvmeasure
