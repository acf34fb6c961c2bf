#include "curvmeasure/surface_file.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

namespace curvmeasure {

namespace {

using json = nlohmann::json;

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

class Reader {
public:
  std::vector<Violation> bad;

  void fail(const std::string& path, const std::string& msg) { bad.push_back({path, msg}); }

  bool object(const json& j, const std::string& path, std::initializer_list<const char*> required,
              std::initializer_list<const char*> optional = {}) {
    if (!j.is_object()) {
      fail(path.empty() ? "$" : path, "expected an object");
      return false;
    }
    std::set<std::string> known;
    for (const char* k : required) {
      known.insert(k);
      if (!j.contains(k)) fail(join(path, k), "missing required field");
    }
    for (const char* k : optional) known.insert(k);
    for (const auto& [k, _] : j.items())
      if (!known.count(k)) fail(join(path, k), "unknown field");
    return true;
  }

  const json* field(const json& j, const char* key) {
    const auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
  }

  std::optional<std::string> string(const json& j, const std::string& path) {
    if (!j.is_string()) {
      fail(path, "expected a string");
      return std::nullopt;
    }
    return j.get<std::string>();
  }

  std::optional<double> number(const json& j, const std::string& path) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
      // Constant expressions such as "pi/2" are accepted for angles.
      try {
        const Expr e = Expr::parse(j.get<std::string>(), {});
        return e.eval(0.0);
      } catch (const Error& e) {
        fail(path, e.what());
        return std::nullopt;
      }
    }
    fail(path, "expected a number");
    return std::nullopt;
  }

  std::optional<int> integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) {
      fail(path, "expected an integer");
      return std::nullopt;
    }
    return j.get<int>();
  }

  std::optional<Expr> expr(const json& j, const std::string& path, std::vector<std::string> vars) {
    const auto s = string(j, path);
    if (!s) return std::nullopt;
    try {
      return Expr::parse(*s, std::move(vars));
    } catch (const Error& e) {
      fail(path, e.what());
      return std::nullopt;
    }
  }

  const json* array(const json& parent, const char* key, const std::string& path) {
    const json* a = field(parent, key);
    if (!a) return nullptr;  // missing required fields are reported by object()
    if (!a->is_array()) {
      fail(join(path, key), "expected an array");
      return nullptr;
    }
    return a;
  }
};

std::optional<ParamDomain> read_domain(Reader& rd, const json& j, const std::string& path) {
  if (!rd.object(j, path, {"type"}, {"bounds"})) return std::nullopt;
  const json* type = rd.field(j, "type");
  if (!type) return std::nullopt;
  const auto t = rd.string(*type, path + ".type");
  if (!t) return std::nullopt;
  const json* bounds = rd.field(j, "bounds");
  if (*t == "rect") {
    if (!bounds) {
      rd.fail(path + ".bounds", "rect domains need bounds [u0, u1, v0, v1]");
      return std::nullopt;
    }
    if (!bounds->is_array() || bounds->size() != 4) {
      rd.fail(path + ".bounds", "expected [u0, u1, v0, v1]");
      return std::nullopt;
    }
    double b[4];
    for (int i = 0; i < 4; ++i) {
      const auto x = rd.number((*bounds)[i], path + ".bounds[" + std::to_string(i) + "]");
      if (!x) return std::nullopt;
      b[i] = *x;
    }
    if (!(b[0] < b[1]) || !(b[2] < b[3])) {
      rd.fail(path + ".bounds", "bounds must satisfy u0 < u1 and v0 < v1");
      return std::nullopt;
    }
    return ParamDomain::rect(b[0], b[1], b[2], b[3]);
  }
  if (*t == "disc" || *t == "triangle") {
    if (bounds) rd.fail(path + ".bounds", "only rect domains take bounds");
    return *t == "disc" ? ParamDomain::disc() : ParamDomain::triangle();
  }
  rd.fail(path + ".type", "unknown domain type '" + *t + "' (rect, disc, triangle)");
  return std::nullopt;
}

std::optional<MetricPatch> read_patch(Reader& rd, const json& j, const std::string& path) {
  if (!rd.object(j, path, {"id", "domain", "metric", "boundary"}, {"chi"})) return std::nullopt;
  const std::size_t before = rd.bad.size();
  std::optional<std::string> id;
  if (const json* f = rd.field(j, "id")) id = rd.string(*f, path + ".id");
  std::optional<ParamDomain> domain;
  if (const json* f = rd.field(j, "domain")) domain = read_domain(rd, *f, path + ".domain");
  std::optional<Expr> E, F, G;
  if (const json* m = rd.field(j, "metric")) {
    const std::string mp = path + ".metric";
    if (rd.object(*m, mp, {"E", "F", "G"})) {
      if (const json* f = rd.field(*m, "E")) E = rd.expr(*f, mp + ".E", {"u", "v"});
      if (const json* f = rd.field(*m, "F")) F = rd.expr(*f, mp + ".F", {"u", "v"});
      if (const json* f = rd.field(*m, "G")) G = rd.expr(*f, mp + ".G", {"u", "v"});
    }
  }
  int chi = 1;
  if (const json* f = rd.field(j, "chi"))
    if (const auto c = rd.integer(*f, path + ".chi")) chi = *c;

  std::vector<BoundaryArc> arcs;
  std::vector<Corner> corners;
  if (const json* b = rd.array(j, "boundary", path)) {
    if (b->empty()) rd.fail(path + ".boundary", "boundary needs at least one arc");
    for (std::size_t i = 0; i < b->size(); ++i) {
      const std::string ap = path + ".boundary[" + std::to_string(i) + "]";
      const json& a = (*b)[i];
      if (!rd.object(a, ap, {"id", "curve"}, {"corners"})) continue;
      BoundaryArc arc;
      if (const json* f = rd.field(a, "id"))
        if (const auto s = rd.string(*f, ap + ".id")) arc.id = *s;
      if (const json* c = rd.field(a, "curve")) {
        if (rd.object(*c, ap + ".curve", {"u", "v"})) {
          if (const json* f = rd.field(*c, "u"))
            if (auto e = rd.expr(*f, ap + ".curve.u", {"t"})) arc.u = *e;
          if (const json* f = rd.field(*c, "v"))
            if (auto e = rd.expr(*f, ap + ".curve.v", {"t"})) arc.v = *e;
        }
      }
      if (const json* cs = rd.array(a, "corners", ap)) {
        for (std::size_t k = 0; k < cs->size(); ++k) {
          const std::string cp = ap + ".corners[" + std::to_string(k) + "]";
          const json& cj = (*cs)[k];
          if (!rd.object(cj, cp, {"id", "at"})) continue;
          std::optional<std::string> cid, at;
          if (const json* f = rd.field(cj, "id")) cid = rd.string(*f, cp + ".id");
          if (const json* f = rd.field(cj, "at")) at = rd.string(*f, cp + ".at");
          if (!cid || !at) continue;
          if (*at != "start" && *at != "end") {
            rd.fail(cp + ".at", "expected \"start\" or \"end\"");
            continue;
          }
          const std::size_t v = *at == "start" ? i : (i + 1) % b->size();
          bool dup = false;
          for (auto& existing : corners)
            if (existing.vertex == v) {
              if (existing.id != *cid)
                rd.fail(cp, "vertex already carries corner '" + existing.id + "'");
              dup = true;
            }
          if (!dup) corners.push_back({*cid, v});
        }
      }
      arcs.push_back(std::move(arc));
    }
  }
  if (rd.bad.size() != before || !id || !domain || !E || !F || !G) return std::nullopt;
  return MetricPatch(*id, *domain, *E, *F, *G, std::move(arcs), std::move(corners), chi);
}

std::optional<ArcRef> read_side(Reader& rd, const json& j, const std::string& path) {
  if (!rd.object(j, path, {"patch", "arc"})) return std::nullopt;
  std::optional<std::string> p, a;
  if (const json* f = rd.field(j, "patch")) p = rd.string(*f, path + ".patch");
  if (const json* f = rd.field(j, "arc")) a = rd.string(*f, path + ".arc");
  if (!p || !a) return std::nullopt;
  return ArcRef{*p, *a};
}

}  // namespace

SurfaceDocument parse_surface(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("$", std::string("malformed JSON: ") + e.what());
  }
  Reader rd;
  SurfaceDocument doc;
  if (!rd.object(root, "", {"version"}, {"patches", "seams", "cone_points", "polyhedron"}))
    throw ValidationError(std::move(rd.bad));
  if (const json* v = rd.field(root, "version"))
    if (const auto n = rd.integer(*v, "version"); n && *n != 1)
      rd.fail("version", "unsupported format version " + std::to_string(*n));
  if (!root.contains("patches") && !root.contains("polyhedron"))
    rd.fail("$", "document needs patches or a polyhedron");

  if (const json* ps = rd.array(root, "patches", "")) {
    for (std::size_t i = 0; i < ps->size(); ++i)
      if (auto p = read_patch(rd, (*ps)[i], "patches[" + std::to_string(i) + "]"))
        doc.patches.push_back(std::move(*p));
  }
  if (const json* ss = rd.array(root, "seams", "")) {
    for (std::size_t i = 0; i < ss->size(); ++i) {
      const std::string sp = "seams[" + std::to_string(i) + "]";
      const json& sj = (*ss)[i];
      if (!rd.object(sj, sp, {"side1", "side2", "phi"}, {"id", "orientation"})) continue;
      SeamSpec spec;
      bool ok = true;
      if (const json* f = rd.field(sj, "id")) {
        if (const auto s = rd.string(*f, sp + ".id")) spec.id = *s;
      }
      const json* s1 = rd.field(sj, "side1");
      const json* s2 = rd.field(sj, "side2");
      const json* ph = rd.field(sj, "phi");
      std::optional<ArcRef> a1 = s1 ? read_side(rd, *s1, sp + ".side1") : std::nullopt;
      std::optional<ArcRef> a2 = s2 ? read_side(rd, *s2, sp + ".side2") : std::nullopt;
      std::optional<Expr> phi = ph ? rd.expr(*ph, sp + ".phi", {"u"}) : std::nullopt;
      if (!a1 || !a2 || !phi) ok = false;
      if (const json* f = rd.field(sj, "orientation")) {
        if (const auto o = rd.string(*f, sp + ".orientation")) {
          if (*o == "preserving")
            spec.orientation = Orientation::Preserving;
          else if (*o == "reversing")
            spec.orientation = Orientation::Reversing;
          else {
            rd.fail(sp + ".orientation", "expected \"preserving\" or \"reversing\"");
            ok = false;
          }
        }
      }
      if (!ok) continue;
      spec.side1 = *a1;
      spec.side2 = *a2;
      spec.phi = *phi;
      doc.seams.push_back(std::move(spec));
    }
  }
  if (const json* cs = rd.array(root, "cone_points", "")) {
    for (std::size_t i = 0; i < cs->size(); ++i) {
      const std::string cp = "cone_points[" + std::to_string(i) + "]";
      const json& cj = (*cs)[i];
      if (!rd.object(cj, cp, {"id", "cycle"})) continue;
      ConePointSpec spec;
      if (const json* f = rd.field(cj, "id"))
        if (const auto s = rd.string(*f, cp + ".id")) spec.id = *s;
      if (const json* cyc = rd.array(cj, "cycle", cp)) {
        for (std::size_t k = 0; k < cyc->size(); ++k) {
          const std::string ep = cp + ".cycle[" + std::to_string(k) + "]";
          const json& ej = (*cyc)[k];
          if (!rd.object(ej, ep, {"patch", "corner"}, {"theta"})) continue;
          ConeCornerSpec e;
          if (const json* f = rd.field(ej, "patch"))
            if (const auto s = rd.string(*f, ep + ".patch")) e.patch = *s;
          if (const json* f = rd.field(ej, "corner"))
            if (const auto s = rd.string(*f, ep + ".corner")) e.corner = *s;
          if (const json* f = rd.field(ej, "theta")) e.theta = rd.number(*f, ep + ".theta");
          spec.cycle.push_back(std::move(e));
        }
      }
      doc.cone_points.push_back(std::move(spec));
    }
  }
  if (const json* pj = rd.field(root, "polyhedron")) {
    if (rd.object(*pj, "polyhedron", {"vertices"}, {"chi"})) {
      PolyhedronSpec poly;
      if (const json* f = rd.field(*pj, "chi"))
        if (const auto c = rd.integer(*f, "polyhedron.chi")) poly.chi = *c;
      if (const json* vs = rd.array(*pj, "vertices", "polyhedron")) {
        for (std::size_t i = 0; i < vs->size(); ++i) {
          const std::string vp = "polyhedron.vertices[" + std::to_string(i) + "]";
          const json& vj = (*vs)[i];
          if (!rd.object(vj, vp, {"id", "angles"})) continue;
          PolyhedronVertex v;
          if (const json* f = rd.field(vj, "id"))
            if (const auto s = rd.string(*f, vp + ".id")) v.id = *s;
          if (const json* as = rd.array(vj, "angles", vp))
            for (std::size_t k = 0; k < as->size(); ++k)
              if (const auto a = rd.number((*as)[k], vp + ".angles[" + std::to_string(k) + "]"))
                v.angles.push_back(*a);
          poly.vertices.push_back(std::move(v));
        }
      }
      doc.polyhedron = std::move(poly);
    }
  }
  if (!rd.bad.empty()) throw ValidationError(std::move(rd.bad));
  return doc;
}

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw InputError("cannot read " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SurfaceDocument load_surface(const std::filesystem::path& file) { return parse_surface(read_file(file)); }

GluedSurface build(const SurfaceDocument& doc) {
  if (doc.patches.empty()) throw ValidationError("patches", "no patches to glue");
  return build(doc.patches, doc.seams, doc.cone_points);
}

Region parse_region(const GluedSurface& s, const std::string& spec) {
  Region r;
  std::vector<Violation> bad;
  std::size_t start = 0, item = 0;
  auto trim = [](std::string x) {
    const auto a = x.find_first_not_of(" \t");
    if (a == std::string::npos) return std::string();
    return x.substr(a, x.find_last_not_of(" \t") - a + 1);
  };
  while (start <= spec.size()) {
    const std::size_t semi = std::min(spec.find(';', start), spec.size());
    const std::string part = trim(spec.substr(start, semi - start));
    start = semi + 1;
    const std::string path = "region[" + std::to_string(item++) + "]";
    if (part.empty() || part == "none") continue;
    if (part == "all") {
      const Region a = Region::all(s);
      r.patches.insert(r.patches.end(), a.patches.begin(), a.patches.end());
      r.seams.insert(r.seams.end(), a.seams.begin(), a.seams.end());
      r.cones.insert(r.cones.end(), a.cones.begin(), a.cones.end());
      continue;
    }
    std::vector<std::string> f;
    for (std::size_t a = 0;;) {
      const std::size_t c = part.find(':', a);
      f.push_back(trim(part.substr(a, c == std::string::npos ? std::string::npos : c - a)));
      if (c == std::string::npos) break;
      a = c + 1;
    }
    std::vector<double> nums;
    try {
      for (std::size_t i = 2; i < f.size(); ++i) nums.push_back(Expr::parse(f[i], {}).eval(0.0));
      if (f[0] == "patch" && f.size() == 2) {
        r.patches.push_back({s.patch_index(f[1]), {}});
      } else if (f[0] == "patch" && f.size() == 6) {
        r.patches.push_back({s.patch_index(f[1]), {nums[0], nums[1], nums[2], nums[3]}});
      } else if (f[0] == "seam" && f.size() == 2) {
        r.seams.push_back({s.seam_index(f[1]), 0.0, 1.0});
      } else if (f[0] == "seam" && f.size() == 4) {
        r.seams.push_back({s.seam_index(f[1]), nums[0], nums[1]});
      } else if (f[0] == "cone" && f.size() == 2) {
        r.cones.push_back(s.cone_index(f[1]));
      } else {
        bad.push_back({path, "cannot parse '" + part + "'"});
      }
    } catch (const ValidationError& e) {
      for (const auto& v : e.violations()) bad.push_back({path, v.message});
    } catch (const Error& e) {
      bad.push_back({path, e.what()});
    }
  }
  for (auto& v : r.validate(s)) bad.push_back(std::move(v));
  if (!bad.empty()) throw ValidationError(std::move(bad));
  return r;
}

}  // namespace curvmeasure
