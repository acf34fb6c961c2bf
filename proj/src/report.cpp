#include "curvmeasure/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "curvmeasure/error.hpp"

namespace curvmeasure {

std::string format_fixed17(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_shortest(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

void json_into(const Json& j, std::string& out, int depth) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close(2 * depth, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(it.key()).dump() + ": ";
        json_into(it.value(), out, depth + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        json_into(j[i], out, depth + 1);
      }
      out += "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? format_fixed17(x) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

void text_into(const Json& j, const std::string& path, std::string& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      text_into(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
    return;
  }
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) text_into(j[i], path + "[" + std::to_string(i) + "]", out);
    return;
  }
  out += path + " = ";
  if (j.is_number_float())
    out += format_fixed17(j.get<double>());
  else if (j.is_string())
    out += j.get<std::string>();
  else
    out += j.dump();
  out += "\n";
}

}  // namespace

std::string render_json(const Json& j) {
  std::string out;
  json_into(j, out, 0);
  out += "\n";
  return out;
}

std::string render_text(const Json& j) {
  std::string out;
  text_into(j, "", out);
  return out;
}

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string render_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      out += format_shortest(row[i]);
    }
    out += "\n";
  }
  return out;
}

std::vector<std::vector<double>> parse_csv(const std::string& text, std::vector<std::string>* header) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      cells.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (first) {
      width = cells.size();
      if (header) *header = cells;
      first = false;
      continue;
    }
    if (cells.size() != width) throw InputError("csv row " + std::to_string(rows.size() + 1) + " has wrong width");
    std::vector<double> row;
    for (const auto& c : cells) {
      double v = 0;
      const auto res = std::from_chars(c.data(), c.data() + c.size(), v);
      if (res.ec != std::errc() || res.ptr != c.data() + c.size())
        throw InputError("csv cell '" + c + "' is not a number");
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const GaussBonnetReport& r) {
  return {{"ac", r.ac},         {"seam", r.seam},
          {"atoms", r.atoms},   {"total", r.total},
          {"chi", r.chi},       {"closed", r.closed},
          {"boundary_term", r.boundary_term}, {"target", r.target},
          {"defect", r.defect}, {"error_bound", r.error_bound},
          {"tol", r.tol},       {"pass", r.pass}};
}

Json to_json(const MeasureValue& r) {
  return {{"ac", r.ac}, {"seam", r.seam}, {"atoms", r.atoms}, {"total", r.total}, {"error", r.error}};
}

Json to_json(const QuadReport& r) {
  auto side = [](const QuadSide& s) {
    return Json{{"a_x", s.a_x},   {"a_y", s.a_y},
                {"nu", s.nu},     {"mu", s.mu},
                {"mu_error", s.mu_error}, {"connect_miss", s.connect_miss},
                {"connect_length", s.connect_length}};
  };
  return {{"side1", side(r.side1)}, {"side2", side(r.side2)},
          {"a11", r.a11},           {"a12", r.a12},
          {"a21", r.a21},           {"a22", r.a22},
          {"angle_value", r.angle_value}, {"measure_value", r.measure_value},
          {"defect", r.defect},     {"tol", r.tol},
          {"pass", r.pass}};
}

Json to_json(const LengthInvarianceReport& r) {
  return {{"lengths", r.lengths}, {"side1_sums", r.side1_sums}, {"side2_sums", r.side2_sums},
          {"defects", r.defects}, {"spread1", r.spread1},       {"spread2", r.spread2},
          {"flat", r.flat},       {"tol", r.tol},               {"pass", r.pass}};
}

Json to_json(const DiscAsymReport& r) {
  return {{"radii", r.radii},
          {"area", r.area},
          {"residuals", r.residuals},
          {"c2", r.c2},
          {"c3", r.c3},
          {"c4", r.c4},
          {"c2_two_term", r.c2_two_term},
          {"c3_two_term", r.c3_two_term},
          {"kappa1", r.kappa1},
          {"kappa2", r.kappa2},
          {"predicted_c3_magnitude", r.predicted_c3_magnitude},
          {"empirical_sign", r.empirical_sign},
          {"c2_rel_error", r.c2_rel_error},
          {"c3_error", r.c3_error},
          {"c2_pass", r.c2_pass},
          {"c3_pass", r.c3_pass},
          {"pass", r.pass}};
}

Json to_json(const PolyhedronReport& r) {
  Json atoms = Json::array();
  for (const auto& a : r.atoms) atoms.push_back({{"id", a.id}, {"mass", a.mass}});
  return {{"atoms", atoms}, {"total", r.total}, {"chi", r.chi}, {"target", r.target},
          {"defect", r.defect}, {"pass", r.pass}, {"note", r.note}};
}

Json to_json(const CountingReport& r) {
  return {{"domain", r.domain.name()},
          {"size", r.domain.shape == Shape::Rectangle ? Json{r.domain.a, r.domain.b} : Json{r.domain.a}},
          {"constant_mode", r.mode.to_string()},
          {"constant", r.constant},
          {"t_max", r.t_max},
          {"eigenvalue_count", r.eigenvalue_count},
          {"grid_points", r.rows.size()},
          {"c0", r.c0},
          {"c0_stderr", r.c0_stderr},
          {"tail_std", r.tail_std},
          {"p", r.p},
          {"p_interval", {r.p_lo, r.p_hi}},
          {"fit_decades", r.fit_decades},
          {"quarter_in_interval", r.quarter_in_interval},
          {"verdict", r.consistent ? "CONSISTENT" : "INCONCLUSIVE"},
          {"constant_mismatch", r.constant_mismatch}};
}

Json to_json(const CurvatureMeasure& m) {
  const GluedSurface& s = m.surface();
  Json patches = Json::object(), seams = Json::object(), atoms = Json::object();
  for (std::size_t i = 0; i < s.patches().size(); ++i)
    patches[s.patches()[i].id()] = {{"value", m.patch_totals()[i].value}, {"error", m.patch_totals()[i].error}};
  for (std::size_t i = 0; i < s.seams().size(); ++i)
    seams[s.seams()[i].id] = {{"value", m.seam_totals()[i].value}, {"error", m.seam_totals()[i].error}};
  for (const auto& a : m.atoms()) atoms[a.id] = a.mass;
  return {{"patches", patches}, {"seams", seams}, {"atoms", atoms}};
}

}  // namespace curvmeasure
