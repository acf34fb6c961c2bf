#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "curvmeasure/curvature.hpp"
#include "curvmeasure/gluing.hpp"

namespace curvmeasure {

struct PolyhedronSpec {
  std::vector<PolyhedronVertex> vertices;
  int chi = 2;
};

/// Parsed surface-definition document. Patches are individually validated
/// when the surface is built.
struct SurfaceDocument {
  std::vector<MetricPatch> patches;
  std::vector<SeamSpec> seams;
  std::vector<ConePointSpec> cone_points;
  std::optional<PolyhedronSpec> polyhedron;
};

/// Strict parse: unknown fields, wrong types and unparsable expressions are
/// reported together as a ValidationError with JSON paths.
SurfaceDocument parse_surface(const std::string& text);
SurfaceDocument load_surface(const std::filesystem::path& file);

GluedSurface build(const SurfaceDocument& doc);

std::string read_file(const std::filesystem::path& file);

/// Region from a `;`-separated list of `all`, `none`, `patch:ID`,
/// `patch:ID:s1a:s1b:s2a:s2b`, `seam:ID`, `seam:ID:t0:t1`, `cone:ID`.
/// Numbers may be constant expressions such as pi/4.
Region parse_region(const GluedSurface& s, const std::string& spec);

}  // namespace curvmeasure
