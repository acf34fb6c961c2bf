#pragma once

#include <filesystem>
#include <string>

#include "curvmeasure/surface_file.hpp"

namespace testing_support {

inline std::filesystem::path data_dir() { return CURVMEASURE_DATA_DIR; }

inline curvmeasure::GluedSurface load(const std::string& name) {
  return curvmeasure::build(curvmeasure::load_surface(data_dir() / "surfaces" / (name + ".json")));
}

}  // namespace testing_support
