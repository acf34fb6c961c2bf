#pragma once

#include <json.hpp>
#include <string>
#include <string_view>
#include <vector>

#include "curvmeasure/curvature.hpp"
#include "curvmeasure/fd_eigen.hpp"
#include "curvmeasure/spectra.hpp"

namespace curvmeasure {

using Json = nlohmann::json;  // std::map-backed, so keys iterate sorted

/// "%.17g"; non-finite values render as nan, inf, -inf.
std::string format_fixed17(double x);
/// Shortest decimal that round-trips.
std::string format_shortest(double x);

/// Sorted keys, two-space indent, every float with 17 significant digits,
/// non-finite floats as null. Ends with a newline.
std::string render_json(const Json& j);
/// One `dotted.path[i] = value` line per leaf, in sorted key order.
std::string render_text(const Json& j);

/// FNV-1a 64-bit, as 16 lowercase hex digits.
std::string fnv1a64_hex(std::string_view bytes);

/// Header row plus rows, comma separated, LF endings, shortest round-trip floats.
std::string render_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);
/// Inverse of render_csv for numeric tables; throws InputError on malformed input.
std::vector<std::vector<double>> parse_csv(const std::string& text, std::vector<std::string>* header = nullptr);

Json to_json(const GaussBonnetReport& r);
Json to_json(const MeasureValue& r);
Json to_json(const QuadReport& r);
Json to_json(const LengthInvarianceReport& r);
Json to_json(const DiscAsymReport& r);
Json to_json(const PolyhedronReport& r);
/// Summary without the per-t rows.
Json to_json(const CountingReport& r);
Json to_json(const CurvatureMeasure& m);

}  // namespace curvmeasure
