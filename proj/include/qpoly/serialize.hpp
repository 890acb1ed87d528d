#pragma once

#include <string>

#include <json.hpp>

#include "qpoly/ccq.hpp"
#include "qpoly/state.hpp"

namespace qpoly {

using json = nlohmann::json;

/// States serialize as {dims: [..], re: [[..]], im: [[..]]}, row-major,
/// full matrix.
json state_to_json(const DensityMatrix& rho);
DensityMatrix state_from_json(const json& j);

/// A ccq state serializes as its (x, y, block) list in the same format.
json ccq_to_json(const CcqState& ccq);
CcqState ccq_from_json(const json& j);

/// Extract the pure state from a rank-one density record; throws if the
/// state is not pure within 1e-8.
PureState pure_from_density(const DensityMatrix& rho);

DensityMatrix load_state_file(const std::string& path);

/// Write-then-rename so an interrupted run never leaves a truncated file.
void write_file_atomic(const std::string& path, const std::string& bytes);

/// Number rendering used in all emitted tables: 12 significant digits.
std::string format_number(double x);

}  // namespace qpoly
