// Deterministic JSON emission: doubles are printed with %.17g so a rerun
// with the same config and seed produces byte-identical reports.
#pragma once

#include <string>

#include <json.hpp>

namespace qnls {

using json = nlohmann::ordered_json;

std::string dump_deterministic(const json& j, int indent = 2);
void write_json(const json& j, const std::string& path);

} // namespace qnls
