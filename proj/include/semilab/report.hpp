#pragma once

#include "semilab/scenarios.hpp"

#include <filesystem>
#include <string>

namespace semilab {

/// Sorted keys, two-space indentation, doubles printed with 17 significant
/// digits, non-finite numbers as null. Identical input gives identical bytes.
std::string canonical_json(const nlohmann::json& j);

/// Writes `content` to dir/name, creating dir if needed. Throws IoFailure.
std::filesystem::path write_text_file(const std::filesystem::path& dir, const std::string& name,
                                      const std::string& content);

/// Writes dir/<stem>.json for the scenario.
std::filesystem::path emit_report(const ScenarioResult& result, const std::filesystem::path& dir,
                                  const std::string& stem);

/// CSV with header "k,omega,residual"; k is one-based.
std::string frequencies_csv(const std::vector<PhaseFit>& fits);

}  // namespace semilab
