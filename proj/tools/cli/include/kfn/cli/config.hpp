#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kfn/space.hpp"
#include "kfn/vector.hpp"

namespace kfn::cli {

/// Parses a couple description (see docs/schema.md). Unknown keys, wrong
/// types and inconsistent solver choices throw DomainError with the JSON
/// path of the offending key.
CoupleSpec parse_couple_config(std::string_view json_text);

/// Canonical general form {"x": ..., "y": ..., "solver": ..., ...}.
std::string couple_to_json(const CoupleSpec& couple);

/// Element shorthand used by --x:
///   basis:K[:DIM]   e_K; DIM defaults to the couple's weight length
///   ones:N          N ones
///   values:A,B,...  explicit entries
///   grid:A,B,...    grid function on [0, 1] with these node values
///   c1:N[:NODES]    ramp witness of width 1/N on [0, 1] (default 1001 nodes)
Element parse_element(std::string_view spec, const std::optional<CoupleSpec>& couple);

/// A whole run described as JSON:
///   {"command": ..., "couple": {...}, "params": {...}, "output_path": ...}
struct ExperimentConfig {
  std::string command;
  std::optional<std::string> couple_json;
  std::vector<std::pair<std::string, std::string>> params;
  std::optional<std::string> output_path;
};

ExperimentConfig parse_experiment_config(std::string_view json_text);

/// Equivalent command line, without the program name.
std::vector<std::string> to_args(const ExperimentConfig& config);

}  // namespace kfn::cli
