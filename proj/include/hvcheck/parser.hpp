#pragma once

#include <optional>
#include <string>

#include "hvcheck/wiring.hpp"

namespace hvcheck {

struct ParsedModel {
    HVTModel model;
    std::optional<BellWiring> wiring;
};

/// Parses a model file. Syntax errors carry the offending line number;
/// semantic violations (weights not summing to 1, partial rule tables,
/// malformed wiring geometry) throw Error(ValidationError).
ParsedModel parse_model_file(const std::string& path);
ParsedModel parse_model_text(const std::string& text, const std::string& name);

/// Canonical text form; parse_model_text(write_model_text(m)) round-trips
/// byte-identically.
std::string write_model_text(const HVTModel& m, const std::optional<BellWiring>& wiring);
void write_model_file(const std::string& path, const HVTModel& m,
                      const std::optional<BellWiring>& wiring);

/// Coarse-family file: a `region` line followed by `class <label>: <predicate>`
/// lines. Predicates are conjunctions `cell(x,t)=sym & ...` or `parity=0|1`.
Partition parse_partition_file(const std::string& path, const Alphabet& alphabet);

} // namespace hvcheck
