#pragma once

#include "renyi/operator_core.hpp"

#include <string>
#include <variant>

namespace renyi {

using StateVariant = std::variant<DensityMatrix, ClassicalState>;

/// Reads a state file: {"kind": "density", "dim": d, "matrix": [[[re, im], ...], ...]}
/// with row-major complex entries, or {"kind": "classical", "weights": [...],
/// "labels": [...]}. Throws ValidationError with file/field context.
StateVariant read_state_file(const std::string& path);
StateVariant parse_state_json(const std::string& text, const std::string& origin);

std::string state_to_json(const DensityMatrix& rho);
std::string state_to_json(const ClassicalState& p);
std::string state_to_json(const StateVariant& state);
void write_state_file(const std::string& path, const StateVariant& state);

/// 17-significant-digit decimal, or the literal "inf" for +infinity; the
/// only non-numeric token ever emitted in value columns.
std::string format_value(double v);

/// One CSV row; values formatted by format_value.
std::string csv_row(const std::vector<std::string>& cells);

}  // namespace renyi
