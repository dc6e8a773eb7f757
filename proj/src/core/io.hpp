#pragma once

#include <string>

#include "core/limits.hpp"

namespace bitorus {

// Measure files: {"atoms":[{"s_angle":..,"t_angle":..,"weight":..},...]} for
// the torus, {"atoms":[{"x_angle":..,"weight":..},...]} for the circle.
// Angles are radians so unit modulus is exact and files stay human-editable.
AtomicMeasure2D measure2_from_json(const std::string& text, bool probability = true);
std::string measure2_to_json(const AtomicMeasure2D& mu);
AtomicMeasure1D measure1_from_json(const std::string& text, bool probability = true);
std::string measure1_to_json(const AtomicMeasure1D& nu);

// {"rho1": <measure>, "rho2": <measure>, "a": <real>,
//  "gamma1_angle": <real>, "gamma2_angle": <real>}
LevyData levy_from_json(const std::string& text);
std::string levy_to_json(const LevyData& ld);

std::string read_file(const std::string& path);
// Atomic write: temp file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace bitorus
