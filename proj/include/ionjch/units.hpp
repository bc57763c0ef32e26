#pragma once

#include <numbers>

namespace ionjch {

// Internal units: hbar = 1, frequencies and energies in rad/ms, time in ms.
// Configuration files quote linear frequencies in kHz.
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double khz_to_angular(double khz) { return kTwoPi * khz; }
constexpr double angular_to_khz(double angular) { return angular / kTwoPi; }

}  // namespace ionjch
