#pragma once

#include <numbers>

namespace catspec::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// CODATA 2018
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double planck = 6.62607015e-34;      // J s
inline constexpr double atomic_mass = 1.66053906660e-27; // kg
inline constexpr double bohr_magneton_hz_per_gauss = 1.39962449e6;

inline constexpr double mass_ca40 = 39.962590863 * atomic_mass;
inline constexpr double mass_ca44 = 43.9554817 * atomic_mass;

inline constexpr double lambda_qubit = 729.0e-9;   // S1/2 - D5/2, logic ion
inline constexpr double lambda_repump = 866.0e-9;  // D3/2 - P1/2, spectroscopy transition
inline constexpr double lambda_cooling = 396.96e-9; // P1/2 - S1/2 emission

inline constexpr double axial_mode_frequency = 1.199e6; // Hz

} // namespace catspec::constants
