// constants.hpp — physical constants (SI, CODATA 2018)

#pragma once

namespace iongrad::constants {

inline constexpr double hbar = 1.054571817e-34;          // J s
inline constexpr double atomic_mass_unit = 1.66053906660e-27; // kg
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double two_pi = 6.283185307179586476925286766559;

// 25Mg nuclide mass, convenient for example configs
inline constexpr double mg25_mass_u = 24.985837;

} // namespace iongrad::constants
