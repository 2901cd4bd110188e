#pragma once

namespace decolab {

// CGS values (CODATA 2018). Treated as immutable; pass by const reference.
struct PhysicalConstants {
    double hbar = 1.054571817e-27;         // erg s
    double G = 6.67430e-8;                 // cm^3 g^-1 s^-2
    double k_B = 1.380649e-16;             // erg / K
    double proton_mass = 1.67262192369e-24;  // g
};

// Conversion factor used in every report that quotes years.
inline constexpr double year_seconds = 3.156e7;

inline double seconds_to_years(double s) { return s / year_seconds; }
inline double years_to_seconds(double y) { return y * year_seconds; }

}  // namespace decolab
