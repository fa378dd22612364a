#pragma once

namespace spin_stirling {

// Physical constants. Energies inside the library are carried divided by
// k_B, i.e. in kelvin; the eV conversion is only used for reporting.
namespace constants {

// CODATA 2018 (SI-exact where the 2019 redefinition made them exact).
inline constexpr double kAvogadro = 6.02214076e23;           // 1/mol
inline constexpr double kBohrMagnetonCgs = 9.2740100783e-21;  // erg/G
inline constexpr double kBoltzmannCgs = 1.380649e-16;         // erg/K
inline constexpr double kBoltzmannEv = 8.617333262e-5;        // eV/K

// N_A mu_B^2 / k_B in emu K / mol. Evaluates to 0.3751481.
inline constexpr double kMolarCurie =
    kAvogadro * kBohrMagnetonCgs * kBohrMagnetonCgs / kBoltzmannCgs;

// Default bound on |J/k_B|.
inline constexpr double kDefaultCouplingCap = 1.0e4;  // K

// Paths that exponentiate J/(k_B T) directly refuse beyond this.
inline constexpr double kExponentCap = 700.0;

}  // namespace constants

/// Exchange constant J expressed as J/k_B in kelvin. Positive values favour
/// the singlet (antiferromagnetic) ground state, negative the triplet.
class Coupling {
 public:
  /// Throws ValidationError when `j_over_kb` is not finite or exceeds `cap`.
  explicit Coupling(double j_over_kb, double cap = constants::kDefaultCouplingCap);

  double kelvin() const noexcept { return j_over_kb_; }

  friend bool operator==(const Coupling&, const Coupling&) = default;

 private:
  double j_over_kb_;
};

/// Absolute temperature in kelvin, strictly positive and finite.
class Temperature {
 public:
  explicit Temperature(double kelvin);

  double kelvin() const noexcept { return kelvin_; }

  friend bool operator==(const Temperature&, const Temperature&) = default;
  friend auto operator<=>(const Temperature&, const Temperature&) = default;

 private:
  double kelvin_;
};

inline double kelvin_to_ev(double energy_over_kb) noexcept {
  return energy_over_kb * constants::kBoltzmannEv;
}

inline double ev_to_kelvin(double energy_ev) noexcept {
  return energy_ev / constants::kBoltzmannEv;
}

}  // namespace spin_stirling
