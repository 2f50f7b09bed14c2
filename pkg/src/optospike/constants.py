"""Physical constants and unit conversion factors.

All values are CODATA-2018 exact or conventional calibration constants.
Calibration constants (doping, intrinsic carrier density) are inputs the
device model needs but that are not fixed by first principles; they are
named here so every module pulls the same numbers.
"""

ELEMENTARY_CHARGE_C = 1.602176634e-19
BOLTZMANN_J_PER_K = 1.380649e-23
PLANCK_J_S = 6.62607015e-34
SPEED_OF_LIGHT_M_PER_S = 299792458.0
VACUUM_PERMITTIVITY_F_PER_M = 8.8541878128e-12

# Silicon band gap (1.12 eV): upper bound on the energy of any photon a Si
# waveguide can carry, used as the per-photon production quantum.
SILICON_BANDGAP_J = 1.12 * ELEMENTARY_CHARGE_C

# Intrinsic carrier density of Si at 300 K, cm^-3 (calibration constant).
SILICON_NI_PER_CM3 = 1.0e10

# Photon energy at the 1.22 um operating wavelength.
PHOTON_ENERGY_1220NM_J = PLANCK_J_S * SPEED_OF_LIGHT_M_PER_S / 1.22e-6

# Unit conversions.
UA_TO_A = 1e-6
NS_TO_S = 1e-9
AJ_TO_J = 1e-18
J_TO_AJ = 1e18
UM2_TO_CM2 = 1e-8
CM2_PER_UM2 = 1e-8


def thermal_voltage(temperature_k: float) -> float:
    """kT/e in volts."""
    return BOLTZMANN_J_PER_K * temperature_k / ELEMENTARY_CHARGE_C
