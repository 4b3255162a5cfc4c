"""Thermal Casimir free energy between metal plates from the Lifshitz formula."""

__version__ = "0.1.0"

from .engine import (DEFAULT_SETTINGS, FreeEnergyResult, PressureResult, QuadratureSettings,
                     free_energy, ideal_classical_energy, ideal_zero_T_energy,
                     ideal_zero_T_pressure, log_integrand, matsubara_term, pressure, tail_bound,
                     zero_T_energy)
from .errors import (CasimirError, ConvergenceError, DivergentPermittivityError, DomainError,
                     IndeterminateLimitError, SingularModelError, UnresolvedPrescriptionError,
                     ValidationError, WrongModelError)
from .materials import (GOLD, Drude, IdealMetal, ImpedanceAnomalousSkin, ImpedanceInfrared,
                        ImpedanceMatched, ImpedanceNormalSkin, MaterialParams, OpticalTable, Plasma,
                        Regime, RegimeBreakpoints, Tabulated, drude_sigma, eps_imag_axis,
                        impedance_imag_axis, kk_transform, matched_impedance)
from .reflection import (Auto, DrudeLimit, IdealLike, N0Prescription, PlasmaLike, ReflectionPair,
                         fresnel_dielectric, fresnel_impedance, n0_term_coefficients,
                         resolve_prescription)
from .thermo import (entropy, nernst_check, prescription_comparison, temperature_correction)
from .units import (C, CONSTANTS, HBAR, K_B, characteristic_frequency, ev_to_radsec,
                    matsubara_frequency)
