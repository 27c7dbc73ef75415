"""Shared data model: physical parameters, quantum numbers, unit helpers.

A particle of fractional spin S and charge q moves in the attractive Coulomb
field of a nucleus of charge Ze in two space dimensions.  The coupling is
xi = e*q and the radial problem is governed by the derived quantities

    lambda^2 = l^2 - xi^2 Z^2        (relativistically shifted angular momentum)
    l' = sqrt(l^2 + 1/4)             (spin-orbit coefficient)

Every solver works in natural units (hbar = c = 1) with the rest mass m as the
energy scale, so total energies live on E/m in (0, 1].  A separate display
mass in eV is carried on AnyonParams purely for rendering kinetic energies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from .errors import DomainError

#: CODATA fine-structure constant (dimensionless).
CODATA_ALPHA = 7.2973525693e-3

#: Electron rest energy in eV.
ELECTRON_MASS_EV = 510998.95


@dataclass(frozen=True)
class PhysicalConstants:
    """Default constants used by the CLI; overridable via configuration."""

    alpha: float = CODATA_ALPHA
    electron_mass_ev: float = ELECTRON_MASS_EV


DEFAULT_CONSTANTS = PhysicalConstants()


@dataclass(frozen=True)
class AnyonParams:
    """Physical configuration of the bound-state problem.

    Attributes
    ----------
    S : fractional spin, dimensionless.
    xi : coupling constant (product of the two charges), >= 0.
    Z : nuclear charge number, > 0.
    m : rest mass in natural units (the internal energy scale), > 0.
    mass_ev : display rest energy in eV, used only for unit conversion.
    """

    S: float
    xi: float
    Z: float = 1.0
    m: float = 1.0
    mass_ev: float = ELECTRON_MASS_EV

    def __post_init__(self) -> None:
        if not (self.m > 0.0):
            raise DomainError(f"rest mass must be positive, got m={self.m}")
        if not (self.Z > 0.0):
            raise DomainError(f"nuclear charge must be positive, got Z={self.Z}")
        if self.xi < 0.0:
            raise DomainError(f"coupling must be non-negative, got xi={self.xi}")
        if not (self.xi * self.Z < 1.0):
            # keeps lambda^2 > 0 for every l >= 1
            raise DomainError(
                f"supported regime requires xi*Z < 1, got xi*Z={self.xi * self.Z}"
            )
        if not (self.mass_ev > 0.0):
            raise DomainError(f"display mass must be positive, got {self.mass_ev}")


@dataclass(frozen=True)
class QuantumNumbers:
    """Radial quantum number n_r >= 0 (zeros of the radial wavefunction)
    and orbital quantum number l >= 1."""

    n_r: int
    l: int

    def __post_init__(self) -> None:
        if not isinstance(self.n_r, int) or isinstance(self.n_r, bool):
            raise DomainError(f"n_r must be an integer, got {self.n_r!r}")
        if not isinstance(self.l, int) or isinstance(self.l, bool):
            raise DomainError(f"l must be an integer, got {self.l!r}")
        if self.n_r < 0:
            raise DomainError(f"n_r must be >= 0, got {self.n_r}")
        if self.l < 1:
            raise DomainError(f"l must be >= 1, got {self.l}")


@dataclass(frozen=True)
class EnergyResult:
    """One solved level.

    e_total is E/m in (0, 1]; e_kinetic is (E - m)/m computed without
    cancellation so that kinetic_ev keeps full precision at the ~1e-5*m
    binding scale.  method tags one of closed-form / wkb-full / wkb-split /
    oracle / nonrel.  diagnostics carries iteration count, the residual of
    the defining equation, and an estimated numerical error.
    """

    e_total: float
    e_kinetic: float
    kinetic_ev: float
    method: str
    diagnostics: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not math.isfinite(self.e_total) or not (0.0 < self.e_total <= 1.0):
            raise DomainError(f"e_total must lie in (0, 1], got {self.e_total}")
        if self.e_kinetic > 0.0:
            raise DomainError(f"bound kinetic energy must be <= 0, got {self.e_kinetic}")


def lambda_sq(params: AnyonParams, l: int) -> float:
    """Effective angular momentum squared, l^2 - xi^2 Z^2.

    Raises DomainError when the result is not positive (l <= xi*Z lies
    outside the supported regime).
    """
    if l < 1:
        raise DomainError(f"l must be >= 1, got {l}")
    value = float(l * l) - (params.xi * params.Z) ** 2
    if value <= 0.0:
        raise DomainError(
            f"lambda^2 = l^2 - (xi*Z)^2 = {value} is not positive (l={l}, xi*Z={params.xi * params.Z})"
        )
    return value


def l_prime(l: int) -> float:
    """Spin-orbit coefficient sqrt(l^2 + 1/4)."""
    if l < 1:
        raise DomainError(f"l must be >= 1, got {l}")
    return math.sqrt(l * l + 0.25)


def kinetic_ev(e_total: float, mass_ev: float) -> float:
    """Kinetic energy in eV from the total energy expressed in units of m.

    e_total is the ratio E/m, so the kinetic energy is (e_total - 1)*mass_ev.
    """
    return (e_total - 1.0) * mass_ev


def spin_orbit_strength(params: AnyonParams, l: int) -> float:
    """Coefficient B of the r^-3 spin-orbit term, B = 4 xi Z S l' / m."""
    return 4.0 * params.xi * params.Z * params.S * l_prime(l) / params.m
