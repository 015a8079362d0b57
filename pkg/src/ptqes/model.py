"""Model definitions shared by every other module.

Two PT-invariant, non-Hermitian Schroedinger problems are treated, in units
hbar = 2m = 1:

* the hyperbolic model (DSHG),  V(x) = -(zeta*cosh(2x) - i*M)**2, and
* its periodic partner (DSG),   V(theta) = (zeta*cos(2*theta) - i*M)**2.

M is a positive integer and zeta a real coupling.  Under the combined parity
x -> i*pi/2 - x and complex conjugation the hyperbolic potential maps onto
itself, which is the PT invariance that keeps the quasi-exactly-solvable
levels real below a critical coupling.

Spectra are often written in the shifted variable calE = E - M**2 + zeta**2.
The conversion lives here so that every module shares a single definition.
"""

import cmath
import math
from dataclasses import dataclass, replace
from enum import Enum


class Model(str, Enum):
    """Which of the two potentials a parameter set refers to."""

    DSHG = "dshg"
    DSG = "dsg"


@dataclass(frozen=True)
class ModelParams:
    """Immutable parameter bundle (M, zeta) plus the model selector.

    zeta is stored as given, any sign.  Every implemented formula for the
    spectrum depends on zeta only through zeta**2; that is a tested property,
    not an assumption baked in here.
    """

    M: int
    zeta: float
    model: Model = Model.DSHG

    def __post_init__(self):
        if isinstance(self.M, bool) or not isinstance(self.M, int):
            raise ValueError(f"M must be a plain integer, got {self.M!r}")
        if self.M < 1:
            raise ValueError(f"M must be >= 1, got {self.M}")
        zeta = float(self.zeta)
        if not math.isfinite(zeta):
            raise ValueError(f"zeta must be finite, got {self.zeta!r}")
        object.__setattr__(self, "zeta", zeta)
        object.__setattr__(self, "model", Model(self.model))

    @property
    def zeta2(self) -> float:
        return self.zeta * self.zeta

    def with_model(self, model: Model) -> "ModelParams":
        return replace(self, model=Model(model))


def shift_to_physical(calE: complex, params: ModelParams) -> complex:
    """Physical energy E = calE + M**2 - zeta**2."""
    return calE + params.M**2 - params.zeta2


def shift_from_physical(E: complex, params: ModelParams) -> complex:
    """Shifted energy calE = E - M**2 + zeta**2 (inverse of shift_to_physical)."""
    return E - params.M**2 + params.zeta2


@dataclass(frozen=True)
class ShiftedEnergy:
    """An energy carried in both conventions at once.

    calE and E always satisfy E = calE + M**2 - zeta**2 for the params the
    value was built with; construct through from_cal or from_physical.
    """

    calE: complex
    E: complex

    @classmethod
    def from_cal(cls, calE: complex, params: ModelParams) -> "ShiftedEnergy":
        return cls(calE=calE, E=shift_to_physical(calE, params))

    @classmethod
    def from_physical(cls, E: complex, params: ModelParams) -> "ShiftedEnergy":
        return cls(calE=shift_from_physical(E, params), E=E)


def k_index(M: int) -> int:
    """Sector index k for odd M = 2k + 1.

    The quasi-exactly-solvable block splits into an even sector of dimension
    k + 1 and an odd sector of dimension k; only odd M admits the split.
    """
    if isinstance(M, bool) or not isinstance(M, int):
        raise ValueError(f"M must be a plain integer, got {M!r}")
    if M < 1 or M % 2 == 0:
        raise ValueError(f"k index needs odd positive M, got {M}")
    return (M - 1) // 2


def potential(x: complex, params: ModelParams) -> complex:
    """Potential value at a (possibly complex) point for the selected model."""
    z = complex(x)
    if params.model is Model.DSHG:
        core = params.zeta * cmath.cosh(2.0 * z) - 1j * params.M
        return -(core * core)
    core = params.zeta * cmath.cos(2.0 * z) - 1j * params.M
    return core * core


def pt_reflection(x: complex) -> complex:
    """PT image i*pi/2 - conj(x) of a point for the hyperbolic model.

    conj(V_dshg(pt_reflection(x))) equals V_dshg(x); the analogous statement
    for the periodic model is not asserted anywhere in this package.
    """
    return 0.5j * math.pi - complex(x).conjugate()
