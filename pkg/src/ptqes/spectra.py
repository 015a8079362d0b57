"""Quasi-exactly-solvable spectra, critical polynomials and critical couplings.

For odd M = 2k + 1 the recursions truncate: P_{k+1} and Q_k acquire real
coefficients and their roots are the M solvable levels (labels E_P and E_Q).
For even M there is no even/odd split; the M levels are the roots of R_M
and come in complex-conjugate pairs once zeta is nonzero.

As zeta^2 grows, the two largest E_P levels approach each other and merge at
a critical coupling zeta_c^2, beyond which they leave the real axis as a
conjugate pair.  critical_coupling locates that point by bisection on the
appearance of non-real roots.
"""

import math
from dataclasses import dataclass

from .model import ModelParams, k_index
from .polyengine import (
    EnergyPolynomial,
    divide_exact,
    is_real_value,
    matching_distance,
    mul,
    roots,
)
from .recursion import build_P, build_Q, build_R, build_Rbar

# Realization threshold for critical polynomials: imaginary parts must sit at
# rounding level, anything bigger signals a broken recursion.
_REALIZE_RTOL = 1e-9

# Two levels closer than this (relative) are reported as degenerate.
DEGENERACY_RTOL = 1e-6

_NO_FINITE_CRITICAL = math.inf


class NonRealCriticalPolynomialError(RuntimeError):
    """A critical polynomial came out with non-negligible imaginary parts."""


class BracketError(RuntimeError):
    """No complexification point was found while scanning for zeta_c^2."""


@dataclass(frozen=True)
class QesLevel:
    E: complex
    label: str
    is_real: bool


@dataclass(frozen=True)
class QesSpectrum:
    params: ModelParams
    levels: tuple
    degenerate_pairs: tuple

    @property
    def energies(self):
        return tuple(lvl.E for lvl in self.levels)


@dataclass(frozen=True)
class CriticalCoupling:
    """Location of the first level merger; zeta_c_squared is inf for M = 1."""

    M: int
    zeta_c_squared: float
    degenerate_energy: float = None

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.zeta_c_squared)


def _realize_real(p: EnergyPolynomial) -> EnergyPolynomial:
    scale = max(abs(c) for c in p.coeffs)
    worst = max(abs(c.imag) for c in p.coeffs)
    if worst > _REALIZE_RTOL * scale:
        raise NonRealCriticalPolynomialError(
            f"{p.family}_{p.index}: imaginary coefficient {worst:.3e} "
            f"exceeds {_REALIZE_RTOL:.1e} of scale {scale:.3e}"
        )
    return EnergyPolynomial(
        tuple(complex(c.real, 0.0) for c in p.coeffs),
        variable=p.variable,
        family=p.family,
        index=p.index,
        s=p.s,
    )


def critical_polynomials(params: ModelParams):
    """(P_{k+1}, Q_k) with realized real coefficients, for odd M = 2k + 1.

    Q_0 is the constant 1 (no odd-sector level for M = 1).
    """
    k = k_index(params.M)
    p_crit = build_P(params, k + 1, s=0.0)[k + 1]
    q_crit = build_Q(params, k, s=0.5)[k]
    return _realize_real(p_crit), _realize_real(q_crit)


def degenerate_pairs(energies):
    """Index pairs closer than DEGENERACY_RTOL relative to the level size."""
    pairs = []
    for i in range(len(energies)):
        for j in range(i + 1, len(energies)):
            if abs(energies[i] - energies[j]) <= DEGENERACY_RTOL * (1.0 + abs(energies[i])):
                pairs.append((i, j))
    return tuple(pairs)


def qes_spectrum(params: ModelParams) -> QesSpectrum:
    """All M solvable levels, ascending by (Re E, Im E).

    Odd M: roots of the critical polynomials, labelled E_P / E_Q.
    Even M: roots of R_M, labelled E_R.
    """
    if params.M % 2 == 1:
        p_crit, q_crit = critical_polynomials(params)
        tagged = [(z, "E_P") for z in roots(p_crit)]
        if q_crit.degree >= 1:
            tagged.extend((z, "E_Q") for z in roots(q_crit))
    else:
        r_m = build_R(params, params.M)[params.M]
        tagged = [(z, "E_R") for z in roots(r_m)]
    tagged.sort(key=lambda t: (t[0].real, t[0].imag, t[1]))
    levels = tuple(QesLevel(E=z, label=lab, is_real=is_real_value(z)) for z, lab in tagged)
    return QesSpectrum(
        params=params,
        levels=levels,
        degenerate_pairs=degenerate_pairs([z for z, _ in tagged]),
    )


def _has_complex_p_root(M: int, zeta2: float) -> bool:
    params = ModelParams(M=M, zeta=math.sqrt(zeta2))
    p_crit, _ = critical_polynomials(params)
    return any(not is_real_value(z) for z in roots(p_crit))


def critical_coupling(M: int, tol: float = 1e-10) -> CriticalCoupling:
    """Smallest zeta^2 > 0 at which two E_P levels merge, found by bisection.

    The merger of the two largest real roots is where a conjugate pair first
    appears, so the bisection predicate is simply "P_{k+1} has a non-real
    root".  M = 1 has a single level and no finite critical coupling.
    """
    k_index(M)  # validates odd positive M
    if not (tol > 0):
        raise ValueError(f"tol must be positive, got {tol!r}")
    if M == 1:
        return CriticalCoupling(M=M, zeta_c_squared=_NO_FINITE_CRITICAL)

    # Coarse scan to bracket the first complexification, then bisect.
    hi = 0.5
    steps = 200
    bracket = None
    while bracket is None and hi <= 64.0:
        prev = 0.0
        for i in range(1, steps + 1):
            z2 = hi * i / steps
            if _has_complex_p_root(M, z2):
                bracket = (prev, z2)
                break
            prev = z2
        if bracket is None:
            hi *= 4.0
    if bracket is None:
        raise BracketError(f"no complex P root found for M={M} up to zeta^2={hi / 4.0}")

    lo, up = bracket
    while up - lo > tol:
        mid = 0.5 * (lo + up)
        if _has_complex_p_root(M, mid):
            up = mid
        else:
            lo = mid
    zc2 = 0.5 * (lo + up)

    params = ModelParams(M=M, zeta=math.sqrt(zc2))
    p_crit, _ = critical_polynomials(params)
    rts = roots(p_crit)
    pair = min(
        ((i, j) for i in range(len(rts)) for j in range(i + 1, len(rts))),
        key=lambda ij: abs(rts[ij[0]] - rts[ij[1]]),
    )
    merged = 0.5 * (rts[pair[0]] + rts[pair[1]]).real
    return CriticalCoupling(M=M, zeta_c_squared=zc2, degenerate_energy=merged)


@dataclass(frozen=True)
class FactorizationCheck:
    identity: str
    n: int
    deviation: float


@dataclass(frozen=True)
class FactorizationReport:
    params: ModelParams
    checks: tuple

    @property
    def max_deviation(self) -> float:
        return max((c.deviation for c in self.checks), default=0.0)


def _coeff_distance(p: EnergyPolynomial, q: EnergyPolynomial) -> float:
    if p.degree != q.degree:
        raise ValueError("degree mismatch in coefficient comparison")
    scale = max(abs(c) for c in p.coeffs)
    return max(abs(a - b) for a, b in zip(p.coeffs, q.coeffs)) / scale


def check_factorization(params: ModelParams, n_extra: int = 3) -> FactorizationReport:
    """Deviations for the truncation identities of the three families.

    Checked, with n running to n_extra where applicable:
      R_{2k+1} = P_{k+1} * Q_k          (odd M, coefficient distance)
      R_{M+n}  = R_M * Rbar_n           (any M, division remainder and the
                                         quotient against the Rbar recursion)
      P_{k+n+1} = P_{k+1} * Pbar_n      (odd M, division remainder)
      Q_{k+n}   = Q_k * Qbar_n          (odd M, division remainder)
    """
    if n_extra < 1:
        raise ValueError("n_extra must be >= 1")
    checks = []
    M = params.M
    r_fam = build_R(params, M + n_extra)
    rbar_fam = build_Rbar(params, n_extra)

    if M % 2 == 1:
        k = k_index(M)
        p_fam = build_P(params, k + 1 + n_extra, s=0.0)
        q_fam = build_Q(params, k + n_extra, s=0.5)
        prod = mul(p_fam[k + 1], q_fam[k])
        checks.append(FactorizationCheck("R = P*Q", M, _coeff_distance(r_fam[M], prod)))
        for n in range(1, n_extra + 1):
            _, rem = divide_exact(p_fam[k + 1 + n], p_fam[k + 1])
            checks.append(FactorizationCheck("P = P_crit*Pbar", n, rem))
            _, rem = divide_exact(q_fam[k + n], q_fam[k])
            checks.append(FactorizationCheck("Q = Q_crit*Qbar", n, rem))

    for n in range(1, n_extra + 1):
        quot, rem = divide_exact(r_fam[M + n], r_fam[M])
        checks.append(FactorizationCheck("R = R_M*Rbar", n, rem))
        checks.append(FactorizationCheck("Rbar quotient", n, _coeff_distance(rbar_fam[n], quot)))

    return FactorizationReport(params=params, checks=tuple(checks))


def even_M_pairing(params: ModelParams, tol: float = 1e-8) -> bool:
    """True when the R_M root multiset is conjugation-invariant and, for
    zeta != 0, at least one root is genuinely complex."""
    if params.M % 2 != 0:
        raise ValueError(f"even_M_pairing needs even M, got {params.M}")
    rts = roots(build_R(params, params.M)[params.M])
    conj = [z.conjugate() for z in rts]
    if matching_distance(rts, conj) > tol:
        return False
    if params.zeta != 0 and all(is_real_value(z) for z in rts):
        return False
    return True
