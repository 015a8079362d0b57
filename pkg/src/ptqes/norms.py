"""Discrete weights and norms of the weakly orthogonal R family.

The R polynomials are orthogonal with respect to a discrete functional
supported on the M roots of R_M.  The weights omega_k are fixed by

    sum_k omega_k R_j(E_k) = delta_{j0},      j = 0 .. M-1,

and the induced Gram form is then diagonal,

    sum_k omega_k R_i(E_k) R_j(E_k) = gamma_i delta_{ij},
    gamma_n = prod_{i=1..n} a_i,   gamma_0 = 1,   gamma_n = 0 for n >= M.

Each a_i is negative for 0 < i < M once zeta != 0, so the nonzero norms
alternate: positive at even index, negative at odd index.  An alternating
variant (-1)^n * prod a_i also circulates for these families; it disagrees
with the Gram diagonal at odd index, and sign_report exposes both so the
discrepancy is visible rather than silently absorbed.

For odd M below the critical coupling the roots E_k are real and the system
above is real, so the weights come out real (up to rounding) even though
they are solved in complex arithmetic.

The complex P and Q families admit the same construction on the roots of
their critical polynomials; those norms and weights are genuinely complex
and are exposed for inspection only.
"""

from dataclasses import dataclass

import numpy as np

from .model import ModelParams, k_index
from .polyengine import _dd_add, _two_prod, evaluate
from .recursion import build_P, build_Q, build_R, recurrence_a


class DegenerateSpectrumError(RuntimeError):
    """Weight solve refused: two support points (near-)coincide."""


def norm(n: int, params: ModelParams) -> float:
    """Gram diagonal gamma_n = prod_{i=1..n} a_i (1 at n = 0, 0 for n >= M)."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    out = 1.0
    for i in range(1, n + 1):
        out *= recurrence_a(i, params)
    return out


@dataclass(frozen=True)
class WeightTable:
    """Support points, weights and norms of the discrete R functional."""

    params: ModelParams
    energies: tuple
    weights: tuple
    gamma: tuple  # gamma_0 .. gamma_M

    @property
    def max_weight_imag(self) -> float:
        scale = max(abs(w) for w in self.weights)
        return max(abs(w.imag) for w in self.weights) / scale


def _residual_compensated(A: np.ndarray, x: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    # rhs - A x with double-double accumulation.  The moment matrix gets
    # ill-conditioned when two support points approach each other, and the
    # plain-precision residual is then too noisy to drive refinement.
    n = rhs.size
    out = np.empty(n, dtype=complex)
    for j in range(n):
        re = (0.0, 0.0)
        im = (0.0, 0.0)
        for k in range(n):
            a, v = A[j, k], x[k]
            re = _dd_add(re, _two_prod(a.real, v.real))
            re = _dd_add(re, _two_prod(-a.imag, v.imag))
            im = _dd_add(im, _two_prod(a.real, v.imag))
            im = _dd_add(im, _two_prod(a.imag, v.real))
        re = _dd_add(re, (-rhs[j].real, 0.0))
        im = _dd_add(im, (-rhs[j].imag, 0.0))
        out[j] = -complex(re[0] + re[1], im[0] + im[1])
    return out


def weights(params: ModelParams) -> WeightTable:
    """Solve the M x M moment system on the roots of R_M.

    One step of iterative refinement with a compensated residual recovers
    the digits the conditioning of the support points would otherwise cost.
    """
    from .polyengine import roots

    M = params.M
    r_fam = build_R(params, M)
    support = roots(r_fam[M])
    _check_separated(support)
    A = np.empty((M, M), dtype=complex)
    for j in range(M):
        for k in range(M):
            A[j, k] = evaluate(r_fam[j], support[k])
    rhs = np.zeros(M, dtype=complex)
    rhs[0] = 1.0
    try:
        omega = np.linalg.solve(A, rhs)
        for _ in range(2):
            res = _residual_compensated(A, omega, rhs)
            if not np.any(res):
                break
            omega = omega + np.linalg.solve(A, res)
    except np.linalg.LinAlgError as exc:
        raise DegenerateSpectrumError(f"weight system singular: {exc}") from exc
    gamma = tuple(norm(n, params) for n in range(M + 1))
    return WeightTable(
        params=params,
        energies=tuple(support),
        weights=tuple(complex(w) for w in omega),
        gamma=gamma,
    )


def _check_separated(support, rtol: float = 1e-10):
    for i in range(len(support)):
        for j in range(i + 1, len(support)):
            if abs(support[i] - support[j]) <= rtol * (1.0 + abs(support[i])):
                raise DegenerateSpectrumError(
                    f"support points {i} and {j} coincide within {rtol:.1e}"
                )


def gram_matrix(table: WeightTable) -> np.ndarray:
    """G[i, j] = sum_k omega_k R_i(E_k) R_j(E_k) for i, j < M."""
    M = table.params.M
    r_fam = build_R(table.params, M - 1)
    vals = np.array(
        [[evaluate(r_fam[j], e) for e in table.energies] for j in range(M)],
        dtype=complex,
    )
    w = np.array(table.weights, dtype=complex)
    return vals @ (w[:, None] * vals.T)


def sign_report(params: ModelParams) -> dict:
    """Observed Gram diagonal next to the alternating-sign variant.

    The two differ by (-1)^n at odd n; the Gram diagonal computed from the
    weights is the authoritative one and is what norm() returns.
    """
    table = weights(params)
    G = gram_matrix(table)
    diagonal = [complex(G[n, n]) for n in range(params.M)]
    product = [norm(n, params) for n in range(params.M)]
    alternating = [((-1) ** n) * g for n, g in enumerate(product)]
    signs = ["0" if g == 0 else ("+" if g > 0 else "-") for g in product]
    return {
        "gram_diagonal": diagonal,
        "product_formula": product,
        "alternating_variant": alternating,
        "signs": signs,
        "note": (
            "norm() follows the Gram diagonal prod(a_i); the alternating "
            "variant (-1)^n*prod(a_i) flips every odd-index sign and does "
            "not reproduce the Gram form."
        ),
    }


def _pq_family(params: ModelParams, family: str):
    k = k_index(params.M)
    if family == "P":
        return build_P(params, k + 1, s=0.0), k + 1
    if family == "Q":
        return build_Q(params, k, s=0.5), k
    raise ValueError(f"family must be 'P' or 'Q', got {family!r}")


def pq_norms(params: ModelParams, family: str):
    """Complex Gram diagonals of the truncating P or Q family.

    Derived from the recursion tails: the coefficient coupling index m+1
    back to m-1 plays the role a_n plays for R.
    """
    M, zeta, s = params.M, params.zeta, 0.0 if family == "P" else 0.5
    _, count = _pq_family(params, family)
    out = [1.0 + 0j]
    acc = 1.0 + 0j
    for m in range(1, count):
        if family == "P":
            beta = 8j * zeta * m * (2 * m - 1) * (M + 1 - 2 * s - 2 * m)
        else:
            beta = 8j * zeta * m * (2 * m + 1) * (M - 2 * s - 2 * m)
        acc *= beta
        out.append(acc)
    return out


def pq_weight_report(params: ModelParams) -> dict:
    """Support points, weights and norms for both complex families.

    Inspection output only; no reality holds or is claimed here.
    """
    from .polyengine import roots

    report = {}
    for family in ("P", "Q"):
        fam, count = _pq_family(params, family)
        crit = fam[count]
        if crit.degree == 0:
            report[family] = {"energies": [], "weights": [], "norms": [1.0 + 0j]}
            continue
        support = roots(crit)
        _check_separated(support)
        n = crit.degree
        A = np.empty((n, n), dtype=complex)
        for j in range(n):
            for k in range(n):
                A[j, k] = evaluate(fam[j], support[k])
        rhs = np.zeros(n, dtype=complex)
        rhs[0] = 1.0
        omega = np.linalg.solve(A, rhs)
        report[family] = {
            "energies": list(support),
            "weights": [complex(w) for w in omega],
            "norms": pq_norms(params, family),
        }
    return report
