import math

import numpy as np
import pytest

from ptqes.model import ModelParams
from ptqes.norms import (
    DegenerateSpectrumError,
    gram_matrix,
    norm,
    pq_norms,
    pq_weight_report,
    sign_report,
    weights,
)
from ptqes.recursion import build_Q, build_R
from ptqes.polyengine import evaluate


def test_norm_values_m3():
    p = ModelParams(M=3, zeta=math.sqrt(0.01))
    assert norm(0, p) == 1.0
    assert norm(1, p) == pytest.approx(-0.08, rel=1e-14)
    assert norm(2, p) == pytest.approx(0.0064, rel=1e-14)
    assert norm(3, p) == 0.0
    assert norm(5, p) == 0.0
    with pytest.raises(ValueError):
        norm(-1, p)


def test_weight_table_m3():
    p = ModelParams(M=3, zeta=math.sqrt(0.01))
    t = weights(p)
    assert t.energies == pytest.approx(
        [4.99, 5.030408205773458, 8.949591794226542], abs=1e-12
    )
    assert t.gamma[0] == 1.0
    assert t.gamma[3] == 0.0
    assert len(t.weights) == 3
    # zeroth moment is the defining normalization
    assert sum(t.weights) == pytest.approx(1.0, abs=1e-12)
    # higher moments of the pure R_j vanish
    fam = build_R(p, 2)
    for j in (1, 2):
        m = sum(w * evaluate(fam[j], e) for w, e in zip(t.weights, t.energies))
        assert abs(m) < 1e-12
    assert t.max_weight_imag == 0.0


def test_gram_identity_cells():
    # M = 5 deviation is limited by coefficient rounding of the support
    # polynomial; these zeta^2 sit where the identity holds with margin.
    for m, z2, tol in ((3, 0.01, 1e-12), (3, 0.02, 1e-12), (5, 0.019, 1e-7), (5, 0.037, 1e-8)):
        params = ModelParams(M=m, zeta=math.sqrt(z2))
        t = weights(params)
        G = gram_matrix(t)
        target = np.diag([norm(n, params) for n in range(m)]).astype(complex)
        scale = 1.0 + max(abs(g) for g in t.gamma)
        assert float(np.max(np.abs(G - target))) / scale < tol
        assert t.max_weight_imag == 0.0


def test_degenerate_support_refused():
    with pytest.raises(DegenerateSpectrumError):
        weights(ModelParams(M=3, zeta=0.5))  # double root at zeta^2 = 0.25


def test_sign_report():
    rep = sign_report(ModelParams(M=5, zeta=math.sqrt(0.01)))
    assert rep["signs"] == ["+", "-", "+", "-", "+"]
    assert rep["product_formula"][1] == pytest.approx(-0.16, rel=1e-13)
    assert rep["alternating_variant"][1] == pytest.approx(0.16, rel=1e-13)
    # Gram diagonal follows the signed product, not the alternating variant
    assert rep["gram_diagonal"][1].real == pytest.approx(-0.16, rel=1e-6)
    assert "alternating" in rep["note"]


def test_pq_norms_m5():
    p = ModelParams(M=5, zeta=math.sqrt(0.01))
    got_p = pq_norms(p, "P")
    assert got_p[0] == 1.0
    assert got_p[1] == pytest.approx(3.2j, rel=1e-13)
    assert got_p[2] == pytest.approx(-30.72, rel=1e-13)
    got_q = pq_norms(p, "Q")
    assert got_q == pytest.approx([1.0, 4.8j], rel=1e-13)
    with pytest.raises(ValueError):
        pq_norms(p, "R")


def test_pq_weight_report_m5():
    p = ModelParams(M=5, zeta=math.sqrt(0.01))
    rep = pq_weight_report(p)
    q2 = build_Q(p, 2)[2]
    # Q support points are the two Q_2 roots
    assert sorted(e.real for e in rep["Q"]["energies"]) == pytest.approx(
        [9.003348181161689, 20.976651818838305], abs=1e-9
    )
    for e in rep["Q"]["energies"]:
        assert abs(evaluate(q2, e)) < 1e-10 * max(abs(c) for c in q2.coeffs)
    # weight normalization for both sectors
    for fam in ("P", "Q"):
        assert sum(rep[fam]["weights"]) == pytest.approx(1.0, abs=1e-10)
    assert len(rep["P"]["energies"]) == 3
    assert rep["P"]["norms"] == pq_norms(p, "P")


def test_pq_weight_report_m1():
    rep = pq_weight_report(ModelParams(M=1, zeta=0.2))
    assert rep["Q"]["energies"] == []
    assert rep["Q"]["norms"] == [1.0 + 0j]
    assert len(rep["P"]["energies"]) == 1
