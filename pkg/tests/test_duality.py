import cmath
import math

import pytest

from ptqes.duality import (
    dual_closed_form_levels,
    dual_eigenfunction,
    dual_spectrum,
)
from ptqes.model import Model, ModelParams
from ptqes.polyengine import matching_distance
from ptqes.spectra import qes_spectrum


def test_dual_is_exact_negation_reversal():
    p = ModelParams(M=3, zeta=math.sqrt(0.01))
    base = qes_spectrum(p).energies
    dual = dual_spectrum(p)
    assert dual.energies == tuple(-e for e in reversed(base))
    assert dual.energies == pytest.approx(
        [-8.949591794226542, -5.030408205773458, -4.99], abs=1e-12
    )
    assert dual.params.model is Model.DSG
    # applying the map twice is the identity on the multiset, exactly
    assert tuple(-e for e in reversed(dual.energies)) == base


def test_dual_metadata():
    p = ModelParams(M=3, zeta=math.sqrt(0.01))
    dual = dual_spectrum(p)
    assert [lvl.source_index for lvl in dual.levels] == [2, 1, 0]
    assert [lvl.label for lvl in dual.levels] == ["E_P", "E_P", "E_Q"]
    assert all(lvl.is_real for lvl in dual.levels)


def test_dual_requires_odd_m():
    with pytest.raises(ValueError):
        dual_spectrum(ModelParams(M=2, zeta=0.1))


def test_closed_form_levels():
    p = ModelParams(M=1, zeta=math.sqrt(0.04))
    assert dual_closed_form_levels(p) == [pytest.approx(-0.96, rel=1e-15)]
    p3 = ModelParams(M=3, zeta=math.sqrt(0.04))
    lv = dual_closed_form_levels(p3)
    r = math.sqrt(1.0 - 0.16)
    assert lv[0] == pytest.approx(-7.0 + 0.04 - 2 * r, rel=1e-14)
    assert lv[1] == pytest.approx(0.04 - 5.0, rel=1e-14)
    assert lv[2] == pytest.approx(-7.0 + 0.04 + 2 * r, rel=1e-14)
    with pytest.raises(ValueError):
        dual_closed_form_levels(ModelParams(M=5, zeta=0.1))


@pytest.mark.parametrize("z2", [0.0, 0.01, 0.1, 0.24])
def test_closed_forms_match_computed_dual(z2):
    p = ModelParams(M=3, zeta=math.sqrt(z2))
    computed = dual_spectrum(p).energies
    closed = sorted(dual_closed_form_levels(p), key=lambda x: (x.real, x.imag))
    for a, b in zip(computed, closed):
        assert a == pytest.approx(b, abs=1e-12)


def test_closed_forms_beyond_critical_coupling():
    # above zeta_c^2 = 1/4 the sqrt goes imaginary and a conjugate pair forms
    p = ModelParams(M=3, zeta=math.sqrt(0.3))
    computed = dual_spectrum(p).energies
    closed = dual_closed_form_levels(p)
    assert matching_distance(computed, closed) < 1e-12
    assert any(abs(complex(x).imag) > 0.1 for x in closed)


def test_dual_eigenfunction_values():
    p = ModelParams(M=3, zeta=0.2)
    theta = 0.37
    gauge = cmath.exp(0.5j * 0.2 * math.cos(2 * theta))
    psi1 = dual_eigenfunction(p, 1, theta)
    assert psi1 == pytest.approx(math.sin(2 * theta) * gauge, rel=1e-14)
    r = math.sqrt(1.0 - 4.0 * 0.04)
    psi0 = dual_eigenfunction(p, 0, theta)
    want = (-0.4j - (r - 1.0) * math.cos(2 * theta)) * gauge
    assert psi0 == pytest.approx(want, rel=1e-14)


def test_dual_eigenfunction_validation():
    with pytest.raises(ValueError):
        dual_eigenfunction(ModelParams(M=1, zeta=0.2), 1, 0.1)
    with pytest.raises(ValueError):
        dual_eigenfunction(ModelParams(M=3, zeta=0.2), 3, 0.1)
    with pytest.raises(ValueError):
        dual_eigenfunction(ModelParams(M=5, zeta=0.2), 0, 0.1)
