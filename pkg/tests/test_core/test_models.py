"""
Tests for domain models
"""
import math

import pytest
from pydantic import ValidationError

from rabi_asym.core.errors import WrongCaseError
from rabi_asym.models import ModelParams, PTResult, StateLabel, ValidityReport


class TestModelParams:
    """Tests for ModelParams"""

    def test_derived_quantities(self):
        p = ModelParams(omega=2.0, g=3.0, epsilon=1.5, delta=0.4)
        assert p.M == pytest.approx(1.5)
        assert p.g_tilde == pytest.approx(1.5)
        assert p.delta_tilde == pytest.approx(0.2)
        assert p.frame_shift == pytest.approx(4.5)

    def test_defaults(self):
        p = ModelParams()
        assert (p.omega, p.g, p.epsilon, p.delta) == (1.0, 0.0, 0.0, 0.0)

    @pytest.mark.parametrize("field", ["g", "epsilon", "delta"])
    def test_negative_rejected(self, field):
        with pytest.raises(ValidationError):
            ModelParams(**{field: -0.1})

    def test_omega_positive(self):
        with pytest.raises(ValidationError):
            ModelParams(omega=0.0)

    def test_frozen(self):
        p = ModelParams(g=1.0)
        with pytest.raises(ValidationError):
            p.g = 2.0

    def test_integer_case(self):
        assert ModelParams(epsilon=0.5).is_integer_case()
        assert ModelParams(epsilon=1.5).integer_M() == 3
        assert not ModelParams(epsilon=0.25).is_integer_case()
        assert ModelParams(epsilon=0.5 + 1e-12).integer_M() == 1

    def test_zero_bias_is_not_integer_case(self):
        assert not ModelParams(epsilon=0.0).is_integer_case()

    def test_integer_M_outside_case(self):
        with pytest.raises(WrongCaseError):
            ModelParams(epsilon=0.3).integer_M()

    def test_with_values(self):
        p = ModelParams(g=1.0, epsilon=0.25, delta=0.3)
        q = p.with_values(g=2.0)
        assert q.g == 2.0
        assert q.epsilon == 0.25
        assert p.g == 1.0


class TestStateLabel:
    """Tests for label formatting"""

    def test_sigma_labels(self):
        assert str(StateLabel(0, 1, "sigma")) == "0+"
        assert str(StateLabel(3, -1, "sigma")) == "3-"

    def test_alpha_labels(self):
        assert str(StateLabel(1, -1, "alpha")) == "1;-"
        assert str(StateLabel(0, 0, "alpha")) == "0;0"


def _validity(**updates) -> ValidityReport:
    values = dict(delta_tilde=0.1, g_tilde=1.5, is_integer_case=True, comm_ok=True, coupling_ok=True)
    values.update(updates)
    return ValidityReport(**values)


class TestPTResult:
    """Tests for PTResult conveniences"""

    def _result(self, **updates) -> PTResult:
        values = dict(
            label=StateLabel(1, 1, "alpha"),
            E0=0.5, E1=0.02, E2=-0.003,
            sx=0.1, sz=0.2, nbar=3.0,
            frame_shift=2.25,
            validity=_validity(),
        )
        values.update(updates)
        return PTResult(**values)

    def test_energy_sum(self):
        r = self._result()
        assert r.energy == pytest.approx(0.517)
        assert r.energy_arm == pytest.approx(0.517 - 2.25)

    def test_breakdown(self):
        assert not self._result().breakdown
        assert self._result(sx=1.2).breakdown
        assert self._result(sz=-1.01).breakdown

    def test_validity_ok(self):
        assert _validity().ok
        assert not _validity(comm_ok=False).ok
        assert not _validity(inco_ok=False, is_integer_case=False).ok
        assert _validity(inco_ok=None).ok
        assert _validity().comm_margin == pytest.approx(0.1)
        assert math.isclose(_validity(delta_tilde=0.3).comm_margin, 0.3)
