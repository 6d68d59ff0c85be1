import math

import numpy as np
import pytest
from scipy.special import gamma as sp_gamma
from scipy.special import gammaincc as sp_gammaincc

from glpot import DomainError, upper_gamma
from glpot.special import log_upper_gamma


def test_unit_shape_closed_form():
    # Gamma_up(1, x) = e^-x
    for x in (0.1, 0.5, 1.0, 5.0):
        assert upper_gamma(1.0, x) == pytest.approx(math.exp(-x), rel=1e-14)


def test_zero_lower_limit_is_complete():
    for s in (0.5, 1.0, 2.3, 7.0):
        assert upper_gamma(s, 0.0) == pytest.approx(math.gamma(s), rel=1e-14)


def test_against_scipy_grid():
    # independent implementation cross-check over the ranges the norms use
    for s in np.linspace(0.2, 40.0, 41):
        for x in (1e-4, 1e-2, 0.3, 1.0, 3.0, 10.0, 60.0):
            want = float(sp_gammaincc(s, x) * sp_gamma(s))
            if want == 0.0:
                continue
            assert upper_gamma(float(s), x) == pytest.approx(want, rel=1e-10)


def test_log_variant():
    for s, x in ((2.0, 0.5), (20.0, 3.0), (55.0, 1.0)):
        assert log_upper_gamma(s, x) == pytest.approx(math.log(upper_gamma(s, x)), rel=1e-12)


def test_domain_errors():
    with pytest.raises(DomainError):
        upper_gamma(0.0, 1.0)
    with pytest.raises(DomainError):
        upper_gamma(1.0, -1.0)
