import numpy as np
import pytest

from orliczlab.growth import f_alpha
from orliczlab.measures import abs_power_potential, build_measure, u_alpha_potential
from orliczlab.orlicz import make_pair, power_young, tau_q_young


@pytest.fixture(scope="session")
def exp_measure():
    """Two-sided exponential: density e^{-|x|}/2."""
    return build_measure(abs_power_potential(1.0), scale=1.0, tol=1e-9)


@pytest.fixture(scope="session")
def gauss_measure():
    """Standard normal via V = x^2/2, scale 1."""
    return build_measure(abs_power_potential(2.0, 0.5), scale=1.0, tol=1e-9)


@pytest.fixture(scope="session")
def nu15_measure():
    """Smoothed |x|^1.5 well with weight e^{-2u}."""
    return build_measure(u_alpha_potential(1.5), scale=2.0, tol=1e-9)


@pytest.fixture(scope="session")
def square_pair():
    """tau = x^2 with its exact dual y^2/4."""
    return make_pair(power_young(2.0, 2.0), power_young(2.0, 0.5), description="square")


@pytest.fixture(scope="session")
def tau_q_pair():
    """The log-power Young scale member x^2 e^{F(x^2)} at alpha = 1.5."""
    return make_pair(tau_q_young(f_alpha(1.5), q=1.0), description="tau_q(1.5,1)")
