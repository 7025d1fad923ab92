"""Shared model fixtures for the test corpus."""

import json

import pytest

from glsmkit.model import parse_model

QUINTIC = {
    "r": 6,
    "k": 1,
    "weights": [[1, 1, 1, 1, 1, -5]],
    "r_charges": [0, 0, 0, 0, 0, 1],
    "d_w": 1,
    "theta": ["1"],
    "potential": "p*x1^5+p*x2^5+p*x3^5+p*x4^5+p*x5^5",
    "variables": ["x1", "x2", "x3", "x4", "x5", "p"],
    "assert_critical_proper": True,
}

P1 = {
    "r": 2,
    "k": 1,
    "weights": [[1, 1]],
    "r_charges": [0, 0],
    "d_w": 1,
    "theta": ["1"],
    "potential": None,
    "assert_critical_proper": True,
}

CUBIC = {
    "r": 2,
    "k": 1,
    "weights": [[1, -3]],
    "r_charges": [1, 0],
    "d_w": 3,
    "theta": ["-1"],
    "potential": "p*x^3",
    "variables": ["x", "p"],
    "assert_critical_proper": True,
}

# two-generator affine phase: w = x1^3 + x2^3 with the full diagonal
# symmetry mu_3 x mu_3; second generator acts by (zeta_3, zeta_3^2)
RANK2 = {
    "r": 4,
    "k": 2,
    "weights": [[1, 1, -3, 0], [1, 2, 0, -3]],
    "r_charges": [1, 1, 0, 0],
    "d_w": 3,
    "theta": ["-1", "-1"],
    "potential": "p1*p2*x1^3+p1*p2^2*x2^3",
    "variables": ["x1", "x2", "p1", "p2"],
    "assert_critical_proper": True,
}


@pytest.fixture
def m_quintic():
    return parse_model(json.dumps(QUINTIC))


@pytest.fixture
def m_p1():
    return parse_model(json.dumps(P1))


@pytest.fixture
def m_cubic():
    return parse_model(json.dumps(CUBIC))


@pytest.fixture
def m_rank2():
    return parse_model(json.dumps(RANK2))


def corpus():
    return [parse_model(json.dumps(d)) for d in (P1, QUINTIC, CUBIC, RANK2)]
