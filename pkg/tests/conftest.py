"""Shared instance generators for the test suite.

Constraints are anchored through a randomly chosen pairwise sum most of the
time so feasible sets are rarely empty; a fraction is left unanchored to
exercise infeasible and near-empty systems.
"""

import numpy as np
import pytest

from minkselect.geometry import HalfPlaneConstraint, Objective


def random_points(rng, n, span=8):
    return rng.integers(-span, span + 1, size=(n, 2)).tolist()


def random_direction(rng, span=3):
    while True:
        a, b = (int(v) for v in rng.integers(-span, span + 1, size=2))
        if a or b:
            return a, b


def random_linear_objective(rng):
    d, e = random_direction(rng)
    return Objective.linear(d, e)


def anchored_constraint(rng, P, Q, strict_prob=0.4, slack_span=6):
    """A half-plane that keeps at least one random pairwise sum feasible."""
    a, b = random_direction(rng)
    i = int(rng.integers(len(P)))
    j = int(rng.integers(len(Q)))
    sx = P[i][0] + Q[j][0]
    sy = P[i][1] + Q[j][1]
    slack = int(rng.integers(0, slack_span))
    strict = bool(rng.random() < strict_prob) and slack > 0
    return HalfPlaneConstraint(a, b, a * sx + b * sy - slack, strict)


def random_constraint(rng, span=14, strict_prob=0.4):
    a, b = random_direction(rng)
    return HalfPlaneConstraint(a, b, int(rng.integers(-span, span + 1)), bool(rng.random() < strict_prob))


def constraint_set(rng, P, Q, lam, anchored_prob=0.8):
    cons = []
    for _ in range(lam):
        if rng.random() < anchored_prob:
            cons.append(anchored_constraint(rng, P, Q))
        else:
            cons.append(random_constraint(rng))
    return cons


def parallel_pair(rng, P, Q):
    """Two parallel constraints forming a (usually nonempty) strip."""
    a, b = random_direction(rng)
    i = int(rng.integers(len(P)))
    j = int(rng.integers(len(Q)))
    v = a * (P[i][0] + Q[j][0]) + b * (P[i][1] + Q[j][1])
    lo = v - int(rng.integers(0, 7))
    hi = v + int(rng.integers(0, 7))
    s = int(rng.integers(1, 4))
    L1 = HalfPlaneConstraint(a, b, lo, bool(rng.random() < 0.3) and lo < v)
    L2 = HalfPlaneConstraint(-s * a, -s * b, -s * hi, bool(rng.random() < 0.3) and hi > v)
    return L1, L2


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
