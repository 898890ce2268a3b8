"""Large-time behaviour of linear hyperbolic relaxation systems.

Thin wrapper around the compiled ``_relaxwave`` module; structured reports
come back as plain dicts.
"""

import json
import math

from ._relaxwave import (  # noqa: F401
    Ghat,
    Khat,
    RelaxwaveError,
    System,
    Vhat,
    asymmetric_relaxation,
    damped_wave,
    eigenvalues,
    fit_rate,
    goldstein_kac,
    load_system,
    parse_system,
    proj_oracle,
    proj_semisimple_zero,
    solve,
    theorem_slope,
)
from . import _relaxwave

INF = math.inf


def check_conditions(system):
    return json.loads(_relaxwave._check_conditions(system))


def reduce_low(system):
    return json.loads(_relaxwave._reduce_low(system))


def reduce_high(system):
    return json.loads(_relaxwave._reduce_high(system))


def verify_theorem(system, pq=((INF, 1.0), (2.0, 1.0), (2.0, 2.0)), refined=False, times=(), L=2200.0, N=1 << 14):
    return json.loads(_relaxwave._verify_theorem(system, [tuple(map(float, p)) for p in pq], refined, list(times), L, N))
