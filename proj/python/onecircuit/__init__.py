"""Composition operators over one-circuit directed graphs.

Thin wrappers over the C++ core: inputs and outputs that are structured
(measures, models, families, reports) travel as dicts matching the JSON
file schemas of the ``onecircuit`` CLI.
"""

import json as _json

from . import _core

__version__ = "0.1.0"

__all__ = [
    "asc_measure",
    "asc_moment",
    "quartic_pair",
    "measure_moments",
    "pushforward",
    "hankel_report",
    "shift_dominance",
    "transform",
    "carleman",
    "stieltjes_class_of_transform",
    "iterated_preimage",
    "build_subnormal",
    "verify_cc",
    "h_table",
    "check_hyponormal",
    "exotic_pipeline",
    "lambda_functional",
    "euler_threshold",
]


def asc_measure(a, q, atoms=40, which="beta"):
    return _json.loads(_core.asc_measure(a, q, atoms, which))


def quartic_pair(atoms=12):
    pair = _json.loads(_core.quartic_pair(atoms))
    return pair["zeta"], pair["rho"]


asc_moment = _core.asc_moment
transform = _core.transform
stieltjes_class_of_transform = _core.stieltjes_class_of_transform
iterated_preimage = _core.iterated_preimage


def measure_moments(measure, max_n):
    return _json.loads(_core.measure_moments(_json.dumps(measure), max_n))


def pushforward(measure, scale, shift):
    return _json.loads(_core.pushforward(_json.dumps(measure), scale, shift))


def hankel_report(values, tol=1e-30):
    return _json.loads(_core.hankel_report(list(values), tol))


def shift_dominance(values, tol=1e-30):
    return _json.loads(_core.shift_dominance(list(values), tol))


def carleman(values):
    return _json.loads(_core.carleman(list(values)))


def build_subnormal(seeds, kappa, weights, mu_x0=None, branch_depth=24):
    return _json.loads(
        _core.build_subnormal(_json.dumps(list(seeds)), kappa, list(weights), mu_x0, branch_depth)
    )


def verify_cc(model, family):
    return _json.loads(_core.verify_cc(_json.dumps(model), _json.dumps(family)))


def h_table(model, max_n):
    return _json.loads(_core.h_table(_json.dumps(model), max_n))


def check_hyponormal(model, tol=1e-30):
    return _json.loads(_core.check_hyponormal(_json.dumps(model), tol))


def exotic_pipeline(eta="2", source="quartic", atoms=0):
    return _json.loads(_core.exotic_pipeline(str(eta), source, atoms))


def lambda_functional(tau, blocks, tail_block=-1):
    return _json.loads(
        _core.lambda_functional(_json.dumps(tau), [list(b) for b in blocks], tail_block)
    )


def euler_threshold(a, grid_step=1e-3):
    return _json.loads(_core.euler_threshold(a, grid_step))
