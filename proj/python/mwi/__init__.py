"""Python bindings for the scalar QED Ward identity engine."""

import json

from . import _core
from ._core import (
    ParseError,
    Poly,
    charge_number,
    check_fa,
    classify,
    mass_dimension,
    parse,
    smatrix2,
    sp_check,
    theta,
    theta_mu,
    wick_check,
    zeta,
)


def verify_theorem(entries, c="c", direction="mwi-to-wi"):
    return json.loads(_core.verify_theorem(entries, c, direction))


def solve_case(case, m=2):
    return json.loads(_core.solve_case(str(case), m))


def unitary_assembly(F, K=3):
    if isinstance(F, str):
        F = parse(F)
    return json.loads(_core.unitary_assembly(F, K))


def current_conservation():
    verified, J = _core.current_conservation()
    return {"verified": verified, "J": str(J)}


__all__ = [
    "ParseError",
    "Poly",
    "charge_number",
    "check_fa",
    "classify",
    "current_conservation",
    "mass_dimension",
    "parse",
    "smatrix2",
    "solve_case",
    "sp_check",
    "theta",
    "theta_mu",
    "unitary_assembly",
    "verify_theorem",
    "wick_check",
    "zeta",
]
