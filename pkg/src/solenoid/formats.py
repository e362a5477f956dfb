"""JSON and CSV forms of the library's inputs and outputs.

Fibre terms are described by a small JSON object::

    {"type": "trigpoly", "constant": c, "terms": [{"k": 1, "cos": 1.0, "sin": 0.0}]}
    {"type": "samples", "values": [...]}
    {"type": "fat_hole", "lambda": 0.6}

Maps add a ``perturbation`` entry to a fibre term, or name a built-in family.
Floats are written with 12 significant digits.
"""

from __future__ import annotations

import json
import os
from typing import Optional

import numpy as np

from .affine import BoundaryPair, SkewParams
from .circle import DEFAULT_GRID, CircleFunction, TrigPoly, from_samples, from_trig_poly
from .cohomology import Decomposition, JordanRoot
from .orbits import PeriodicOrbit
from .perturbed import (CylinderMap, affine_lift, log_quadratic_map, rescaled_limit,
                        vertical_perturbation)
from .topology import AttractorClassification

DIGITS = 12


class SpecError(ValueError):
    """Malformed JSON input."""


def fmt(x: float) -> str:
    return f"{x:.{DIGITS}g}"


def _round(obj):
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if not np.isfinite(x) else float(fmt(x))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _round(obj.tolist())
    return obj


def dumps(obj, indent: Optional[int] = 2) -> str:
    return json.dumps(_round(obj), indent=indent)


def load_json(arg: str):
    """Parse ``arg`` as inline JSON, or read it from the file it names."""
    text = arg
    if not arg.lstrip().startswith(("{", "[")):
        if not os.path.exists(arg):
            raise SpecError(f"no such file: {arg}")
        with open(arg) as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON: {exc}") from exc


def _need(d: dict, key: str, kind=float):
    if key not in d:
        raise SpecError(f"missing field {key!r}")
    try:
        return kind(d[key])
    except (TypeError, ValueError) as exc:
        raise SpecError(f"field {key!r}: {exc}") from exc


# -- fibre terms -------------------------------------------------------------

def tau_from_spec(spec: dict, n_samples: Optional[int] = None) -> CircleFunction:
    if not isinstance(spec, dict) or "type" not in spec:
        raise SpecError("fibre term needs a 'type'")
    kind = spec["type"]
    if kind == "trigpoly":
        terms = spec.get("terms", [])
        if not isinstance(terms, list):
            raise SpecError("'terms' must be a list")
        rows = [(_need(t, "k", int), float(t.get("cos", 0.0)), float(t.get("sin", 0.0)))
                for t in terms]
        try:
            return from_trig_poly(rows, float(spec.get("constant", 0.0)), n_samples or DEFAULT_GRID)
        except ValueError as exc:
            raise SpecError(str(exc)) from exc
    if kind == "samples":
        values = np.asarray(spec.get("values", []), dtype=float)
        if values.ndim != 1 or values.size < 2 or not np.all(np.isfinite(values)):
            raise SpecError("'values' must be a list of at least two finite numbers")
        return from_samples(values)
    if kind == "fat_hole":
        from .examples import build_fat_hole
        lam = _need(spec, "lambda")
        try:
            return build_fat_hole(lam, int(spec.get("n_samples", n_samples or 2 ** 17)))[0]
        except ValueError as exc:
            raise SpecError(str(exc)) from exc
    raise SpecError(f"unknown fibre term type {kind!r}")


def tau_to_spec(tau: CircleFunction) -> dict:
    poly = tau.closed_form
    if poly is not None:
        return {"type": "trigpoly", "constant": poly.constant,
                "terms": [{"k": k, "cos": a, "sin": b} for k, a, b in poly.terms()]}
    return {"type": "samples", "values": tau.samples.tolist()}


# -- maps --------------------------------------------------------------------

def map_from_spec(spec: dict, ell: int, lam: float, n_samples: Optional[int] = None) -> CylinderMap:
    """Cylinder map from a perturbation spec.

    ``{"type": "log_quadratic", "lambda": l, "c_mod": r, "c_arg": a}`` and
    ``{"type": "rescaled_limit", "lambda": l, "alpha": a}`` name built-in
    families; anything else is a fibre term, optionally with
    ``"perturbation": {"type": "vertical_trig", "delta": d, "k": k}``.
    """
    kind = spec.get("type") if isinstance(spec, dict) else None
    if kind == "log_quadratic":
        lam_f = float(spec.get("lambda", lam))
        c = _need(spec, "c_mod") * np.exp(2j * np.pi * float(spec.get("c_arg", 0.0)))
        try:
            return log_quadratic_map(lam_f, c)
        except ValueError as exc:
            raise SpecError(str(exc)) from exc
    if kind == "rescaled_limit":
        return rescaled_limit(float(spec.get("lambda", lam)), float(spec.get("alpha", 0.0)))
    tau = tau_from_spec(spec, n_samples)
    try:
        F = affine_lift(SkewParams(ell, lam, tau))
    except ValueError as exc:
        raise SpecError(str(exc)) from exc
    pert = spec.get("perturbation")
    if pert is None:
        return F
    if pert.get("type") != "vertical_trig":
        raise SpecError(f"unknown perturbation {pert.get('type')!r}")
    return vertical_perturbation(F, _need(pert, "delta"), int(pert.get("k", 1)))


# -- results -----------------------------------------------------------------

def classification_to_dict(c: AttractorClassification) -> dict:
    return c.to_dict()


def classification_from_dict(d: dict) -> AttractorClassification:
    return AttractorClassification(d["verdict"], d["jordan_gap"], d["annulus_margin"],
                                   d.get("union_defect"), d.get("notes", ""))


def roots_to_list(roots) -> list:
    return [{"lambda": r.lam, "mult": r.mult, "g_value": r.g_value} for r in roots]


def roots_from_list(rows) -> list[JordanRoot]:
    return [JordanRoot(float(r["lambda"]), int(r["mult"]), float(r["g_value"])) for r in rows]


def decomposition_to_dict(d: Decomposition, tol: float) -> dict:
    from .circle import sup_norm
    return {"factors": list(d.factors), "residual_spec": tau_to_spec(d.residual),
            "residual_norm": sup_norm(d.residual), "tol": tol,
            "residual_irreducible": d.residual_irreducible, "ell": d.ell,
            "mean_shift": d.mean_shift, "notes": d.notes}


def decomposition_from_dict(d: dict, n_samples: Optional[int] = None) -> Decomposition:
    return Decomposition([float(x) for x in d["factors"]],
                         tau_from_spec(d["residual_spec"], n_samples),
                         bool(d.get("residual_irreducible", True)), int(d.get("ell", 2)),
                         d.get("notes", ""), float(d.get("mean_shift", 0.0)))


def orbit_to_dict(orb: PeriodicOrbit, tau: CircleFunction) -> dict:
    return {"period": orb.period, "modulus": orb.modulus, "numerators": orb.numerators,
            "sum": orb.birkhoff_sum(tau)}


def orbit_from_dict(d: dict, ell: int = 2) -> PeriodicOrbit:
    return PeriodicOrbit(ell, int(d["period"]), min(int(x) for x in d["numerators"]))


# -- CSV ---------------------------------------------------------------------

def boundaries_csv(b: BoundaryPair) -> str:
    n = b.n_samples
    lines = ["theta,rho_minus,rho_plus"]
    lo, hi = b.rho_minus.samples, b.rho_plus.samples
    lines += [f"{fmt(i / n)},{fmt(lo[i])},{fmt(hi[i])}" for i in range(n)]
    return "\n".join(lines) + "\n"


def points_csv(theta, t) -> str:
    lines = ["theta,t"] + [f"{fmt(a)},{fmt(b)}" for a, b in zip(theta, t)]
    return "\n".join(lines) + "\n"


def read_boundaries_csv(text: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    data = np.loadtxt(text.splitlines()[1:], delimiter=",", ndmin=2)
    return data[:, 0], data[:, 1], data[:, 2]
