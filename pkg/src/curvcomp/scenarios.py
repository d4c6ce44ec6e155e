"""Built-in scenario catalog and ingestion of user scenario files.

Catalog members realize the hypothesis classes of the estimates: constant
curvature models and their linearly weighted versions (equality cases), the
shrinking soliton profile (zero curvature deficit against the matching
bound), and perturbed profiles whose deficit is positive but controlled.
Scenario files are flat JSON objects with the same fields the catalog uses.
"""

from __future__ import annotations

import json
import os

from .mmspace import InvariantViolation, make_space
from .numerics import DEFAULT_SPEC

__all__ = ["catalog", "load", "make_scenario", "FAMILIES", "DIMENSIONS"]

ETA_SQ = "1e-16"  # smoothing scale of the weighted model's corner at the pole
DIMENSIONS = (2, 3, 4)


def _fmt(x):
    return format(float(x), "g")


def _model_warp(H):
    if H > 0:
        return "sin(r)" if H == 1.0 else f"sin(sqrt({_fmt(H)})*r)/sqrt({_fmt(H)})"
    if H < 0:
        return "sinh(r)" if H == -1.0 else f"sinh(sqrt({_fmt(-H)})*r)/sqrt({_fmt(-H)})"
    return "r"


def _model_r_max(H):
    # stay inside the standard comparison range for positive curvature
    return 1.5 if H > 0 else 3.0


def _build_model(n, H=0.0):
    return dict(
        warp=_model_warp(H),
        weight="0",
        r_max=_model_r_max(H),
        tags=("equality", "unweighted"),
        hints={"lower_gradient_bound": 0.0, "bounded_f": 0.0, "nonneg_gradient": True,
               "model_H": H},
    )


def _build_weighted_model(n, H=0.0, a=0.5):
    return dict(
        warp=_model_warp(H),
        weight=f"-{_fmt(a)}*sqrt(r^2 + {ETA_SQ})",
        r_max=_model_r_max(H),
        tags=("equality", "weighted"),
        hints={"lower_gradient_bound": a, "model_H": H, "model_a": a},
    )


def _build_gaussian(n, c=1.0):
    return dict(
        warp="r",
        weight=f"{_fmt(c / 2.0)}*r^2",
        r_max=3.0,
        tags=("soliton",),
        hints={"lower_gradient_bound": 0.0, "nonneg_gradient": True, "soliton_rho": c},
    )


def _build_flare(n, eps=0.1):
    return dict(
        warp=f"r*(1 + {_fmt(eps)}*r^2)",
        weight="0",
        r_max=3.0,
        tags=("perturbed", "unweighted"),
        hints={"lower_gradient_bound": 0.0, "bounded_f": 0.0, "nonneg_gradient": True},
    )


def _build_wobble(n, eps=0.1):
    return dict(
        warp="r",
        weight=f"-{_fmt(eps)}*sin(r)^2",
        r_max=3.0,
        tags=("perturbed", "weighted"),
        hints={"lower_gradient_bound": eps, "bounded_f": eps},
    )


def _build_bump(n, k=0.5):
    return dict(
        warp="r",
        weight=f"{_fmt(k)}*(1 - exp(-r^2))",
        r_max=3.0,
        tags=("perturbed", "bounded-weight"),
        hints={"lower_gradient_bound": 0.0, "bounded_f": k, "nonneg_gradient": True},
    )


def _build_capped(n, eps=0.1):
    # positively curved warp kept below its half period, for the
    # extended-range displays
    return dict(
        warp=f"sin(r)*(1 + {_fmt(eps)}*sin(r)^2)",
        weight="0",
        r_max=3.0,
        tags=("perturbed", "extended-range"),
        hints={"lower_gradient_bound": 0.0, "bounded_f": 0.0, "nonneg_gradient": True,
               "model_H": 1.0},
    )


FAMILIES = {
    "model": (_build_model, {"H": 0.0}),
    "weighted-model": (_build_weighted_model, {"H": 0.0, "a": 0.5}),
    "gaussian": (_build_gaussian, {"c": 1.0}),
    "flare": (_build_flare, {"eps": 0.1}),
    "wobble": (_build_wobble, {"eps": 0.1}),
    "bump": (_build_bump, {"k": 0.5}),
    "capped": (_build_capped, {"eps": 0.1}),
}


def make_scenario(family, n, spec=DEFAULT_SPEC, **params):
    """Instantiate a catalog family member for dimension n."""
    if family not in FAMILIES:
        raise KeyError(f"unknown scenario family {family!r}")
    builder, defaults = FAMILIES[family]
    merged = dict(defaults)
    for key, value in params.items():
        if key not in defaults:
            raise KeyError(f"family {family!r} has no parameter {key!r}")
        merged[key] = float(value)
    data = builder(n, **merged)
    suffix = ",".join(f"{k}={_fmt(v)}" for k, v in sorted(merged.items()))
    name = f"{family}:n={n}" + (f",{suffix}" if suffix else "")
    return make_space(
        name,
        n,
        data["warp"],
        data["weight"],
        data["r_max"],
        tags=data["tags"],
        hints=data["hints"],
        spec=spec,
    )


def catalog(spec=DEFAULT_SPEC):
    """All built-in scenarios: every family at its documented defaults,
    for each supported dimension, at each catalog curvature for the models."""
    spaces = []
    for n in DIMENSIONS:
        for H in (-1.0, 0.0, 1.0):
            spaces.append(make_scenario("model", n, spec=spec, H=H))
            spaces.append(make_scenario("weighted-model", n, spec=spec, H=H))
        for family in ("gaussian", "flare", "wobble", "bump", "capped"):
            spaces.append(make_scenario(family, n, spec=spec))
    return spaces


_REQUIRED_KEYS = {"name", "dimension", "warp", "weight", "r_max"}
_OPTIONAL_KEYS = {"tags", "expected"}


def load(source, spec=DEFAULT_SPEC):
    """Build a validated space from a scenario file, JSON text, or dict.

    The object must carry exactly the keys name, dimension, warp, weight,
    r_max, optionally tags and expected.  All structural invariants are
    re-checked; violations are rejected naming the failing invariant.
    """
    if isinstance(source, dict):
        data = source
    else:
        text = source
        if isinstance(source, (str, os.PathLike)) and os.path.exists(source):
            with open(source, "r", encoding="utf-8") as handle:
                text = handle.read()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"scenario file is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ValueError("scenario file must hold a single flat object")
    keys = set(data)
    missing = _REQUIRED_KEYS - keys
    if missing:
        raise ValueError(f"scenario file missing keys: {sorted(missing)}")
    unknown = keys - _REQUIRED_KEYS - _OPTIONAL_KEYS
    if unknown:
        raise ValueError(f"scenario file has unknown keys: {sorted(unknown)}")
    n = data["dimension"]
    if not isinstance(n, int):
        raise InvariantViolation(f"dimension must be an integer, got {n!r}")
    return make_space(
        str(data["name"]),
        n,
        str(data["warp"]),
        str(data["weight"]),
        float(data["r_max"]),
        tags=tuple(data.get("tags", ())),
        hints=dict(data.get("expected", {})),
        spec=spec,
    )
