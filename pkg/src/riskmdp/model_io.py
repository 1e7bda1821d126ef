"""JSON model files: parsing, validation diagnostics, and exact emission.

A model file is one JSON document with sections ``model`` (the tabulated
decision problem), ``risk`` (one risk specification or a per-stage
list), optional ``bounds`` (an envelope specification), and ``task``
(what to run, with its parameters). Floats are emitted with Python's
shortest exact representation, so a file written from a model parses
back to the identical in-memory object.
"""

from __future__ import annotations

import json
from typing import Any

from .distributions import make_distribution
from .errors import RiskMdpError
from .mdp_core import BoundingSpec, BoundMode, MdpModel
from .risk_measures import (
    Distortion,
    DistortionFunction,
    Entropic,
    Expectation,
    ExpectedShortfall,
    Mixture,
    RiskMeasure,
    Spectral,
    StepSpectrum,
    ValueAtRisk,
)

__all__ = [
    "ModelFileError",
    "parse_risk",
    "risk_to_obj",
    "parse_model",
    "model_to_obj",
    "parse_bounds",
    "bounds_to_obj",
    "parse_model_file",
    "model_file_dict",
    "load_model_file",
    "dump_model_file",
    "TASK_TYPES",
]

TASK_TYPES = (
    "solve-finite",
    "solve-infinite",
    "verify-axioms",
    "verify-bounds",
    "check-contraction",
    "robust-check",
    "example",
)


class ModelFileError(RiskMdpError):
    """Carries every schema diagnostic found while parsing a model file."""

    def __init__(self, diagnostics: list[str]):
        self.diagnostics = diagnostics
        super().__init__("; ".join(diagnostics))


def _fail(msg: str) -> None:
    raise ModelFileError([msg])


def parse_risk(obj: Any) -> RiskMeasure:
    if not isinstance(obj, dict) or "kind" not in obj:
        _fail(f"risk spec must be an object with a 'kind', got {obj!r}")
    kind = obj["kind"]
    if kind == "expectation":
        return Expectation()
    if kind == "value_at_risk":
        return ValueAtRisk(level=float(obj["level"]))
    if kind == "expected_shortfall":
        return ExpectedShortfall(level=float(obj["level"]))
    if kind == "distortion":
        form = obj.get("form", "piecewise_linear")
        if form == "piecewise_linear":
            knots = tuple((float(u), float(g)) for u, g in obj["knots"])
            return Distortion(g=DistortionFunction(form=form, knots=knots))
        level = obj.get("level")
        return Distortion(
            g=DistortionFunction(form=form, level=None if level is None else float(level))
        )
    if kind == "spectral":
        bps = tuple((float(u), float(p)) for u, p in obj["breakpoints"])
        return Spectral(phi=StepSpectrum(breakpoints=bps))
    if kind == "entropic":
        return Entropic(gamma=float(obj["gamma"]))
    if kind == "mixture":
        return Mixture(
            weight=float(obj["weight"]),
            first=parse_risk(obj["first"]),
            second=parse_risk(obj["second"]),
        )
    _fail(f"unknown risk kind {kind!r}")


def risk_to_obj(risk: RiskMeasure) -> dict:
    if isinstance(risk, Expectation):
        return {"kind": "expectation"}
    if isinstance(risk, ValueAtRisk):
        return {"kind": "value_at_risk", "level": risk.level}
    if isinstance(risk, ExpectedShortfall):
        return {"kind": "expected_shortfall", "level": risk.level}
    if isinstance(risk, Distortion):
        g = risk.g
        if g.form == "piecewise_linear":
            return {"kind": "distortion", "form": g.form, "knots": [list(k) for k in g.knots]}
        out = {"kind": "distortion", "form": g.form}
        if g.level is not None:
            out["level"] = g.level
        return out
    if isinstance(risk, Spectral):
        return {"kind": "spectral", "breakpoints": [list(b) for b in risk.phi.breakpoints]}
    if isinstance(risk, Entropic):
        return {"kind": "entropic", "gamma": risk.gamma}
    if isinstance(risk, Mixture):
        return {
            "kind": "mixture",
            "weight": risk.weight,
            "first": risk_to_obj(risk.first),
            "second": risk_to_obj(risk.second),
        }
    _fail(f"cannot serialize risk {risk!r}")


def parse_model(obj: Any) -> MdpModel:
    """Build the model, collecting structural diagnostics before touching tables."""
    diags: list[str] = []
    if not isinstance(obj, dict):
        raise ModelFileError(["model section must be an object"])
    for key in ("n_states", "n_actions", "admissible", "disturbance", "transition", "cost", "terminal_cost"):
        if key not in obj:
            diags.append(f"model.{key} is missing")
    if diags:
        raise ModelFileError(diags)
    dist_obj = obj["disturbance"]
    if not isinstance(dist_obj, dict) or "probs" not in dist_obj:
        raise ModelFileError(["model.disturbance must be an object with 'probs'"])
    probs = [float(p) for p in dist_obj["probs"]]
    atoms = dist_obj.get("indices", list(range(len(probs))))
    disturbance = make_distribution([float(a) for a in atoms], probs)
    n_states = int(obj["n_states"])
    n_actions = int(obj["n_actions"])
    # table z-width: explicit, else inferred from the data, else the law size
    if "n_outcomes" in dist_obj:
        k = int(dist_obj["n_outcomes"])
    else:
        k = max(
            (len(cell) for row in obj["transition"] for cell in row if cell is not None),
            default=len(probs),
        )

    def table(name: str, cast):
        raw = obj[name]
        if len(raw) != n_states:
            diags.append(f"model.{name} has {len(raw)} rows, expected {n_states}")
            return None
        out = []
        for x, row in enumerate(raw):
            if len(row) != n_actions:
                diags.append(f"model.{name}[{x}] has {len(row)} actions, expected {n_actions}")
                return None
            cells = []
            for a, cell in enumerate(row):
                if cell is None:
                    cells.append(tuple(cast(0) for _ in range(k)))
                    continue
                if len(cell) != k:
                    diags.append(f"model.{name}[{x}][{a}] has {len(cell)} outcomes, expected {k}")
                    return None
                cells.append(tuple(cast(v) for v in cell))
            out.append(tuple(cells))
        return tuple(out)

    transition = table("transition", int)
    cost = table("cost", float)
    if diags or transition is None or cost is None:
        raise ModelFileError(diags)
    labels = obj.get("state_labels")
    z_labels = obj.get("z_labels")
    return MdpModel(
        n_states=n_states,
        n_actions=n_actions,
        admissible=tuple(tuple(int(a) for a in row) for row in obj["admissible"]),
        disturbance=disturbance,
        transition=transition,
        cost=cost,
        terminal_cost=tuple(float(c) for c in obj["terminal_cost"]),
        discount=float(obj.get("discount", 1.0)),
        state_labels=None if labels is None else tuple(float(v) for v in labels),
        z_labels=None if z_labels is None else tuple(float(v) for v in z_labels),
    )


def model_to_obj(model: MdpModel) -> dict:
    def rows(tab):
        out = []
        for x in range(model.n_states):
            row = []
            for a in range(model.n_actions):
                row.append(list(tab[x][a]) if a in model.admissible[x] else None)
            out.append(row)
        return out

    obj = {
        "n_states": model.n_states,
        "n_actions": model.n_actions,
        "admissible": [list(row) for row in model.admissible],
        "disturbance": {
            "indices": [int(a) for a in model.disturbance.atoms],
            "probs": list(model.disturbance.probs),
            "n_outcomes": model.n_outcomes,
        },
        "transition": rows(model.transition),
        "cost": rows(model.cost),
        "terminal_cost": list(model.terminal_cost),
        "discount": model.discount,
    }
    if model.state_labels is not None:
        obj["state_labels"] = list(model.state_labels)
    if model.z_labels is not None:
        obj["z_labels"] = list(model.z_labels)
    return obj


def parse_bounds(obj: Any) -> BoundingSpec:
    if not isinstance(obj, dict):
        _fail("bounds section must be an object")
    try:
        return BoundingSpec(
            lb=tuple(float(v) for v in obj["lb"]),
            ub=tuple(float(v) for v in obj["ub"]),
            eps_split=tuple(float(v) for v in obj.get("eps_split", (0.5, 0.5))),
            alpha=float(obj.get("alpha", 1.0)),
            mode=BoundMode(obj.get("mode", "coherent")),
        )
    except (KeyError, ValueError) as exc:
        if isinstance(exc, RiskMdpError):
            raise
        _fail(f"malformed bounds section: {exc}")


def bounds_to_obj(spec: BoundingSpec) -> dict:
    return {
        "lb": list(spec.lb),
        "ub": list(spec.ub),
        "eps_split": list(spec.eps_split),
        "alpha": spec.alpha,
        "mode": spec.mode.value,
    }


def parse_model_file(doc: Any) -> dict:
    """Split a loaded JSON document into typed sections.

    Returns a dict with keys model (MdpModel or None for example tasks),
    risk (RiskMeasure or list), bounds (BoundingSpec or None), task
    (dict with a validated 'type').
    """
    if not isinstance(doc, dict):
        raise ModelFileError(["model file must be a JSON object"])
    task = doc.get("task")
    if not isinstance(task, dict) or "type" not in task:
        raise ModelFileError(["task section must be an object with a 'type'"])
    if task["type"] not in TASK_TYPES:
        raise ModelFileError([f"unknown task type {task['type']!r}"])
    model = None
    if task["type"] not in ("example", "verify-axioms"):
        if "model" not in doc:
            raise ModelFileError(["model section is missing"])
        model = parse_model(doc["model"])
    elif "model" in doc:
        model = parse_model(doc["model"])
    risk = None
    if "risk" in doc:
        raw = doc["risk"]
        risk = [parse_risk(r) for r in raw] if isinstance(raw, list) else parse_risk(raw)
    bounds = parse_bounds(doc["bounds"]) if "bounds" in doc else None
    return {"model": model, "risk": risk, "bounds": bounds, "task": task}


def model_file_dict(model: MdpModel, risk, task: dict, bounds: BoundingSpec | None = None) -> dict:
    doc: dict = {"model": model_to_obj(model)}
    if isinstance(risk, (list, tuple)):
        doc["risk"] = [risk_to_obj(r) for r in risk]
    else:
        doc["risk"] = risk_to_obj(risk)
    if bounds is not None:
        doc["bounds"] = bounds_to_obj(bounds)
    doc["task"] = task
    return doc


def load_model_file(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_model_file(json.load(fh))


def dump_model_file(doc: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
