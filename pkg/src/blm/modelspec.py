"""JSON model specifications: parse, validate, build and serialize.

A spec names a family and exactly the fields that family needs::

    {"family": "mo", "parameters": {"lambda1": 1, "lambda2": 2, "lambda12": 3}}
    {"family": "block_basu", "parameters": {"lambda1": .., "lambda2": .., "lambda12": ..}}
    {"family": "freund", "parameters": {"alpha": .., "beta": .., "alpha_prime": .., "beta_prime": ..}}
    {"family": "gmo", "marginals": {"F1": M, "F2": M, "F3": M}}
    {"family": "custom", "theta": 2, "marginals": {"F": M, "G": M}}

with marginal specs ``M`` of type ``exponential`` (``rate``), ``lomax``
(``alpha``, ``beta``), ``signed_mixture`` (``terms``: ``[w, rate]`` or
``[w, rate, shape]`` rows) or ``hazard_table`` (``points``: ``[x, r]`` rows).
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field

from .core import BlmDistribution, make_blm
from .errors import ArgumentError, BlmError
from .families import GmoDistribution, block_basu, freund, marshall_olkin
from .univariate import (
    ExponentialMarginal,
    HazardDefinedMarginal,
    LomaxMarginal,
    MarginalDistribution,
    SignedErlangMixture,
)

FAMILY_PARAMETERS = {
    "mo": ("lambda1", "lambda2", "lambda12"),
    "block_basu": ("lambda1", "lambda2", "lambda12"),
    "freund": ("alpha", "beta", "alpha_prime", "beta_prime"),
}
FAMILY_MARGINALS = {"gmo": ("F1", "F2", "F3"), "custom": ("F", "G")}
FAMILIES = tuple(FAMILY_PARAMETERS) + tuple(FAMILY_MARGINALS)
MARGINAL_FIELDS = {
    "exponential": ("rate",),
    "lomax": ("alpha", "beta"),
    "signed_mixture": ("terms",),
    "hazard_table": ("points",),
}


class SpecError(BlmError, ValueError):
    """A model spec is malformed; ``where`` locates the offending field."""

    def __init__(self, message, where=""):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where


def _number(v, where, positive=True):
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise SpecError(f"expected a finite number, got {v!r}", where)
    if positive and v <= 0:
        raise SpecError(f"expected a positive number, got {v!r}", where)
    return float(v)


def _exact_keys(obj, required, where):
    if not isinstance(obj, dict):
        raise SpecError(f"expected an object, got {type(obj).__name__}", where)
    missing = [k for k in required if k not in obj]
    extra = sorted(set(obj) - set(required))
    if missing:
        raise SpecError(f"missing field(s) {', '.join(missing)}", where)
    if extra:
        raise SpecError(f"unexpected field(s) {', '.join(extra)}", where)


def _rows(v, width, where):
    if not isinstance(v, list) or not v:
        raise SpecError("expected a non-empty list of rows", where)
    out = []
    for k, row in enumerate(v):
        w = f"{where}[{k}]"
        if not isinstance(row, list) or len(row) not in width:
            raise SpecError(f"expected a row of {' or '.join(map(str, width))} numbers", w)
        out.append(row)
    return out


@dataclass(frozen=True)
class ModelSpec:
    """Parsed, field-checked model spec (construction happens in :meth:`build`)."""

    family: str
    parameters: dict = field(default_factory=dict)
    marginals: dict = field(default_factory=dict)
    theta: float | None = None

    @classmethod
    def from_dict(cls, obj) -> "ModelSpec":
        if not isinstance(obj, dict):
            raise SpecError("model spec must be a JSON object")
        fam = obj.get("family")
        if fam not in FAMILIES:
            raise SpecError(f"unknown family {fam!r}; expected one of {', '.join(FAMILIES)}",
                            "family")
        if fam in FAMILY_PARAMETERS:
            _exact_keys(obj, ("family", "parameters"), "")
            names = FAMILY_PARAMETERS[fam]
            _exact_keys(obj["parameters"], names, "parameters")
            params = {k: _number(obj["parameters"][k], f"parameters.{k}") for k in names}
            return cls(fam, parameters=params)
        keys = ("family", "marginals") + (("theta",) if fam == "custom" else ())
        _exact_keys(obj, keys, "")
        names = FAMILY_MARGINALS[fam]
        _exact_keys(obj["marginals"], names, "marginals")
        margs = {k: _check_marginal(obj["marginals"][k], f"marginals.{k}") for k in names}
        theta = _number(obj["theta"], "theta") if fam == "custom" else None
        return cls(fam, marginals=margs, theta=theta)

    def to_dict(self) -> dict:
        out: dict = {"family": self.family}
        if self.family in FAMILY_PARAMETERS:
            out["parameters"] = dict(self.parameters)
        else:
            if self.family == "custom":
                out["theta"] = self.theta
            out["marginals"] = dict(self.marginals)
        return out

    def build(self, *, strict: bool = True):
        """Construct the distribution (``GmoDistribution`` for ``gmo``)."""
        p = self.parameters
        if self.family == "mo":
            return marshall_olkin(p["lambda1"], p["lambda2"], p["lambda12"], strict=strict)
        if self.family == "block_basu":
            return block_basu(p["lambda1"], p["lambda2"], p["lambda12"], strict=strict)
        if self.family == "freund":
            return freund(p["alpha"], p["beta"], p["alpha_prime"], p["beta_prime"], strict=strict)
        margs = {k: build_marginal(v, f"marginals.{k}") for k, v in self.marginals.items()}
        if self.family == "gmo":
            return GmoDistribution(margs["F1"], margs["F2"], margs["F3"])
        return make_blm(margs["F"], margs["G"], self.theta, strict=strict)


def _check_marginal(obj, where):
    if not isinstance(obj, dict) or obj.get("type") not in MARGINAL_FIELDS:
        got = obj.get("type") if isinstance(obj, dict) else obj
        raise SpecError(f"unknown marginal type {got!r}; expected one of "
                        f"{', '.join(MARGINAL_FIELDS)}", f"{where}.type")
    kind = obj["type"]
    _exact_keys(obj, ("type",) + MARGINAL_FIELDS[kind], where)
    if kind == "exponential":
        return {"type": kind, "rate": _number(obj["rate"], f"{where}.rate")}
    if kind == "lomax":
        return {"type": kind, "alpha": _number(obj["alpha"], f"{where}.alpha"),
                "beta": _number(obj["beta"], f"{where}.beta")}
    if kind == "signed_mixture":
        terms = []
        for k, row in enumerate(_rows(obj["terms"], (2, 3), f"{where}.terms")):
            w = f"{where}.terms[{k}]"
            t = [_number(row[0], w, positive=False), _number(row[1], w)]
            if len(row) == 3:
                if isinstance(row[2], bool) or not isinstance(row[2], int) or row[2] < 1:
                    raise SpecError("shape must be a positive integer", w)
                t.append(int(row[2]))
            terms.append(t)
        return {"type": kind, "terms": terms}
    pts = []
    for k, row in enumerate(_rows(obj["points"], (2,), f"{where}.points")):
        w = f"{where}.points[{k}]"
        pts.append([_number(row[0], w, positive=False), _number(row[1], w, positive=False)])
    return {"type": kind, "points": pts}


def build_marginal(obj, where="marginal") -> MarginalDistribution:
    m = _check_marginal(obj, where)
    try:
        if m["type"] == "exponential":
            return ExponentialMarginal(m["rate"])
        if m["type"] == "lomax":
            return LomaxMarginal(m["alpha"], m["beta"])
        if m["type"] == "signed_mixture":
            return SignedErlangMixture(m["terms"])
        return HazardDefinedMarginal.from_table(m["points"])
    except ArgumentError as exc:
        raise SpecError(str(exc), where) from None


def parse_spec(obj) -> ModelSpec:
    return ModelSpec.from_dict(obj)


def _locate(text: str, where: str) -> tuple[int, int]:
    """Line and column of the field path ``where`` (``a.b[2]``) in ``text``."""
    pos = found = 0
    for key in re.findall(r"[^.\[\]]+", where):
        if key.isdigit():
            continue
        k = text.find(f'"{key}"', pos)
        if k < 0:
            break
        pos = found = k
    line = text.count("\n", 0, found) + 1
    return line, found - (text.rfind("\n", 0, found) + 1) + 1


def loads(text: str, source: str = "<spec>") -> ModelSpec:
    """Parse JSON text; every error is reported as ``source:line:col: ...``.

    Syntax errors carry the decoder position; field errors point at the
    offending key (or the start of the document when it is absent).
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(exc.msg, f"{source}:{exc.lineno}:{exc.colno}") from None
    try:
        return ModelSpec.from_dict(obj)
    except SpecError as exc:
        line, col = _locate(text, exc.where)
        raise SpecError(str(exc), f"{source}:{line}:{col}") from None


def load(path: str) -> ModelSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SpecError(exc.strerror or str(exc), path) from None
    return loads(text, path)


def to_spec(d) -> dict:
    """Spec dict of a library object; :class:`ArgumentError` if it has none."""
    spec = getattr(d, "spec", None)
    if spec is None:
        raise ArgumentError(f"{d!r} has no model-spec representation "
                            "(marginals defined by arbitrary callables)")
    return ModelSpec.from_dict(spec).to_dict()


def dumps(d) -> str:
    return json.dumps(to_spec(d), indent=2)


def from_spec(obj, *, strict: bool = True) -> BlmDistribution | GmoDistribution:
    """Build the distribution described by a spec dict or :class:`ModelSpec`."""
    spec = obj if isinstance(obj, ModelSpec) else ModelSpec.from_dict(obj)
    return spec.build(strict=strict)
