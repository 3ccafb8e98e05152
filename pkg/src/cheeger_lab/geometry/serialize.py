"""Key-value text form of domains and candidate sets.

One ``key = value`` pair per line; vectors are comma separated::

    kind = disk
    center = 0.5, 0.5
    radius = 0.4
    margin = 0.05
"""

from __future__ import annotations

import math

from cheeger_lab.geometry.candidates import CANDIDATE_KINDS, Ball, CandidateSet, HalfSpace, RoundedSlab
from cheeger_lab.geometry.domains import DOMAIN_KINDS, Annulus, Disk, Domain, Rectangle


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (tuple, list)):
        return ", ".join(_fmt(v) for v in value)
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _vec(text: str) -> tuple[float, ...]:
    return tuple(float(part) for part in text.split(","))


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("true", "yes", "1"):
        return True
    if low in ("false", "no", "0"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def to_mapping(obj) -> dict[str, str]:
    out = {"kind": obj.kind}
    out.update({k: _fmt(v) for k, v in obj.params().items()})
    if isinstance(obj, Domain):
        if obj.margin is not None:
            out["margin"] = _fmt(float(obj.margin))
    else:
        out["complement"] = _fmt(obj.complement)
    return out


def to_text(obj) -> str:
    return "".join(f"{k} = {v}\n" for k, v in to_mapping(obj).items())


def parse_text(text: str) -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key] = value
    return out


def domain_from_mapping(m: dict[str, str]) -> Domain:
    kind = m.get("kind")
    if kind not in DOMAIN_KINDS:
        raise ValueError(f"unknown domain kind {kind!r}; expected one of {sorted(DOMAIN_KINDS)}")
    margin = float(m["margin"]) if "margin" in m else None
    center = _vec(m["center"])
    if kind == "disk":
        return Disk(center, float(m["radius"]), margin=margin)
    if kind == "rectangle":
        return Rectangle(center, _vec(m["sides"]), float(m.get("rounding", 0.02)), margin=margin)
    return Annulus(center, float(m["inner"]), float(m["outer"]), margin=margin)


def candidate_from_mapping(m: dict[str, str]) -> CandidateSet:
    kind = m.get("kind")
    if kind not in CANDIDATE_KINDS:
        raise ValueError(f"unknown candidate kind {kind!r}; expected one of {sorted(CANDIDATE_KINDS)}")
    comp = _bool(m.get("complement", "false"))
    if kind == "ball":
        return Ball(_vec(m["center"]), float(m["radius"]), comp)
    if "angle" in m:
        theta = float(m["angle"])
        normal = (math.cos(theta), math.sin(theta))
    else:
        normal = _vec(m["normal"])
    if kind == "halfspace":
        return HalfSpace(normal, float(m["offset"]), comp)
    return RoundedSlab(normal, float(m["offset"]), float(m["rounding"]), _vec(m["box_lo"]), _vec(m["box_hi"]), comp)


def from_text(text: str):
    m = parse_text(text)
    if m.get("kind") in DOMAIN_KINDS:
        return domain_from_mapping(m)
    return candidate_from_mapping(m)
