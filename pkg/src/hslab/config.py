"""Run configuration: key = value files, domain strings and ranges.

Precedence is flags over config-file entries over defaults.  Domain strings
look like ``annulus(center=0, rin=1, rout=8)``; ranges like ``1..5``,
``2..32`` or ``1,2,4``.
"""

import re
from dataclasses import dataclass, field

import numpy as np

from .domains import Annulus, Ball, Cone, ExteriorBall, HalfSpace, PuncturedBall, PuncturedSpace
from .errors import ParameterDomainError

__all__ = ["RunConfig", "read_config_file", "parse_domain", "parse_range", "merge"]

_LINE = re.compile(r"^\s*([A-Za-z_][\w-]*)\s*=\s*(.*?)\s*$")


@dataclass
class RunConfig:
    subcommand: str
    params: dict = field(default_factory=dict)
    out: str = None
    format: str = "json"

    def echo(self):
        """Every field, as given, for output headers."""
        return {"subcommand": self.subcommand, "params": dict(sorted(self.params.items())),
                "out": self.out, "format": self.format}


def read_config_file(path):
    """Parse ``key = value`` lines; ``#`` starts a comment.  Values stay strings."""
    entries = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            m = _LINE.match(line)
            if m is None:
                raise ParameterDomainError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
            entries[m.group(1).replace("-", "_")] = m.group(2)
    return entries


def merge(defaults, file_entries, flags):
    """defaults < config file < flags; a flag left at None does not override."""
    out = dict(defaults)
    out.update(file_entries)
    out.update({k: v for k, v in flags.items() if v is not None})
    return out


def parse_range(text, kind=float):
    """``a..b`` (integer steps), ``a,b,c`` or a single value."""
    text = str(text).strip()
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise ParameterDomainError(f"empty range {text!r}")
            return [kind(v) for v in range(lo, hi + 1)]
        return [kind(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ParameterDomainError(f"cannot parse range {text!r}") from exc


def _split_args(body):
    parts, depth, cur = [], 0, ""
    for ch in body:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    if cur.strip():
        parts.append(cur)
    return parts


def _center(value, dim):
    value = value.strip()
    if value in ("0", "origin"):
        return np.zeros(dim)
    coords = [float(v) for v in value.strip("[]").replace(";", ",").split(",")]
    if len(coords) != dim:
        raise ParameterDomainError(f"center needs {dim} coordinates, got {len(coords)}")
    return np.array(coords)


_KINDS = {
    "halfspace": (HalfSpace, ()),
    "ball": (Ball, ("radius",)),
    "annulus": (Annulus, ("rin", "rout")),
    "punctured-ball": (PuncturedBall, ("radius",)),
    "exterior": (ExteriorBall, ("radius",)),
    "punctured-space": (PuncturedSpace, ()),
    "cone": (Cone, ("aperture", "height")),
}


def parse_domain(text, dim, overrides=None):
    """Domain from ``kind(key=value, ...)``; ``overrides`` replaces keys (used by sweeps)."""
    m = re.fullmatch(r"\s*([a-z-]+)\s*(?:\((.*)\))?\s*", text)
    if m is None or m.group(1) not in _KINDS:
        raise ParameterDomainError(f"unknown domain {text!r}; kinds: {', '.join(_KINDS)}")
    kind = m.group(1)
    args = {}
    for part in _split_args(m.group(2) or ""):
        if "=" not in part:
            raise ParameterDomainError(f"domain argument {part!r} is not key=value")
        k, v = part.split("=", 1)
        args[k.strip()] = v.strip()
    args.update({k: str(v) for k, v in (overrides or {}).items()})
    cls, needed = _KINDS[kind]
    center = _center(args.pop("center", "0"), dim)
    defaults = {"radius": "1", "rin": "1", "rout": "8", "aperture": "1", "height": "1"}
    vals = {k: float(args.pop(k, defaults[k])) for k in needed}
    if args:
        raise ParameterDomainError(f"unexpected domain arguments {sorted(args)} for {kind}")
    if cls is HalfSpace or cls is PuncturedSpace:
        return cls(dim)
    if cls is Annulus:
        return Annulus(dim, vals["rin"], vals["rout"], center)
    if cls is Cone:
        return Cone(dim, vals["aperture"], vals["height"])
    return cls(dim, vals["radius"], center)
