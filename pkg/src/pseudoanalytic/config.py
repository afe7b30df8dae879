"""JSON run configuration for the command-line tool.

Every block is optional; missing keys take the defaults below. Unknown keys
are rejected so that typos do not silently fall back to defaults.
"""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass, field

from .algebra import Hyperbolic
from .errors import ConfigError
from .medium import exp_profile, poly_profile, table_profile

COMMANDS = ("algebra-selftest", "formal-powers", "maxwell-verify",
            "forcefree-verify", "dirac-verify")

DEFAULTS = {
    "command": None,
    "seed": 0,
    "medium": {
        "eps": {"kind": "exp", "rate": -2.0, "amplitude": 1.0},
        "mu": 1.0,
        "x_range": [0.0, 1.0],
        "samples": 2001,
    },
    "grid": {
        # per-command defaults are filled in by the runner when these are null
        "base_nodes": None,
        "levels": 3,
        "t_range": [0.0, 1.0],
        "box": None,
    },
    "algebra": {"cases": 1000},
    "formal_powers": {"n_max": 4, "a": [1.0, [0.0, 1.0]], "samples": 2001},
    "maxwell": {"n": 2, "a1": 1.0, "a2": [0.0, 1.0], "tuples": 20},
    "forcefree": {"alpha": [1.0, [0.0, 1.0], [1.0, 1.0]], "axis": [1, 2, 3],
                  "tuples": 5, "lambdas": 10},
    "dirac": {"m": 1.0, "omega": 0.5, "phi": 0.3, "tuples": 20},
    "output": {"dir": "out"},
    "tolerances": {"min_order": 1.9, "zero_tol": 1e-9, "det_tol": 1e-10,
                   "algebra_tol": 1e-12, "integrator_order": 3.9},
}

_SOURCE_KEYS = {"sources", "rho", "current", "charge"}


@dataclass
class RunConfig:
    command: str | None
    seed: int
    medium: dict
    grid: dict
    algebra: dict
    formal_powers: dict
    maxwell: dict
    forcefree: dict
    dirac: dict
    output: dict
    tolerances: dict
    source: str = field(default="<defaults>", compare=False)

    def profile(self):
        m = self.medium
        eps = m["eps"]
        kw = {"mu": m["mu"], "samples": m["samples"]}
        if eps["kind"] == "exp":
            return exp_profile(eps.get("rate", 0.0), eps.get("amplitude", 1.0),
                               tuple(m["x_range"]), **kw)
        if eps["kind"] == "poly":
            return poly_profile(eps["coeffs"], eps.get("power", 1.0), tuple(m["x_range"]), **kw)
        return table_profile(eps["x"], eps["eps"], x_range=m.get("x_range"), **kw)


def _fail(path, msg):
    raise ConfigError(f"{path}: {msg}")


def _merge(defaults, given, path):
    if not isinstance(given, dict):
        _fail(path or "<root>", "expected an object")
    out = copy.deepcopy(defaults)
    for key, value in given.items():
        where = f"{path}.{key}" if path else key
        if key in _SOURCE_KEYS:
            _fail(where, "charge and current sources are not supported")
        if key not in defaults:
            _fail(where, f"unknown key (allowed: {', '.join(sorted(defaults))})")
        if isinstance(defaults[key], dict) and key != "eps":
            out[key] = _merge(defaults[key], value, where)
        else:
            out[key] = value
    return out


def _number(path, v, positive=False, nonneg=False):
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        _fail(path, f"expected a finite number, got {v!r}")
    if positive and not v > 0:
        _fail(path, f"must be positive, got {v}")
    if nonneg and v < 0:
        _fail(path, f"must be non-negative, got {v}")
    return float(v)


def _int(path, v, lo):
    if isinstance(v, bool) or not isinstance(v, int) or v < lo:
        _fail(path, f"expected an integer >= {lo}, got {v!r}")
    return v


def _range(path, v):
    if not (isinstance(v, list) and len(v) == 2):
        _fail(path, f"expected [lo, hi], got {v!r}")
    lo, hi = _number(path, v[0]), _number(path, v[1])
    if not hi > lo:
        _fail(path, f"empty range {v}")
    return [lo, hi]


def parse_complex(path, v):
    """A number or a ``[re, im]`` pair."""
    if isinstance(v, list):
        if len(v) != 2:
            _fail(path, f"expected [re, im], got {v!r}")
        return complex(_number(path, v[0]), _number(path, v[1]))
    return complex(_number(path, v))


def parse_hyperbolic(path, v):
    """A number or a ``[u, v]`` pair meaning ``u + v j``."""
    z = parse_complex(path, v)
    if z.imag == 0 and not isinstance(v, list):
        return float(z.real)
    return Hyperbolic(z.real, z.imag)


def _validate(cfg):
    if cfg["command"] is not None and cfg["command"] not in COMMANDS:
        _fail("command", f"unknown command {cfg['command']!r}")
    _int("seed", cfg["seed"], 0)

    m = cfg["medium"]
    _number("medium.mu", m["mu"], positive=True)
    m["x_range"] = _range("medium.x_range", m["x_range"])
    _int("medium.samples", m["samples"], 5)
    eps = m["eps"]
    if not isinstance(eps, dict) or "kind" not in eps:
        _fail("medium.eps", "expected an object with a 'kind'")
    allowed = {"exp": {"kind", "rate", "amplitude"},
               "poly": {"kind", "coeffs", "power"},
               "table": {"kind", "x", "eps"}}
    if eps["kind"] not in allowed:
        _fail("medium.eps.kind", f"must be one of {sorted(allowed)}, got {eps['kind']!r}")
    for key in eps:
        if key not in allowed[eps["kind"]]:
            _fail(f"medium.eps.{key}", f"unknown key for kind {eps['kind']!r}")
    if eps["kind"] == "exp":
        _number("medium.eps.rate", eps.get("rate", 0.0))
        _number("medium.eps.amplitude", eps.get("amplitude", 1.0), positive=True)
    elif eps["kind"] == "poly":
        coeffs = eps.get("coeffs")
        if not isinstance(coeffs, list) or not coeffs:
            _fail("medium.eps.coeffs", "expected a non-empty list")
        for i, c in enumerate(coeffs):
            _number(f"medium.eps.coeffs[{i}]", c)
        _number("medium.eps.power", eps.get("power", 1.0))
    else:
        xs, ev = eps.get("x"), eps.get("eps")
        if not isinstance(xs, list) or not isinstance(ev, list) or len(xs) != len(ev) or len(xs) < 4:
            _fail("medium.eps", "table needs lists 'x' and 'eps' of equal length >= 4")
        for i, (a, b) in enumerate(zip(xs, ev)):
            _number(f"medium.eps.x[{i}]", a)
            _number(f"medium.eps.eps[{i}]", b, positive=True)
        if any(b <= a for a, b in zip(xs, xs[1:])):
            _fail("medium.eps.x", "must be strictly increasing")

    g = cfg["grid"]
    if g["base_nodes"] is not None:
        _int("grid.base_nodes", g["base_nodes"], 5)
    _int("grid.levels", g["levels"], 1)
    g["t_range"] = _range("grid.t_range", g["t_range"])
    if g["box"] is not None:
        g["box"] = _range("grid.box", g["box"])

    _int("algebra.cases", cfg["algebra"]["cases"], 1)

    fp = cfg["formal_powers"]
    _int("formal_powers.n_max", fp["n_max"], 0)
    _int("formal_powers.samples", fp["samples"], 5)
    if not isinstance(fp["a"], list) or not fp["a"]:
        _fail("formal_powers.a", "expected a non-empty list of coefficients")
    fp["a"] = [parse_hyperbolic(f"formal_powers.a[{i}]", v) for i, v in enumerate(fp["a"])]

    mx = cfg["maxwell"]
    _int("maxwell.n", mx["n"], 0)
    _int("maxwell.tuples", mx["tuples"], 0)
    mx["a1"] = parse_hyperbolic("maxwell.a1", mx["a1"])
    mx["a2"] = parse_hyperbolic("maxwell.a2", mx["a2"])

    ff = cfg["forcefree"]
    # always a list of values; each value is a number or [re, im]
    alphas = ff["alpha"] if isinstance(ff["alpha"], list) else [ff["alpha"]]
    if not alphas:
        _fail("forcefree.alpha", "expected at least one value")
    ff["alpha"] = [parse_complex(f"forcefree.alpha[{i}]", v) for i, v in enumerate(alphas)]
    axes = ff["axis"] if isinstance(ff["axis"], list) else [ff["axis"]]
    for i, k in enumerate(axes):
        if k not in (1, 2, 3) or isinstance(k, bool):
            _fail(f"forcefree.axis[{i}]", f"must be 1, 2 or 3, got {k!r}")
    ff["axis"] = axes
    _int("forcefree.tuples", ff["tuples"], 0)
    _int("forcefree.lambdas", ff["lambdas"], 0)

    d = cfg["dirac"]
    _number("dirac.m", d["m"], nonneg=True)
    _number("dirac.omega", d["omega"])
    _number("dirac.phi", d["phi"])
    _int("dirac.tuples", d["tuples"], 0)

    if not isinstance(cfg["output"]["dir"], str) or not cfg["output"]["dir"]:
        _fail("output.dir", "expected a non-empty string")

    t = cfg["tolerances"]
    for key in t:
        _number(f"tolerances.{key}", t[key], positive=True)
    return cfg


def load_config(text=None, source="<defaults>"):
    """Parse and validate JSON text (None means all defaults)."""
    given = {}
    if text is not None:
        try:
            given = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    try:
        cfg = _validate(_merge(DEFAULTS, given, ""))
    except ConfigError as exc:
        raise ConfigError(f"{source}: {exc}") from None
    return RunConfig(**cfg, source=source)


def load_config_file(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config ({exc.strerror})") from None
    return load_config(text, str(path))
