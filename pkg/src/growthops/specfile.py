"""Run configuration files.

A config is TOML with top-level run parameters and the tables ``nu``,
``mu``, ``psi`` and ``phi``::

    n = 1
    m = 1
    p = 1

    [nu]
    kind = "standard"
    alpha = 1.0

    [psi]
    kind = "poly"
    dimension = 2
    terms = [[1.0, 0.0, [0, 0]]]   # [re, im, exponents]

    [phi]
    kind = "poly"
    components = [[[0.5, 0.0, [1, 0]]], [[0.5, 0.0, [0, 1]]]]

``dumps`` writes floats with repr so ``loads(dumps(c)) == c`` bit for bit.
"""

import re
import sys
from dataclasses import dataclass, field, fields

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError
from .mobius import MobiusMap
from .symbols import LacunarySeries, MultiPoly, SelfMap
from .weights import standard_weight, tabulated_weight, unit_weight

MAX_M_CAP = 40
DIRS_CAP = 1 << 14
ORDER_CAP = 8
THEOREMS = ("A1", "A2", "C1", "C2")


@dataclass(frozen=True)
class WeightSpec:
    kind: str = "standard"
    alpha: float = None
    a: float = None
    b: float = None
    delta: float = None
    t: tuple = None
    values: tuple = None


@dataclass(frozen=True)
class SymbolSpec:
    """A polynomial (terms of (coefficient, exponents)) or a lacunary series."""

    kind: str = "poly"
    dimension: int = 1
    terms: tuple = ()
    p: int = 1
    q: int = 10
    alpha: float = 0.5
    K: int = 8
    order: int = 0


@dataclass(frozen=True)
class MapSpec:
    kind: str = "poly"
    components: tuple = ()  # tuple of SymbolSpec terms tuples
    alpha: tuple = ()  # Mobius parameter


@dataclass(frozen=True)
class RunConfig:
    nu: WeightSpec
    mu: WeightSpec
    psi: SymbolSpec
    phi: MapSpec
    n: int = 1
    m: int = 1
    p: int = 1
    n0: int = None
    max_m: int = 14
    dirs: int = 256
    seed: int = 0
    name: str = "run"
    theorems: tuple = THEOREMS
    restrict: str = "phi"

    @property
    def dimension(self):
        if self.phi.kind == "mobius":
            return len(self.phi.alpha)
        return len(self.phi.components)


# ---------------------------------------------------------------------------
# parsing


def _locate(text, key):
    """(line, column) of the first assignment or table header for ``key``."""
    if text is None:
        return None, None
    pat = re.compile(r"^\s*(\[\s*" + re.escape(key) + r"\s*\]|" + re.escape(key) + r"\s*=)")
    for i, line in enumerate(text.splitlines(), 1):
        mt = pat.match(line)
        if mt:
            return i, mt.start(1) + 1
    return None, None


def _fail(msg, text, key):
    line, col = _locate(text, key)
    raise ConfigError(msg, line, col)


def _float(v, text, key):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        _fail(f"{key} must be a number", text, key)
    return float(v)


def _int(v, text, key, lo=None, hi=None):
    if isinstance(v, bool) or not isinstance(v, int):
        _fail(f"{key} must be an integer", text, key)
    if (lo is not None and v < lo) or (hi is not None and v > hi):
        _fail(f"{key}={v} outside [{lo}, {hi}]", text, key)
    return v


def _terms(raw, text, key, dimension=None):
    if not isinstance(raw, list):
        _fail(f"{key} must be a list of [re, im, exponents]", text, key)
    out = []
    for t in raw:
        if not (isinstance(t, list) and len(t) == 3 and isinstance(t[2], list)):
            _fail(f"bad term {t!r} in {key}", text, key)
        c = complex(_float(t[0], text, key), _float(t[1], text, key))
        e = tuple(_int(x, text, key, 0) for x in t[2])
        if dimension is not None and len(e) != dimension:
            _fail(f"term {t!r} in {key} has {len(e)} exponents, expected {dimension}", text, key)
        out.append((c, e))
    return tuple(out)


_TABLE_KEYS = {
    "weight": {"kind", "alpha", "a", "b", "delta", "t", "values"},
    "symbol": {"kind", "dimension", "terms", "p", "q", "alpha", "K", "order"},
    "map": {"kind", "components", "alpha"},
}


def _check_keys(raw, allowed, text, key):
    for k in raw:
        if k not in allowed:
            _fail(f"unknown key {k!r} in [{key}]", text, k)


def _weight(raw, text, key):
    if not isinstance(raw, dict):
        _fail(f"missing table [{key}]", text, key)
    _check_keys(raw, _TABLE_KEYS["weight"], text, key)
    kind = raw.get("kind", "standard")
    opt = {k: _float(raw[k], text, key) for k in ("a", "b", "delta") if k in raw}
    if kind == "standard":
        if "alpha" not in raw:
            _fail(f"[{key}] needs alpha", text, key)
        return WeightSpec("standard", alpha=_float(raw["alpha"], text, key), **opt)
    if kind == "unit":
        return WeightSpec("unit", **opt)
    if kind == "tabulated":
        t = tuple(_float(x, text, key) for x in raw.get("t", []))
        v = tuple(_float(x, text, key) for x in raw.get("values", []))
        if len(t) != len(v) or len(t) < 2:
            _fail(f"[{key}] needs matching t and values", text, key)
        if "a" not in opt or "b" not in opt:
            _fail(f"[{key}] tabulated weights need witnesses a and b", text, key)
        return WeightSpec("tabulated", t=t, values=v, **opt)
    _fail(f"unknown weight kind {kind!r}", text, key)


def _symbol(raw, text, key="psi"):
    if not isinstance(raw, dict):
        _fail(f"missing table [{key}]", text, key)
    _check_keys(raw, _TABLE_KEYS["symbol"], text, key)
    kind = raw.get("kind", "poly")
    dim = _int(raw.get("dimension", 0), text, key, 1, 64)
    if kind == "poly":
        return SymbolSpec("poly", dim, _terms(raw.get("terms", []), text, key, dim))
    if kind == "lacunary":
        return SymbolSpec("lacunary", dim, p=_int(raw.get("p", 1), text, key, 1, dim),
                          q=_int(raw.get("q", 10), text, key, 2), alpha=_float(raw.get("alpha", 0.5), text, key),
                          K=_int(raw.get("K", 8), text, key, 0, 20), order=_int(raw.get("order", 0), text, key, 0))
    _fail(f"unknown symbol kind {kind!r}", text, key)


def _map(raw, text, key="phi"):
    if not isinstance(raw, dict):
        _fail(f"missing table [{key}]", text, key)
    _check_keys(raw, _TABLE_KEYS["map"], text, key)
    kind = raw.get("kind", "poly")
    if kind == "poly":
        comps = raw.get("components")
        if not isinstance(comps, list) or not comps:
            _fail(f"[{key}] needs a nonempty components list", text, key)
        N = len(comps)
        return MapSpec("poly", tuple(_terms(c, text, key, N) for c in comps))
    if kind == "mobius":
        a = raw.get("alpha")
        if not isinstance(a, list) or not a:
            _fail(f"[{key}] needs alpha as a list of [re, im]", text, key)
        vals = []
        for x in a:
            if not (isinstance(x, list) and len(x) == 2):
                _fail(f"bad alpha entry {x!r}", text, key)
            vals.append(complex(_float(x[0], text, key), _float(x[1], text, key)))
        return MapSpec("mobius", alpha=tuple(vals))
    _fail(f"unknown map kind {kind!r}", text, key)


def loads(text):
    """Parse config text into a RunConfig; errors carry line/column."""
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        mt = re.search(r"line (\d+), column (\d+)", str(exc))
        msg = re.sub(r"\s*\(at (line \d+, column \d+|end of document)\)", "", str(exc)) or "invalid TOML"
        if mt:
            line, col = int(mt.group(1)), int(mt.group(2))
        else:
            rows = text.split("\n")
            line, col = len(rows), len(rows[-1]) + 1
        raise ConfigError(msg, line, col) from None
    known = {f.name for f in fields(RunConfig)}
    for k in raw:
        if k not in known:
            _fail(f"unknown key {k!r}", text, k)
    nu = _weight(raw.get("nu"), text, "nu")
    mu = _weight(raw.get("mu"), text, "mu")
    psi = _symbol(raw.get("psi"), text)
    phi = _map(raw.get("phi"), text)
    N = len(phi.alpha) if phi.kind == "mobius" else len(phi.components)
    if psi.dimension != N:
        _fail(f"psi has dimension {psi.dimension} but phi has {N} components", text, "psi")
    kw = {
        "n": _int(raw.get("n", 1), text, "n", 0, ORDER_CAP),
        "m": _int(raw.get("m", 1), text, "m", 0, ORDER_CAP),
        "p": _int(raw.get("p", 1), text, "p", 1, N),
        "max_m": _int(raw.get("max_m", 14), text, "max_m", 6, MAX_M_CAP),
        "dirs": _int(raw.get("dirs", 256), text, "dirs", 1, DIRS_CAP),
        "seed": _int(raw.get("seed", 0), text, "seed", 0),
    }
    if "n0" in raw:
        kw["n0"] = _int(raw["n0"], text, "n0", 0, ORDER_CAP + 1)
    if "name" in raw:
        if not isinstance(raw["name"], str):
            _fail("name must be a string", text, "name")
        kw["name"] = raw["name"]
    if "theorems" in raw:
        th = raw["theorems"]
        if not isinstance(th, list) or any(t not in THEOREMS for t in th):
            _fail(f"theorems must be a list drawn from {list(THEOREMS)}", text, "theorems")
        kw["theorems"] = tuple(th)
    if "restrict" in raw:
        if raw["restrict"] not in ("phi", "phi_p"):
            _fail("restrict must be 'phi' or 'phi_p'", text, "restrict")
        kw["restrict"] = raw["restrict"]
    return RunConfig(nu, mu, psi, phi, **kw)


def load(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


# ---------------------------------------------------------------------------
# writing


def _f(x):
    x = float(x)
    if x != x:
        return "nan"
    if x in (float("inf"), float("-inf")):
        return "inf" if x > 0 else "-inf"
    return repr(x)


def _s(x):
    return '"' + str(x).replace("\\", "\\\\").replace('"', '\\"') + '"'


def _terms_text(terms):
    return "[" + ", ".join(f"[{_f(c.real)}, {_f(c.imag)}, [{', '.join(str(e) for e in ex)}]]"
                           for c, ex in terms) + "]"


def _weight_text(name, w):
    lines = [f"[{name}]", f"kind = {_s(w.kind)}"]
    if w.alpha is not None:
        lines.append(f"alpha = {_f(w.alpha)}")
    for k in ("a", "b", "delta"):
        v = getattr(w, k)
        if v is not None:
            lines.append(f"{k} = {_f(v)}")
    if w.t is not None:
        lines.append("t = [" + ", ".join(_f(x) for x in w.t) + "]")
        lines.append("values = [" + ", ".join(_f(x) for x in w.values) + "]")
    return lines


def dumps(cfg):
    lines = [f"name = {_s(cfg.name)}", f"n = {cfg.n}", f"m = {cfg.m}", f"p = {cfg.p}"]
    if cfg.n0 is not None:
        lines.append(f"n0 = {cfg.n0}")
    lines += [f"max_m = {cfg.max_m}", f"dirs = {cfg.dirs}", f"seed = {cfg.seed}",
              "theorems = [" + ", ".join(_s(t) for t in cfg.theorems) + "]", f"restrict = {_s(cfg.restrict)}", ""]
    lines += _weight_text("nu", cfg.nu) + [""] + _weight_text("mu", cfg.mu) + [""]
    s = cfg.psi
    lines += ["[psi]", f"kind = {_s(s.kind)}", f"dimension = {s.dimension}"]
    if s.kind == "poly":
        lines.append(f"terms = {_terms_text(s.terms)}")
    else:
        lines += [f"p = {s.p}", f"q = {s.q}", f"alpha = {_f(s.alpha)}", f"K = {s.K}", f"order = {s.order}"]
    lines += ["", "[phi]", f"kind = {_s(cfg.phi.kind)}"]
    if cfg.phi.kind == "poly":
        lines.append("components = [")
        lines += [f"  {_terms_text(c)}," for c in cfg.phi.components]
        lines.append("]")
    else:
        lines.append("alpha = [" + ", ".join(f"[{_f(a.real)}, {_f(a.imag)}]" for a in cfg.phi.alpha) + "]")
    return "\n".join(lines) + "\n"


def dump(cfg, path):
    from .report import atomic_write

    atomic_write(path, dumps(cfg))


# ---------------------------------------------------------------------------
# building objects


def build_weight(w):
    opt = {k: getattr(w, k) for k in ("a", "b", "delta") if getattr(w, k) is not None}
    if w.kind == "standard":
        return standard_weight(w.alpha, **opt)
    if w.kind == "unit":
        return unit_weight(**{k: v for k, v in opt.items() if k != "delta"})
    if w.kind == "tabulated":
        return tabulated_weight(w.t, w.values, opt["a"], opt["b"], opt.get("delta", 0.0))
    raise ConfigError(f"unknown weight kind {w.kind!r}")


def _poly(terms, dimension):
    d = {}
    for c, e in terms:
        d[e] = d.get(e, 0) + (c.real if c.imag == 0 else c)
    return MultiPoly(d, dimension)


def build_symbol(s):
    if s.kind == "poly":
        return _poly(s.terms, s.dimension)
    if s.kind == "lacunary":
        base = LacunarySeries(s.p, s.dimension, s.q, s.alpha, s.K)
        return base.antiderivative_p(s.order) if s.order else base
    raise ConfigError(f"unknown symbol kind {s.kind!r}")


def build_map(mp):
    if mp.kind == "poly":
        N = len(mp.components)
        return SelfMap(_poly(c, N) for c in mp.components)
    if mp.kind == "mobius":
        return MobiusMap(list(mp.alpha)).as_selfmap()
    raise ConfigError(f"unknown map kind {mp.kind!r}")


def poly_spec(f):
    """Terms tuple for a MultiPoly, in sorted exponent order."""
    return tuple((complex(c), tuple(e)) for e, c in sorted(f.terms.items()))


def _diag(c, N):
    return tuple(((complex(c), tuple(1 if i == k else 0 for i in range(N))),) for k in range(N))


BUILTINS = {
    "contraction": RunConfig(
        WeightSpec("standard", 1.0), WeightSpec("standard", 1.0),
        SymbolSpec("poly", 2, ((1 + 0j, (0, 0)),)), MapSpec("poly", _diag(0.5, 2)),
        n=1, m=1, p=1, name="contraction"),
    "identity-singular": RunConfig(
        WeightSpec("standard", 1.0), WeightSpec("standard", 1.0),
        SymbolSpec("poly", 2, ((1 + 0j, (0, 0)),)), MapSpec("poly", _diag(1.0, 2)),
        n=1, m=1, p=1, name="identity-singular", theorems=("A2", "C2")),
}
