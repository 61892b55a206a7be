"""Evaluators for explicit upper and lower bounds on solution counts and heights.

Values are exact integers where the formula allows it and the value is
at most 1e300; beyond that only ``log_value`` is carried. Unknown absolute
constants (c0, c1, c2) must be passed explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DomainError

LOG_LIMIT = 300 * math.log(10)  # values above 1e300 are kept in log form only

UPPER, LOWER, HEIGHT = "upper_count", "lower_count", "height_bound"


@dataclass(frozen=True)
class BoundSpec:
    name: str
    params: dict
    side: str
    log_value: float
    value: object = None  # int, Fraction or float; None when only the log is kept
    extras: dict = field(default_factory=dict)

    @property
    def log_form(self) -> bool:
        return self.value is None

    def to_json(self):
        d = {"name": self.name, "params": {k: _jsonable(v) for k, v in self.params.items()},
             "side": self.side, "log_value": _jsonable(self.log_value)}
        if self.value is not None:
            d["value"] = _jsonable(self.value)
        d.update({k: _jsonable(v) for k, v in self.extras.items()})
        return d


def _jsonable(v):
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, int):
        return v if abs(v) < 2**53 else str(v)
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float):
        return v if math.isfinite(v) else str(v)
    return v


# ---------------------------------------------------------------- param checks


def _int(params, key, lo=None):
    if key not in params:
        raise DomainError(f"missing parameter {key!r}")
    v = params[key]
    if isinstance(v, str):
        v = int(v)
    if isinstance(v, float) and v.is_integer():
        v = int(v)
    if not isinstance(v, int) or isinstance(v, bool):
        raise DomainError(f"parameter {key!r} must be an integer")
    if lo is not None and v < lo:
        raise DomainError(f"parameter {key!r} must be >= {lo} (got {v})")
    return v


def _real(params, key, lo=None, strict=False, hi=None):
    if key not in params or params[key] is None:
        raise DomainError(f"missing parameter {key!r} (no default: constant not given explicitly)")
    v = Fraction(params[key]) if not isinstance(params[key], float) else params[key]
    if lo is not None and (v <= lo if strict else v < lo):
        raise DomainError(f"parameter {key!r} must be {'>' if strict else '>='} {lo} (got {v})")
    if hi is not None and v >= hi:
        raise DomainError(f"parameter {key!r} must be < {hi} (got {v})")
    return v


def _int_power_spec(name, params, side, mult: int, base: int, exp: int, extras=None):
    """mult * base**exp, exact when small enough."""
    lv = math.log(mult) + exp * math.log(base)
    val = mult * base**exp if lv <= LOG_LIMIT else None
    if val is not None:
        lv = math.log(val)
    return BoundSpec(name, params, side, lv, val, extras or {})


# ---------------------------------------------------------------- formulas


def _lewis_mahler(p):
    n = _int(p, "n", 3)
    H = _int(p, "H", 1)
    t = _int(p, "t", 0)
    c1 = float(_real(p, "c1", 0, strict=True))
    c2 = float(_real(p, "c2", 0, strict=True))
    a = math.sqrt(n) * math.log(c1 * n * H)
    b = (t + 1) * math.log(c2 * n)
    lv = max(a, b) + math.log1p(math.exp(-abs(a - b)))
    val = math.exp(lv) if lv <= LOG_LIMIT else None
    return BoundSpec("lewis_mahler", p, UPPER, lv, val)


def _omega_param(p, key):
    if key in p:
        return _int(p, key, 0)
    src = {"omega_m": "m", "omega_g": "g"}[key]
    if src in p:
        from .arith import omega

        m = int(p[src])
        if m == 0:
            raise DomainError(f"parameter {src!r} must be non-zero")
        return omega(m)
    raise DomainError(f"missing parameter {key!r} (or {src!r})")


def _mahler84(p):
    n = _int(p, "n", 3)
    w = _omega_param(p, "omega_m")
    return _int_power_spec("mahler84", p, UPPER, 64, n, w + 1)


def _bombieri_schmidt(p):
    n = _int(p, "n", 3)
    w = _omega_param(p, "omega_m")
    c0 = _real(p, "c0", 0, strict=True)
    lv = math.log(c0) + (w + 1) * math.log(n)
    val = c0 * n ** (w + 1) if lv <= LOG_LIMIT else None
    return BoundSpec("bombieri_schmidt", p, UPPER, lv, val)


def _stewart91(p):
    n = _int(p, "n", 3)
    w = _omega_param(p, "omega_g")
    return _int_power_spec("stewart91", p, UPPER, 4200, n, w + 1)


def _evertse97(p):
    n = _int(p, "n", 3)
    t = _int(p, "t", 0)
    return _int_power_spec("evertse97", p, UPPER, 2, 10**5 * n, t + 1)


def _evertse84(p):
    t = _int(p, "t", 0)
    return _int_power_spec("evertse84", p, UPPER, 1, 7, 2 * t + 4)


def _beukers_schlickewei(p):
    r = _int(p, "r", 0)
    return _int_power_spec("beukers_schlickewei", p, UPPER, 1, 2, 16 * (r + 1))


def _thm15(p):
    from .approx import system_count_bound

    n = _int(p, "n", 3)
    beta1 = _real(p, "beta1", 2, strict=True)
    v = system_count_bound(n, beta1)
    return BoundSpec("thm15", p, UPPER, math.log(v), v)


def _est_lower(p):
    t = _int(p, "t", 2)
    eps = float(_real(p, "eps", 0, strict=True, hi=4))
    lv = (4 - eps) * math.sqrt(t / math.log(t))
    return BoundSpec("est_lower", p, LOWER, lv, math.exp(lv) if lv <= LOG_LIMIT else None)


def _ks_lower(p):
    t = _int(p, "t", 1)
    eps = float(_real(p, "eps", 0, strict=True, hi=2 - math.sqrt(2)))
    lv = t ** (2 - math.sqrt(2) - eps)
    return BoundSpec("ks_lower", p, LOWER, lv, math.exp(lv) if lv <= LOG_LIMIT else None)


def bugeaud_gyory_c(n: int) -> int:
    """c(n) = 3^{3(n+9)} n^{18(n+1)} as an exact integer."""
    return 3 ** (3 * (n + 9)) * n ** (18 * (n + 1))


def _bugeaud_gyory(p):
    n = _int(p, "n", 3)
    H = _int(p, "H", 3)
    M = _int(p, "M", 3)
    if n < 200:
        log_c = math.log(bugeaud_gyory_c(n))  # exact integer, single rounding
    else:
        log_c = 3 * (n + 9) * math.log(3) + 18 * (n + 1) * math.log(n)
    # log |p,q| < L = c(n) H^{2n-2} (log H)^{2n-1} log M
    log_L = log_c + (2 * n - 2) * math.log(H) + (2 * n - 1) * math.log(math.log(H)) \
        + math.log(math.log(M))
    L = math.exp(log_L) if log_L <= LOG_LIMIT else math.inf
    extras = {"log_c": log_c, "log_log_value": log_L}
    return BoundSpec("bugeaud_gyory", p, HEIGHT, L, None, extras)


_FORMULAS = {
    "lewis_mahler": _lewis_mahler,
    "mahler84": _mahler84,
    "bombieri_schmidt": _bombieri_schmidt,
    "stewart91": _stewart91,
    "evertse97": _evertse97,
    "evertse84": _evertse84,
    "beukers_schlickewei": _beukers_schlickewei,
    "thm15": _thm15,
    "est_lower": _est_lower,
    "ks_lower": _ks_lower,
    "bugeaud_gyory": _bugeaud_gyory,
}

NAMES = tuple(_FORMULAS)


def eval_bound(name: str, **params) -> BoundSpec:
    """Evaluate a named bound; out-of-domain parameters raise DomainError."""
    if name not in _FORMULAS:
        raise DomainError(f"unknown bound {name!r}; choose from {', '.join(NAMES)}")
    params = {k: v for k, v in params.items() if v is not None}
    return _FORMULAS[name](params)


def compare_log(observed, spec: BoundSpec) -> int:
    """sign(observed - bound), exact when the bound has an exact value."""
    if spec.value is not None and not isinstance(spec.value, float):
        d = Fraction(observed) - Fraction(spec.value)
        return (d > 0) - (d < 0)
    if spec.value is not None:
        d = float(observed) - spec.value
        return (d > 0) - (d < 0)
    lo = math.log(observed) if observed > 0 else -math.inf
    return (lo > spec.log_value) - (lo < spec.log_value)


def height_bound_covers(spec: BoundSpec, B: int) -> bool:
    """True iff the proven bound on log|p,q| is at most log B."""
    if spec.side != HEIGHT:
        raise DomainError("height_bound_covers needs a height bound")
    return math.isfinite(spec.log_value) and spec.log_value <= math.log(B)


@dataclass(frozen=True)
class VerifyReport:
    status: str  # PASS, FAIL or INFO
    observed: int
    bound: BoundSpec
    kind: str
    instance: dict = field(default_factory=dict)

    def to_json(self):
        return {"status": self.status, "observed": _jsonable(self.observed), "kind": self.kind,
                "bound": self.bound.to_json(), "instance": self.instance}


def verify_counts(observed: int, bound: BoundSpec, kind: str = "count", instance=None) -> VerifyReport:
    """PASS/FAIL for upper bounds; lower bounds only give INFO.

    ``kind`` is "count" (number of solutions) or "height" (largest |p,q|).
    """
    if kind not in ("count", "height"):
        raise DomainError(f"unknown observation kind {kind!r}")
    observed = int(observed)
    if observed < 0:
        raise DomainError("observed must be >= 0")
    want = HEIGHT if kind == "height" else (UPPER, LOWER)
    if bound.side not in (want if isinstance(want, tuple) else (want,)):
        raise DomainError(f"side mismatch: a {kind} observation cannot be checked against {bound.side}")
    if bound.side == LOWER:
        status = "INFO"
    elif bound.side == HEIGHT:
        ok = observed <= 1 or math.log(observed) < bound.log_value
        status = "PASS" if ok else "FAIL"
    else:
        status = "PASS" if compare_log(observed, bound) <= 0 else "FAIL"
    return VerifyReport(status, observed, bound, kind, dict(instance or {}))
