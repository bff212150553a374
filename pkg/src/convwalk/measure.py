"""The measure algebra M(G) of a finite group, and finitely supported measures on Z^d.

Measures are weight vectors indexed by group elements. L1(G) elements are
kept in the same coordinates, so the L1 norm is the total-variation norm
throughout.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np
from scipy import signal

from .errors import GroupMismatchError, InputError
from .group import FiniteGroup, GroupSpec, Subgroup, build_group

ZERO_TOL = 1e-12
PROBABILITY_SUM_TOL = 1e-12


def _readonly(w):
    w = np.array(w, dtype=np.complex128)
    w.setflags(write=False)
    return w


@dataclass(frozen=True, eq=False)
class Measure:
    group: FiniteGroup
    weights: np.ndarray

    def __post_init__(self):
        w = _readonly(self.weights)
        if w.shape != (self.group.order,):
            raise InputError(f"expected {self.group.order} weights, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise InputError("weights must be finite")
        object.__setattr__(self, "weights", w)

    def __repr__(self):
        return f"{type(self).__name__}({self.group!r}, support={support(self)})"

    def _check(self, other):
        if not self.group.same_as(other.group):
            raise GroupMismatchError("measures live on different groups")

    def __add__(self, other):
        self._check(other)
        return Measure(self.group, self.weights + other.weights)

    def __sub__(self, other):
        self._check(other)
        return Measure(self.group, self.weights - other.weights)

    def __neg__(self):
        return Measure(self.group, -self.weights)

    def __mul__(self, c):
        return Measure(self.group, self.weights * c)

    __rmul__ = __mul__

    @property
    def is_real(self) -> bool:
        return not np.any(self.weights.imag)

    def allclose(self, other, atol=1e-12) -> bool:
        self._check(other)
        return bool(np.abs(self.weights - other.weights).sum() <= atol)


class ProbabilityMeasure(Measure):
    def __post_init__(self):
        super().__post_init__()
        w = self.weights
        if np.any(w.imag != 0) or np.any(w.real < 0):
            raise InputError("probability weights must be real and nonnegative")
        if abs(w.real.sum() - 1.0) > PROBABILITY_SUM_TOL:
            raise InputError(f"probability weights sum to {w.real.sum()!r}, not 1")


def as_probability(mu: Measure) -> ProbabilityMeasure:
    if isinstance(mu, ProbabilityMeasure):
        return mu
    return ProbabilityMeasure(mu.group, mu.weights)


def _conv(G: FiniteGroup, w1: np.ndarray, w2: np.ndarray) -> np.ndarray:
    # (w1 * w2)(z) = sum_y w1(z y^-1) w2(y)
    return w1[G.rdiv] @ w2


def convolve(mu1: Measure, mu2: Measure) -> Measure:
    mu1._check(mu2)
    w = _conv(mu1.group, mu1.weights, mu2.weights)
    if isinstance(mu1, ProbabilityMeasure) and isinstance(mu2, ProbabilityMeasure):
        return ProbabilityMeasure(mu1.group, w.real)
    return Measure(mu1.group, w)


def adjoint(mu: Measure) -> Measure:
    """``mu*(x) = conj(mu(x^-1))``."""
    return type(mu)(mu.group, np.conj(mu.weights[mu.group.inv]))


def _power_weights(G, w, n):
    result = None
    base = w
    while n:
        if n & 1:
            result = base if result is None else _conv(G, result, base)
        n >>= 1
        if n:
            base = _conv(G, base, base)
    return result


def _power_sum_weights(G, w, n):
    """Return (w + w^2 + ... + w^n, w^n) with O(log n) convolutions."""
    if n == 1:
        return w, w
    half_sum, half_pow = _power_sum_weights(G, w, n // 2)
    s = half_sum + _conv(G, half_pow, half_sum)
    p = _conv(G, half_pow, half_pow)
    if n % 2:
        p = _conv(G, p, w)
        s = s + p
    return s, p


def _check_positive(n, what):
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise InputError(f"{what} needs a positive integer, got {n!r}")


def power(mu: Measure, n: int) -> Measure:
    """n-fold convolution power, n >= 1 (binary exponentiation)."""
    _check_positive(n, "power")
    w = _power_weights(mu.group, mu.weights, int(n))
    if isinstance(mu, ProbabilityMeasure):
        return ProbabilityMeasure(mu.group, _renormalise(w))
    return Measure(mu.group, w)


def cesaro(mu: Measure, n: int) -> Measure:
    """Average of the first n convolution powers."""
    _check_positive(n, "cesaro")
    s, _ = _power_sum_weights(mu.group, mu.weights, int(n))
    w = s / n
    if isinstance(mu, ProbabilityMeasure):
        return ProbabilityMeasure(mu.group, _renormalise(w))
    return Measure(mu.group, w)


def _renormalise(w):
    # Products of nonnegative reals stay real; only rounding in the sum drifts.
    r = np.clip(w.real, 0.0, None)
    return r / r.sum()


def support(mu: Measure, zero_tol: float = ZERO_TOL) -> tuple[int, ...]:
    if zero_tol < 0:
        raise InputError("zero_tol must be nonnegative")
    return tuple(int(i) for i in np.flatnonzero(np.abs(mu.weights) > zero_tol))


def haar(G: FiniteGroup, H: Subgroup | None = None) -> ProbabilityMeasure:
    w = np.zeros(G.order)
    if H is None:
        w[:] = 1.0 / G.order
    else:
        w[list(H.elements)] = 1.0 / H.order
    return ProbabilityMeasure(G, w)


def dirac(G: FiniteGroup, a: int) -> ProbabilityMeasure:
    w = np.zeros(G.order)
    w[a] = 1.0
    return ProbabilityMeasure(G, w)


def uniform_on(G: FiniteGroup, elements) -> ProbabilityMeasure:
    elements = sorted(set(int(e) for e in elements))
    if not elements:
        raise InputError("cannot build a uniform measure on an empty set")
    w = np.zeros(G.order)
    w[elements] = 1.0 / len(elements)
    return ProbabilityMeasure(G, w)


def zero_measure(G: FiniteGroup) -> Measure:
    return Measure(G, np.zeros(G.order))


def tv_norm(mu: Measure) -> float:
    return float(np.abs(mu.weights).sum())


# -- serialisation -----------------------------------------------------------

def _parse_weight(v):
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise InputError(f"complex weight must be [re, im], got {v!r}")
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, (int, float)):
        return complex(v)
    raise InputError(f"bad weight {v!r}")


def measure_from_dict(d: dict, group: FiniteGroup | None = None) -> Measure:
    if group is None:
        if "group" not in d:
            raise InputError("measure JSON needs a 'group'")
        group = build_group(GroupSpec.from_dict(d["group"]))
    if "weights" in d:
        w = np.array([_parse_weight(v) for v in d["weights"]], dtype=np.complex128)
    elif "atoms" in d:
        w = np.zeros(group.order, dtype=np.complex128)
        for atom in d["atoms"]:
            try:
                k = int(atom["element"])
                v = atom["weight"]
            except (KeyError, TypeError, ValueError) as exc:
                raise InputError(f"bad atom {atom!r}: {exc}") from None
            if not 0 <= k < group.order:
                raise InputError(f"atom element {k} out of range")
            w[k] += _parse_weight(v)
    else:
        raise InputError("measure JSON needs 'weights' or 'atoms'")
    if d.get("probability", False):
        return ProbabilityMeasure(group, w)
    return Measure(group, w)


def measure_to_dict(mu: Measure) -> dict:
    d = {}
    if mu.group.spec is not None:
        d["group"] = mu.group.spec.to_dict()
    d["weights"] = [[float(z.real), float(z.imag)] for z in mu.weights]
    d["probability"] = isinstance(mu, ProbabilityMeasure)
    return d


def _parse_number(text):
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise InputError(f"bad number {text!r}") from None


def parse_measure(text: str, G: FiniteGroup, probability: bool = True) -> Measure:
    """Inline measure grammar.

    ``atoms:1=0.5,3=0.5`` (weights may be fractions like ``1/3``),
    ``dirac:k``, ``haar``, ``uniform:0,2,5``, or a path to a measure JSON file.
    """
    text = text.strip()
    if text.endswith(".json"):
        try:
            d = json.loads(Path(text).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read measure file: {exc}") from None
        d = dict(d)
        d.setdefault("probability", probability)
        return measure_from_dict(d, G)
    kind, _, rest = text.partition(":")
    if kind == "haar":
        return haar(G)
    if kind == "dirac":
        return dirac(G, _element(rest, G))
    if kind == "uniform":
        return uniform_on(G, [_element(t, G) for t in rest.split(",") if t])
    if kind != "atoms":
        raise InputError(f"cannot parse measure {text!r}")
    w = np.zeros(G.order)
    for item in (t for t in rest.split(",") if t):
        elem, sep, val = item.partition("=")
        if not sep:
            raise InputError(f"atom {item!r} must look like element=weight")
        w[_element(elem, G)] += _parse_number(val)
    cls = ProbabilityMeasure if probability else Measure
    return cls(G, w)


def _element(text, G):
    try:
        k = int(text)
    except ValueError:
        raise InputError(f"bad element index {text!r}") from None
    if not 0 <= k < G.order:
        raise InputError(f"element {k} out of range for order {G.order}")
    return k


# -- finitely supported measures on Z^d ----------------------------------------

@dataclass(frozen=True, eq=False)
class ZMeasure:
    """Finitely supported measure on Z^d; points are sorted and weights nonzero."""

    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.int64)
        if pts.ndim != 2:
            raise InputError("points must be an (m, d) integer array")
        w = np.asarray(self.weights, dtype=np.complex128)
        if w.shape != (pts.shape[0],):
            raise InputError("one weight per point required")
        pts, w = _combine(pts, w)
        object.__setattr__(self, "points", _frozen(pts))
        object.__setattr__(self, "weights", _frozen(w))

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @classmethod
    def from_atoms(cls, atoms: dict, dim: int | None = None):
        keys = list(atoms)
        if dim is None:
            dim = len(np.atleast_1d(keys[0])) if keys else 1
        pts = np.array([np.atleast_1d(k) for k in keys], dtype=np.int64).reshape(len(keys), dim)
        return cls(pts, np.array([atoms[k] for k in keys], dtype=np.complex128))

    def atoms(self) -> dict:
        return {tuple(int(c) for c in p): complex(w) for p, w in zip(self.points, self.weights)}

    def __sub__(self, other):
        _check_dim(self, other)
        return ZMeasure(np.vstack([self.points, other.points]),
                        np.concatenate([self.weights, -other.weights]))

    def __add__(self, other):
        _check_dim(self, other)
        return ZMeasure(np.vstack([self.points, other.points]),
                        np.concatenate([self.weights, other.weights]))

    def __mul__(self, c):
        return ZMeasure(self.points, self.weights * c)

    __rmul__ = __mul__


def _frozen(a):
    a.setflags(write=False)
    return a


def _combine(pts, w):
    if pts.shape[0] == 0:
        return pts, w
    uniq, inverse = np.unique(pts, axis=0, return_inverse=True)
    inverse = inverse.ravel()
    acc = np.zeros(len(uniq), dtype=np.complex128)
    np.add.at(acc, inverse, w)
    keep = acc != 0
    return uniq[keep], acc[keep]


def _check_dim(a, b):
    if a.dim != b.dim:
        raise InputError(f"dimension mismatch: {a.dim} vs {b.dim}")


def _dense(mu: ZMeasure):
    lo = mu.points.min(axis=0)
    shape = tuple(mu.points.max(axis=0) - lo + 1)
    arr = np.zeros(shape, dtype=np.complex128)
    arr[tuple((mu.points - lo).T)] = mu.weights
    return arr, lo


def _from_dense(arr, lo):
    idx = np.argwhere(arr != 0)
    return ZMeasure(idx + lo, arr[tuple(idx.T)])


def z_convolve(mu1: ZMeasure, mu2: ZMeasure) -> ZMeasure:
    _check_dim(mu1, mu2)
    if len(mu1.weights) == 0 or len(mu2.weights) == 0:
        return ZMeasure(np.zeros((0, mu1.dim), dtype=np.int64), np.zeros(0))
    a, lo1 = _dense(mu1)
    b, lo2 = _dense(mu2)
    # direct method: no FFT dust, so supports stay exact
    return _from_dense(signal.convolve(a, b, method="direct"), lo1 + lo2)


def z_translate(mu: ZMeasure, x) -> ZMeasure:
    x = np.asarray(x, dtype=np.int64).reshape(-1)
    if x.shape != (mu.dim,):
        raise InputError(f"shift must have dimension {mu.dim}")
    return ZMeasure(mu.points + x, mu.weights)


def z_tv_norm(mu: ZMeasure) -> float:
    return float(np.abs(mu.weights).sum())


def z_delta(point) -> ZMeasure:
    p = np.atleast_1d(np.asarray(point, dtype=np.int64))
    return ZMeasure(p[None, :], np.ones(1))


def z_cesaro_dense(mu: ZMeasure, n_max: int):
    """Yield (n, array, offset) with ``array[i] = mu_[n](i + offset)`` for n = 1..n_max."""
    _check_positive(n_max, "z_cesaro_sequence")
    if len(mu.weights) == 0:
        raise InputError("measure has empty support")
    base, lo = _dense(mu)
    powk, plo = base, lo
    total, tlo = base.copy(), lo
    yield 1, base, lo
    for n in range(2, n_max + 1):
        powk = signal.convolve(powk, base, method="direct")
        plo = plo + lo
        new_lo = np.minimum(tlo, plo)
        new_hi = np.maximum(tlo + total.shape, plo + powk.shape)
        out = np.zeros(tuple(new_hi - new_lo), dtype=np.complex128)
        out[_box(tlo - new_lo, total.shape)] += total
        out[_box(plo - new_lo, powk.shape)] += powk
        total, tlo = out, new_lo
        yield n, total / n, tlo


def _box(start, shape):
    return tuple(slice(int(a), int(a) + b) for a, b in zip(start, shape))


def z_cesaro_sequence(mu: ZMeasure, n_max: int):
    """Yield (n, mu_[n]) for n = 1..n_max."""
    for n, arr, lo in z_cesaro_dense(mu, n_max):
        yield n, _from_dense(arr, lo)


def parse_zmeasure(text: str) -> ZMeasure:
    """``atoms:0=0.5,1=0.5`` on Z, ``atoms:0/0=0.5,1/0=0.5`` on Z^2, or a JSON path.

    JSON schema: ``{"dim": d, "atoms": [{"point": [...], "weight": w}, ...]}``.
    """
    text = text.strip()
    if text.endswith(".json"):
        try:
            d = json.loads(Path(text).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read measure file: {exc}") from None
        return zmeasure_from_dict(d)
    kind, _, rest = text.partition(":")
    if kind != "atoms":
        raise InputError(f"cannot parse Z^d measure {text!r}")
    pts, ws = [], []
    for item in (t for t in rest.split(",") if t):
        p, sep, val = item.partition("=")
        if not sep:
            raise InputError(f"atom {item!r} must look like point=weight")
        try:
            pts.append([int(c) for c in p.split("/")])
        except ValueError:
            raise InputError(f"bad lattice point {p!r}") from None
        ws.append(_parse_number(val))
    if not pts or len({len(p) for p in pts}) != 1:
        raise InputError("atoms must be nonempty and share one dimension")
    return ZMeasure(np.array(pts), np.array(ws))


def zmeasure_from_dict(d: dict) -> ZMeasure:
    try:
        dim = int(d["dim"])
        pts = np.array([a["point"] for a in d["atoms"]], dtype=np.int64).reshape(-1, dim)
        ws = np.array([_parse_weight(a["weight"]) for a in d["atoms"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad Z^d measure JSON: {exc}") from None
    return ZMeasure(pts, ws)


def zmeasure_to_dict(mu: ZMeasure) -> dict:
    return {
        "dim": mu.dim,
        "atoms": [{"point": [int(c) for c in p], "weight": [float(w.real), float(w.imag)]}
                  for p, w in zip(mu.points, mu.weights)],
    }
