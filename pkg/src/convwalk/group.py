"""Finite groups as dense multiplication tables, plus subgroup closures.

Elements are the integers ``0..order-1``. Labelling per family:

* ``cyclic(n)``: residues mod n.
* ``product(G1, ..., Gk)``: mixed radix, first factor most significant
  (``np.ravel_multi_index`` in C order).
* ``dihedral(n)``: index ``f*n + k`` is ``r^k s^f`` with
  ``r^a s^f . r^b s^g = r^(a + (-1)^f b) s^(f+g)``.
* ``symmetric(n)``: lexicographic rank of the permutation tuple, with
  composition ``(p.q)(i) = p[q[i]]``.
* ``cayley``: whatever the table says; element 0 must be the identity.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import InputError

MAX_ORDER = 5040
MAX_SYMMETRIC_DEGREE = 7
EXHAUSTIVE_ASSOCIATIVITY_ORDER = 256

FAMILIES = ("cyclic", "product", "dihedral", "symmetric", "cayley")


@dataclass(frozen=True)
class GroupSpec:
    family: str
    n: int | None = None
    factors: tuple[GroupSpec, ...] = ()
    table: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InputError(f"unknown group family {self.family!r}")
        if self.family in ("cyclic", "dihedral", "symmetric"):
            if not isinstance(self.n, (int, np.integer)) or isinstance(self.n, bool):
                raise InputError(f"{self.family} needs an integer n")
        if self.family == "cyclic" and self.n < 1:
            raise InputError("cyclic(n) needs n >= 1")
        if self.family == "dihedral" and self.n < 3:
            raise InputError("dihedral(n) needs n >= 3")
        if self.family == "symmetric" and not 1 <= self.n <= MAX_SYMMETRIC_DEGREE:
            raise InputError(f"symmetric(n) needs 1 <= n <= {MAX_SYMMETRIC_DEGREE}")
        if self.family == "product" and not self.factors:
            raise InputError("product needs at least one factor")
        if self.family == "cayley" and not self.table:
            raise InputError("cayley needs a non-empty table")

    @property
    def order(self) -> int:
        if self.family == "cyclic":
            return self.n
        if self.family == "dihedral":
            return 2 * self.n
        if self.family == "symmetric":
            return math.factorial(self.n)
        if self.family == "product":
            return math.prod(f.order for f in self.factors)
        return len(self.table)

    def to_dict(self) -> dict:
        if self.family == "product":
            return {"family": "product", "factors": [f.to_dict() for f in self.factors]}
        if self.family == "cayley":
            return {"family": "cayley", "table": [list(r) for r in self.table]}
        return {"family": self.family, "n": int(self.n)}

    @classmethod
    def from_dict(cls, d: dict) -> GroupSpec:
        if not isinstance(d, dict) or "family" not in d:
            raise InputError(f"group spec must be an object with a 'family' key, got {d!r}")
        fam = d["family"]
        if fam == "product":
            factors = d.get("factors")
            if not isinstance(factors, list):
                raise InputError("product spec needs a 'factors' list")
            return cls("product", factors=tuple(cls.from_dict(f) for f in factors))
        if fam == "cayley":
            table = d.get("table")
            if not isinstance(table, list) or not all(isinstance(r, list) for r in table):
                raise InputError("cayley spec needs a 'table' list of rows")
            try:
                rows = tuple(tuple(int(v) for v in r) for r in table)
            except (TypeError, ValueError) as exc:
                raise InputError(f"cayley table entries must be integers: {exc}") from None
            return cls("cayley", table=rows)
        if "n" not in d:
            raise InputError(f"{fam} spec needs 'n'")
        return cls(fam, n=d["n"])

    def __str__(self):
        if self.family == "product":
            return "*".join(str(f) for f in self.factors)
        if self.family == "cayley":
            return f"cayley[{len(self.table)}]"
        return f"{self.family}:{self.n}"


def parse_group_spec(text: str) -> GroupSpec:
    """Parse ``cyclic:4``, ``dihedral:5``, ``cyclic:2*symmetric:3``, inline JSON, or a JSON path."""
    text = text.strip()
    if text.startswith("{"):
        try:
            return GroupSpec.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise InputError(f"bad group JSON: {exc}") from None
    if text.endswith(".json"):
        try:
            return GroupSpec.from_dict(json.loads(Path(text).read_text()))
        except OSError as exc:
            raise InputError(f"cannot read group file: {exc}") from None
        except json.JSONDecodeError as exc:
            raise InputError(f"bad group JSON in {text}: {exc}") from None
    parts = [p for p in text.replace(" ", "").split("*") if p]
    if not parts:
        raise InputError("empty group spec")
    specs = []
    for part in parts:
        fam, _, arg = part.partition(":")
        if fam not in ("cyclic", "dihedral", "symmetric"):
            raise InputError(f"cannot parse group spec {part!r}")
        try:
            specs.append(GroupSpec(fam, n=int(arg)))
        except ValueError:
            raise InputError(f"bad group size in {part!r}") from None
    if len(specs) == 1:
        return specs[0]
    return GroupSpec("product", factors=tuple(specs))


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    order: int
    mul: np.ndarray
    identity: int
    inv: np.ndarray
    spec: GroupSpec | None = field(default=None, repr=False)

    def __repr__(self):
        return f"FiniteGroup({self.spec or 'table'}, order={self.order})"

    @cached_property
    def rdiv(self) -> np.ndarray:
        """``rdiv[z, y] = z * y^-1``; the index pattern of every convolution matrix."""
        return _freeze(self.mul[:, self.inv])

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def conjugate(self, g, s):
        return self.mul[self.mul[g, s], self.inv[g]]

    def element_labels(self) -> list[str]:
        return _labels(self.spec, self.order)

    def same_as(self, other: FiniteGroup) -> bool:
        return self is other or (
            self.order == other.order and np.array_equal(self.mul, other.mul)
        )


def _labels(spec: GroupSpec | None, order: int) -> list[str]:
    if spec is None or spec.family == "cayley":
        return [str(i) for i in range(order)]
    if spec.family == "cyclic":
        return [str(i) for i in range(order)]
    if spec.family == "dihedral":
        n = spec.n
        return [f"r{k}" for k in range(n)] + [f"r{k}s" for k in range(n)]
    if spec.family == "symmetric":
        return ["".join(map(str, p)) for p in itertools.permutations(range(spec.n))]
    sub = [_labels(f, f.order) for f in spec.factors]
    return ["(" + ",".join(t) + ")" for t in itertools.product(*sub)]


def _cyclic_table(n):
    a = np.arange(n)
    return (a[:, None] + a[None, :]) % n


def _dihedral_table(n):
    k = np.arange(2 * n) % n
    f = np.arange(2 * n) // n
    sign = np.where(f == 1, -1, 1)
    rot = (k[:, None] + sign[:, None] * k[None, :]) % n
    flip = (f[:, None] + f[None, :]) % 2
    return flip * n + rot


def _symmetric_table(n):
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    m = len(perms)
    weights = n ** np.arange(n - 1, -1, -1)
    lookup = np.full(n**n, -1, dtype=np.int64)
    lookup[perms @ weights] = np.arange(m)
    table = np.empty((m, m), dtype=np.int64)
    for a in range(m):
        table[a] = lookup[perms[a][perms] @ weights]
    return table


def _product_table(t1, t2):
    n1, n2 = len(t1), len(t2)
    a1 = np.arange(n1 * n2) // n2
    a2 = np.arange(n1 * n2) % n2
    return t1[a1[:, None], a1[None, :]] * n2 + t2[a2[:, None], a2[None, :]]


def _table_for(spec: GroupSpec) -> np.ndarray:
    if spec.family == "cyclic":
        return _cyclic_table(spec.n)
    if spec.family == "dihedral":
        return _dihedral_table(spec.n)
    if spec.family == "symmetric":
        return _symmetric_table(spec.n)
    if spec.family == "product":
        table = _table_for(spec.factors[0])
        for f in spec.factors[1:]:
            table = _product_table(table, _table_for(f))
        return table
    return np.asarray(spec.table, dtype=np.int64)


def check_group_table(mul: np.ndarray, identity: int = 0, *, seed: int = 0, samples: int = 20000):
    """Raise InputError unless ``mul`` is a group table with the given identity.

    Associativity is checked exhaustively up to order 256 and on random
    triples above that.
    """
    n = mul.shape[0]
    if mul.ndim != 2 or mul.shape != (n, n):
        raise InputError("multiplication table must be square")
    if mul.min() < 0 or mul.max() >= n:
        raise InputError("multiplication table entries out of range")
    ar = np.arange(n)
    if not (np.array_equal(np.sort(mul, axis=1), np.broadcast_to(ar, (n, n)))
            and np.array_equal(np.sort(mul, axis=0), np.broadcast_to(ar[:, None], (n, n)))):
        raise InputError("multiplication table is not a Latin square")
    if not (np.array_equal(mul[identity], ar) and np.array_equal(mul[:, identity], ar)):
        raise InputError(f"element {identity} is not a two-sided identity")
    if n <= EXHAUSTIVE_ASSOCIATIVITY_ORDER:
        left = mul[mul[:, :, None], ar[None, None, :]]
        right = mul[ar[:, None, None], mul[None, :, :]]
        ok = np.array_equal(left, right)
    else:
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, n, size=(3, samples))
        ok = np.array_equal(mul[mul[a, b], c], mul[a, mul[b, c]])
    if not ok:
        raise InputError("multiplication table is not associative")


def build_group(spec: GroupSpec | dict | str) -> FiniteGroup:
    if isinstance(spec, str):
        spec = parse_group_spec(spec)
    elif isinstance(spec, dict):
        spec = GroupSpec.from_dict(spec)
    if spec.order > MAX_ORDER:
        raise InputError(f"group order {spec.order} exceeds the cap {MAX_ORDER}")
    mul = _table_for(spec).astype(np.int64)
    if spec.family == "cayley":
        check_group_table(mul, 0)
    n = mul.shape[0]
    inv = np.argmax(mul == 0, axis=1)
    return FiniteGroup(order=n, mul=_freeze(mul), identity=0, inv=_freeze(inv), spec=spec)


def cyclic(n):
    return build_group(GroupSpec("cyclic", n=n))


def dihedral(n):
    return build_group(GroupSpec("dihedral", n=n))


def symmetric(n):
    return build_group(GroupSpec("symmetric", n=n))


def direct_product(*factors):
    specs = [f.spec if isinstance(f, FiniteGroup) else f for f in factors]
    return build_group(GroupSpec("product", factors=tuple(specs)))


@dataclass(frozen=True)
class Subgroup:
    elements: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x):
        return int(x) in self._set

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    @cached_property
    def _set(self):
        return frozenset(self.elements)

    def mask(self, order: int) -> np.ndarray:
        m = np.zeros(order, dtype=bool)
        m[list(self.elements)] = True
        return m


def _as_elements(G: FiniteGroup, S) -> np.ndarray:
    arr = np.unique(np.asarray(list(S) if not isinstance(S, np.ndarray) else S, dtype=np.int64))
    if arr.size == 0:
        raise InputError("element set must be nonempty")
    if arr.min() < 0 or arr.max() >= G.order:
        raise InputError("element index out of range")
    return arr


def _closure(G: FiniteGroup, gens: np.ndarray) -> Subgroup:
    gens = np.unique(np.concatenate([gens, G.inv[gens]]))
    mask = np.zeros(G.order, dtype=bool)
    mask[G.identity] = True
    frontier = np.array([G.identity])
    while frontier.size:
        products = np.unique(G.mul[np.ix_(frontier, gens)])
        frontier = products[~mask[products]]
        mask[frontier] = True
    return Subgroup(tuple(int(i) for i in np.flatnonzero(mask)))


def generated_subgroup(G: FiniteGroup, S) -> Subgroup:
    """Smallest subgroup containing S (breadth-first closure)."""
    return _closure(G, _as_elements(G, S))


def normal_closure(G: FiniteGroup, S) -> Subgroup:
    """Smallest normal subgroup containing S: closure of all conjugates g s g^-1."""
    s = _as_elements(G, S)
    g = np.arange(G.order)
    conj = G.conjugate(g[:, None], s[None, :])
    return _closure(G, np.unique(conj))


def minimal_normal_coset(G: FiniteGroup, S) -> tuple[Subgroup, int]:
    """Least normal N with S inside a single coset xN, and one such x.

    N is the normal closure of S^-1 S: ``s^-1 t`` lies in N for all s, t in
    S exactly when S sits in one coset of N.
    """
    s = _as_elements(G, S)
    quotients = G.mul[G.inv[s][:, None], s[None, :]]
    return normal_closure(G, np.unique(quotients)), int(s[0])


def index(G: FiniteGroup, H: Subgroup) -> int:
    return G.order // H.order


def is_subgroup(G: FiniteGroup, elements) -> bool:
    e = np.asarray(sorted(set(int(x) for x in elements)), dtype=np.int64)
    if e.size == 0:
        return False
    mask = np.zeros(G.order, dtype=bool)
    mask[e] = True
    return bool(mask[G.identity] and mask[G.mul[np.ix_(e, e)]].all() and mask[G.inv[e]].all())


def is_normal(G: FiniteGroup, H: Subgroup) -> bool:
    h = np.asarray(H.elements)
    mask = H.mask(G.order)
    return bool(mask[G.conjugate(np.arange(G.order)[:, None], h[None, :])].all())


def all_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """Every subgroup, found as joins of cyclic subgroups; sorted by (order, elements)."""
    cyclic_subs = {generated_subgroup(G, [g]) for g in range(G.order)}
    found = {Subgroup((G.identity,))}
    frontier = list(found)
    while frontier:
        nxt = []
        for H in frontier:
            for C in cyclic_subs:
                if C._set <= H._set:
                    continue
                J = _closure(G, np.asarray(H.elements + C.elements, dtype=np.int64))
                if J not in found:
                    found.add(J)
                    nxt.append(J)
        frontier = nxt
    return sorted(found, key=lambda H: (H.order, H.elements))
