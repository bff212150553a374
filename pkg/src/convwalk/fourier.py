"""Irreducible unitary representations and Fourier-Stieltjes transforms.

The transform integrates the entrywise conjugate of the representation,
``mu_hat(pi) = sum_t mu(t) conj(pi(t))``. It is still multiplicative
because conjugating unitaries entrywise preserves products.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field
from importlib import resources

import numpy as np
from scipy import linalg

from .errors import InputError, TheoremViolation
from .group import FiniteGroup, GroupSpec, build_group, generated_subgroup
from .measure import Measure, support
from .operator import EIGEN_TOL, lambda1, match_multisets, spectrum

HOMOMORPHISM_EXHAUSTIVE_ORDER = 64
UNITARITY_TOL = 1e-10
IRREDUCIBILITY_TOL = 1e-8

S4_TABLE = "s4_irreps.json"
S4_TABLE_SHA256 = "3627eb75e8d382b2905087783ecae6c5aa7596ac4bd163cdaaf61e833223d6db"


@dataclass(frozen=True, eq=False)
class Representation:
    group: FiniteGroup
    dim: int
    matrices: np.ndarray = field(repr=False)
    label: str = ""

    def __post_init__(self):
        m = np.array(self.matrices, dtype=np.complex128)
        if m.shape != (self.group.order, self.dim, self.dim):
            raise InputError(
                f"representation {self.label!r}: expected matrices of shape "
                f"{(self.group.order, self.dim, self.dim)}, got {m.shape}"
            )
        m.setflags(write=False)
        object.__setattr__(self, "matrices", m)

    @property
    def character(self) -> np.ndarray:
        return np.trace(self.matrices, axis1=1, axis2=2)

    @property
    def is_trivial(self) -> bool:
        return self.dim == 1 and bool(np.allclose(self.matrices, 1.0, atol=UNITARITY_TOL))

    def homomorphism_error(self, *, seed=0, samples=4096) -> float:
        G, P = self.group, self.matrices
        if G.order <= HOMOMORPHISM_EXHAUSTIVE_ORDER:
            a, b = np.divmod(np.arange(G.order**2), G.order)
        else:
            a, b = np.random.default_rng(seed).integers(0, G.order, size=(2, samples))
        return float(np.abs(P[G.mul[a, b]] - P[a] @ P[b]).max())

    def unitarity_error(self) -> float:
        P = self.matrices
        return float(np.abs(P @ np.conj(np.swapaxes(P, 1, 2)) - np.eye(self.dim)).max())

    def character_norm(self) -> float:
        """``sum_t |tr pi(t)|^2 / |G|``; equals 1 exactly for irreducibles."""
        return float(np.sum(np.abs(self.character) ** 2) / self.group.order)

    def validate(self):
        if self.homomorphism_error() > UNITARITY_TOL:
            raise InputError(f"representation {self.label!r} is not a homomorphism")
        if self.unitarity_error() > UNITARITY_TOL:
            raise InputError(f"representation {self.label!r} is not unitary")
        if abs(self.character_norm() - 1.0) > IRREDUCIBILITY_TOL:
            raise InputError(f"representation {self.label!r} is not irreducible")
        return self

    def to_dict(self) -> dict:
        d = {}
        if self.group.spec is not None:
            d["group"] = self.group.spec.to_dict()
        d["dim"] = self.dim
        d["matrices"] = [
            [[[float(z.real), float(z.imag)] for z in row] for row in mat] for mat in self.matrices
        ]
        d["label"] = self.label
        return d


def representation_from_dict(d: dict, group: FiniteGroup | None = None) -> Representation:
    """Load and fully re-validate a representation in the JSON schema."""
    try:
        if group is None:
            group = build_group(GroupSpec.from_dict(d["group"]))
        arr = np.asarray(d["matrices"], dtype=np.float64)
        if arr.ndim != 4 or arr.shape[-1] != 2:
            raise InputError("matrices must be nested [re, im] pairs")
        rep = Representation(group, int(d["dim"]), arr[..., 0] + 1j * arr[..., 1], d.get("label", ""))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad representation JSON: {exc}") from None
    return rep.validate()


def load_representations(obj, group: FiniteGroup | None = None) -> list[Representation]:
    """Accept a single representation object, a list, or ``{"representations": [...]}``."""
    if isinstance(obj, dict) and "representations" in obj:
        if group is None and "group" in obj:
            group = build_group(GroupSpec.from_dict(obj["group"]))
        obj = obj["representations"]
    if isinstance(obj, dict):
        obj = [obj]
    reps = []
    for d in obj:
        rep = representation_from_dict(d, group)
        group = rep.group
        reps.append(rep)
    return reps


# -- characters ----------------------------------------------------------------

def _cyclic_leaves(spec: GroupSpec | None):
    if spec is None:
        return None
    if spec.family == "cyclic":
        return [spec.n]
    if spec.family == "product":
        out = []
        for f in spec.factors:
            leaves = _cyclic_leaves(f)
            if leaves is None:
                return None
            out.extend(leaves)
        return out
    return None


def _characters_by_diagonalisation(G: FiniteGroup) -> np.ndarray:
    # A generic combination of the commuting regular-representation
    # permutations has simple spectrum; its eigenvectors are the characters.
    rng = np.random.default_rng(12345)
    c = rng.normal(size=G.order) + 1j * rng.normal(size=G.order)
    L = np.zeros((G.order, G.order), dtype=np.complex128)
    for g in range(G.order):
        L[G.mul[g], np.arange(G.order)] += c[g]
    _, V = linalg.eig(L)
    V = V / np.linalg.norm(V, axis=0)
    chars = np.empty((G.order, G.order), dtype=np.complex128)
    for g in range(G.order):
        # (L_g v)(z) = v(g^-1 z)
        shifted = V[G.mul[G.inv[g]], :]
        chars[:, g] = np.einsum("zj,zj->j", np.conj(V), shifted)
    steps = np.round(np.angle(chars) * G.order / (2 * np.pi)).astype(int) % G.order
    order = sorted(range(G.order), key=lambda j: tuple(steps[j]))
    return np.exp(2j * np.pi * steps[order] / G.order)


def characters(G: FiniteGroup) -> list[Representation]:
    """All |G| characters of an abelian group.

    For products of cyclic groups ``chi_m(x) = exp(2 pi i sum_j m_j x_j / n_j)``
    in the mixed-radix labelling; other abelian tables are diagonalised.
    """
    if not G.is_abelian:
        raise InputError("characters() needs an abelian group")
    radices = _cyclic_leaves(G.spec)
    if radices is not None:
        coords = np.array(np.unravel_index(np.arange(G.order), radices)).T
        phases = (coords[:, None, :] * coords[None, :, :]) / np.array(radices)
        table = np.exp(2j * np.pi * phases.sum(axis=2))
        labels = ["chi" + ",".join(map(str, m)) for m in coords]
    else:
        table = _characters_by_diagonalisation(G)
        labels = [f"chi{j}" for j in range(G.order)]
    return [Representation(G, 1, table[j][:, None, None], labels[j]) for j in range(G.order)]


# -- built-in irreducibles ------------------------------------------------------

def _dihedral_irreps(G: FiniteGroup, n: int) -> list[Representation]:
    k = np.arange(2 * n) % n
    f = np.arange(2 * n) // n
    reps = [
        Representation(G, 1, np.ones((2 * n, 1, 1)), "trivial"),
        Representation(G, 1, np.where(f == 1, -1.0, 1.0)[:, None, None], "reflection-sign"),
    ]
    if n % 2 == 0:
        rs = (-1.0) ** k
        reps.append(Representation(G, 1, rs[:, None, None], "rotation-sign"))
        reps.append(Representation(G, 1, (rs * np.where(f == 1, -1.0, 1.0))[:, None, None], "both-signs"))
    flip = np.array([[1.0, 0.0], [0.0, -1.0]])
    for h in range(1, (n - 1) // 2 + 1):
        ang = 2 * np.pi * h * k / n
        c, s = np.cos(ang), np.sin(ang)
        R = np.stack([np.stack([c, -s], -1), np.stack([s, c], -1)], -2)
        mats = np.where(f[:, None, None] == 1, R @ flip, R)
        reps.append(Representation(G, 2, mats, f"rotation-{h}"))
    return reps


def _symmetric_small_irreps(G: FiniteGroup, n: int) -> list[Representation]:
    perms = np.array(list(itertools.permutations(range(n))))
    sign = np.array([np.linalg.det(np.eye(n)[p]) for p in perms]).round()
    reps = [Representation(G, 1, np.ones((G.order, 1, 1)), "trivial")]
    if n >= 2:
        reps.append(Representation(G, 1, sign[:, None, None], "sign"))
    if n == 3:
        # orthonormal basis of the sum-zero subspace of the permutation representation
        B = linalg.null_space(np.ones((1, 3)))
        P = np.zeros((len(perms), 3, 3))
        P[np.arange(len(perms))[:, None], perms, np.arange(3)[None, :]] = 1.0
        reps.append(Representation(G, 2, B.T @ P @ B, "standard"))
    return reps


def _s4_irreps(G: FiniteGroup) -> list[Representation]:
    raw = resources.files("convwalk.data").joinpath(S4_TABLE).read_bytes()
    digest = hashlib.sha256(raw).hexdigest()
    if digest != S4_TABLE_SHA256:
        raise InputError(f"bundled {S4_TABLE} checksum mismatch ({digest})")
    return load_representations(json.loads(raw), G)


def _product_irreps(G: FiniteGroup, spec: GroupSpec) -> list[Representation]:
    factors = [build_group(f) for f in spec.factors]
    factor_reps = [builtin_irreps(F) for F in factors]
    coords = np.array(np.unravel_index(np.arange(G.order), [F.order for F in factors])).T
    reps = []
    for combo in itertools.product(*factor_reps):
        mats = np.ones((G.order, 1, 1), dtype=np.complex128)
        for j, rep in enumerate(combo):
            block = rep.matrices[coords[:, j]]
            mats = np.einsum("tab,tcd->tacbd", mats, block).reshape(
                G.order, mats.shape[1] * block.shape[1], -1
            )
        reps.append(Representation(G, mats.shape[1], mats, "x".join(r.label for r in combo)))
    return reps


def builtin_irreps(G: FiniteGroup) -> list[Representation]:
    """A complete list of pairwise inequivalent irreducibles for the built-in families."""
    spec = G.spec
    if spec is None:
        raise InputError("group has no spec; supply representations explicitly")
    if spec.family == "cyclic":
        return characters(G)
    if spec.family == "dihedral":
        return _dihedral_irreps(G, spec.n)
    if spec.family == "symmetric":
        if spec.n <= 3:
            return _symmetric_small_irreps(G, spec.n)
        if spec.n == 4:
            return _s4_irreps(G)
        raise InputError("symmetric(n) irreducibles are only bundled for n <= 4")
    if spec.family == "product":
        return _product_irreps(G, spec)
    if G.is_abelian:
        return characters(G)
    raise InputError("non-abelian Cayley-table groups need a user-supplied representation file")


def completeness_defect(G: FiniteGroup, reps) -> int:
    """``|G| - sum d^2``; zero for a complete list."""
    return G.order - sum(r.dim**2 for r in reps)


# -- transforms ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FSMatrix:
    representation: Representation
    matrix: np.ndarray

    def eigenvalues(self) -> np.ndarray:
        return linalg.eigvals(self.matrix)

    def norm2(self) -> float:
        return float(linalg.norm(self.matrix, 2))


def fs_transform(mu: Measure, pi: Representation) -> FSMatrix:
    if not mu.group.same_as(pi.group):
        raise InputError("measure and representation live on different groups")
    return FSMatrix(pi, np.einsum("t,tij->ij", mu.weights, np.conj(pi.matrices)))


@dataclass
class PeterWeylReport:
    max_distance: float
    tol: float
    passed: bool
    block_eigenvalues: dict


def peter_weyl_check(G: FiniteGroup, reps, mu: Measure, tol: float = 1e-7) -> PeterWeylReport:
    """Match the spectrum of convolution by mu against the blocks ``d_pi`` copies of ``mu_hat(pi)``."""
    if completeness_defect(G, reps):
        raise InputError(f"representation list incomplete: sum d^2 != {G.order}")
    blocks = {}
    pooled = []
    for rep in reps:
        ev = fs_transform(mu, rep).eigenvalues()
        blocks[rep.label] = ev
        pooled.extend(np.tile(ev, rep.dim))
    full = spectrum(lambda1(mu), EIGEN_TOL).eigenvalues
    dist = match_multisets(full, np.array(pooled))
    report = PeterWeylReport(dist, tol, dist <= tol, blocks)
    if not report.passed:
        raise TheoremViolation(f"block spectra differ from the full spectrum by {dist:.3g}")
    return report


def matrix_coefficient(pi: Representation, xi) -> Measure:
    """Measure f with ``fs_transform(f, pi) @ xi == xi``.

    The density against normalised Haar is ``d <pi(t) conj(xi), conj(xi)>``,
    which is ``d <pi(t) xi, xi>`` for real xi; conjugating xi is what the
    conjugated transform convention requires for complex xi.
    """
    xi = np.asarray(xi, dtype=np.complex128).reshape(-1)
    if xi.shape != (pi.dim,):
        raise InputError(f"xi must have length {pi.dim}")
    if abs(np.linalg.norm(xi) - 1.0) > 1e-12:
        raise InputError("xi must be a unit vector")
    v = np.conj(xi)
    coeff = np.einsum("i,tij,j->t", np.conj(v), pi.matrices, v)
    return Measure(pi.group, pi.dim * coeff / pi.group.order)


@dataclass
class AdaptedFSReport:
    skipped: bool
    passed: bool
    min_distance_nontrivial: float
    trivial_value: complex | None
    witnesses: list


def adapted_fs_check(mu: Measure, reps, tol: float = EIGEN_TOL) -> AdaptedFSReport:
    """For adapted mu: 1 is an eigenvalue of ``mu_hat(pi)`` only for the trivial pi.

    Non-adapted input is skipped, but the nontrivial representations that
    do have eigenvalue 1 are listed as witnesses of why adaptedness matters.
    """
    G = mu.group
    adapted = generated_subgroup(G, support(mu)).order == G.order
    dmin = np.inf
    trivial_value = None
    witnesses = []
    for rep in reps:
        ev = fs_transform(mu, rep).eigenvalues()
        if rep.is_trivial:
            trivial_value = complex(ev[0])
            continue
        d = float(np.abs(ev - 1.0).min())
        dmin = min(dmin, d)
        if d <= tol:
            witnesses.append(rep.label)
    if not adapted:
        return AdaptedFSReport(True, False, dmin, trivial_value, witnesses)
    ok = not witnesses and trivial_value is not None and abs(trivial_value - 1.0) <= tol
    return AdaptedFSReport(False, ok, dmin, trivial_value, witnesses)


def schur_orthogonality_error(pi: Representation) -> float:
    """Max deviation of ``mean_t pi_ij(t) conj(pi_kl(t))`` from ``delta_ik delta_jl / d``."""
    P = pi.matrices.reshape(pi.group.order, -1)
    gram = P.T @ np.conj(P) / pi.group.order
    return float(np.abs(gram - np.eye(pi.dim**2) / pi.dim).max())


def orthogonality_check(pi: Representation) -> float:
    """Max error of the Schur orthogonality relations for pi.

    Every matrix coefficient has mean square ``1/d``, and distinct
    coefficients are orthogonal. Only the diagonal of the squared-modulus
    table follows a ``1/d``-versus-0 pattern: off-diagonal entries are ``1/d``
    as well.
    """
    return schur_orthogonality_error(pi)
