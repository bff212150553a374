"""Matrix realisations of left convolution on L1(G) and on its sum-zero hyperplane.

Vectors are in measure coordinates with the TV norm, so the L1 operator
norm of a full convolution matrix is its largest column abs-sum. The
augmentation-ideal matrix uses the basis ``delta_g - delta_e`` (g != e),
which is exact but not isometric: norms on that hyperplane come from
:func:`op_norm_zero`, never from that matrix.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .errors import InputError, NumericalDegeneracy
from .group import FiniteGroup, generated_subgroup
from .measure import (
    Measure,
    ProbabilityMeasure,
    _conv,
    _power_weights,
    haar,
    support,
)

EIGEN_TOL = 1e-9
GAP_TOL = 1e-6
CONTOUR_START_NODES = 64
CONTOUR_MAX_NODES = 4096
CONTOUR_TOL = 1e-10


def _frozen(a):
    a = np.array(a, dtype=np.complex128)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class ConvOperator:
    group: FiniteGroup
    matrix: np.ndarray
    source: Measure

    @property
    def dim(self):
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class ZeroSumOperator:
    group: FiniteGroup
    matrix: np.ndarray
    source: Measure

    @property
    def dim(self):
        return self.matrix.shape[0]


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    tol: float = EIGEN_TOL

    def __len__(self):
        return len(self.eigenvalues)

    def near(self, z, tol=None) -> np.ndarray:
        tol = self.tol if tol is None else tol
        return self.eigenvalues[np.abs(self.eigenvalues - z) <= tol]

    def to_list(self):
        return [[float(z.real), float(z.imag)] for z in _canonical_order(self.eigenvalues)]


def _canonical_order(z):
    z = np.asarray(z)
    return z[np.lexsort((np.round(z.imag, 9), np.round(z.real, 9)))]


def lambda1(mu: Measure) -> ConvOperator:
    """Matrix with entry ``mu(z y^-1)`` at (z, y)."""
    return ConvOperator(mu.group, _frozen(mu.weights[mu.group.rdiv]), mu)


def _nonidentity(G: FiniteGroup) -> np.ndarray:
    return np.delete(np.arange(G.order), G.identity)


def embedding(G: FiniteGroup) -> np.ndarray:
    """Columns ``delta_g - delta_e`` for g != e: coordinates -> measure vectors."""
    others = _nonidentity(G)
    E = np.zeros((G.order, G.order - 1))
    E[others, np.arange(G.order - 1)] = 1.0
    E[G.identity, :] = -1.0
    return E


def sum_zero_coordinates(G: FiniteGroup, v: np.ndarray) -> np.ndarray:
    """Inverse of :func:`embedding` on sum-zero vectors: drop the identity entry."""
    return np.asarray(v)[_nonidentity(G)]


def lambda1_zero(mu: Measure) -> ZeroSumOperator:
    G = mu.group
    M = mu.weights[G.rdiv]
    others = _nonidentity(G)
    Z = M[np.ix_(others, others)] - M[others, G.identity][:, None]
    return ZeroSumOperator(G, _frozen(Z), mu)


def op_norm_full(T: ConvOperator) -> float:
    return float(np.abs(T.matrix).sum(axis=0).max())


def _translate_gaps(G: FiniteGroup, w: np.ndarray) -> np.ndarray:
    # column x of the convolution matrix is w * delta_x; column e is w itself
    M = w[G.rdiv]
    return np.abs(M - w[:, None]).sum(axis=0)


def op_norm_zero(mu: Measure) -> float:
    """Norm of convolution by ``mu`` on the sum-zero hyperplane.

    The extreme points of the unit ball of sum-zero vectors are
    ``(delta_a - delta_b)/2``, and right invariance turns the maximum over
    pairs into ``max_x ||mu - mu*delta_x|| / 2``. This is exact for real
    measures. For complex weights it is only a lower bound.
    """
    return 0.5 * float(_translate_gaps(mu.group, mu.weights).max())


def spectrum(T: ConvOperator | ZeroSumOperator, tol: float = EIGEN_TOL) -> Spectrum:
    """All eigenvalues of the dense matrix (LAPACK geev), with multiplicity."""
    if tol <= 0:
        raise InputError("tol must be positive")
    A = np.asarray(T.matrix)
    if A.size == 0:
        return Spectrum(np.zeros(0, dtype=np.complex128), tol)
    if not np.all(np.isfinite(A)):
        raise InputError("matrix has non-finite entries")
    try:
        ev = linalg.eigvals(A, check_finite=False)
    except linalg.LinAlgError as exc:
        raise NumericalDegeneracy(f"eigensolver did not converge: {exc}") from None
    return Spectrum(np.asarray(ev, dtype=np.complex128), tol)


def spectral_radius(S: Spectrum) -> float:
    return float(np.abs(S.eigenvalues).max()) if len(S) else 0.0


def spectral_gap(S: Spectrum) -> float:
    """Distance from 1 to the eigenvalues farther than ``S.tol`` from 1 (inf if none)."""
    d = np.abs(S.eigenvalues - 1.0)
    rest = d[d > S.tol]
    return float(rest.min()) if rest.size else math.inf


def is_one_isolated(S: Spectrum, gap_tol: float = GAP_TOL) -> tuple[bool, float]:
    if gap_tol <= 0:
        raise InputError("gap_tol must be positive")
    gap = spectral_gap(S)
    return gap > gap_tol, gap


def unimodular_spectrum(S: Spectrum, tol: float | None = None) -> np.ndarray:
    tol = S.tol if tol is None else tol
    if tol <= 0:
        raise InputError("tol must be positive")
    return _canonical_order(S.eigenvalues[np.abs(S.eigenvalues) >= 1.0 - tol])


def unimodular_is_one(S: Spectrum, tol: float | None = None) -> bool:
    """Unimodular part is exactly one eigenvalue, equal to 1 (as a multiset)."""
    tol = S.tol if tol is None else tol
    u = unimodular_spectrum(S, tol)
    return len(u) == 1 and abs(u[0] - 1.0) <= tol


def unimodular_within_one(S: Spectrum, tol: float | None = None) -> bool:
    """Every unimodular eigenvalue equals 1 (set inclusion, multiplicity ignored)."""
    tol = S.tol if tol is None else tol
    u = unimodular_spectrum(S, tol)
    return bool(np.all(np.abs(u - 1.0) <= tol))


def match_multisets(a, b) -> float:
    """Largest distance in an optimal one-to-one pairing of two equal-size multisets."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape:
        raise InputError(f"multisets differ in size: {a.size} vs {b.size}")
    if a.size == 0:
        return 0.0
    cost = np.abs(a[:, None] - b[None, :])
    levels = np.unique(cost)
    lo, hi = 0, levels.size - 1
    # bottleneck assignment: smallest threshold admitting a perfect matching
    while lo < hi:
        mid = (lo + hi) // 2
        graph = csr_matrix(cost <= levels[mid])
        if (maximum_bipartite_matching(graph, perm_type="column") >= 0).all():
            hi = mid
        else:
            lo = mid + 1
    return float(levels[lo])


# -- sweeps ------------------------------------------------------------------

@dataclass(frozen=True)
class SweepRow:
    n: int
    pow_norm: float
    cesaro_norm: float
    haar_dist: float


def norm_sweep(mu: ProbabilityMeasure, n_max: int) -> list[SweepRow]:
    """Exact ``||lambda1^0(mu^n)||``, ``||lambda1^0(mu_[n])||`` and ``||mu_[n] - m_H||`` for n <= n_max.

    The iterates are carried as ``(mu - m)^n = mu^n - m`` with m the Haar
    measure of G (first two columns) or of H_mu (third). Haar absorbs every
    probability supported in its subgroup, so these are the same numbers,
    but small tails are computed to relative rather than absolute accuracy.
    """
    if isinstance(n_max, bool) or not isinstance(n_max, (int, np.integer)) or n_max < 1:
        raise InputError("n_max must be a positive integer")
    G = mu.group
    H = generated_subgroup(G, support(mu))
    nu_g = mu.weights - haar(G).weights
    nu_h = mu.weights - haar(G, H).weights
    pg, sg = nu_g, np.zeros(G.order, dtype=np.complex128)
    ph, sh = nu_h, np.zeros(G.order, dtype=np.complex128)
    rows = []
    for n in range(1, n_max + 1):
        if n > 1:
            pg = _conv(G, pg, nu_g)
            ph = _conv(G, ph, nu_h)
        sg = sg + pg
        sh = sh + ph
        rows.append(SweepRow(
            n,
            0.5 * float(_translate_gaps(G, pg).max()),
            0.5 * float(_translate_gaps(G, sg / n).max()),
            float(np.abs(sh).sum() / n),
        ))
    return rows


def sweep_csv(rows: list[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "pow_norm", "cesaro_norm", "haar_dist"])
    for r in rows:
        w.writerow([r.n, f"{r.pow_norm:.15g}", f"{r.cesaro_norm:.15g}", f"{r.haar_dist:.15g}"])
    return buf.getvalue()


def zero_norm_of_power(mu: Measure, n: int) -> float:
    """``||lambda1^0(mu^n)||`` via ``(mu - m_G)^n``; see :func:`norm_sweep`."""
    G = mu.group
    nu = mu.weights - mu.weights.sum() * haar(G).weights
    return 0.5 * float(_translate_gaps(G, _power_weights(G, nu, int(n))).max())


# -- spectral projection at 1 --------------------------------------------------

def _projection_eigen(A: np.ndarray, tol: float) -> np.ndarray:
    """Spectral projector for the eigenvalues within ``tol`` of 1.

    Reorder the complex Schur form so that cluster comes first, then solve
    a Sylvester equation to decouple the two diagonal blocks.
    """
    n = A.shape[0]
    T, Q, k = linalg.schur(A, output="complex", sort=lambda z: abs(z - 1.0) <= tol)
    if k == 0:
        return np.zeros_like(A)
    if k == n:
        return np.eye(n, dtype=np.complex128)
    T11, T12, T22 = T[:k, :k], T[:k, k:], T[k:, k:]
    R = linalg.solve_sylvester(T11, -T22, -T12)
    P = np.zeros((n, n), dtype=np.complex128)
    P[:k, :k] = np.eye(k)
    P[:k, k:] = -R
    return Q @ P @ Q.conj().T


def _projection_contour(A, radius, start, cap, tol):
    n = A.shape[0]
    I = np.eye(n)

    def trapezoid(K):
        theta = 2 * np.pi * (np.arange(K) + 0.5) / K
        acc = np.zeros((n, n), dtype=np.complex128)
        for t in theta:
            w = radius * np.exp(1j * t)
            acc += w * linalg.solve((1.0 + w) * I - A, I)
        return acc / K

    K = start
    P = trapezoid(K)
    while K < cap:
        K *= 2
        P_next = trapezoid(K)
        if np.abs(P_next - P).max() < tol:
            return P_next, K
        P = P_next
    raise NumericalDegeneracy(f"contour quadrature did not converge with {cap} nodes")


def spectral_projection_at_one(
    T: ConvOperator,
    mode: str = "eigen",
    *,
    tol: float = EIGEN_TOL,
    gap_tol: float = GAP_TOL,
    radius: float | None = None,
    ring_tol: float | None = None,
    start_nodes: int = CONTOUR_START_NODES,
    max_nodes: int = CONTOUR_MAX_NODES,
    quad_tol: float = CONTOUR_TOL,
) -> np.ndarray:
    """Riesz projection of ``T`` for the spectral point 1.

    ``mode="eigen"`` uses a reordered Schur form; ``mode="contour"`` applies the
    trapezoid rule to ``(1/2 pi i) \\oint (zI - T)^-1 dz`` on ``|z - 1| = radius``,
    doubling the node count until successive results agree to ``quad_tol``.
    The default radius is half the spectral gap.
    """
    A = np.asarray(T.matrix, dtype=np.complex128)
    S = spectrum(T, tol)
    isolated, gap = is_one_isolated(S, gap_tol)
    if not isolated:
        raise NumericalDegeneracy(f"1 is not isolated in the spectrum (gap {gap:.3g})")
    if mode == "eigen":
        return _projection_eigen(A, tol)
    if mode != "contour":
        raise InputError(f"unknown projection mode {mode!r}")
    if radius is None:
        radius = gap / 2 if math.isfinite(gap) else 0.5
    ring_tol = radius / 4 if ring_tol is None else ring_tol
    d = np.abs(S.eigenvalues - 1.0)
    if np.any(np.abs(d - radius) <= ring_tol):
        raise NumericalDegeneracy("an eigenvalue lies on the integration contour")
    P, _ = _projection_contour(A, radius, start_nodes, max_nodes, quad_tol)
    return P


def fixed_space_dim(T: ConvOperator, tol: float = EIGEN_TOL, rank_tol: float = 1e-8) -> int:
    """``dim ker(I - T)``, counted from the spectrum and confirmed by a rank computation.

    Disagreement means 1 is not a semisimple eigenvalue (the resolvent has a
    pole of order > 1 there), which is reported rather than hidden.
    """
    S = spectrum(T, tol)
    algebraic = len(S.near(1.0))
    A = np.eye(T.dim) - np.asarray(T.matrix)
    sv = linalg.svdvals(A)
    geometric = int(np.sum(sv <= rank_tol))
    if geometric != algebraic:
        raise NumericalDegeneracy(
            f"eigenvalue 1 has algebraic multiplicity {algebraic} but kernel dimension {geometric}"
        )
    return geometric
