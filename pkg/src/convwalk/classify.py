"""Ergodicity verdicts for probability measures on finite groups.

Every verdict is reached twice, once from the group structure of the
support and once from the spectrum, and the iterative tails are computed
directly. The routes are compared in ``cross_checks``. A disagreement is
raised as :class:`TheoremViolation`.

Tail horizons are certified rather than guessed:

* ``||lambda1^0(mu^n)||`` and the iterate differences never increase in n,
  so the first doubling ``n = 2^k`` that falls below tolerance bounds the
  whole tail.
* Cesaro means satisfy ``||lambda1^0(mu_[n])|| <= 2 ||rho|| / n`` where
  ``rho = sum_k (mu - m_G)^k`` solves one linear system; the horizon is where
  that bound drops below tolerance.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np
from scipy import linalg

from .errors import InputError, NumericalDegeneracy, TheoremViolation
from .group import (
    FiniteGroup,
    GroupSpec,
    Subgroup,
    all_subgroups,
    build_group,
    generated_subgroup,
    index,
    minimal_normal_coset,
    parse_group_spec,
)
from .measure import (
    Measure,
    ProbabilityMeasure,
    ZMeasure,
    _box,
    _conv,
    _power_sum_weights,
    as_probability,
    haar,
    measure_to_dict,
    support,
    uniform_on,
    z_cesaro_dense,
)
from .operator import (
    EIGEN_TOL,
    GAP_TOL,
    Spectrum,
    _translate_gaps,
    fixed_space_dim,
    is_one_isolated,
    lambda1,
    lambda1_zero,
    match_multisets,
    op_norm_zero,
    spectral_projection_at_one,
    spectral_radius,
    spectrum,
    unimodular_is_one,
    unimodular_spectrum,
    unimodular_within_one,
)

TAIL_TOL = 1e-6
MAX_DOUBLINGS = 40
SWEEP_CAP = 2000


@dataclass(frozen=True)
class ClassifyOptions:
    eigen_tol: float = EIGEN_TOL
    gap_tol: float = GAP_TOL
    tail_tol: float = TAIL_TOL
    n_max: int | None = None
    covering_cap: int | None = None
    contour: bool = True
    projection_tol: float = 1e-7
    match_tol: float = 1e-7

    def __post_init__(self):
        for name in ("eigen_tol", "gap_tol", "tail_tol", "projection_tol", "match_tol"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and v > 0 and math.isfinite(v)):
                raise InputError(f"{name} must be a positive number")
        if self.gap_tol < self.eigen_tol:
            raise InputError("gap_tol must be at least eigen_tol")
        for name in ("n_max", "covering_cap"):
            v = getattr(self, name)
            if v is not None and (isinstance(v, bool) or not isinstance(v, int) or v < 1):
                raise InputError(f"{name} must be a positive integer")

    def to_dict(self):
        return asdict(self)


@dataclass
class CrossCheck:
    theorem: str
    passed: bool
    detail: str

    def to_dict(self):
        return {"theorem": self.theorem, "passed": bool(self.passed), "detail": self.detail}


# What each check id asserts, for the pretty printer.
THEOREM_STATEMENTS = {
    "ue_iff_adapted": "uniformly ergodic iff adapted iff 1 is not an eigenvalue on the sum-zero hyperplane",
    "ue_iff_cesaro_tail": "adapted iff the Cesaro means converge to Haar in operator norm",
    "fixed_space_dim_is_index": "dim ker(I - lambda1) equals the index of H_mu (so 1 exactly when adapted)",
    "ucm_iff_strictly_aperiodic": "strictly aperiodic iff the sum-zero spectral radius is below 1",
    "strictly_aperiodic_iff_unimodular_one": "strictly aperiodic iff the unimodular spectrum is exactly {1}",
    "ucm_iff_power_tail": "strictly aperiodic iff the powers converge to Haar in operator norm",
    "strictly_aperiodic_implies_adapted": "strict aperiodicity includes adaptedness",
    "ue_and_aperiodic_imply_ucm": "uniformly ergodic and strictly aperiodic imply uniformly completely mixing",
    "projection_is_haar_of_support_subgroup": "the spectral projection at 1 is convolution by Haar on H_mu",
    "zero_sum_spectrum_splits": "the full spectrum is the sum-zero spectrum plus one eigenvalue 1",
    "katznelson_tzafriri": "iterate differences vanish iff no unimodular eigenvalue other than 1 (Katznelson-Tzafriri)",
    "kawada_ito": "Cesaro means converge to Haar on H_mu in total variation (Kawada-Ito)",
    "ue_iff_covering": "adapted iff finitely many quotients S^-j S^k cover G",
}


@dataclass
class ErgodicityReport:
    adapted: bool
    H_mu: Subgroup
    index_H: int
    strictly_aperiodic: bool
    minimal_normal_coset: tuple[Subgroup, int]
    spectrum_full: Spectrum
    spectrum_zero: Spectrum
    one_isolated: tuple[bool, float]
    unimodular: np.ndarray
    zero_norm: float
    zero_spectral_radius: float
    verdict_uniformly_ergodic: bool
    verdict_uniformly_completely_mixing: bool
    covering_n: int | None
    sweep_summary: dict
    cross_checks: list[CrossCheck]
    fixed_space_dim: int = 0
    tails: dict = field(default_factory=dict)
    input: dict = field(default_factory=dict)
    options: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cross_checks)

    def to_dict(self) -> dict:
        N, x = self.minimal_normal_coset
        iso, gap = self.one_isolated
        return {
            "input": self.input,
            "options": self.options,
            "adapted": bool(self.adapted),
            "H_mu": list(self.H_mu.elements),
            "index_H": int(self.index_H),
            "strictly_aperiodic": bool(self.strictly_aperiodic),
            "minimal_normal_coset": {"subgroup": list(N.elements), "element": int(x)},
            "spectrum_full": self.spectrum_full.to_list(),
            "spectrum_zero": self.spectrum_zero.to_list(),
            "one_isolated": {"isolated": bool(iso), "gap": _finite_or_none(gap)},
            "unimodular": [[float(z.real), float(z.imag)] for z in self.unimodular],
            "zero_norm": float(self.zero_norm),
            "zero_spectral_radius": float(self.zero_spectral_radius),
            "fixed_space_dim": int(self.fixed_space_dim),
            "verdict_uniformly_ergodic": bool(self.verdict_uniformly_ergodic),
            "verdict_uniformly_completely_mixing": bool(self.verdict_uniformly_completely_mixing),
            "verdicts": {
                "uniformly_ergodic": bool(self.verdict_uniformly_ergodic),
                "uniformly_completely_mixing": bool(self.verdict_uniformly_completely_mixing),
            },
            "covering_n": self.covering_n,
            "sweep_summary": self.sweep_summary,
            "tails": self.tails,
            "cross_checks": [c.to_dict() for c in self.cross_checks],
        }


def _finite_or_none(x):
    return float(x) if math.isfinite(x) else None


# -- tail machinery --------------------------------------------------------------

def _zero_norm(G: FiniteGroup, w: np.ndarray) -> float:
    return 0.5 * float(_translate_gaps(G, w).max())


def _doubling_tail(G, base, tol, norm, post=None):
    """Values of ``norm(base^n [* post])`` at n = 1, 2, 4, ... until below tol."""
    n, cur = 1, base
    for k in range(MAX_DOUBLINGS + 1):
        v = norm(cur if post is None else _conv(G, cur, post))
        if v < tol or k == MAX_DOUBLINGS:
            return {"n": n, "value": v, "below_tol": v < tol}
        cur = _conv(G, cur, cur)
        n *= 2


def _resolvent_sum(G, nu):
    """``sum_{k>=1} nu^k``, solving ``(delta_e - nu) * rho = nu``."""
    A = np.eye(G.order) - nu[G.rdiv]
    try:
        return linalg.solve(A, nu)
    except linalg.LinAlgError:
        raise NumericalDegeneracy("resolvent at 1 is singular") from None


def _certified_horizon(bound_constant: float, tol: float) -> int:
    # smallest n with bound_constant / n < tol
    return max(1, math.floor(bound_constant / tol) + 1)


def default_sweep_horizon(gap: float) -> int:
    if not math.isfinite(gap):
        return 1
    return max(1, min(SWEEP_CAP, math.ceil(40 / gap)))


def _degeneracy_reason(S: Spectrum, eigen_tol, gap_tol):
    z = S.eigenvalues
    d1 = np.abs(z - 1.0)
    near_one = (d1 > eigen_tol) & (d1 <= gap_tol)
    if near_one.any():
        return f"eigenvalue at distance {d1[near_one].min():.3g} from 1"
    m = np.abs(z)
    near_circle = (m >= 1.0 - gap_tol) & (m < 1.0 - eigen_tol)
    if near_circle.any():
        return f"eigenvalue of modulus {m[near_circle].max():.12g}"
    return None


# -- covering ---------------------------------------------------------------------

def covering_index(mu: Measure, n_cap: int | None = None) -> int | None:
    """Least n with ``union_{1<=j,k<=n} S^-j S^k = G``, or None if no n <= n_cap works."""
    G = mu.group
    n_cap = G.order if n_cap is None else n_cap
    if isinstance(n_cap, bool) or not isinstance(n_cap, (int, np.integer)) or n_cap < 1:
        raise InputError("n_cap must be a positive integer")
    S = np.asarray(support(mu))
    if S.size == 0:
        raise InputError("measure has empty support")
    power_k = np.zeros(G.order, dtype=bool)
    power_k[S] = True
    reach = power_k.copy()
    for n in range(1, n_cap + 1):
        if n > 1:
            nxt = np.zeros(G.order, dtype=bool)
            nxt[G.mul[np.ix_(np.flatnonzero(power_k), S)].ravel()] = True
            power_k = nxt
            grown = reach | power_k
            if np.array_equal(grown, reach):
                return None
            reach = grown
        B = np.flatnonzero(reach)
        covered = np.zeros(G.order, dtype=bool)
        covered[G.mul[np.ix_(G.inv[B], B)].ravel()] = True
        if covered.all():
            return n
    return None


# -- classification ------------------------------------------------------------

def classify(mu: ProbabilityMeasure, opts: ClassifyOptions | None = None) -> ErgodicityReport:
    opts = opts or ClassifyOptions()
    if not isinstance(mu, ProbabilityMeasure):
        mu = as_probability(mu)
    G = mu.group
    w = mu.weights.real.copy()

    S = support(mu)
    H = generated_subgroup(G, S)
    adapted = H.order == G.order
    N, x = minimal_normal_coset(G, S)
    strictly = adapted and N.order == G.order

    T = lambda1(mu)
    Sf = spectrum(T, opts.eigen_tol)
    Sz = spectrum(lambda1_zero(mu), opts.eigen_tol)
    reason = _degeneracy_reason(Sf, opts.eigen_tol, opts.gap_tol)
    if reason:
        raise NumericalDegeneracy(f"needs exact arithmetic: {reason}")
    isolated, gap = is_one_isolated(Sf, opts.gap_tol)
    ue_spectral = len(Sz.near(1.0)) == 0
    r0 = spectral_radius(Sz)
    ucm_spectral = r0 < 1.0 - opts.gap_tol
    fixed = fixed_space_dim(T, opts.eigen_tol)
    unimodular = unimodular_spectrum(Sf)

    # spectral projection at 1 versus convolution by Haar on H_mu
    target = lambda1(haar(G, H)).matrix
    P_eigen = spectral_projection_at_one(T, "eigen", tol=opts.eigen_tol, gap_tol=opts.gap_tol)
    proj_err = float(np.abs(P_eigen - target).max())
    proj_detail = f"eigen-mode error {proj_err:.3g}"
    if opts.contour:
        P_contour = spectral_projection_at_one(T, "contour", tol=opts.eigen_tol, gap_tol=opts.gap_tol)
        c_err = float(np.abs(P_contour - target).max())
        agree = float(np.abs(P_contour - P_eigen).max())
        proj_detail += f", contour-mode error {c_err:.3g}, modes differ by {agree:.3g}"
        proj_err = max(proj_err, c_err, agree)

    split = match_multisets(Sf.eigenvalues, np.append(Sz.eigenvalues, 1.0))

    # iterative tails
    nu_g = w - haar(G).weights.real
    nu_h = w - haar(G, H).weights.real
    n_sweep = opts.n_max or default_sweep_horizon(gap)
    if ue_spectral:
        rho_g = _resolvent_sum(G, nu_g)
        bound_c = 2.0 * _zero_norm(G, rho_g)
        n_ces = _certified_horizon(bound_c, opts.tail_tol)
    else:
        bound_c, n_ces = math.inf, n_sweep
    ces_sum, _ = _power_sum_weights(G, nu_g, n_ces)
    ces_value = _zero_norm(G, ces_sum / n_ces)
    cesaro_tail = {"n": n_ces, "value": ces_value, "bound": _finite_or_none(bound_c / n_ces),
                   "below_tol": ces_value < opts.tail_tol}

    power_tail = _doubling_tail(G, nu_g, opts.tail_tol, lambda v: _zero_norm(G, v))
    step = w.copy()
    step[G.identity] -= 1.0
    kt_tail = _doubling_tail(G, nu_g, opts.tail_tol, lambda v: _zero_norm(G, v), post=step)

    rho_h = _resolvent_sum(G, nu_h)
    bound_h = 3.0 * float(np.abs(rho_h).sum())
    n_ki = _certified_horizon(bound_h, opts.tail_tol)
    ki_sum, _ = _power_sum_weights(G, nu_h, n_ki)
    ki_value = float(np.abs(ki_sum).sum() / n_ki)
    kawada_tail = {"n": n_ki, "value": ki_value, "bound": bound_h / n_ki,
                   "below_tol": ki_value < opts.tail_tol}

    sw_sum_g, sw_pow_g = _power_sum_weights(G, nu_g, n_sweep)
    sw_sum_h, _ = _power_sum_weights(G, nu_h, n_sweep)
    n_lit = 1 if not math.isfinite(gap) else math.ceil(10 / gap)
    lit_sum, _ = _power_sum_weights(G, nu_g, n_lit)
    sweep_summary = {
        "n_max": n_sweep,
        "pow_norm": _zero_norm(G, sw_pow_g),
        "cesaro_norm": _zero_norm(G, sw_sum_g / n_sweep),
        "haar_dist": float(np.abs(sw_sum_h).sum() / n_sweep),
        "cesaro_at_10_over_gap": {"n": n_lit, "value": _zero_norm(G, lit_sum / n_lit)},
    }

    cov_n = covering_index(mu, opts.covering_cap)

    checks = [
        CrossCheck("ue_iff_adapted", adapted == ue_spectral,
                   f"adapted={adapted}, 1 in sum-zero spectrum={not ue_spectral}"),
        CrossCheck("ue_iff_cesaro_tail", adapted == cesaro_tail["below_tol"],
                   f"adapted={adapted}, Cesaro norm {ces_value:.3g} at n={n_ces}"),
        CrossCheck("fixed_space_dim_is_index", fixed == index(G, H),
                   f"dim ker(I - lambda1)={fixed}, index={index(G, H)}"),
        CrossCheck("ucm_iff_strictly_aperiodic", strictly == ucm_spectral,
                   f"strictly aperiodic={strictly}, sum-zero spectral radius={r0:.12g}"),
        CrossCheck("strictly_aperiodic_iff_unimodular_one", strictly == unimodular_is_one(Sf),
                   f"strictly aperiodic={strictly}, unimodular count={len(unimodular)}"),
        CrossCheck("ucm_iff_power_tail", strictly == power_tail["below_tol"],
                   f"strictly aperiodic={strictly}, power norm {power_tail['value']:.3g} "
                   f"at n={power_tail['n']}"),
        CrossCheck("strictly_aperiodic_implies_adapted", adapted or not strictly,
                   f"adapted={adapted}, strictly aperiodic={strictly}"),
        CrossCheck("ue_and_aperiodic_imply_ucm", not (adapted and strictly) or ucm_spectral,
                   f"sum-zero spectral radius={r0:.12g}"),
        CrossCheck("projection_is_haar_of_support_subgroup", proj_err <= opts.projection_tol,
                   proj_detail),
        CrossCheck("zero_sum_spectrum_splits", split <= opts.match_tol,
                   f"matching distance {split:.3g}"),
        CrossCheck("katznelson_tzafriri", kt_tail["below_tol"] == unimodular_within_one(Sf),
                   f"difference norm {kt_tail['value']:.3g} at n={kt_tail['n']}, "
                   f"unimodular part inside {{1}}={unimodular_within_one(Sf)}"),
        CrossCheck("kawada_ito", kawada_tail["below_tol"],
                   f"||mu_[n] - m_H|| = {ki_value:.3g} at n={n_ki}"),
        CrossCheck("ue_iff_covering", adapted == (cov_n is not None),
                   f"adapted={adapted}, covering n={cov_n}"),
    ]

    report = ErgodicityReport(
        adapted=adapted,
        H_mu=H,
        index_H=index(G, H),
        strictly_aperiodic=strictly,
        minimal_normal_coset=(N, x),
        spectrum_full=Sf,
        spectrum_zero=Sz,
        one_isolated=(isolated, gap),
        unimodular=unimodular,
        zero_norm=op_norm_zero(mu),
        zero_spectral_radius=r0,
        verdict_uniformly_ergodic=adapted,
        verdict_uniformly_completely_mixing=strictly,
        covering_n=cov_n,
        sweep_summary=sweep_summary,
        cross_checks=checks,
        fixed_space_dim=fixed,
        tails={"cesaro": cesaro_tail, "power": power_tail, "iterate_difference": kt_tail,
               "haar_distance": kawada_tail},
        input=_input_block(mu),
        options=opts.to_dict(),
    )
    failed = [c for c in checks if not c.passed]
    if failed:
        exc = TheoremViolation(
            "cross-check failed: " + ", ".join(c.theorem for c in failed), failed
        )
        exc.report = report
        raise exc
    return report


def _input_block(mu: Measure) -> dict:
    d = measure_to_dict(mu)
    if mu.group.spec is not None:
        d["group"] = mu.group.spec.to_dict()
    return d


# -- constructions -----------------------------------------------------------------

def coset_witness(G: FiniteGroup) -> ProbabilityMeasure:
    """Uniform measure on a coset xH of a maximal subgroup H of prime index, x not in H.

    The coset generates G, so the measure is adapted, but its support sits in
    a single coset of the proper normal subgroup H. For Z_p, H is trivial and
    the measure is a point mass at a generator.
    """
    if not G.is_abelian:
        raise InputError("coset_witness needs an abelian group")
    if G.order < 2:
        raise InputError("the trivial group has no proper subgroup")
    H = max((K for K in all_subgroups(G) if K.order < G.order), key=lambda K: K.order)
    x = next(g for g in range(G.order) if g not in H)
    return uniform_on(G, G.mul[x, list(H.elements)])


@dataclass
class ArcReport:
    n: int
    fraction: float
    support_size: int
    shift: int
    zero_norm: float
    zero_spectral_radius: float

    @property
    def strict_inequality(self) -> bool:
        return self.zero_spectral_radius < self.zero_norm

    def to_dict(self):
        d = asdict(self)
        d["strict_inequality"] = self.strict_inequality
        return d


def arc_family_demo(n: int, arc_fraction: float) -> ArcReport:
    """Uniform measure on ``{0, ..., floor(arc_fraction * n)}`` in Z_n."""
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 8:
        raise InputError("n must be an integer >= 8")
    if not 0 < arc_fraction < 0.5:
        raise InputError("arc_fraction must lie strictly between 0 and 1/2")
    size = math.floor(arc_fraction * n) + 1
    if size < 2:
        raise InputError("arc has a single point; the measure would not be adapted")
    if 2 * size > n:
        raise InputError("arc too long for a disjoint translate at this n")
    G = build_group(GroupSpec("cyclic", n=int(n)))
    mu = uniform_on(G, range(size))
    Sz = spectrum(lambda1_zero(mu))
    return ArcReport(int(n), float(arc_fraction), size, size, op_norm_zero(mu), spectral_radius(Sz))


@dataclass
class WitnessReport:
    shifts: list
    bounds: list
    n_cap: int

    @property
    def all_exactly_one(self) -> bool:
        return all(abs(b - 1.0) <= 1e-12 for b in self.bounds)

    def to_dict(self):
        return {"n_cap": self.n_cap, "all_exactly_one": self.all_exactly_one,
                "rows": [{"n": i + 1, "shift": s, "bound": b}
                         for i, (s, b) in enumerate(zip(self.shifts, self.bounds))]}


def _shifted_gap(arr, lo, x):
    """``(||nu - nu * delta_x|| / 2, supports overlap)`` for nu given densely at offset lo."""
    new_lo = np.minimum(lo, lo + x)
    new_hi = np.maximum(lo + arr.shape, lo + x + arr.shape)
    here = np.zeros(tuple(new_hi - new_lo), dtype=np.complex128)
    moved = np.zeros_like(here)
    here[_box(lo - new_lo, arr.shape)] = arr
    moved[_box(lo + x - new_lo, arr.shape)] = arr
    overlap = bool(np.any((here != 0) & (moved != 0)))
    return 0.5 * float(np.abs(here - moved).sum()), overlap


def noncompact_witness(mu: ZMeasure, n_cap: int = 50, shift=None) -> WitnessReport:
    """Lower bound 1 on the sum-zero norm for mu and its Cesaro means on Z^d.

    Row n uses a shift that moves the support of ``mu_[n]`` off itself, so
    ``||mu_[n] - mu_[n] * delta_x|| / 2 = 1``; ``delta_0 - delta_x`` has norm 2,
    giving ``||lambda1^0(mu_[n])|| >= 1``. ``shift`` fixes the shift for n = 1.
    By default the shift is one more than the width of the support box.
    """
    w = mu.weights
    if len(w) == 0 or np.any(np.abs(w.imag) > 0) or np.any(w.real < 0):
        raise InputError("noncompact_witness needs a probability measure")
    if abs(w.real.sum() - 1.0) > 1e-12:
        raise InputError("weights must sum to 1")
    if shift is not None:
        shift = np.asarray(shift, dtype=np.int64).reshape(-1)
        if shift.shape != (mu.dim,):
            raise InputError(f"shift must have dimension {mu.dim}")
    shifts, bounds = [], []
    for n, arr, lo in z_cesaro_dense(mu, n_cap):
        nz = np.argwhere(arr != 0)
        x = shift if (n == 1 and shift is not None) else nz.max(axis=0) - nz.min(axis=0) + 1
        bound, overlap = _shifted_gap(arr, lo, x)
        if overlap:
            raise InputError(f"shift {x.tolist()} does not separate the support")
        shifts.append([int(c) for c in x])
        bounds.append(bound)
    return WitnessReport(shifts, bounds, int(n_cap))


# -- corpus -----------------------------------------------------------------------------

@dataclass(frozen=True)
class CorpusEntry:
    group: GroupSpec
    generator: dict


@dataclass(frozen=True)
class CorpusInstance:
    id: str
    group: GroupSpec
    weights: tuple


@dataclass(frozen=True)
class CorpusSpec:
    entries: tuple

    def instances(self, seed: int) -> list[CorpusInstance]:
        out = []
        for i, entry in enumerate(self.entries):
            G = build_group(entry.group)
            gen = dict(entry.generator)
            kind = gen.get("kind")
            tag = f"{entry.group}/{kind}"
            if kind == "random":
                rng = np.random.default_rng([seed, i])
                for k in range(int(gen.get("count", 50))):
                    out.append(CorpusInstance(f"{tag}/{k}", entry.group,
                                              tuple(random_measure(G, rng).weights.real)))
            elif kind == "diracs":
                for a in range(G.order):
                    out.append(CorpusInstance(f"{tag}/{a}", entry.group,
                                              tuple(np.eye(G.order)[a])))
            elif kind == "subgroup_haars":
                for k, H in enumerate(all_subgroups(G)):
                    out.append(CorpusInstance(f"{tag}/{k}", entry.group,
                                              tuple(haar(G, H).weights.real)))
            elif kind == "coset_witness":
                out.append(CorpusInstance(f"{tag}/0", entry.group,
                                          tuple(coset_witness(G).weights.real)))
            else:
                raise InputError(f"unknown corpus generator {kind!r}")
        return out


def random_measure(G: FiniteGroup, rng: np.random.Generator) -> ProbabilityMeasure:
    """Support size uniform in [1, |G|], support uniform, Dirichlet(1) weights on it."""
    k = int(rng.integers(1, G.order + 1))
    S = rng.choice(G.order, size=k, replace=False)
    w = np.zeros(G.order)
    w[S] = rng.dirichlet(np.ones(k))
    return ProbabilityMeasure(G, w / w.sum())


def default_groups(max_order: int = 24) -> list[GroupSpec]:
    names = [f"cyclic:{n}" for n in range(1, 25)]
    names += [f"dihedral:{n}" for n in range(3, 13)]
    names += [f"symmetric:{n}" for n in range(1, 5)]
    names += [f"cyclic:{a}*cyclic:{b}" for a in range(2, 5) for b in range(a, 13) if a * b <= 24]
    names += [
        "cyclic:2*cyclic:2*cyclic:2", "cyclic:2*cyclic:2*cyclic:4", "cyclic:2*cyclic:2*cyclic:6",
        "cyclic:2*symmetric:3", "cyclic:3*symmetric:3", "cyclic:4*symmetric:3",
        "cyclic:2*dihedral:4", "cyclic:2*dihedral:5", "cyclic:2*dihedral:6",
        "cyclic:3*dihedral:4", "cyclic:2*cyclic:2*symmetric:3",
    ]
    specs = [parse_group_spec(s) for s in names]
    return [s for s in specs if s.order <= max_order]


SPOT_GROUPS = ("cyclic:256", "dihedral:64", "symmetric:5", "cyclic:16*cyclic:16",
               "cyclic:2*symmetric:4", "cyclic:2*cyclic:2*cyclic:2*cyclic:2*cyclic:2*cyclic:2*cyclic:2*cyclic:2")


def default_corpus(per_group: int = 50, max_order: int = 24, spot_count: int = 2,
                   named: bool = True) -> CorpusSpec:
    entries = []
    for spec in default_groups(max_order):
        entries.append(CorpusEntry(spec, {"kind": "random", "count": per_group}))
        if named:
            entries.append(CorpusEntry(spec, {"kind": "diracs"}))
            entries.append(CorpusEntry(spec, {"kind": "subgroup_haars"}))
            if spec.order >= 2 and build_group(spec).is_abelian:
                entries.append(CorpusEntry(spec, {"kind": "coset_witness"}))
    if spot_count:
        for s in SPOT_GROUPS:
            entries.append(CorpusEntry(parse_group_spec(s), {"kind": "random", "count": spot_count}))
    return CorpusSpec(tuple(entries))


@dataclass
class CorpusSummary:
    instances: int
    passes: int
    failures: list
    degenerate: list
    seed: int
    reports: dict = field(default_factory=dict, repr=False)

    def to_dict(self) -> dict:
        return {"instances": self.instances, "passes": self.passes, "failures": self.failures,
                "degenerate": self.degenerate, "seed": self.seed}


@lru_cache(maxsize=64)
def _cached_group(spec: GroupSpec) -> FiniteGroup:
    return build_group(spec)


def _run_instance(args):
    inst, opts = args
    G = _cached_group(inst.group)
    mu = ProbabilityMeasure(G, np.asarray(inst.weights))
    try:
        return inst.id, "pass", classify(mu, opts).to_dict()
    except TheoremViolation as exc:
        dump = {"id": inst.id, "group": inst.group.to_dict(), "measure": list(inst.weights),
                "failed": [c.to_dict() for c in exc.failures]}
        return inst.id, "fail", dump
    except NumericalDegeneracy as exc:
        return inst.id, "degenerate", {"id": inst.id, "reason": str(exc)}


def verify_corpus(corpus: CorpusSpec, opts: ClassifyOptions | None = None, *, seed: int = 0,
                  jobs: int = 1, keep_reports: bool = False) -> CorpusSummary:
    opts = opts or ClassifyOptions()
    if isinstance(jobs, bool) or not isinstance(jobs, int) or jobs < 1:
        raise InputError("jobs must be a positive integer")
    instances = corpus.instances(seed)
    tasks = [(inst, opts) for inst in instances]
    if jobs == 1:
        results = [_run_instance(t) for t in tasks]
    else:
        workers = min(jobs, os.cpu_count() or 1)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_instance, tasks, chunksize=16))
    results.sort(key=lambda r: r[0])
    failures = [r[2] for r in results if r[1] == "fail"]
    degenerate = [r[2] for r in results if r[1] == "degenerate"]
    passes = sum(1 for r in results if r[1] == "pass")
    reports = {r[0]: r[2] for r in results if r[1] == "pass"} if keep_reports else {}
    return CorpusSummary(len(instances), passes, failures, degenerate, seed, reports)
