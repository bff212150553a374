import hashlib
import itertools
import json
from importlib import resources

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from convwalk import fourier
from convwalk.classify import default_groups
from convwalk.errors import InputError, TheoremViolation
from convwalk.fourier import (
    Representation,
    adapted_fs_check,
    builtin_irreps,
    characters,
    completeness_defect,
    fs_transform,
    load_representations,
    matrix_coefficient,
    orthogonality_check,
    peter_weyl_check,
    representation_from_dict,
    schur_orthogonality_error,
)
from convwalk.group import build_group, cyclic, dihedral, direct_product, symmetric
from convwalk.measure import Measure, ProbabilityMeasure, convolve, dirac, haar, uniform_on
from convwalk.operator import lambda1, match_multisets, spectrum

GROUPS = [build_group(s) for s in default_groups(24)]


def homomorphisms_to_roots(G):
    """Exhaustive search of maps G -> n-th roots of unity that respect the table."""
    n = G.order
    roots = np.exp(2j * np.pi * np.arange(n) / n)
    found = []
    for assign in itertools.product(range(n), repeat=n):
        if assign[G.identity] != 0:
            continue
        a = np.array(assign)
        if ((a[:, None] + a[None, :]) % n == a[G.mul]).all():
            found.append(roots[a])
    return found


def same_character_sets(A, B):
    A = [np.round(x, 9) for x in A]
    B = [np.round(x, 9) for x in B]
    return len(A) == len(B) and all(any(np.allclose(a, b) for b in B) for a in A)


@st.composite
def probabilities(draw, groups=GROUPS):
    G = draw(st.sampled_from(groups))
    w = np.array(draw(st.lists(st.floats(0, 1), min_size=G.order, max_size=G.order)))
    w[draw(st.integers(0, G.order - 1))] += 0.5
    return ProbabilityMeasure(G, w / w.sum())


# -- characters and builtin representations ---------------------------------------

def test_characters_z2_z4():
    assert same_character_sets([c.character for c in characters(cyclic(2))], [[1, 1], [1, -1]])
    z4 = [[1j ** (k * x) for x in range(4)] for k in range(4)]
    assert same_character_sets([c.character for c in characters(cyclic(4))], z4)


@pytest.mark.parametrize("G", [direct_product(cyclic(2), cyclic(2)), cyclic(6),
                               direct_product(cyclic(2), cyclic(3))], ids=str)
def test_characters_match_exhaustive_search(G):
    got = [c.character for c in characters(G)]
    assert same_character_sets(got, homomorphisms_to_roots(G))
    if G.order == 4:
        assert all(np.allclose(c.imag, 0) for c in got)


def test_characters_of_abelian_cayley_table():
    base = direct_product(cyclic(2), cyclic(4))
    G = build_group({"family": "cayley", "table": base.mul.tolist()})
    chars = characters(G)
    assert len(chars) == 8
    for c in chars:
        c.validate()
    assert same_character_sets([c.character for c in chars], [c.character for c in characters(base)])


def test_characters_reject_nonabelian():
    with pytest.raises(InputError):
        characters(dihedral(3))


@pytest.mark.parametrize("G,dims", [
    (dihedral(3), [1, 1, 2]),
    (dihedral(4), [1, 1, 1, 1, 2]),
    (symmetric(3), [1, 1, 2]),
    (symmetric(4), [1, 1, 2, 3, 3]),
    (cyclic(7), [1] * 7),
], ids=str)
def test_builtin_dims(G, dims):
    reps = builtin_irreps(G)
    assert sorted(r.dim for r in reps) == dims
    assert completeness_defect(G, reps) == 0


@pytest.mark.parametrize("G", GROUPS + [build_group("cyclic:2*symmetric:4")], ids=str)
def test_builtin_irreps_valid_and_complete(G):
    reps = builtin_irreps(G)
    assert completeness_defect(G, reps) == 0
    for r in reps:
        r.validate()
    chars = np.array([r.character for r in reps])
    gram = chars @ np.conj(chars).T / G.order
    assert np.allclose(gram, np.eye(len(reps)), atol=1e-9)


def test_builtin_rejects_nonabelian_cayley():
    G = build_group({"family": "cayley", "table": dihedral(3).mul.tolist()})
    with pytest.raises(InputError):
        builtin_irreps(G)
    with pytest.raises(InputError):
        builtin_irreps(symmetric(5))


def test_s4_table_checksum_matches():
    data = resources.files("convwalk.data").joinpath(fourier.S4_TABLE).read_bytes()
    assert hashlib.sha256(data).hexdigest() == fourier.S4_TABLE_SHA256


def test_s4_table_tamper_detected(monkeypatch):
    monkeypatch.setattr(fourier, "S4_TABLE_SHA256", "0" * 64)
    with pytest.raises(InputError):
        builtin_irreps(symmetric(4))


# -- representation JSON ------------------------------------------------------------

def test_representation_round_trip():
    for rep in builtin_irreps(dihedral(4)):
        back = representation_from_dict(json.loads(json.dumps(rep.to_dict())))
        assert back.dim == rep.dim and back.label == rep.label
        assert np.array_equal(back.matrices, rep.matrices)


def test_load_representations_shapes():
    reps = builtin_irreps(dihedral(3))
    docs = [r.to_dict() for r in reps]
    assert len(load_representations(docs)) == 3
    assert len(load_representations({"representations": docs})) == 3
    assert len(load_representations(docs[0])) == 1


def test_load_rejects_invalid():
    G = cyclic(3)
    good = characters(G)[1].to_dict()
    bad = json.loads(json.dumps(good))
    bad["matrices"][1][0][0] = [2.0, 0.0]
    with pytest.raises(InputError):
        representation_from_dict(bad)
    reducible = Representation(G, 2, np.array([np.eye(2)] * 3), "two copies of trivial")
    with pytest.raises(InputError):
        representation_from_dict(reducible.to_dict())
    with pytest.raises(InputError):
        representation_from_dict({"dim": 1})
    with pytest.raises(InputError):
        Representation(G, 2, np.zeros((3, 1, 1)))


def test_homomorphism_error_sampled_on_large_group():
    rep = characters(cyclic(256))[5]
    assert rep.homomorphism_error() < 1e-10


# -- transforms --------------------------------------------------------------------

@pytest.mark.parametrize("G", [dihedral(5), symmetric(4), cyclic(6)], ids=str)
def test_fs_examples_identity_and_haar(G):
    for rep in builtin_irreps(G):
        assert np.allclose(fs_transform(dirac(G, G.identity), rep).matrix, np.eye(rep.dim))
        if not rep.is_trivial:
            assert np.allclose(fs_transform(haar(G), rep).matrix, 0, atol=1e-12)


def test_fs_z4_values():
    G = cyclic(4)
    mu = uniform_on(G, [1, 3])
    vals = {}
    for rep in characters(G):
        k = int(round(np.angle(rep.matrices[1, 0, 0]) / (np.pi / 2))) % 4
        vals[k] = fs_transform(mu, rep).matrix[0, 0]
    assert np.allclose([vals[k] for k in range(4)], [1, 0, -1, 0])


def test_fs_uses_conjugated_convention():
    G = cyclic(4)
    rep = next(r for r in characters(G) if np.isclose(r.matrices[1, 0, 0], 1j))
    assert fs_transform(dirac(G, 1), rep).matrix[0, 0] == pytest.approx(-1j)


def test_fs_group_mismatch():
    with pytest.raises(InputError):
        fs_transform(haar(cyclic(3)), characters(cyclic(4))[0])


@given(probabilities(), st.data())
def test_fs_homomorphism(mu1, data):
    G = mu1.group
    w = np.array(data.draw(st.lists(st.floats(0, 1), min_size=G.order, max_size=G.order))) + 0.01
    mu2 = ProbabilityMeasure(G, w / w.sum())
    for rep in builtin_irreps(G):
        lhs = fs_transform(convolve(mu1, mu2), rep).matrix
        rhs = fs_transform(mu1, rep).matrix @ fs_transform(mu2, rep).matrix
        assert np.abs(lhs - rhs).max() <= 1e-10


@given(st.data())
def test_fs_nondegenerate(data):
    G = data.draw(st.sampled_from(GROUPS))
    w = np.array(data.draw(st.lists(st.floats(-1, 1), min_size=G.order, max_size=G.order)))
    if not np.any(w):
        w[0] = 1.0
    mu = Measure(G, w)
    assert max(np.abs(fs_transform(mu, r).matrix).max() for r in builtin_irreps(G)) > 0


@given(probabilities())
def test_spectral_inclusion(mu):
    full = spectrum(lambda1(mu)).eigenvalues
    for rep in builtin_irreps(mu.group):
        for z in fs_transform(mu, rep).eigenvalues():
            assert np.abs(full - z).min() <= 1e-7


def test_peter_weyl_abelian_equals_character_values():
    G = direct_product(cyclic(3), cyclic(4))
    mu = ProbabilityMeasure(G, np.random.default_rng(2).dirichlet(np.ones(12)))
    vals = [fs_transform(mu, c).matrix[0, 0] for c in characters(G)]
    assert match_multisets(spectrum(lambda1(mu)).eigenvalues, vals) <= 1e-9
    assert peter_weyl_check(G, characters(G), mu).passed


def test_peter_weyl_haar_blocks():
    G = symmetric(4)
    reps = builtin_irreps(G)
    report = peter_weyl_check(G, reps, haar(G))
    for rep in reps:
        ev = report.block_eigenvalues[rep.label]
        target = [1] if rep.is_trivial else [0] * rep.dim
        assert np.allclose(ev, target, atol=1e-12)


def test_peter_weyl_dihedral3_generators():
    G = dihedral(3)
    mu = uniform_on(G, [1, 3])
    assert peter_weyl_check(G, builtin_irreps(G), mu).max_distance <= 1e-8


def test_peter_weyl_errors():
    G = dihedral(3)
    reps = builtin_irreps(G)
    with pytest.raises(InputError):
        peter_weyl_check(G, reps[:-1], haar(G))
    ones = [r for r in reps if r.dim == 1]
    diag = np.zeros((G.order, 2, 2), dtype=complex)
    diag[:, 0, 0] = ones[0].matrices[:, 0, 0]
    diag[:, 1, 1] = ones[1].matrices[:, 0, 0]
    fake = Representation(G, 2, diag, "reducible")
    with pytest.raises(TheoremViolation):
        peter_weyl_check(G, ones + [fake], uniform_on(G, [0, 1]))


@given(probabilities())
def test_peter_weyl_on_random_measures(mu):
    assert peter_weyl_check(mu.group, builtin_irreps(mu.group), mu).passed


# -- matrix coefficients -------------------------------------------------------------

def test_matrix_coefficient_trivial_rep_is_haar():
    G = dihedral(4)
    triv = next(r for r in builtin_irreps(G) if r.is_trivial)
    assert np.allclose(matrix_coefficient(triv, [1]).weights, haar(G).weights)


def test_matrix_coefficient_z4():
    G = cyclic(4)
    chi1 = next(r for r in characters(G) if np.isclose(r.matrices[1, 0, 0], 1j))
    f = matrix_coefficient(chi1, [1])
    assert np.allclose(f.weights, [0.25 * 1j**x for x in range(4)])
    assert np.allclose(fs_transform(f, chi1).matrix @ [1], [1])


def test_matrix_coefficient_dihedral3():
    G = dihedral(3)
    pi = next(r for r in builtin_irreps(G) if r.dim == 2)
    f = matrix_coefficient(pi, [1, 0])
    assert np.abs(fs_transform(f, pi).matrix @ [1, 0] - [1, 0]).max() <= 1e-10


@given(st.data())
def test_matrix_coefficient_fixed_point_complex_xi(data):
    G = data.draw(st.sampled_from([dihedral(4), symmetric(4), dihedral(5)]))
    pi = data.draw(st.sampled_from([r for r in builtin_irreps(G) if r.dim > 1]))
    parts = data.draw(st.lists(st.floats(-1, 1), min_size=2 * pi.dim, max_size=2 * pi.dim))
    xi = np.array(parts[::2]) + 1j * np.array(parts[1::2])
    if np.linalg.norm(xi) < 1e-3:
        xi = np.eye(pi.dim)[0] * 1j
    xi = xi / np.linalg.norm(xi)
    f = matrix_coefficient(pi, xi)
    assert np.abs(fs_transform(f, pi).matrix @ xi - xi).max() <= 1e-10


def test_matrix_coefficient_rejects_non_unit():
    pi = builtin_irreps(dihedral(3))[-1]
    with pytest.raises(InputError):
        matrix_coefficient(pi, [1, 1])
    with pytest.raises(InputError):
        matrix_coefficient(pi, [1])


# -- adaptedness -----------------------------------------------------------------------

def test_adapted_examples():
    G3 = cyclic(3)
    mu = uniform_on(G3, [0, 1])
    r = adapted_fs_check(mu, characters(G3))
    assert r.passed and not r.skipped and r.trivial_value == pytest.approx(1)
    for c in characters(G3):
        if not c.is_trivial:
            assert abs(fs_transform(mu, c).matrix[0, 0]) == pytest.approx(0.5)
    G4 = cyclic(4)
    r = adapted_fs_check(uniform_on(G4, [1, 3]), characters(G4))
    assert r.passed and r.min_distance_nontrivial == pytest.approx(1)
    r = adapted_fs_check(dirac(G4, 2), characters(G4))
    assert r.skipped and not r.passed and len(r.witnesses) == 1
    chi2 = next(c for c in characters(G4) if c.label in r.witnesses)
    assert fs_transform(dirac(G4, 2), chi2).matrix[0, 0] == pytest.approx(1)


@given(probabilities())
def test_adapted_check_on_random_measures(mu):
    r = adapted_fs_check(mu, builtin_irreps(mu.group))
    if not r.skipped:
        assert r.passed


# -- orthogonality -----------------------------------------------------------------------

def squared_modulus_table(pi):
    P = pi.matrices
    return (np.abs(P) ** 2).mean(axis=0)


@pytest.mark.parametrize("G", [dihedral(3), dihedral(5)], ids=str)
def test_orthogonality_pattern_literal(G):
    """Literal reading: mean |<pi(t) e_i, e_j>|^2 is 1/d on the diagonal and 0 off it."""
    for pi in (r for r in builtin_irreps(G) if r.dim == 2):
        target = np.eye(pi.dim) / pi.dim
        assert np.abs(squared_modulus_table(pi) - target).max() <= 1e-10


def test_orthogonality_characters_exact():
    for c in characters(cyclic(6)):
        assert squared_modulus_table(c)[0, 0] == pytest.approx(1, abs=1e-15)
        assert orthogonality_check(c) <= 1e-12


@pytest.mark.parametrize("G", [dihedral(3), dihedral(5), dihedral(6), symmetric(4)], ids=str)
def test_schur_orthogonality(G):
    for pi in builtin_irreps(G):
        assert orthogonality_check(pi) <= 1e-10
        assert schur_orthogonality_error(pi) == orthogonality_check(pi)
        assert np.allclose(squared_modulus_table(pi), 1 / pi.dim, atol=1e-10)
