import itertools
from math import comb, sqrt

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bosonproj.fock import (
    ALL_LABELS,
    DegenerateTruncationError,
    OperatorMatrix,
    build_generators,
    closure_check,
    commutator,
    enumerate_basis,
    expansion_basis,
    hamiltonian_ladder_check,
    hamiltonian_spectrum,
    interior_project,
    ladder,
    quanta_shift,
)

PAULI = [np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.array([[1, 0], [0, -1]])]


@pytest.fixture(scope="module")
def gens6():
    return build_generators(enumerate_basis(6), omega=1.0)


# -- brute-force second-quantisation oracle: states are {occupation: amplitude} dicts --

def lower(state, k):
    out = {}
    for occ, amp in state.items():
        if occ[k] > 0:
            new = occ[:k] + (occ[k] - 1,) + occ[k + 1:]
            out[new] = out.get(new, 0) + amp * sqrt(occ[k])
    return out


def raise_(state, k):
    out = {}
    for occ, amp in state.items():
        new = occ[:k] + (occ[k] + 1,) + occ[k + 1:]
        out[new] = out.get(new, 0) + amp * sqrt(occ[k] + 1)
    return out


def add(*states):
    out = {}
    for coef, st_ in states:
        for occ, amp in st_.items():
            out[occ] = out.get(occ, 0) + coef * amp
    return out


def oracle_apply(label, state):
    """Operators from their second-quantised definitions; undotted 0,1 and dotted 2,3."""
    kind, _, lam = label.partition("_")
    if kind == "H":
        return add((2, state), *[(1, raise_(lower(state, k), k)) for k in range(4)])
    if kind == "P":
        return add((1, lower(lower(state, 2), 0)), (1, lower(lower(state, 3), 1)))
    if kind == "P+":
        return add((1, raise_(raise_(state, 2), 0)), (1, raise_(raise_(state, 3), 1)))
    sig = PAULI[int(lam) - 1]
    terms = []
    for a in range(2):
        for b in range(2):
            if kind == "M":
                terms.append((sig[a, b], lower(lower(state, 2 + a), b)))
            elif kind == "M+":
                terms.append((np.conj(sig[a, b]), raise_(raise_(state, b), 2 + a)))
            elif kind == "Na":
                terms.append((sig[a, b], raise_(lower(state, b), a)))
            elif kind == "Nb":
                terms.append((sig[a, b], raise_(lower(state, 2 + a), 2 + b)))
    return add(*terms)


def test_basis_small_dims():
    assert enumerate_basis(0).dim == 1
    assert enumerate_basis(1).dim == 5


def test_basis_brute_force_n2():
    space = enumerate_basis(2)
    brute = {n for n in itertools.product(range(3), repeat=4) if sum(n) <= 2}
    assert space.dim == 15 == len(brute)
    assert set(space.basis) == brute


@pytest.mark.parametrize("n_max", range(0, 7))
def test_basis_invariants(n_max):
    space = enumerate_basis(n_max)
    assert space.dim == comb(n_max + 4, 4)
    assert len(set(space.basis)) == space.dim
    keys = [(sum(n), n) for n in space.basis]
    assert keys == sorted(keys)
    assert all(space.index[n] == i for i, n in enumerate(space.basis))


def test_basis_limit():
    with pytest.raises(ValueError):
        enumerate_basis(13)
    with pytest.raises(ValueError):
        enumerate_basis(-1)


def test_ladder_examples():
    space = enumerate_basis(3)
    a1 = ladder(space, 1, "lower")
    out = a1.apply(space.state((1, 0, 0, 0)))
    np.testing.assert_array_equal(out, space.state((0, 0, 0, 0)))
    ad2 = ladder(space, 2, "raise")
    out = ad2.apply(space.state((0, 1, 0, 0)))
    np.testing.assert_allclose(out, sqrt(2) * space.state((0, 2, 0, 0)))
    a3 = ladder(space, 3, "lower")
    assert not np.any(a3.apply(space.state((0, 0, 0, 0))))


def test_ladder_drops_transitions_out_of_space():
    space = enumerate_basis(2)
    ad = ladder(space, 1, "raise")
    top = [i for i, n in enumerate(space.basis) if sum(n) == 2]
    assert not np.any(ad.entries[:, top])


def test_ladder_bad_args():
    space = enumerate_basis(1)
    with pytest.raises(ValueError):
        ladder(space, 5, "lower")
    with pytest.raises(ValueError):
        ladder(space, 1, "up")


def test_generator_count(gens6):
    assert gens6.labels == ALL_LABELS
    assert len(gens6.all()) == 15


@pytest.mark.parametrize("label", ALL_LABELS)
def test_generators_match_oracle_in_interior(gens6, label):
    space = gens6.space
    op = gens6[label]
    for col, occ in enumerate(space.basis):
        if sum(occ) > space.n_max - 2:
            continue
        want = oracle_apply(label, {occ: 1.0})
        got = op.entries[:, col]
        expected = np.zeros(space.dim, dtype=complex)
        for o, amp in want.items():
            expected[space.index[o]] += amp
        np.testing.assert_allclose(got, expected, atol=1e-13, err_msg=f"{label} on {occ}")


def test_generator_examples(gens6):
    space = gens6.space
    vac = space.state((0, 0, 0, 0))
    np.testing.assert_allclose(gens6["H"].apply(vac), 2 * vac)
    s = space.state((1, 0, 0, 0))
    np.testing.assert_allclose(gens6["Na_3"].apply(s), s)
    np.testing.assert_allclose(gens6["P"].apply(space.state((1, 0, 1, 0))), vac)


def test_hamiltonian_hermitian_and_spectrum(gens6):
    h = gens6.hamiltonian.entries
    assert np.array_equal(h, h.conj().T)
    levels = hamiltonian_spectrum(gens6)
    assert levels == {2.0 + k: comb(k + 3, 3) for k in range(7)}


@pytest.mark.parametrize("lam", [1, 2, 3])
def test_m_plus_is_adjoint_of_m(gens6, lam):
    space = gens6.space
    m = interior_project(space, gens6[f"M_{lam}"], 2)
    mp = interior_project(space, gens6[f"M+_{lam}"], 2)
    assert np.linalg.norm(mp.entries - m.entries.conj().T) <= 1e-12


def test_number_grading(gens6):
    expected = {"M": -2, "M+": 2, "Na": 0, "Nb": 0, "P": -2, "P+": 2, "H": 0}
    for g in gens6.all():
        assert quanta_shift(gens6.space, g) == {expected[g.label.split("_")[0]]}, g.label


def test_commutator_examples():
    space = enumerate_basis(4)
    a1, ad1 = ladder(space, 1, "lower"), ladder(space, 1, "raise")
    ad2 = ladder(space, 2, "raise")
    assert not np.any(commutator(a1, a1).entries)
    c = interior_project(space, commutator(a1, ad1), 1).entries
    keep = space.interior_mask(1)
    np.testing.assert_allclose(c, np.diag(keep.astype(float)), atol=1e-14)
    assert np.linalg.norm(interior_project(space, commutator(a1, ad2), 1).entries) <= 1e-14


def test_commutator_dim_mismatch():
    a = OperatorMatrix("A", np.eye(2))
    b = OperatorMatrix("B", np.eye(3))
    with pytest.raises(ValueError, match="incompatible"):
        commutator(a, b)


def test_operator_matrix_rejects_nonfinite():
    with pytest.raises(ValueError):
        OperatorMatrix("bad", np.array([[np.nan]]))


def test_operator_matrix_is_immutable():
    op = OperatorMatrix("A", np.eye(2))
    with pytest.raises(ValueError):
        op.entries[0, 0] = 2


def test_interior_project_examples():
    space = enumerate_basis(3)
    a = OperatorMatrix("X", np.arange(space.dim**2, dtype=float).reshape(space.dim, space.dim))
    assert np.array_equal(interior_project(space, a, 0).entries, a.entries)
    a = OperatorMatrix("X", a.entries + 1.0)
    only_vac = interior_project(space, a, 3).entries
    assert only_vac[0, 0] == a.entries[0, 0]
    assert np.count_nonzero(only_vac) == 1

    s1 = enumerate_basis(1)
    ident = OperatorMatrix("I", np.eye(s1.dim))
    assert np.linalg.matrix_rank(ident.entries) == 5
    assert np.linalg.matrix_rank(interior_project(s1, ident, 1).entries) == 1


def test_interior_project_margin_bounds():
    space = enumerate_basis(2)
    with pytest.raises(ValueError):
        interior_project(space, OperatorMatrix("I", np.eye(space.dim)), 3)


@pytest.mark.parametrize("n_max", [4, 6, 8])
def test_canonical_commutators(n_max):
    space = enumerate_basis(n_max)
    lo = [ladder(space, i, "lower") for i in range(1, 5)]
    up = [ladder(space, i, "raise") for i in range(1, 5)]
    keep = np.diag(space.interior_mask(1).astype(float))
    for i in range(4):
        for j in range(4):
            c = interior_project(space, commutator(lo[i], up[j]), 1).entries
            assert np.linalg.norm(c - (i == j) * keep) <= 1e-12


def test_linear_independence(gens6):
    sv = np.linalg.svd(expansion_basis(gens6, 2), compute_uv=False)
    assert sv[-1] > 1e-8
    assert len(sv) == 16


def test_closure_su2_example(gens6):
    reports = {r.pair: r for r in closure_check(gens6, 2)}
    labels = list(gens6.labels) + ["I"]
    # [Na_1, Na_3] = -2i Na_2, so [Na_3, Na_1] = 2i Na_2
    rep = reports[("Na_1", "Na_3")]
    want = np.zeros(16, dtype=complex)
    want[labels.index("Na_2")] = -2j
    np.testing.assert_allclose(rep.coefficients, want, atol=1e-10)
    assert rep.residual <= 1e-10


def test_closure_p_pplus_contains_h(gens6):
    reports = {r.pair: r for r in closure_check(gens6, 2)}
    rep = reports[("P", "P+")]
    labels = list(gens6.labels) + ["I"]
    assert abs(rep.coefficients[labels.index("H")]) > 0.5
    assert rep.residual <= 1e-10


def test_closure_requires_nmax_4():
    gens = build_generators(enumerate_basis(3))
    with pytest.raises(DegenerateTruncationError):
        closure_check(gens, 2)


def test_closure_margin_precondition(gens6):
    with pytest.raises(ValueError):
        closure_check(gens6, 1)
    with pytest.raises(ValueError):
        hamiltonian_ladder_check(gens6, 1)


def test_ladder_check_values(gens6):
    rows = {r.label: r for r in hamiltonian_ladder_check(gens6, 2)}
    for lam in (1, 2, 3):
        assert abs(rows[f"Na_{lam}"].c) <= 1e-12 and rows[f"Na_{lam}"].residual <= 1e-12
        assert abs(rows[f"M_{lam}"].c + 2) <= 1e-12 and rows[f"M_{lam}"].residual <= 1e-12
        assert abs(rows[f"M+_{lam}"].c - 2) <= 1e-12
    assert abs(rows["P+"].c - 2) <= 1e-12 and rows["P+"].residual <= 1e-12
    assert abs(rows["P"].c + 2) <= 1e-12


def test_report_dicts(gens6):
    rep = closure_check(gens6, 2)[0]
    d = rep.to_dict()
    assert set(d) == {"pair", "coefficients", "residual"}
    assert len(d["coefficients"]) == 16 and all(len(c) == 2 for c in d["coefficients"])


@pytest.fixture(scope="module")
def ladders8():
    space = enumerate_basis(8)
    return space, [(ladder(space, k, "lower"), ladder(space, k, "raise")) for k in range(1, 5)]


@settings(max_examples=40, deadline=None)
@given(st.tuples(*[st.integers(0, 2)] * 4))
def test_number_operator_counts_quanta(ladders8, occ):
    space, ops = ladders8
    vec = space.state(occ)
    for k, (a, ad) in enumerate(ops):
        np.testing.assert_allclose(ad.apply(a.apply(vec)), occ[k] * vec)
