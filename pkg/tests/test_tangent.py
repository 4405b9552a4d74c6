import random

import pytest

from twostep.combinat import dim_forms
from twostep.exactla import Subspace, mul_by_linear
from twostep.fixtures import load_fixture
from twostep.forms import parse_form
from twostep.ideals import (
    GradedIdeal,
    apply_linear_change,
    sample_nested,
    sample_no_syz,
    sample_profile,
    sample_very_few,
    two_step_closure,
)
from twostep.profiles import NestedProfile, TwoStepProfile, expected_tangent_dims
from twostep.tangent import (
    derivation_classes,
    fiber_dim_initial,
    hom_graded,
    nested_hom_graded,
    nested_tangent_report,
    tangent_report,
)

from oracles import hom_dim_oracle


def random_two_step(rng, n, k):
    """Arbitrary 2-step ideal: random degree-k piece plus random extras."""
    r_k, r_k1 = dim_forms(n, k), dim_forms(n, k + 1)
    while True:
        h = rng.randint(1, r_k)
        V = Subspace.from_vectors(r_k, [[rng.randint(-5, 5) for _ in range(r_k)] for _ in range(h)])
        if V.dim:
            break
    W = mul_by_linear(V, n, k)
    extra = rng.randint(0, r_k1 - W.dim)
    if extra:
        W = W.sum(
            Subspace.from_vectors(r_k1, [[rng.randint(-5, 5) for _ in range(r_k1)] for _ in range(extra)])
        )
    return GradedIdeal(n, k, V, W)


def test_hom_graded_vanishes_above_one():
    I = load_fixture("iarrobino78")
    assert hom_graded(I, 2, with_basis=False)[0] == 0
    assert hom_graded(I, 3, with_basis=False)[0] == 0


def test_iarrobino_t1_and_t0():
    I = load_fixture("iarrobino78")
    assert hom_graded(I, 1, with_basis=False)[0] == 55
    assert hom_graded(I, 0, with_basis=False)[0] == 177


def test_fig9_no_syz_sample_dims():
    I = sample_no_syz(TwoStepProfile(4, 2, 2, 15), seed=3)
    assert hom_graded(I, 0, with_basis=False)[0] == 51
    assert hom_graded(I, -1, with_basis=False)[0] == 4


def test_tangent_law_exact_on_arbitrary_ideals():
    rng = random.Random(12)
    for _ in range(12):
        n = rng.randint(2, 4)
        k = rng.randint(1, 3)
        I = random_two_step(rng, n, k)
        d1, _ = hom_graded(I, 1, with_basis=False)
        assert d1 == I.h(k) * I.q(k + 1)


def test_t0_lower_bound():
    rng = random.Random(21)
    for _ in range(6):
        I = random_two_step(rng, rng.randint(2, 3), rng.randint(1, 3))
        p = I.profile()
        d0, _ = hom_graded(I, 0, with_basis=False)
        assert d0 >= expected_tangent_dims(p).t0_lower


def test_oracle_equivalence_small():
    rng = random.Random(7)
    for _ in range(12):
        k = rng.randint(1, 3)
        I = random_two_step(rng, 2, k)
        for t in range(-(k + 2), 2):
            fast = hom_graded(I, t, with_basis=False)[0]
            assert fast == hom_dim_oracle(I, t), (I, t)


def test_hom_graded_basis_vectors_satisfy_constraints():
    from twostep.tangent import _context, _hom_rows

    I = sample_no_syz(TwoStepProfile(3, 2, 2, 9), seed=2)
    dim, basis = hom_graded(I, 0)
    assert dim == len(basis)
    ctx = _context(I)
    rows, ncols, _ = _hom_rows(ctx, 0)
    for v in basis:
        for r in rows:
            assert not sum(a * b for a, b in zip(r, v) if a)


def test_derivations():
    I = sample_no_syz(TwoStepProfile(4, 2, 2, 15), seed=3)
    vecs = derivation_classes(I)  # Leibniz constraint checks run inside
    assert len(vecs) == 4
    rep = tangent_report(I)
    assert rep.derivation_rank == 4 == rep.dims[-1]
    assert rep.tnt


def test_derivation_count_bounded_by_n():
    I = two_step_closure(3, 2, [parse_form("x1^2", 3), parse_form("x2^2", 3)])
    rep = tangent_report(I)
    assert rep.derivation_rank <= 3


def test_tangent_report_iarrobino_not_tnt():
    I = sample_very_few(TwoStepProfile(3, 6, 11, 31), seed=1)
    rep = tangent_report(I)
    assert rep.t1 == 55
    assert rep.t0 == 177
    assert not rep.tnt


def test_tangent_report_thm61_samples():
    I = sample_profile(TwoStepProfile.from_quotient_values(6, (1, 6, 14, 13)), seed=7)
    assert tangent_report(I).tnt


def test_exfinal25_tnt():
    rep = tangent_report(load_fixture("exfinal25"))
    assert rep.tnt
    assert rep.dims[-1] == 6


def test_tnt_invariance_under_basis_change():
    I = sample_no_syz(TwoStepProfile(4, 2, 2, 15), seed=5)
    rng = random.Random(0)
    mixed = []
    for _ in range(I.h(2)):
        v = [0] * dim_forms(4, 2)
        for c, row in zip([rng.randint(1, 3) for _ in range(I.h(2))], I.piece(2).basis):
            v = [x + c * y for x, y in zip(v, row)]
        mixed.append(v)
    J = GradedIdeal(4, 2, Subspace.from_vectors(dim_forms(4, 2), mixed), I.piece(3))
    assert J == I  # canonical representation
    assert tangent_report(J).dims == tangent_report(I).dims


def test_tnt_invariance_under_coordinate_change():
    I = sample_no_syz(TwoStepProfile(4, 2, 2, 15), seed=5)
    J = apply_linear_change(I, [[1, 0, 1, 0], [0, 1, 0, 0], [0, 1, 1, 1], [0, 2, 0, 1]])
    ra, rb = tangent_report(I), tangent_report(J)
    assert ra.dims == rb.dims
    assert ra.tnt == rb.tnt


def test_thm54_nested_tnt():
    N = load_fixture("thm54")
    rep = nested_tangent_report(N)
    assert rep.tnt
    assert rep.dims[-1] == 4 == rep.derivation_rank
    assert rep.t0 == 20  # Gr(2,4) x Gr(2,10)


def test_nested_t1_additive():
    np_ = NestedProfile((TwoStepProfile(3, 2, 0, 6), TwoStepProfile(3, 3, 1, 10)))
    N = sample_nested(np_, seed=5)
    per_level = [fiber_dim_initial(I) for I in N.ideals]
    assert per_level == [0, 5]
    assert nested_hom_graded(N, 1) == sum(per_level) == 5
    assert fiber_dim_initial(N) == 5


def test_fig7_second_configuration():
    np_ = NestedProfile((TwoStepProfile(3, 2, 1, 6), TwoStepProfile(3, 3, 0, 9)))
    assert np_.colengths == (13, 26)
    N = sample_nested(np_, seed=4)
    assert [fiber_dim_initial(I) for I in N.ideals] == [4, 0]
    assert nested_hom_graded(N, 1) == 4


def test_nested_oracle_consistency_small():
    # joint system on a gap >= 2 nesting splits into independent levels
    from twostep.ideals import make_nesting

    I1 = two_step_closure(2, 1, [parse_form("x1", 2)])
    I2 = two_step_closure(2, 3, [parse_form("x1^3 + x2^3", 2)])
    N = make_nesting([I1, I2])
    # non-negative degrees split for order gaps >= 2; negative ones only embed
    for t in (0, 1):
        joint = nested_hom_graded(N, t)
        split = hom_graded(I1, t, with_basis=False)[0] + hom_graded(I2, t, with_basis=False)[0]
        assert joint == split
    for t in (-3, -2, -1):
        joint = nested_hom_graded(N, t)
        split = hom_graded(I1, t, with_basis=False)[0] + hom_graded(I2, t, with_basis=False)[0]
        assert joint <= split


@pytest.mark.slow
def test_fig4a_full_nested_totals():
    pairs = [(14, 28), (11, 26), (9, 25), (8, 22)]
    np_ = NestedProfile(tuple(TwoStepProfile(2, 29 + i, a, b) for i, (a, b) in enumerate(pairs)))
    N = sample_nested(np_, seed=11)
    rep = nested_tangent_report(N)
    assert rep.t1 == 276
    # the source table prints 864 here, but two independent formulations give
    # 852 = stratum bound 1128 minus T^1 276 on every sampled generic nesting
    # (see the decisions ledger)
    assert rep.t0 == 852
    assert rep.t_neg_total == 874
    assert rep.dims[-1] == 874  # all negative tangents live in degree -1
    assert not rep.tnt


@pytest.mark.slow
def test_fig4a_per_level_reports():
    pairs = [(14, 28), (11, 26), (9, 25), (8, 22)]
    expected = [(642, 224, 42), (672, 244, 66), (719, 263, 72), (762, 272, 96)]
    np_ = NestedProfile(tuple(TwoStepProfile(2, 29 + i, a, b) for i, (a, b) in enumerate(pairs)))
    N = sample_nested(np_, seed=11)
    for I, (tneg, t0, t1) in zip(N.ideals, expected):
        rep = tangent_report(I)
        assert (rep.t_neg_total, rep.t0, rep.t1) == (tneg, t0, t1)
