import random
from fractions import Fraction

from twostep.combinat import dim_forms, macaulay_growth
from twostep.exactla import Mat, det_bareiss, solve_exact
from twostep.landscape import (
    continuant_det,
    critical_point,
    delta,
    delta_gradient_at_zero,
    hessian,
    leading_minors,
    potential_tnt_area,
    theta,
    tnt_b_bound,
)
from twostep.profiles import NestedProfile, TwoStepProfile, stratum_dim_bound

# closed-form maxima of the excess form for n=2, r=1..8
MAXIMA = [
    lambda k: Fraction(-2 * k * k - 6 * k + 9, 3),
    lambda k: Fraction(-2 * k * k - 15 * k + 5, 5),
    lambda k: Fraction(-k * k - 23 * k - 15, 7),
    lambda k: Fraction(k * k - 27 * k - 45, 9),
    lambda k: Fraction(4 * k * k - 24 * k - 74, 11),
    lambda k: Fraction(8 * k * k - 11 * k - 86, 13),
    lambda k: Fraction(13 * k * k + 15 * k - 60, 15),
    lambda k: Fraction(19 * k * k + 57 * k + 30, 17),
]


def test_delta_values():
    assert delta(4, 1, 2, (2, 15)) == -7
    assert delta(3, 1, 6, (11, 31)) == 1
    pt = tuple(Fraction(c, 9) for c in (116, 241, 87, 221, 67, 210, 56, 190))
    assert delta(2, 4, 29, pt) == Fraction(13, 9)


def test_theta_values():
    assert theta(4, 2, 0, 2, 15) == -5
    # plugging zeros isolates the constant term of the quadratic form
    for n, k, b in [(3, 2, 0), (4, 3, 2), (2, 5, 0)]:
        r_k1 = dim_forms(n, k + 1)
        r_k2 = dim_forms(n, k + 2)
        assert theta(n, k, b, 0, 0) == (r_k2 - b) * r_k1 - n


def test_theta_expansion_identity():
    # the defining bound expression equals the expanded quadratic form
    rng = random.Random(0)
    for _ in range(25):
        n = rng.randint(2, 6)
        k = rng.randint(1, 5)
        b = rng.randint(0, 4)
        h, h1 = rng.randint(0, 30), rng.randint(0, 40)
        r = [dim_forms(n, k + i) for i in (-1, 0, 1, 2)]
        c2 = n * (n - 1) // 2
        expanded = (
            n * h * h
            - (c2 + 1) * h * h1
            + n * h1 * h1
            + (r[0] - n * r[1] + c2 * r[2]) * h
            + (r[1] - n * r[2] - r[3] + b) * h1
            + r[2] * (r[3] - b)
            - n
        )
        assert theta(n, k, b, h, h1) == expanded


def test_theta_min_closed_form_n3():
    # minimize over the rational plane and compare with the quartic closed form
    for k in (2, 5, 9):
        for b in (0, 1, 4):
            H = Mat([[6, -4], [-4, 6]])
            t0 = theta(3, k, b, 0, 0)
            gx = theta(3, k, b, 1, 0) - t0 - 3
            gy = theta(3, k, b, 0, 1) - t0 - 3
            x = solve_exact(H, [-gx, -gy])
            got = theta(3, k, b, x[0], x[1])
            want = Fraction(
                k**4 + 8 * k**3 + (21 - 6 * b) * k**2 + (20 - 14 * b) * k - 6 * b * b - 120,
                40,
            )
            assert got == want


def test_hessian_structure():
    assert [list(map(int, r)) for r in hessian(3, 1).rows] == [[-2, 2], [2, -2]]
    H22 = hessian(2, 2)
    for i in range(4):
        for j in range(4):
            expect = -2 if i == j else (1 if abs(i - j) == 1 else 0)
            assert H22.rows[i][j] == expect
    for n in range(2, 7):
        for r in range(1, 9):
            H = hessian(n, r)
            assert H.rows == H.transpose().rows


def test_hessian_from_finite_differences():
    # delta is quadratic: exact unit second differences recover the Hessian
    for n, r, k in [(2, 2, 3), (3, 1, 6), (4, 2, 2), (5, 3, 1)]:
        H = hessian(n, r)
        m = 2 * r
        zero = [0] * m
        f0 = delta(n, r, k, zero)
        for i in range(m):
            ei = zero.copy()
            ei[i] = 1
            e2 = zero.copy()
            e2[i] = 2
            assert delta(n, r, k, e2) - 2 * delta(n, r, k, ei) + f0 == H.rows[i][i]
            for j in range(i + 1, m):
                ej = zero.copy()
                ej[j] = 1
                eij = zero.copy()
                eij[i] = eij[j] = 1
                cross = delta(n, r, k, eij) - delta(n, r, k, ei) - delta(n, r, k, ej) + f0
                assert cross == H.rows[i][j]


def test_continuant():
    assert continuant_det(3, 1) == 0
    assert continuant_det(2, 1) == 3
    for n in range(2, 7):
        for r in range(1, 9):
            H = [[int(x) for x in row] for row in hessian(n, r).rows]
            assert continuant_det(n, r) == det_bareiss(H)
            assert (continuant_det(n, r) == 0) == (n == 3 and r == 1)


def test_leading_minors_are_top_left_determinants():
    for n, r in [(2, 2), (4, 2), (6, 3)]:
        H = [[int(x) for x in row] for row in hessian(n, r).rows]
        fs = leading_minors(n, r)
        for i in range(1, 2 * r + 1):
            sub = [row[:i] for row in H[:i]]
            assert fs[i - 1] == det_bareiss(sub)


def test_critical_points_paper():
    cp = critical_point(2, 4, 29)
    assert cp.value == Fraction(13, 9)
    assert cp.point == tuple(Fraction(c, 9) for c in (116, 241, 87, 221, 67, 210, 56, 190))
    assert cp.nature == "max"
    cp = critical_point(2, 5, 9)
    assert cp.value == Fraction(34, 11)
    assert cp.point == tuple(Fraction(c, 11) for c in (41, 93, 24, 87, 18, 92, 23, 108, 39, 113))
    assert cp.nature == "max"


def test_critical_point_closed_forms():
    for r in range(1, 9):
        for k in (1, 3, 9, 29):
            cp = critical_point(2, r, k)
            assert cp.value == MAXIMA[r - 1](k)
            assert cp.nature == "max"


def test_critical_point_degenerate_and_saddle():
    assert critical_point(3, 1, 4).nature == "degenerate"
    assert critical_point(3, 1, 4).point is None
    assert critical_point(4, 1, 2).nature == "saddle"
    assert critical_point(3, 2, 2).nature == "saddle"


def test_gradient_vanishes_at_critical_point():
    for n, r, k in [(2, 3, 5), (4, 1, 3), (5, 2, 2), (6, 4, 1)]:
        cp = critical_point(n, r, k)
        H = hessian(n, r)
        g = delta_gradient_at_zero(n, r, k)
        for i in range(2 * r):
            assert sum(H.rows[i][j] * cp.point[j] for j in range(2 * r)) + g[i] == 0


def test_potential_tnt_area_empty():
    for k in range(2, 11):
        assert potential_tnt_area(2, k) == []
    for k in range(2, 7):
        assert potential_tnt_area(3, k) == []


def test_potential_tnt_area_n3_k1_contains_its_witnesses():
    # the area definition admits these small pairs; see the decisions ledger
    area = potential_tnt_area(3, 1)
    assert theta(3, 1, 0, 1, 5) == 0
    assert theta(3, 1, 0, 2, 5) == -1
    assert (1, 5) in area and (2, 5) in area


def test_potential_tnt_area_n4():
    area = potential_tnt_area(4, 2)
    assert (2, 15) in area
    assert (7, 20) in area  # the very compressed (1,4,3) profile
    macaulay_ok = all(
        macaulay_growth(4, 2, h) <= h1 <= dim_forms(4, 3) for h, h1 in area
    )
    assert macaulay_ok
    assert area == sorted(area)
    assert potential_tnt_area(4, 2, threads=3) == area


def test_area_monotone_in_b():
    # enlarging the b-range never removes points
    for h, h1 in potential_tnt_area(4, 2):
        b = tnt_b_bound(4, 2, h, h1)
        assert theta(4, 2, b, h, h1) <= 0
        assert theta(4, 2, b + 3, h, h1) <= theta(4, 2, b, h, h1)


def test_delta_equals_bound_identity():
    rng = random.Random(3)
    done = 0
    while done < 30:
        n = rng.randint(2, 5)
        k = rng.randint(1, 4)
        h = rng.randint(0, dim_forms(n, k))
        h1 = rng.randint(macaulay_growth(n, k, h), dim_forms(n, k + 1))
        try:
            p = TwoStepProfile(n, k, h, h1)
            bound = stratum_dim_bound(NestedProfile((p,)))
        except ValueError:
            continue
        assert delta(n, 1, k, (h, h1)) == bound + n - n * p.colength
        done += 1
