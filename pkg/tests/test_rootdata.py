from fractions import Fraction
from itertools import product

import pytest

from poincare_ob import lattice as lt
from poincare_ob.rootdata import (
    RootDataError,
    SimpleType,
    adjoint,
    build_root_system,
    cartan_matrix,
    direct_sum,
    general_linear,
    intermediate,
    is_minuscule,
    isogeny_data,
    minuscule_lift,
    reduce_type,
    simple_types_up_to,
    simply_connected,
    torus,
)

ALL_TYPES = simple_types_up_to(8)

# number of positive roots, from dim G = rank + 2 |Phi+|
DIMS = {"A": lambda l: l * (l + 2), "B": lambda l: l * (2 * l + 1), "C": lambda l: l * (2 * l + 1),
        "D": lambda l: l * (2 * l - 1)}
EXCEPTIONAL_DIMS = {"E6": 78, "E7": 133, "E8": 248, "F4": 52, "G2": 14}


def expected_positive(t):
    dim = EXCEPTIONAL_DIMS.get(str(t)) or DIMS[t.family](t.rank)
    return (dim - t.rank) // 2


def weyl_orbit_roots(cartan):
    """All roots as the W-orbit of the simple roots (simple-root coordinates)."""
    l = len(cartan)
    simple = [tuple(int(i == j) for j in range(l)) for i in range(l)]
    seen, frontier = set(simple), list(simple)
    while frontier:
        beta = frontier.pop()
        for i in range(l):
            c = sum(beta[j] * cartan[j][i] for j in range(l))
            img = tuple(beta[j] - (c if j == i else 0) for j in range(l))
            if img not in seen:
                seen.add(img)
                frontier.append(img)
    return seen


class TestTypes:
    def test_c2_rejected(self):
        with pytest.raises(RootDataError, match="B2"):
            SimpleType.parse("C2")

    @pytest.mark.parametrize("bad", ["A0", "B1", "D3", "E5", "E9", "F3", "G3", "H3"])
    def test_illegal(self, bad):
        with pytest.raises(RootDataError):
            SimpleType.parse(bad)

    def test_catalogue_order(self):
        names = [str(t) for t in simple_types_up_to(2)]
        assert names == ["A1", "A2", "B2", "G2"]

    def test_g2_short_first(self):
        # alpha_1 short: <alpha_2, alpha_1^vee> = -3
        assert cartan_matrix(SimpleType("G", 2)) == ((2, -1), (-3, 2))

    def test_b_c_transpose(self):
        for l in range(3, 8):
            b, c = cartan_matrix(SimpleType("B", l)), cartan_matrix(SimpleType("C", l))
            assert lt.transpose(b) == c


class TestRoots:
    @pytest.mark.parametrize("t", ALL_TYPES, ids=str)
    def test_counts(self, t):
        assert len(build_root_system([t]).positive_roots) == expected_positive(t)

    @pytest.mark.parametrize("t", ALL_TYPES, ids=str)
    def test_against_weyl_orbit(self, t):
        rs = build_root_system([t])
        orbit = weyl_orbit_roots(rs.cartan)
        positive = {r for r in orbit if all(x >= 0 for x in r)}
        assert positive == set(rs.positive_roots)
        assert len(orbit) == 2 * len(positive)

    @pytest.mark.parametrize("t", simple_types_up_to(5), ids=str)
    def test_closed_under_sums(self, t):
        rs = build_root_system([t])
        roots = set(rs.positive_roots)
        orbit = weyl_orbit_roots(rs.cartan)
        for b in roots:
            for c in roots:
                s = tuple(x + y for x, y in zip(b, c))
                if s in orbit:
                    assert s in roots

    @pytest.mark.parametrize("t, theta", [
        ("A2", (1, 1)), ("G2", (3, 2)), ("B3", (1, 2, 2)), ("C3", (2, 2, 1)),
        ("D4", (1, 2, 1, 1)), ("F4", (2, 3, 4, 2)), ("E8", (2, 3, 4, 6, 5, 4, 3, 2)),
    ])
    def test_highest(self, t, theta):
        assert build_root_system([t]).highest_roots == (theta,)

    def test_products(self):
        rs = build_root_system(["A1", "G2"])
        assert rs.rank == 3 and len(rs.positive_roots) == 7

    @pytest.mark.parametrize("t", ALL_TYPES, ids=str)
    def test_pi1_order_is_det(self, t):
        rs = build_root_system([t])
        assert lt.cokernel(rs.cartan).order == abs(lt.det(rs.cartan))


class TestIsogeny:
    def test_sl3(self):
        iso = isogeny_data(simply_connected("A2"))
        assert iso.pi1_G.is_trivial
        assert iso.pi1_Gprime.group.is_trivial and iso.pi1_Gbar.group.is_trivial
        assert iso.pi1_Gad.invariant_factors == (3,)
        assert iso.center_chars.invariant_factors == (3,)
        assert not iso.center_is_torus and iso.torsion_exponent == 3

    def test_gl2(self):
        iso = isogeny_data(general_linear(2))
        assert iso.pi1_G.structure == (1, ())
        assert iso.pi1_Gprime.group.is_trivial
        assert iso.pi1_Gbar.group.invariant_factors == (2,)
        assert iso.pi1_Gad.invariant_factors == (2,)
        assert iso.center_chars.structure == (1, ())
        assert iso.center_is_torus and iso.torsion_exponent == 1

    def test_ad_f4(self):
        iso = isogeny_data(adjoint("F4"))
        assert iso.pi1_G.is_trivial and iso.pi1_Gad.is_trivial
        assert iso.center_chars.is_trivial and iso.torsion_exponent == 1

    def test_torus(self):
        iso = isogeny_data(torus(2))
        assert iso.pi1_G.structure == (2, ())
        assert iso.pi1_Gad.is_trivial and iso.center_is_torus

    @pytest.mark.parametrize("t", ALL_TYPES, ids=str)
    def test_sc_and_ad(self, t):
        sc, ad = isogeny_data(simply_connected(t)), isogeny_data(adjoint(t))
        assert sc.pi1_G.is_trivial
        assert ad.center_chars.is_trivial
        assert ad.pi1_G.invariant_factors == ad.pi1_Gad.invariant_factors
        # center of SC(X) is dual to pi_1 of AD(X)
        assert sc.center_chars.invariant_factors == ad.pi1_Gad.invariant_factors

    def test_gprime_in_gbar(self):
        for d in [general_linear(4), intermediate("A3", [(2,)]), simply_connected("D4"),
                  direct_sum([general_linear(2), adjoint("A1")])]:
            iso = isogeny_data(d)
            for g in iso.pi1_Gprime.gens:
                assert g in iso.pi1_Gbar

    def test_intermediate_a3(self):
        iso = isogeny_data(intermediate("A3", [(2,)]))
        assert iso.pi1_G.invariant_factors == (2,)
        assert iso.center_chars.invariant_factors == (2,)

    def test_intermediate_d4(self):
        d = intermediate("D4", [(1, 0)])
        iso = isogeny_data(d)
        assert iso.pi1_G.invariant_factors == (2,)
        assert iso.center_chars.invariant_factors == (2,)

    def test_intermediate_bad_generator(self):
        with pytest.raises(RootDataError):
            intermediate("D4", [(1,)])

    def test_gl3_center(self):
        iso = isogeny_data(general_linear(3))
        assert iso.pi1_G.structure == (1, ())
        assert iso.pi1_Gbar.group.invariant_factors == (3,)


class TestReduceType:
    def test_gl2(self):
        tc = reduce_type(general_linear(2), (1, 0))
        assert tc.d == (1,) and tc.d_bar == (1,)

    @pytest.mark.parametrize("d", [general_linear(3), adjoint("B3"), intermediate("A5", [(3,)])])
    def test_coroot_is_zero(self, d):
        for c in lt.columns(d.simple_coroots, d.root_system.rank):
            tc = reduce_type(d, c)
            assert not any(tc.d) and not any(tc.d_bar)

    def test_pgl3_coweight(self):
        assert reduce_type(adjoint("A2"), (1, 0)).d == (1,)

    def test_dimension_mismatch(self):
        with pytest.raises(RootDataError):
            reduce_type(general_linear(3), (1, 0))


def brute_minuscule(rs, pi1, d):
    return [c for c in product((0, 1), repeat=rs.rank) if pi1.coordinates(c) == d and is_minuscule(rs, c)]


class TestMinuscule:
    def test_a2(self):
        rs = build_root_system(["A2"])
        assert minuscule_lift(rs, (1,)) == (1, 0)

    def test_a1(self):
        rs = build_root_system(["A1"])
        assert minuscule_lift(rs, (1,)) == (1,)
        # omega^vee = alpha^vee / 2 in coroot coordinates
        assert rs.cartan_inverse == ((Fraction(1, 2),),)

    def test_d4_distinct(self):
        rs = build_root_system(["D4"])
        pi1 = lt.cokernel(rs.cartan)
        lifts = {minuscule_lift(rs, d, pi1) for d in pi1.elements() if any(d)}
        assert lifts == {(1, 0, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)}

    def test_zero_rejected(self):
        with pytest.raises(RootDataError):
            minuscule_lift(build_root_system(["A3"]), (0,))

    @pytest.mark.parametrize("t", ALL_TYPES, ids=str)
    def test_unique(self, t):
        rs = build_root_system([t])
        pi1 = lt.cokernel(rs.cartan)
        for d in pi1.elements():
            if any(d):
                assert brute_minuscule(rs, pi1, d) == [minuscule_lift(rs, d, pi1)]

    def test_product(self):
        rs = build_root_system(["A1", "A2"])
        pi1 = lt.cokernel(rs.cartan)
        for d in pi1.elements():
            if any(d):
                lift = minuscule_lift(rs, d, pi1)
                assert pi1.coordinates(lift) == d and is_minuscule(rs, lift)
