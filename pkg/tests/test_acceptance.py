"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

import json
import random
import time
from fractions import Fraction
from itertools import product
from math import gcd

import pytest

from poincare_ob import cli
from poincare_ob import lattice as lt
from poincare_ob.catalogue import generated_pairings, matrix_pairing, mult_pairing, same_up_to_automorphism
from poincare_ob.obstruction import Hypotheses, ObstructionReport, analyze, report
from poincare_ob.presets import parse_group
from poincare_ob.psi import (
    coweight_form,
    frac_mod1,
    invariant_even_forms,
    psi_bruteforce_oracle,
    psi_group,
    psi_prime,
)
from poincare_ob.rootdata import (
    adjoint,
    build_root_system,
    general_linear,
    intermediate,
    is_minuscule,
    isogeny_data,
    minuscule_lift,
    simple_types_up_to,
)


def reference_catalogue():
    """Reference rows: type -> (pi_1 invariant factors, Psi invariant factors, generator pairing)."""
    rows = {}
    for l in range(1, 8):
        rows[f"A{l}"] = ((l + 1,), (l + 1,), mult_pairing(l + 1))
    for l in range(2, 8):
        rows[f"B{l}"] = ((2,), (), None)
    for l in range(3, 8):
        rows[f"C{l}"] = ((2,), (2,), mult_pairing(2)) if l % 2 else ((2,), (), None)
    for l in range(4, 9):
        if l % 2:
            rows[f"D{l}"] = ((4,), (4,), mult_pairing(4))
        elif l % 4 == 0:
            rows[f"D{l}"] = ((2, 2), (2,), matrix_pairing([[0, 1], [1, 0]], 2))
        else:
            rows[f"D{l}"] = ((2, 2), (2,), matrix_pairing([[1, 0], [0, 1]], 2))
    rows["E6"] = ((3,), (3,), mult_pairing(3))
    rows["E7"] = ((2,), (2,), mult_pairing(2))
    rows["E8"] = ((), (), None)
    rows["F4"] = ((), (), None)
    rows["G2"] = ((), (), None)
    return rows


@pytest.mark.criterion(1, "Psi catalogue of simple adjoint types")
def test_criterion_1_catalogue():
    start = time.perf_counter()
    mismatches = []
    for name, (pi1_f, psi_f, gen) in reference_catalogue().items():
        psi = psi_group(build_root_system([name]))
        if psi.pi1.invariant_factors != pi1_f or psi.structure.invariant_factors != psi_f:
            mismatches.append(name)
            continue
        if gen is None:
            if psi.generators:
                mismatches.append(name)
            continue
        expected = generated_pairings([gen], lt.exponent(psi.pi1) ** 2)
        if not same_up_to_automorphism(psi.pi1, expected, psi.pairing_set()):
            mismatches.append(name)
    elapsed = time.perf_counter() - start
    assert not mismatches, mismatches
    assert len(reference_catalogue()) == 7 + 6 + 5 + 5 + 5
    assert elapsed < 30, elapsed


@pytest.mark.criterion(2, "GL sweep")
def test_criterion_2_gl():
    bad = []
    for n in range(2, 9):
        for d in range(n):
            a = analyze(general_linear(n), [1] * d + [0] * (n - d))
            if (a.generic_order, a.global_order) != (gcd(n, d), gcd(n, d)):
                bad.append((n, d, a.generic_order, a.global_order))
    assert not bad, bad


@pytest.mark.criterion(3, "SL and adjoint sweep")
def test_criterion_3_sl_adjoint():
    bad = []
    for n in range(2, 9):
        a = analyze(parse_group(f"SL({n})"), [0] * (n - 1))
        if (a.generic_order, a.global_order) != (n, n):
            bad.append(f"SL({n})")
    presets = [adjoint(t) for t in simple_types_up_to(8)] + [parse_group(f"PGL({n})") for n in range(2, 9)]
    for datum in presets:
        iso = isogeny_data(datum)
        for d in iso.pi1_G.elements():
            lift = iso.pi1_G.lift(d) or [0] * datum.lattice_rank
            a = analyze(datum, lift)
            if a.type_class.d != tuple(d) or (a.generic_order, a.global_order) != (1, 1):
                bad.append((datum.name, d))
    assert not bad, bad


def _oracle_agrees(datum):
    rs = datum.root_system
    iso = isogeny_data(datum)
    oracle = psi_bruteforce_oracle(rs, iso)
    psi = psi_group(rs)
    pp = psi_prime(psi, iso)
    return (oracle.psi_factors == psi.structure.invariant_factors
            and oracle.psi_pairings == psi.pairing_set()
            and oracle.psi_prime_factors == pp.structure.invariant_factors
            and oracle.psi_prime_pairings == pp.pairing_set())


def random_intermediate(rng, t):
    pi1 = lt.cokernel(build_root_system([t]).cartan)
    gens = [tuple(rng.randrange(n) for n in pi1.invariant_factors) for _ in range(rng.randint(1, 2))]
    return intermediate(t, gens)


@pytest.mark.criterion(4, "oracle equivalence")
def test_criterion_4_oracle():
    start = time.perf_counter()
    cases = [adjoint(t) for t in simple_types_up_to(4)]
    rng = random.Random(4)
    cases += [random_intermediate(rng, rng.choice(["A3", "A5", "D4"])) for _ in range(20)]
    bad = [d.name for d in cases if not _oracle_agrees(d)]
    elapsed = time.perf_counter() - start
    assert not bad, bad
    assert elapsed < 60, elapsed


@pytest.mark.criterion(5, "descent properties")
def test_criterion_5_descent():
    rng = random.Random(5)
    for t in simple_types_up_to(4):
        rs = build_root_system([t])
        l = rs.rank
        forms = invariant_even_forms(rs)
        coroots = lt.columns(rs.cartan)

        def val(f, u, v):
            return frac_mod1(sum((u[i] * f[i][j] * v[j] for i in range(l) for j in range(l)), Fraction(0)))

        for _ in range(200):
            f = coweight_form(forms.combination([rng.randint(-5, 5) for _ in forms.basis]), rs)
            x = [rng.randint(-6, 6) for _ in range(l)]
            y = [rng.randint(-6, 6) for _ in range(l)]
            cs = [rng.randint(-3, 3) for _ in coroots]
            q = [sum(c * v[i] for c, v in zip(cs, coroots)) for i in range(l)]
            xq = [a + b for a, b in zip(x, q)]
            yq = [a + b for a, b in zip(y, q)]
            assert val(f, x, y) == val(f, xq, y) == val(f, x, yq), (t, x, y, q)

        # b(lambda, alpha^vee) = alpha(lambda) b(alpha^vee, alpha^vee) / 2 on coroot basis vectors
        for b in forms.basis:
            for k in range(l):
                for j in range(l):
                    lhs = b[j][k]
                    alpha_k_of_lambda = rs.cartan[k][j]
                    assert Fraction(lhs) == Fraction(alpha_k_of_lambda * b[k][k], 2), (t, k, j)


@pytest.mark.criterion(6, "minuscule lifts")
def test_criterion_6_minuscule():
    for t in simple_types_up_to(8):
        rs = build_root_system([t])
        pi1 = lt.cokernel(rs.cartan)
        # a minuscule coweight pairs to 0 or 1 with each simple root, so {0,1}^l is exhaustive
        candidates = list(product((0, 1), repeat=rs.rank))
        for d in pi1.elements():
            if not any(d):
                continue
            found = [c for c in candidates if pi1.coordinates(c) == d and is_minuscule(rs, c)]
            assert len(found) == 1, (t, d, found)
            delta = minuscule_lift(rs, d, pi1)
            assert found[0] == delta
            assert all(sum(a * x for a, x in zip(root, delta)) in (0, 1) for root in rs.positive_roots)


def _snf_ok(a, s):
    m, n = len(a), len(a[0])
    diag = [s.d[i][i] for i in range(min(m, n))]
    return (lt.matmul(lt.matmul(s.u, a), s.v) == s.d
            and abs(lt.det(s.u)) == 1 and abs(lt.det(s.v)) == 1
            and all(s.d[i][j] == 0 for i in range(m) for j in range(n) if i != j)
            and all(x >= 0 for x in diag)
            and all((y % x == 0) if x else y == 0 for x, y in zip(diag, diag[1:])))


@pytest.mark.criterion(7, "exact-lattice properties")
def test_criterion_7_lattice():
    start = time.perf_counter()
    rng = random.Random(7)
    for _ in range(500):
        m, n = rng.randint(1, 6), rng.randint(1, 6)
        a = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]
        assert _snf_ok(a, lt.smith_normal_form(a, n)), a
    checked = 0
    while checked < 200:
        n = rng.randint(1, 6)
        a = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        d = lt.det(a)
        if d:
            assert lt.cokernel(a).order == abs(d), a
            checked += 1
    for _ in range(200):
        n, k = rng.randint(1, 6), rng.randint(1, 5)
        sub = [[rng.randint(-9, 9) for _ in range(k)] for _ in range(n)]
        s = lt.saturation(sub, n)
        assert lt.saturation(s, n) == s, sub
    for _ in range(100):
        fs = [rng.randint(1, 12) for _ in range(rng.randint(1, 4))]
        g = lt.cokernel([[fs[i] if i == j else 0 for j in range(len(fs))] for i in range(len(fs))])
        assert lt.dual_group(lt.dual_group(g)).invariant_factors == g.invariant_factors
    elapsed = time.perf_counter() - start
    assert elapsed < 30, elapsed


@pytest.mark.criterion(8, "determinism and round-trip")
def test_criterion_8_determinism(tmp_path, capsys):
    runs = [
        ["table", "--format", "json"],
        ["table"],
        ["obstruct", "--group", "SC(D4)", "--d", "0,0,0,0", "--genus", "4", "--format", "json"],
        ["obstruct", "--group", "GL(6) x INT(A3; 2)", "--d", "4,0,0,0,0,0,1,0,0", "--genus", "3",
         "--char", "0", "--format", "json"],
        ["obstruct", "--group", "GL(4)", "--d", "1,1,0,0", "--genus", "4"],
    ]
    for i, argv in enumerate(runs):
        outputs = []
        for j in range(3):
            path = tmp_path / f"{i}-{j}.out"
            assert cli.main(argv + ["--out", str(path)]) == 0
            outputs.append(path.read_bytes())
        assert outputs[0] == outputs[1] == outputs[2], argv
        if argv[0] == "obstruct" and "json" in argv:
            r = ObstructionReport.from_json(outputs[0].decode("utf-8"))
            assert (r.to_json() + "\n").encode("utf-8") == outputs[0]
    for expr, lift in [("GL(5)", [2, 0, 0, 0, 0]), ("SC(E7)", [0] * 7), ("T(1) x AD(D5)", [3, 1, 0, 0, 0, 0])]:
        r = report(parse_group(expr), lift, Hypotheses(4, 0))
        back = ObstructionReport.from_json(r.to_json())
        assert back == r
        assert json.loads(back.to_json()) == json.loads(r.to_json())
    capsys.readouterr()
