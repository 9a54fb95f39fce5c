"""Even Weyl-invariant forms, their Q/Z-valued descents, Psi, Psi' and ev.

Forms are Gram matrices in simple-coroot coordinates.  Pairings on
pi_1(G^ad) = P^vee/Q^vee are matrices of fractions in [0, 1) indexed by the
generators of pi_1(G^ad).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd, lcm
from typing import Iterator, Sequence

from . import lattice as lt
from .lattice import AbelianHom, FinAbGroup, IntegrityError, Matrix, Vector
from .rootdata import IsogenyData, RootSystem


def frac_mod1(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


# ---------------------------------------------------------------------------
# invariant forms


@dataclass(frozen=True)
class InvariantFormLattice:
    """Z-basis of the even W-invariant symmetric forms, one per simple factor."""

    root_system: RootSystem
    basis: tuple[Matrix, ...]

    def combination(self, coeffs: Sequence[int]) -> Matrix:
        l = self.root_system.rank
        return lt.as_matrix([[sum(c * b[i][j] for c, b in zip(coeffs, self.basis)) for j in range(l)]
                             for i in range(l)])


def _sym_index(l: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(l) for j in range(i, l)]


def _sym_matrix(vec: Sequence[int], l: int) -> Matrix:
    m = lt.zeros(l, l)
    for (i, j), x in zip(_sym_index(l), vec):
        m[i][j] = m[j][i] = x
    return lt.as_matrix(m)


def invariance_constraints(rs: RootSystem) -> Matrix:
    """Rows express S_k^T B S_k - B = 0 for symmetric B, in upper-triangle unknowns."""
    l = rs.rank
    idx = _sym_index(l)
    rows = []
    for k in range(l):
        s = rs.simple_reflection(k)
        # (S^T B S)[p][q] = sum_{a,b} S[a][p] B[a][b] S[b][q]
        for p, q in idx:
            row = [0] * len(idx)
            for u, (i, j) in enumerate(idx):
                c = s[i][p] * s[j][q]
                if i != j:
                    c += s[j][p] * s[i][q]
                row[u] = c
            row[idx.index((p, q))] -= 1
            if any(row):
                rows.append(row)
    return lt.as_matrix(rows)


def invariant_even_forms(rs: RootSystem) -> InvariantFormLattice:
    l = rs.rank
    if l == 0:
        return InvariantFormLattice(rs, ())
    idx = _sym_index(l)
    nu = len(idx)
    ker = lt.kernel_basis(invariance_constraints(rs), nu)
    kcols = lt.columns(ker, len(ker[0]) if ker and ker[0] else 0)
    # even sublattice: diagonal entries even
    diag = [u for u, (i, j) in enumerate(idx) if i == j]
    f = len(kcols)
    cond = lt.hstack(lt.as_matrix([[c[u] for c in kcols] for u in diag]),
                     lt.as_matrix([[2 * int(a == b) for b in range(l)] for a in range(l)]), rows=l)
    ev = lt.kernel_basis(cond, f + l)
    ev_coeffs = [c[:f] for c in lt.columns(ev, len(ev[0]) if ev and ev[0] else 0)]
    even = [tuple(sum(a * c[u] for a, c in zip(co, kcols)) for u in range(nu)) for co in ev_coeffs]
    even = lt.columns(lt.lattice_basis(even, nu), len(even))

    if len(even) != len(rs.factors):
        raise IntegrityError(f"expected {len(rs.factors)} invariant forms, found {len(even)}")

    # one generator per factor: forms in the lattice supported on that factor's block
    basis = []
    for fi in range(len(rs.factors)):
        block = set(rs.factor_slice(fi))
        outside = [u for u, (i, j) in enumerate(idx) if not (i in block and j in block)]
        proj = lt.as_matrix([[e[u] for e in even] for u in outside])
        sub = lt.kernel_basis(proj, len(even)) if outside else lt.identity(len(even))
        subcols = lt.columns(sub, len(sub[0]) if sub and sub[0] else 0)
        if len(subcols) != 1:
            raise IntegrityError("invariant forms do not split along simple factors")
        vec = [sum(c * e[u] for c, e in zip(subcols[0], even)) for u in range(nu)]
        form = _sym_matrix(vec, l)
        # the form is definite on its factor, so one diagonal entry fixes the sign
        # of B(theta^vee, theta^vee)
        o = rs.offsets[fi]
        if form[o][o] < 0:
            form = lt.as_matrix([[-x for x in r] for r in form])
        basis.append(form)
    flat = [tuple(b[i][j] for i, j in idx) for b in basis]
    if lt.hermite_rows(flat, nu) != lt.hermite_rows(even, nu):
        raise IntegrityError("per-factor forms do not span the even invariant lattice")
    return InvariantFormLattice(rs, tuple(basis))


def coweight_form(form: Matrix, rs: RootSystem) -> tuple[tuple[Fraction, ...], ...]:
    """The rational extension of ``form`` in fundamental-coweight coordinates: A^-T B A^-1."""
    inv = rs.cartan_inverse
    l = rs.rank
    bi = [[sum((form[i][k] * inv[k][j] for k in range(l)), Fraction(0)) for j in range(l)]
          for i in range(l)]
    return tuple(tuple(sum((inv[k][i] * bi[k][j] for k in range(l)), Fraction(0)) for j in range(l))
                 for i in range(l))


# ---------------------------------------------------------------------------
# pairings


@dataclass(frozen=True)
class PairingClass:
    """Symmetric Q/Z-valued bilinear map on pi_1(G^ad), given on generators."""

    values: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def zero(cls, k: int) -> "PairingClass":
        return cls(tuple(tuple(Fraction(0) for _ in range(k)) for _ in range(k)))

    @property
    def size(self) -> int:
        return len(self.values)

    def __add__(self, other: "PairingClass") -> "PairingClass":
        return PairingClass(tuple(tuple(frac_mod1(a + b) for a, b in zip(r, s))
                                  for r, s in zip(self.values, other.values)))

    def scale(self, c: int) -> "PairingClass":
        return PairingClass(tuple(tuple(frac_mod1(c * a) for a in r) for r in self.values))

    def __call__(self, x: Sequence[int], y: Sequence[int]) -> Fraction:
        k = self.size
        return frac_mod1(sum((x[i] * y[j] * self.values[i][j] for i in range(k) for j in range(k)),
                             Fraction(0)))

    @property
    def is_zero(self) -> bool:
        return all(v == 0 for r in self.values for v in r)

    def check(self, pi1: FinAbGroup) -> None:
        for i, ni in enumerate(pi1.invariant_factors):
            for j in range(self.size):
                if self.values[i][j] != self.values[j][i]:
                    raise IntegrityError("pairing is not symmetric")
                if frac_mod1(ni * self.values[i][j]) != 0:
                    raise IntegrityError("pairing is not well defined on pi_1")

    def render(self) -> list[list[str]]:
        return [[str(v) for v in r] for r in self.values]


def descend_form(form: Matrix, rs: RootSystem, pi1: FinAbGroup) -> PairingClass:
    """Pairing induced on pi_1(G^ad) by an even invariant form.

    ``pi1`` must carry generator lifts in fundamental-coweight coordinates.
    Raises IntegrityError if the form is not integral on P^vee x Q^vee, which
    happens exactly when it lies outside the invariant lattice.
    """
    k = pi1.ngens
    if k == 0:
        return PairingClass(())
    f = coweight_form(form, rs)
    l = rs.rank
    lifts = pi1.generator_lifts
    for x in lifts:
        for q in lt.columns(rs.cartan):
            v = sum((x[i] * f[i][j] * q[j] for i in range(l) for j in range(l)), Fraction(0))
            if v.denominator != 1:
                raise IntegrityError("form does not descend: not integral on P^vee x Q^vee")
    vals = tuple(
        tuple(frac_mod1(sum((x[i] * f[i][j] * y[j] for i in range(l) for j in range(l)), Fraction(0)))
              for y in lifts)
        for x in lifts)
    pc = PairingClass(vals)
    pc.check(pi1)
    return pc


# ---------------------------------------------------------------------------
# Psi and Psi'


class _PairSpace:
    """Pairings on pi1 linearized as Z^P / diag(gcd(n_i, n_j)), P = pairs i <= j."""

    def __init__(self, pi1: FinAbGroup):
        self.pi1 = pi1
        ns = pi1.invariant_factors
        self.pairs = [(i, j) for i in range(len(ns)) for j in range(i, len(ns))]
        self.mods = [gcd(ns[i], ns[j]) for i, j in self.pairs]
        p = len(self.pairs)
        self.group = lt.cokernel(
            lt.as_matrix([[self.mods[a] if a == b else 0 for b in range(p)] for a in range(p)]), p)

    def encode(self, pc: PairingClass) -> Vector:
        vec = []
        for (i, j), g in zip(self.pairs, self.mods):
            v = pc.values[i][j] * g
            if v.denominator != 1:
                raise IntegrityError("pairing value exceeds the denominator bound")
            vec.append(int(v))
        return self.group.coordinates(vec)

    def decode(self, coords: Sequence[int]) -> PairingClass:
        vec = self.group.lift(coords)
        k = self.pi1.ngens
        vals = [[Fraction(0)] * k for _ in range(k)]
        for (i, j), g, x in zip(self.pairs, self.mods, vec):
            vals[i][j] = vals[j][i] = frac_mod1(Fraction(x, g))
        return PairingClass(tuple(tuple(r) for r in vals))


@dataclass(frozen=True)
class PsiGroup:
    """A subgroup of the pairings on pi_1(G^ad) coming from invariant forms.

    ``generators[j]`` is the pairing of structure generator ``j``;
    ``coefficients[j]`` writes it over the form-lattice basis.
    """

    root_system: RootSystem
    pi1: FinAbGroup
    forms: InvariantFormLattice
    ambient_generators: tuple[PairingClass, ...]
    structure: FinAbGroup
    generators: tuple[PairingClass, ...]
    coefficients: tuple[Vector, ...]

    def element(self, coords: Sequence[int]) -> PairingClass:
        out = PairingClass.zero(self.pi1.ngens)
        for c, g in zip(coords, self.generators):
            out = out + g.scale(c)
        return out

    def elements(self) -> Iterator[PairingClass]:
        for c in self.structure.elements():
            yield self.element(c)

    def pairing_set(self) -> frozenset[PairingClass]:
        return frozenset(self.elements())

    def coordinates(self, pc: PairingClass) -> Vector | None:
        """Structure coordinates of ``pc``, or None if it is not in this group."""
        space = _PairSpace(self.pi1)
        sub = lt.subgroup(space.group, [space.encode(g) for g in self.generators])
        c = sub.combination(space.encode(pc))
        return None if c is None else self.structure.reduce(c)

    def __contains__(self, pc: PairingClass) -> bool:
        return self.coordinates(pc) is not None


def _from_subgroup(rs, pi1, forms, ambient, space, sub, coeff_of) -> PsiGroup:
    gens = tuple(space.decode(g) for g in sub.group.generator_lifts)
    coeffs = tuple(coeff_of(combo) for combo in sub.combos)
    return PsiGroup(rs, pi1, forms, ambient, FinAbGroup(sub.group.free_rank, sub.group.invariant_factors),
                    gens, coeffs)


@lru_cache(maxsize=None)
def psi_group(rs: RootSystem) -> PsiGroup:
    """Psi(G^ad) for the root system ``rs``."""
    pi1 = lt.cokernel(rs.cartan, rs.rank)
    forms = invariant_even_forms(rs)
    ambient = tuple(descend_form(b, rs, pi1) for b in forms.basis)
    space = _PairSpace(pi1)
    sub = lt.subgroup(space.group, [space.encode(p) for p in ambient])
    return _from_subgroup(rs, pi1, forms, ambient, space, sub, tuple)


def psi_prime(psi: PsiGroup, iso: IsogenyData) -> PsiGroup:
    """Elements b of ``psi`` with b(pi_1(Gbar), pi_1(G')) = 0."""
    pi1 = psi.pi1
    if pi1.invariant_factors != iso.pi1_Gad.invariant_factors:
        raise ValueError("Psi group and isogeny data belong to different root systems")
    xs = iso.pi1_Gbar.group.generator_lifts
    ys = iso.pi1_Gprime.group.generator_lifts
    n = lt.exponent(pi1)
    pairs = [(x, y) for x in xs for y in ys]
    if n == 1 or not pairs:
        target = lt.TRIVIAL
        mat = ()
    else:
        target = FinAbGroup(0, (n,) * len(pairs))
        mat = lt.as_matrix([[int(g(x, y) * n) for g in psi.generators] for x, y in pairs])
    h = AbelianHom(psi.structure, target, mat)
    ker = lt.hom_kernel(h)

    def coeff_of(combo):
        return tuple(sum(c * v[m] for c, v in zip(combo, psi.coefficients))
                     for m in range(len(psi.forms.basis)))

    gens = tuple(psi.element(g) for g in ker.group.generator_lifts)
    coeffs = tuple(coeff_of(c) for c in ker.group.generator_lifts)
    return PsiGroup(psi.root_system, pi1, psi.forms, psi.ambient_generators,
                    FinAbGroup(0, ker.group.invariant_factors), gens, coeffs)


# ---------------------------------------------------------------------------
# evaluation map


@dataclass(frozen=True)
class EvaluationMap:
    """ev: Psi'(G) -> Hom(pi_1(G^ad)/pi_1(G'), Q/Z), b -> b(d_bar, -).

    The target is realized as the annihilator of pi_1(G') inside the dual of
    pi_1(G^ad); ``target.group`` lifts are dual coordinates.
    """

    hom: AbelianHom
    target: lt.Subgroup
    characters: tuple[Vector, ...]


def annihilator(pi1: FinAbGroup, sub_gens: Sequence[Sequence[int]]) -> lt.Subgroup:
    """Characters of ``pi1`` (dual coordinates) vanishing on ``sub_gens``."""
    dual = lt.dual_group(pi1)
    n = lt.exponent(pi1)
    if n == 1 or not sub_gens:
        return lt.subgroup(dual, [tuple(int(i == j) for j in range(dual.ngens)) for i in range(dual.ngens)])
    ns = pi1.invariant_factors
    target = FinAbGroup(0, (n,) * len(sub_gens))
    mat = lt.as_matrix([[y[j] * (n // ns[j]) for j in range(len(ns))] for y in sub_gens])
    return lt.hom_kernel(AbelianHom(dual, target, mat))


def ev_map(psi_p: PsiGroup, iso: IsogenyData, d_bar_ad: Sequence[int]) -> EvaluationMap:
    pi1 = iso.pi1_Gad
    ns = pi1.invariant_factors
    gprime = iso.pi1_Gprime.group.generator_lifts
    ann = annihilator(pi1, gprime)
    unit = [tuple(int(i == j) for j in range(len(ns))) for i in range(len(ns))]
    chars, cols = [], []
    for b in psi_p.generators:
        chi = tuple(int(b(d_bar_ad, e) * n) % n for e, n in zip(unit, ns))
        for y in gprime:
            if lt.character_value(pi1, chi, y) != 0:
                raise IntegrityError(f"ev character {chi} does not kill pi_1(G')")
        c = ann.coordinates(chi)
        if c is None:
            raise IntegrityError("ev character is not in the annihilator of pi_1(G')")
        chars.append(chi)
        cols.append(c)
    tgt = ann.group
    mat = lt.from_columns(cols, tgt.ngens) if tgt.ngens else ()
    hom = AbelianHom(psi_p.structure, FinAbGroup(0, tgt.invariant_factors), mat)
    return EvaluationMap(hom, ann, tuple(chars))


# ---------------------------------------------------------------------------
# brute-force oracle


class OracleBoundExceeded(ValueError):
    """Input is above the desk-scale bound of the enumeration oracle."""


ORACLE_MAX_PI1 = 64
ORACLE_MAX_FACTORS = 3


@dataclass(frozen=True)
class BruteForcePsi:
    psi_factors: tuple[int, ...]
    psi_pairings: frozenset[PairingClass]
    psi_prime_factors: tuple[int, ...]
    psi_prime_pairings: frozenset[PairingClass]


def _direct_pairing(form: Matrix, rs: RootSystem, lifts: Sequence[Sequence[int]]) -> PairingClass:
    """x^T B y with x, y converted to coroot coordinates by exact elimination."""
    l = rs.rank
    conv = []
    for x in lifts:
        # solve A c = x
        aug = [[Fraction(v) for v in row] + [Fraction(x[i])] for i, row in enumerate(rs.cartan)]
        for col in range(l):
            p = next(r for r in range(col, l) if aug[r][col] != 0)
            aug[col], aug[p] = aug[p], aug[col]
            for r in range(l):
                if r != col and aug[r][col] != 0:
                    f = aug[r][col] / aug[col][col]
                    aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
        conv.append([aug[i][l] / aug[i][i] for i in range(l)])
    vals = tuple(tuple(frac_mod1(sum((c[i] * form[i][j] * e[j] for i in range(l) for j in range(l)),
                                     Fraction(0))) for e in conv) for c in conv)
    return PairingClass(vals)


def _census(elements: Sequence[PairingClass]) -> tuple[int, ...]:
    counts: dict[int, int] = {}
    for p in elements:
        o = lcm(1, *(v.denominator for r in p.values for v in r))
        counts[o] = counts.get(o, 0) + 1
    return lt.invariant_factors_from_orders(counts)


def psi_bruteforce_oracle(rs: RootSystem, iso: IsogenyData) -> BruteForcePsi:
    """Enumerate every form-lattice combination with coefficients in [0, D).

    D = lcm of n_i n_j over generator orders; it annihilates every pairing
    coordinate, so the enumeration is exhaustive.  Group structure is
    recovered by an element-order census, without any Smith form.
    """
    pi1 = iso.pi1_Gad
    if len(rs.factors) > ORACLE_MAX_FACTORS or (pi1.is_finite and pi1.order > ORACLE_MAX_PI1):
        raise OracleBoundExceeded(
            f"oracle limited to |pi_1| <= {ORACLE_MAX_PI1} and <= {ORACLE_MAX_FACTORS} factors")
    forms = invariant_even_forms(rs)
    ns = pi1.invariant_factors
    D = lcm(1, *(a * b for a in ns for b in ns))
    lifts = pi1.generator_lifts
    seen: set[PairingClass] = set()
    for coeffs in product(range(D), repeat=len(forms.basis)):
        seen.add(_direct_pairing(forms.combination(coeffs), rs, lifts))
    xs = iso.pi1_Gbar.group.generator_lifts
    ys = iso.pi1_Gprime.group.generator_lifts
    prime = {p for p in seen if all(p(x, y) == 0 for x in xs for y in ys)}
    return BruteForcePsi(_census(list(seen)), frozenset(seen), _census(list(prime)), frozenset(prime))
