"""Root systems, root data and the lattices attached to a reductive group.

Conventions
-----------
* Cartan matrix entries are ``cartan[i][j] = <alpha_i, alpha_j^vee>``, so for a
  root datum ``simple_roots @ simple_coroots == cartan``.
* Bourbaki numbering throughout; for G2 the first simple root is the short one.
* The coweight lattice P^vee is written in the basis of fundamental coweights
  (dual to the simple roots).  In these coordinates the simple coroot
  ``alpha_j^vee`` is column ``j`` of the Cartan matrix, and a cocharacter
  ``lam`` of a root datum projects to ``simple_roots @ lam``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Sequence

from . import lattice as lt
from .lattice import FinAbGroup, Matrix, Subgroup, Vector

FAMILY_BOUNDS = {"A": (1, None), "B": (2, None), "C": (3, None), "D": (4, None),
                 "E": (6, 8), "F": (4, 4), "G": (2, 2)}


class RootDataError(ValueError):
    """Invalid root-system or root-datum input."""


@dataclass(frozen=True, order=True)
class SimpleType:
    family: str
    rank: int

    def __post_init__(self) -> None:
        fam = self.family
        if fam not in FAMILY_BOUNDS:
            raise RootDataError(f"unknown family {fam!r}")
        if fam == "C" and self.rank == 2:
            raise RootDataError("C2 is not accepted; use B2 (isomorphic)")
        lo, hi = FAMILY_BOUNDS[fam]
        if self.rank < lo or (hi is not None and self.rank > hi):
            raise RootDataError(f"rank {self.rank} is outside the legal range for type {fam}")

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"

    @classmethod
    def parse(cls, text: str) -> "SimpleType":
        m = re.fullmatch(r"\s*([A-Ga-g])\s*(\d+)\s*", text)
        if not m:
            raise RootDataError(f"cannot parse simple type {text!r}")
        return cls(m.group(1).upper(), int(m.group(2)))


def simple_types_up_to(max_rank: int) -> list[SimpleType]:
    """Every simple type of rank <= ``max_rank`` in catalogue order (A..G, rank ascending)."""
    out = []
    for fam, (lo, hi) in FAMILY_BOUNDS.items():
        top = max_rank if hi is None else min(hi, max_rank)
        out.extend(SimpleType(fam, r) for r in range(lo, top + 1))
    return out


def _e(n: int, *entries: tuple[int, Fraction | int]) -> tuple[Fraction, ...]:
    v = [Fraction(0)] * n
    for i, x in entries:
        v[i] = Fraction(x)
    return tuple(v)


def euclidean_simple_roots(t: SimpleType) -> list[tuple[Fraction, ...]]:
    """Simple roots realized in Euclidean space (Bourbaki plates)."""
    l, fam = t.rank, t.family
    h = Fraction(1, 2)
    if fam == "A":
        return [_e(l + 1, (i, 1), (i + 1, -1)) for i in range(l)]
    if fam in "BCD":
        roots = [_e(l, (i, 1), (i + 1, -1)) for i in range(l - 1)]
        last = {"B": _e(l, (l - 1, 1)),
                "C": _e(l, (l - 1, 2)),
                "D": _e(l, (l - 2, 1), (l - 1, 1))}[fam]
        return roots + [last]
    if fam == "E":
        e8 = [tuple([h] + [-h] * 6 + [h]),
              _e(8, (0, 1), (1, 1))] + [_e(8, (i, -1), (i + 1, 1)) for i in range(6)]
        return e8[:l]
    if fam == "F":
        return [_e(4, (1, 1), (2, -1)), _e(4, (2, 1), (3, -1)), _e(4, (3, 1)),
                (h, -h, -h, -h)]
    # G2 inside the plane x+y+z=0; alpha_1 short, alpha_2 long
    return [_e(3, (0, 1), (1, -1)), _e(3, (0, -2), (1, 1), (2, 1))]


def _dot(x: Sequence[Fraction], y: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(x, y)), Fraction(0))


def cartan_matrix(t: SimpleType) -> Matrix:
    roots = euclidean_simple_roots(t)
    out = []
    for a in roots:
        row = []
        for b in roots:
            v = 2 * _dot(a, b) / _dot(b, b)
            assert v.denominator == 1
            row.append(int(v))
        out.append(row)
    return lt.as_matrix(out)


def _positive_roots(cartan: Matrix) -> list[Vector]:
    """Positive roots in simple-root coordinates, by root-string closure.

    For a root ``beta`` and simple root ``alpha_i`` the alpha_i-string through
    beta is ``beta - p alpha_i, ..., beta + q alpha_i`` with
    ``p - q = <beta, alpha_i^vee>``; ``beta + alpha_i`` is a root iff q > 0.
    """
    l = len(cartan)
    simple = [tuple(int(i == j) for j in range(l)) for i in range(l)]
    roots = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            for i in range(l):
                pairing = sum(beta[j] * cartan[j][i] for j in range(l))
                p = 0
                down = list(beta)
                while True:
                    down[i] -= 1
                    if tuple(down) in roots:
                        p += 1
                    else:
                        break
                if p - pairing > 0:
                    up = list(beta)
                    up[i] += 1
                    up = tuple(up)
                    if up not in roots:
                        roots.add(up)
                        nxt.append(up)
        layer = nxt
    return sorted(roots, key=lambda r: (sum(r), tuple(-x for x in r)))


@dataclass(frozen=True)
class RootSystem:
    factors: tuple[SimpleType, ...]

    @cached_property
    def rank(self) -> int:
        return sum(t.rank for t in self.factors)

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        out, o = [], 0
        for t in self.factors:
            out.append(o)
            o += t.rank
        return tuple(out)

    def factor_slice(self, f: int) -> range:
        return range(self.offsets[f], self.offsets[f] + self.factors[f].rank)

    @cached_property
    def cartan(self) -> Matrix:
        return lt.block_diagonal([(cartan_matrix(t), t.rank, t.rank) for t in self.factors])

    @cached_property
    def positive_roots(self) -> tuple[Vector, ...]:
        out = []
        for f, t in enumerate(self.factors):
            o = self.offsets[f]
            for r in _positive_roots(cartan_matrix(t)):
                v = [0] * self.rank
                v[o:o + t.rank] = r
                out.append(tuple(v))
        return tuple(out)

    @cached_property
    def highest_roots(self) -> tuple[Vector, ...]:
        out = []
        for f in range(len(self.factors)):
            sl = self.factor_slice(f)
            in_factor = [r for r in self.positive_roots if any(r[i] for i in sl)]
            out.append(max(in_factor, key=sum))
        return tuple(out)

    @cached_property
    def cartan_inverse(self) -> tuple[tuple[Fraction, ...], ...]:
        return lt.rational_inverse(self.cartan)

    def fundamental_coweights(self) -> tuple[tuple[Fraction, ...], ...]:
        """Fundamental coweights written in simple-coroot coordinates (columns of A^-1)."""
        inv = self.cartan_inverse
        return tuple(tuple(inv[r][i] for r in range(self.rank)) for i in range(self.rank))

    def simple_reflection(self, k: int) -> Matrix:
        """Matrix of s_k on simple-coroot coordinates: s_k(lam) = lam - alpha_k(lam) alpha_k^vee."""
        l = self.rank
        a = self.cartan
        return lt.as_matrix([[int(i == j) - (a[k][j] if i == k else 0) for j in range(l)]
                             for i in range(l)])

    def __str__(self) -> str:
        return " x ".join(str(t) for t in self.factors) or "(empty)"


def build_root_system(factors: Sequence[SimpleType | str]) -> RootSystem:
    return RootSystem(tuple(f if isinstance(f, SimpleType) else SimpleType.parse(f) for f in factors))


@dataclass(frozen=True)
class RootDatum:
    """Cocharacter lattice Z^n with simple roots (rows) and simple coroots (columns)."""

    lattice_rank: int
    root_system: RootSystem
    simple_coroots: Matrix  # n x l
    simple_roots: Matrix  # l x n
    name: str = ""

    def __post_init__(self) -> None:
        n, l = self.lattice_rank, self.root_system.rank
        if l > n:
            raise RootDataError(f"{l} simple roots do not fit in a rank-{n} lattice")
        if len(self.simple_coroots) != n or any(len(c) != l for c in self.simple_coroots):
            raise RootDataError(f"simple_coroots must be {n} x {l}")
        if len(self.simple_roots) != l or any(len(r) != n for r in self.simple_roots):
            raise RootDataError(f"simple_roots must be {l} x {n}")
        if lt.matmul(self.simple_roots, self.simple_coroots, n) != self.root_system.cartan:
            raise RootDataError("simple roots paired with simple coroots do not give the Cartan matrix")

    @property
    def factors(self) -> tuple[SimpleType, ...]:
        return self.root_system.factors

    @property
    def is_semisimple(self) -> bool:
        return self.root_system.rank == self.lattice_rank


def direct_sum(data: Sequence[RootDatum], name: str | None = None) -> RootDatum:
    rs = RootSystem(tuple(t for d in data for t in d.factors))
    n = sum(d.lattice_rank for d in data)
    cor = lt.block_diagonal([(d.simple_coroots, d.lattice_rank, d.root_system.rank) for d in data])
    rts = lt.block_diagonal([(d.simple_roots, d.root_system.rank, d.lattice_rank) for d in data])
    return RootDatum(n, rs, cor, rts, name if name is not None else " x ".join(d.name for d in data))


def simply_connected(t: SimpleType | str) -> RootDatum:
    rs = build_root_system([t])
    l = rs.rank
    return RootDatum(l, rs, lt.identity(l), rs.cartan, f"SC({rs})")


def adjoint(t: SimpleType | str) -> RootDatum:
    rs = build_root_system([t])
    l = rs.rank
    return RootDatum(l, rs, rs.cartan, lt.identity(l), f"AD({rs})")


def general_linear(n: int) -> RootDatum:
    if n < 1:
        raise RootDataError("GL(n) needs n >= 1")
    if n == 1:
        return torus(1, name="GL(1)")
    rs = build_root_system([SimpleType("A", n - 1)])
    vecs = [[int(k == i) - int(k == i + 1) for k in range(n)] for i in range(n - 1)]
    return RootDatum(n, rs, lt.from_columns(vecs, n), lt.as_matrix(vecs), f"GL({n})")


def torus(r: int, name: str | None = None) -> RootDatum:
    if r < 1:
        raise RootDataError("a torus needs rank >= 1")
    return RootDatum(r, RootSystem(()), tuple(() for _ in range(r)), (), name or f"T({r})")


def intermediate(t: SimpleType | str, gens: Sequence[Sequence[int]], name: str | None = None) -> RootDatum:
    """Datum whose cocharacter lattice is the preimage in P^vee of the subgroup of
    P^vee/Q^vee generated by ``gens`` (invariant-factor coordinates)."""
    rs = build_root_system([t])
    l = rs.rank
    pi1ad = lt.cokernel(rs.cartan, l)
    for g in gens:
        if len(g) != pi1ad.ngens:
            raise RootDataError(
                f"subgroup generator {tuple(g)} is not an element of P^vee/Q^vee = {pi1ad.describe()}")
    lifts = [pi1ad.lift(g) for g in gens]
    basis = lt.lattice_basis(lt.columns(rs.cartan) + lifts, l)  # columns, l x l
    coroots_q = lt.matmul(lt.rational_inverse(basis), rs.cartan)
    if any(x.denominator != 1 for row in coroots_q for x in row):
        raise lt.IntegrityError("coroots do not lie in the intermediate lattice")
    coroots = lt.as_matrix([[int(x) for x in row] for row in coroots_q])
    if name is None:
        name = f"INT({rs}; {format_generators(gens)})"
    return RootDatum(l, rs, coroots, basis, name)


def format_generators(gens: Sequence[Sequence[int]]) -> str:
    if all(len(g) == 1 for g in gens):
        return ", ".join(str(g[0]) for g in gens)
    return ", ".join("(" + ",".join(map(str, g)) + ")" for g in gens)


# ---------------------------------------------------------------------------
# lattices attached to a datum


@dataclass(frozen=True)
class IsogenyData:
    """pi_1 of G, G' = [G,G], Gbar = G/Z^0 and G^ad, plus the center's characters.

    ``pi1_Gprime`` and ``pi1_Gbar`` are subgroups of ``pi1_Gad``; the latter
    has coweight-coordinate lifts.  ``projection`` maps cocharacters into
    P^vee (coweight coordinates).
    """

    pi1_G: FinAbGroup
    pi1_Gprime: Subgroup
    pi1_Gbar: Subgroup
    pi1_Gad: FinAbGroup
    center_chars: FinAbGroup
    projection: Matrix = field(repr=False)

    @property
    def center_is_torus(self) -> bool:
        return not self.center_chars.invariant_factors

    @property
    def torsion_exponent(self) -> int:
        fs = self.center_chars.invariant_factors
        return fs[-1] if fs else 1


def isogeny_data(datum: RootDatum) -> IsogenyData:
    n, rs = datum.lattice_rank, datum.root_system
    l = rs.rank
    cor, rts = datum.simple_coroots, datum.simple_roots

    pi1_G = lt.cokernel(cor, n)
    pi1_Gad = lt.cokernel(rs.cartan, l)

    # Lambda_T' = Lambda cap Q-span(coroots); its image in P^vee
    sat = lt.saturation(cor, n)
    sat_cols = lt.columns(sat, len(sat[0]) if n and sat and sat[0] else 0)
    gprime = [pi1_Gad.coordinates(lt.matvec(rts, c)) for c in sat_cols] if l else []
    # p(Lambda): project along the radical (common kernel of the simple roots)
    gbar = [pi1_Gad.coordinates(lt.matvec(rts, e)) for e in lt.identity(n)] if l else []

    center = lt.cokernel(lt.transpose(rts, n), n)
    return IsogenyData(
        pi1_G=pi1_G,
        pi1_Gprime=lt.subgroup(pi1_Gad, gprime),
        pi1_Gbar=lt.subgroup(pi1_Gad, gbar),
        pi1_Gad=pi1_Gad,
        center_chars=center,
        projection=rts,
    )


@dataclass(frozen=True)
class TypeClass:
    """A topological type: the class ``d`` in pi_1(G) and its image in pi_1(Gbar).

    ``d_bar`` is in the generator coordinates of pi_1(Gbar); ``d_bar_ad`` is the
    same element written in pi_1(G^ad) coordinates.
    """

    d: Vector
    d_bar: Vector
    d_bar_ad: Vector


def reduce_type(datum: RootDatum, d_lift: Sequence[int], iso: IsogenyData | None = None) -> TypeClass:
    if len(d_lift) != datum.lattice_rank:
        raise RootDataError(
            f"d has {len(d_lift)} entries but the cocharacter lattice has rank {datum.lattice_rank}")
    iso = iso or isogeny_data(datum)
    d = iso.pi1_G.coordinates(d_lift)
    ad = iso.pi1_Gad.coordinates(lt.matvec(iso.projection, d_lift)) if datum.root_system.rank else ()
    bar = iso.pi1_Gbar.coordinates(ad)
    if bar is None:
        raise lt.IntegrityError("projected type does not lie in pi_1(Gbar)")
    return TypeClass(d, bar, ad)


def pairing(root: Sequence[int], coweight: Sequence[int]) -> int:
    """<alpha, delta> for a root in simple-root coordinates and a coweight in
    fundamental-coweight coordinates."""
    return sum(a * b for a, b in zip(root, coweight))


def is_minuscule(rs: RootSystem, delta: Sequence[int]) -> bool:
    return any(delta) and all(pairing(a, delta) in (0, 1) for a in rs.positive_roots)


def minuscule_lift(rs: RootSystem, d: Sequence[int], pi1ad: FinAbGroup | None = None) -> Vector:
    """The unique minuscule coweight (fundamental-coweight coordinates) of class ``d``.

    Candidates per simple factor are 0 and the fundamental coweights at which
    the highest root has coefficient 1.
    """
    pi1ad = pi1ad or lt.cokernel(rs.cartan, rs.rank)
    d = pi1ad.reduce(d)
    if not any(d):
        raise RootDataError("the zero class has no minuscule lift")
    per_factor = []
    for f, theta in enumerate(rs.highest_roots):
        per_factor.append([None] + [i for i in rs.factor_slice(f) if theta[i] == 1])
    found = []
    for choice in product(*per_factor):
        delta = [0] * rs.rank
        for i in choice:
            if i is not None:
                delta[i] = 1
        if pi1ad.coordinates(delta) == d and is_minuscule(rs, delta):
            found.append(tuple(delta))
    if len(found) != 1:
        raise lt.IntegrityError(f"expected one minuscule lift of {d}, found {len(found)}")
    return found[0]
