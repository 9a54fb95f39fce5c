"""Exact integer lattice algebra and finitely generated abelian groups.

Matrices are plain nested tuples/lists of Python ints (arbitrary precision).
Nothing in here touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import product
from math import gcd, lcm
from typing import Iterable, Iterator, Sequence

Matrix = tuple[tuple[int, ...], ...]
Vector = tuple[int, ...]


class IntegrityError(RuntimeError):
    """An internal consistency check failed; indicates a bug, not bad input."""


# ---------------------------------------------------------------------------
# small matrix helpers


def as_matrix(rows: Iterable[Iterable[int]]) -> Matrix:
    return tuple(tuple(int(x) for x in r) for r in rows)


def zeros(m: int, n: int) -> list[list[int]]:
    return [[0] * n for _ in range(m)]


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def shape(a: Sequence[Sequence], cols: int | None = None) -> tuple[int, int]:
    """Shape of a row-major matrix; ``cols`` disambiguates 0-row matrices."""
    m = len(a)
    if m:
        return m, len(a[0])
    return 0, cols or 0


def transpose(a: Sequence[Sequence], cols: int = 0) -> tuple:
    m, n = shape(a, cols)
    return tuple(tuple(a[i][j] for i in range(m)) for j in range(n))


def matmul(a: Sequence[Sequence], b: Sequence[Sequence], inner: int | None = None) -> tuple:
    m = len(a)
    k = len(a[0]) if m else (inner if inner is not None else len(b))
    n = len(b[0]) if len(b) else 0
    return tuple(
        tuple(sum(a[i][t] * b[t][j] for t in range(k)) for j in range(n)) for i in range(m)
    )


def matvec(a: Sequence[Sequence], x: Sequence) -> tuple:
    return tuple(sum(r[j] * x[j] for j in range(len(x))) for r in a)


def columns(a: Sequence[Sequence], cols: int = 0) -> list[tuple]:
    return list(transpose(a, cols))


def from_columns(cols: Sequence[Sequence[int]], rows: int) -> Matrix:
    """Matrix whose columns are ``cols``; ``rows`` fixes the height for empty input."""
    return tuple(tuple(int(c[i]) for c in cols) for i in range(rows))


def hstack(*blocks: Sequence[Sequence[int]], rows: int) -> Matrix:
    out = [[] for _ in range(rows)]
    for b in blocks:
        for i in range(rows):
            out[i].extend(b[i] if len(b) else ())
    return as_matrix(out)


def block_diagonal(blocks: Sequence[tuple[Sequence[Sequence[int]], int, int]]) -> Matrix:
    """Block diagonal matrix from ``(matrix, rows, cols)`` triples."""
    m = sum(b[1] for b in blocks)
    n = sum(b[2] for b in blocks)
    out = zeros(m, n)
    r0 = c0 = 0
    for b, r, c in blocks:
        for i in range(r):
            for j in range(c):
                out[r0 + i][c0 + j] = b[i][j]
        r0 += r
        c0 += c
    return as_matrix(out)


def det(a: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def rational_inverse(a: Sequence[Sequence[int]]) -> tuple[tuple[Fraction, ...], ...]:
    """Inverse of a nonsingular square integer matrix over the rationals."""
    n = len(a)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(a)]
    for c in range(n):
        p = next((r for r in range(c, n) if aug[r][c] != 0), None)
        if p is None:
            raise ValueError("matrix is singular")
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        aug[c] = [x / piv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return tuple(tuple(row[n:]) for row in aug)


def integer_inverse(a: Sequence[Sequence[int]]) -> Matrix:
    """Inverse of a unimodular matrix."""
    inv = rational_inverse(a)
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return as_matrix([[int(x) for x in row] for row in inv])


# ---------------------------------------------------------------------------
# Smith and Hermite normal forms


@dataclass(frozen=True)
class SmithDecomposition:
    """``u @ a @ v == d`` with ``u``, ``v`` unimodular and ``d`` in Smith form."""

    u: Matrix
    v: Matrix
    d: Matrix
    rows: int
    cols: int

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.d[i][i] for i in range(min(self.rows, self.cols)))

    @property
    def rank(self) -> int:
        return sum(1 for x in self.diagonal if x != 0)


def _smallest_nonzero(d: list[list[int]], t: int, m: int, n: int) -> tuple[int, int] | None:
    best = None
    best_val = 0
    for i in range(t, m):
        row = d[i]
        for j in range(t, n):
            x = row[j]
            if x and (best is None or abs(x) < best_val):
                best, best_val = (i, j), abs(x)
                if best_val == 1:
                    return best
    return best


def smith_normal_form(a: Sequence[Sequence[int]], cols: int = 0) -> SmithDecomposition:
    """Smith normal form with transforms.

    The pivot is always the entry of smallest nonzero absolute value in the
    remaining block, ties broken by lowest row and then lowest column, so the
    output is a deterministic function of the input.
    """
    m, n = shape(a, cols)
    d = [list(map(int, r)) for r in a]
    u = [list(r) for r in identity(m)]
    v = [list(r) for r in identity(n)]

    def swap_rows(i: int, j: int) -> None:
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for r in d:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(dst: int, src: int, q: int) -> None:
        # row_dst += q * row_src
        d[dst] = [x + q * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst: int, src: int, q: int) -> None:
        for r in d:
            r[dst] += q * r[src]
        for r in v:
            r[dst] += q * r[src]

    t = 0
    while t < min(m, n):
        pos = _smallest_nonzero(d, t, m, n)
        if pos is None:
            break
        while True:
            i, j = pos
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            p = d[t][t]
            dirty = False
            for i in range(t + 1, m):
                if d[i][t]:
                    add_row(i, t, -(d[i][t] // p))
                    dirty = dirty or d[i][t] != 0
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(j, t, -(d[t][j] // p))
                    dirty = dirty or d[t][j] != 0
            if dirty:
                pos = _smallest_nonzero(d, t, m, n)
                continue
            # row and column clear; enforce divisibility of the rest
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if d[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
            pos = _smallest_nonzero(d, t, m, n)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return SmithDecomposition(as_matrix(u), as_matrix(v), as_matrix(d), m, n)


def hermite_rows(vectors: Iterable[Sequence[int]], dim: int) -> Matrix:
    """Row-style Hermite normal form of the lattice spanned by ``vectors``.

    Returns the nonzero rows: echelon form, positive pivots, entries above
    each pivot reduced into ``[0, pivot)``. This is a canonical basis.
    """
    rows = [list(map(int, v)) for v in vectors if any(v)]
    out: list[list[int]] = []
    col = 0
    while rows and col < dim:
        nz = [r for r in rows if r[col]]
        if not nz:
            col += 1
            continue
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            p = nz[0]
            for r in nz[1:]:
                q = r[col] // p[col]
                for k in range(col, dim):
                    r[k] -= q * p[k]
            nz = [r for r in nz if r[col]]
        piv = nz[0]
        if piv[col] < 0:
            piv[:] = [-x for x in piv]
        rows = [r for r in rows if r is not piv and any(r)]
        out.append(piv)
        col += 1
    # reduce above pivots
    for i, r in enumerate(out):
        pc = next(k for k in range(dim) if r[k])
        for above in out[:i]:
            q = above[pc] // r[pc]
            if q:
                for k in range(dim):
                    above[k] -= q * r[k]
    return as_matrix(out)


def lattice_basis(gens: Sequence[Sequence[int]], dim: int) -> Matrix:
    """Canonical basis (as columns, ``dim`` rows) of the lattice spanned by ``gens``."""
    return from_columns(hermite_rows(gens, dim), dim)


# ---------------------------------------------------------------------------
# kernels, saturation, solving


def kernel_basis(a: Sequence[Sequence[int]], cols: int = 0) -> Matrix:
    """Columns form a Z-basis of ``{x : a x = 0}`` (canonical Hermite basis)."""
    m, n = shape(a, cols)
    snf = smith_normal_form(a, n)
    r = snf.rank
    vecs = [[snf.v[i][j] for i in range(n)] for j in range(r, n)]
    return lattice_basis(vecs, n)


def saturation(sub: Sequence[Sequence[int]], ambient_rank: int) -> Matrix:
    """Basis (columns) of the saturation of the column span of ``sub`` in Z^n."""
    n = ambient_rank
    gens = columns(sub) if len(sub) and len(sub[0]) else []
    if not gens:
        return from_columns([], n)
    left = kernel_basis(transpose(sub), n)  # n x k, annihilators of the span
    k = len(left[0]) if n and len(left) else 0
    if k == 0:
        return identity(n)
    return kernel_basis(transpose(left, k), n)


def solve_integer(a: Sequence[Sequence[int]], b: Sequence[int], cols: int = 0) -> Vector | None:
    """Some integer ``x`` with ``a x = b``, or ``None`` if there is none."""
    m, n = shape(a, cols)
    snf = smith_normal_form(a, n)
    ub = matvec(snf.u, b)
    y = [0] * n
    for i in range(m):
        di = snf.d[i][i] if i < n else 0
        if di == 0:
            if ub[i] != 0:
                return None
        else:
            if ub[i] % di:
                return None
            y[i] = ub[i] // di
    return matvec(snf.v, y)


# ---------------------------------------------------------------------------
# finitely generated abelian groups


@dataclass(frozen=True)
class FinAbGroup:
    """Z^free_rank + Z/n_1 + ... + Z/n_k with n_i >= 2 and n_i | n_{i+1}.

    ``generator_lifts`` holds one ambient vector per generator (free part
    first).  ``coord_map`` rows send an ambient vector to generator
    coordinates; both are optional and refer to the same ambient lattice.
    """

    free_rank: int
    invariant_factors: tuple[int, ...]
    generator_lifts: tuple[Vector, ...] | None = None
    coord_map: Matrix | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        fs = self.invariant_factors
        if any(f < 2 for f in fs) or any(b % a for a, b in zip(fs, fs[1:])):
            raise ValueError(f"bad invariant factors {fs}")
        if self.generator_lifts is not None and len(self.generator_lifts) != self.ngens:
            raise ValueError("one lift per generator required")

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.invariant_factors)

    @property
    def orders(self) -> tuple[int, ...]:
        """Generator orders, 0 standing for infinite order."""
        return (0,) * self.free_rank + self.invariant_factors

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def is_trivial(self) -> bool:
        return self.ngens == 0

    @property
    def order(self) -> int:
        if not self.is_finite:
            raise ValueError("infinite group has no finite order")
        return reduce(lambda x, y: x * y, self.invariant_factors, 1)

    @property
    def structure(self) -> tuple[int, tuple[int, ...]]:
        return self.free_rank, self.invariant_factors

    def reduce(self, coords: Sequence[int]) -> Vector:
        return tuple(c % o if o else c for c, o in zip(coords, self.orders))

    def coordinates(self, x: Sequence[int]) -> Vector:
        """Generator coordinates of an ambient vector."""
        if self.coord_map is None:
            raise ValueError("group carries no coordinate map")
        return self.reduce(matvec(self.coord_map, x))

    def lift(self, coords: Sequence[int]) -> Vector:
        if self.generator_lifts is None:
            raise ValueError("group carries no generator lifts")
        if not self.generator_lifts:
            return ()
        dim = len(self.generator_lifts[0])
        return tuple(sum(c * g[i] for c, g in zip(coords, self.generator_lifts)) for i in range(dim))

    def relations(self) -> Matrix:
        """Diagonal relation matrix of the generator presentation."""
        k = self.ngens
        return as_matrix([[self.orders[i] if i == j else 0 for j in range(k)] for i in range(k)])

    def elements(self) -> Iterator[Vector]:
        if not self.is_finite:
            raise ValueError("cannot enumerate an infinite group")
        return product(*(range(n) for n in self.invariant_factors))

    def element_order(self, coords: Sequence[int]) -> int:
        if not self.is_finite:
            raise ValueError("infinite group")
        return reduce(lcm, (n // gcd(n, c) for c, n in zip(coords, self.invariant_factors)), 1)

    def describe(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z/{n}" for n in self.invariant_factors]
        return " + ".join(parts) if parts else "0"

    def to_dict(self) -> dict:
        return {"free_rank": self.free_rank, "invariant_factors": list(self.invariant_factors)}


TRIVIAL = FinAbGroup(0, (), (), ())


def _group_from_snf(snf: SmithDecomposition, n: int) -> FinAbGroup:
    """Z^n / column-span, read off from a Smith decomposition of the relations."""
    diag = list(snf.diagonal) + [0] * (n - len(snf.diagonal))
    uinv = integer_inverse(snf.u) if n else ()
    free = [i for i in range(n) if diag[i] == 0]
    tors = [i for i in range(n) if diag[i] > 1]
    lifts, cmap = [], []
    for i in free + tors:
        lift = [uinv[r][i] for r in range(n)]
        row = list(snf.u[i])
        # rescale by a unit so the first basis vector with a unit coordinate reads +1
        o = diag[i]
        k = next((k for k in range(n) if (gcd(row[k], o) == 1 if o else row[k] in (1, -1))), None)
        if k is not None:
            scale = row[k] if o == 0 else pow(row[k], -1, o)
            row = [scale * x for x in row]
            if o:
                row = [x % o for x in row]
                lift = [row_k * x for x in lift] if (row_k := snf.u[i][k] % o) != 1 else lift
            else:
                lift = [scale * x for x in lift]
        lifts.append(tuple(lift))
        cmap.append(tuple(row))
    g = FinAbGroup(len(free), tuple(diag[i] for i in tors), tuple(lifts), as_matrix(cmap))
    # prefer standard basis vectors as lifts where one represents the generator exactly
    basis_coords = [g.coordinates(e) for e in identity(n)]
    for i in range(g.ngens):
        unit = tuple(int(i == j) for j in range(g.ngens))
        k = next((k for k, c in enumerate(basis_coords) if c == unit), None)
        if k is not None:
            lifts[i] = identity(n)[k]
    return FinAbGroup(g.free_rank, g.invariant_factors, tuple(lifts), g.coord_map)


def cokernel(a: Sequence[Sequence[int]], rows: int | None = None) -> FinAbGroup:
    """Z^n modulo the column span of ``a`` (``n`` = number of rows)."""
    n = len(a) if rows is None else rows
    k = len(a[0]) if len(a) else 0
    return _group_from_snf(smith_normal_form(a, k), n)


def subquotient(amb: FinAbGroup, sub_gens: Sequence[Sequence[int]]) -> FinAbGroup:
    """``amb`` modulo the subgroup generated by ``sub_gens`` (generator coordinates).

    Lifts and coordinate map of the result refer to ``amb``'s ambient lattice
    when ``amb`` carries them, otherwise to ``amb``'s generator coordinates.
    """
    k = amb.ngens
    rel = hstack(amb.relations(), from_columns(sub_gens, k), rows=k)
    q = cokernel(rel, k)
    lifts = q.generator_lifts
    cmap = q.coord_map
    if amb.generator_lifts is not None:
        lifts = tuple(amb.lift(g) for g in lifts)
    if amb.coord_map is not None and cmap is not None:
        cmap = matmul(cmap, amb.coord_map, k) if k else amb.coord_map[:0]
    return FinAbGroup(q.free_rank, q.invariant_factors, lifts, cmap)


def dual_group(g: FinAbGroup) -> FinAbGroup:
    """Hom(g, Q/Z) for finite ``g``.

    Coordinates ``a`` stand for the character sending generator ``j`` to
    ``a_j / n_j``; the generators are the dual basis characters.
    """
    if not g.is_finite:
        raise ValueError("dual group is only taken of finite groups")
    k = g.ngens
    return FinAbGroup(0, g.invariant_factors, identity(k), identity(k))


def character_value(g: FinAbGroup, chi: Sequence[int], x: Sequence[int]) -> Fraction:
    """Value in [0, 1) of the character ``chi`` (dual coordinates) at ``x``."""
    v = sum((Fraction(a * c, n) for a, c, n in zip(chi, x, g.invariant_factors)), Fraction(0))
    return v - (v.numerator // v.denominator)


def exponent(g: FinAbGroup) -> int:
    if not g.is_finite:
        raise ValueError("exponent of an infinite group is undefined")
    return g.invariant_factors[-1] if g.invariant_factors else 1


@dataclass(frozen=True)
class Subgroup:
    """Subgroup of ``ambient`` generated by ``gens`` (ambient generator coordinates).

    ``group`` is the abstract structure; its generator lifts are the chosen
    generators written in ambient generator coordinates.  ``combos[j]`` writes
    generator ``j`` as an integer combination of ``gens``.
    """

    ambient: FinAbGroup
    gens: tuple[Vector, ...]
    group: FinAbGroup
    combos: tuple[Vector, ...]
    _coord_map: Matrix

    def coordinates(self, element: Sequence[int]) -> Vector | None:
        """Coordinates of ``element`` in ``group``, or ``None`` if not a member."""
        c = self.combination(element)
        if c is None:
            return None
        return self.group.reduce(matvec(self._coord_map, c))

    def combination(self, element: Sequence[int]) -> Vector | None:
        """Integer coefficients over ``gens`` producing ``element``, if any."""
        k, s = self.ambient.ngens, len(self.gens)
        a = hstack(from_columns(self.gens, k), self.ambient.relations(), rows=k)
        sol = solve_integer(a, element, s + k)
        return None if sol is None else sol[:s]

    def __contains__(self, element: Sequence[int]) -> bool:
        return self.combination(element) is not None


def subgroup(amb: FinAbGroup, gens: Sequence[Sequence[int]]) -> Subgroup:
    """Structure of the subgroup generated by ``gens`` inside ``amb``."""
    k, s = amb.ngens, len(gens)
    gens = tuple(amb.reduce(g) for g in gens)
    # relations among the given generators: c with sum c_i g_i in amb's relation lattice
    a = hstack(from_columns(gens, k), amb.relations(), rows=k)
    ker = kernel_basis(a, s + k)
    kcols = [c[:s] for c in columns(ker, len(ker[0]) if ker and ker[0] else 0)]
    g = cokernel(from_columns(kcols, s), s)
    combos = g.generator_lifts
    lifts = tuple(
        amb.reduce(tuple(sum(c * gv[i] for c, gv in zip(combo, gens)) for i in range(k)))
        for combo in combos
    )
    group = FinAbGroup(g.free_rank, g.invariant_factors, lifts)
    return Subgroup(amb, gens, group, combos, g.coord_map)


@dataclass(frozen=True)
class AbelianHom:
    """Homomorphism given by images of source generators in target coordinates.

    ``matrix`` is target.ngens x source.ngens.
    """

    source: FinAbGroup
    target: FinAbGroup
    matrix: Matrix

    def __post_init__(self) -> None:
        t, s = self.target.ngens, self.source.ngens
        if len(self.matrix) != t or (t and any(len(r) != s for r in self.matrix)):
            raise ValueError("matrix shape does not match source/target")
        for i, n in enumerate(self.source.orders):
            if n and any(self.target.reduce(tuple(n * self.matrix[r][i] for r in range(t)))):
                raise ValueError(f"generator {i} has order {n} but its image does not")

    def __call__(self, x: Sequence[int]) -> Vector:
        return self.target.reduce(matvec(self.matrix, x)) if self.target.ngens else ()

    def image_generators(self) -> list[Vector]:
        return [self.target.reduce(c) for c in columns(self.matrix, self.source.ngens)] \
            if self.target.ngens else [() for _ in range(self.source.ngens)]


def hom_image_cokernel(h: AbelianHom) -> tuple[FinAbGroup, FinAbGroup]:
    """Image and cokernel of ``h`` in invariant-factor form."""
    gens = h.image_generators()
    image = subgroup(h.target, gens).group
    coker = subquotient(h.target, gens)
    return image, coker


def hom_kernel(h: AbelianHom) -> Subgroup:
    """Kernel of ``h`` as a subgroup of its source."""
    s, t = h.source.ngens, h.target.ngens
    a = hstack(h.matrix if t else (), h.target.relations(), rows=t)
    ker = kernel_basis(a, s + t)
    nk = len(ker[0]) if ker and ker[0] else 0
    gens = [c[:s] for c in columns(ker, nk)]
    return subgroup(h.source, gens)


def invariant_factors_from_orders(order_counts: dict[int, int]) -> tuple[int, ...]:
    """Invariant factors of a finite abelian group from its element-order census.

    ``order_counts[k]`` is the number of elements of order exactly ``k``.  Uses
    only counting, so it serves as an independent check on SNF-derived
    structure.
    """
    size = sum(order_counts.values())
    if size == 1:
        return ()
    primes = sorted({p for p in _prime_factors(size)})

    def count_dividing(m: int) -> int:
        return sum(c for k, c in order_counts.items() if m % k == 0)

    # per prime: |G[p^j]| = p^(sum_i min(j, e_i)) gives the partition e_i
    per_prime: dict[int, list[int]] = {}
    for p in primes:
        logs = [0]
        j = 1
        while True:
            c = count_dividing(p ** j)
            e = _ilog(c, p)
            logs.append(e)
            if e == logs[-2]:
                break
            j += 1
        # number of cyclic factors of exponent >= j is logs[j] - logs[j-1]
        ge = [logs[j] - logs[j - 1] for j in range(1, len(logs))]
        exps = []
        for j in range(len(ge)):
            nxt = ge[j + 1] if j + 1 < len(ge) else 0
            exps.extend([j + 1] * (ge[j] - nxt))
        per_prime[p] = sorted(exps, reverse=True)
    width = max(len(v) for v in per_prime.values())
    factors = []
    for i in range(width):
        f = 1
        for p, exps in per_prime.items():
            if i < len(exps):
                f *= p ** exps[i]
        factors.append(f)
    return tuple(sorted(factors))


def _ilog(n: int, p: int) -> int:
    e = 0
    while n % p == 0 and n > 1:
        n //= p
        e += 1
    if n != 1:
        raise IntegrityError("subgroup size is not a prime power")
    return e


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        while n % p == 0:
            out.append(p)
            n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and _prime_factors(n) == [n]
