"""The Psi catalogue of simple adjoint types, and comparison up to automorphism."""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, Sequence

from . import lattice as lt
from .lattice import FinAbGroup, Vector
from .psi import PairingClass, frac_mod1, psi_group
from .rootdata import RootDataError, build_root_system, simple_types_up_to

MAX_RANK_BOUND = 8


def automorphisms(g: FinAbGroup) -> Iterator[tuple[Vector, ...]]:
    """Every automorphism of a finite group, as the tuple of generator images."""
    elems = list(g.elements())
    cands = [[x for x in elems if g.reduce(tuple(n * c for c in x)) == (0,) * g.ngens]
             for n in g.invariant_factors]
    size = g.order
    for images in product(*cands):
        if lt.subgroup(g, list(images)).group.order == size:
            yield images


def transport(pc: PairingClass, images: Sequence[Vector]) -> PairingClass:
    """The pairing (x, y) -> pc(phi x, phi y) where phi sends generator i to images[i]."""
    return PairingClass(tuple(tuple(pc(a, b) for b in images) for a in images))


def generated_pairings(gens: Iterable[PairingClass], exponent: int) -> frozenset[PairingClass]:
    gens = list(gens)
    out = set()
    for cs in product(range(exponent), repeat=len(gens)):
        acc = None
        for c, g in zip(cs, gens):
            acc = g.scale(c) if acc is None else acc + g.scale(c)
        if acc is not None:
            out.add(acc)
    return frozenset(out)


def same_up_to_automorphism(g: FinAbGroup, a: frozenset[PairingClass], b: frozenset[PairingClass]) -> bool:
    """True if some automorphism of ``g`` carries the pairing set ``a`` onto ``b``."""
    if len(a) != len(b):
        return False
    for phi in automorphisms(g):
        if frozenset(transport(p, phi) for p in a) == b:
            return True
    return False


def mult_pairing(n: int) -> PairingClass:
    """Multiplication Z/n x Z/n -> Z/n, embedded in Q/Z."""
    return PairingClass(((frac_mod1(Fraction(1, n)),),))


def matrix_pairing(rows: Sequence[Sequence[int]], n: int) -> PairingClass:
    return PairingClass(tuple(tuple(frac_mod1(Fraction(x, n)) for x in r) for r in rows))


def table_rows(rank_bound: int) -> list[dict]:
    """One row per simple type of rank <= ``rank_bound`` in catalogue order."""
    if not 1 <= rank_bound <= MAX_RANK_BOUND:
        raise RootDataError(f"rank bound must be between 1 and {MAX_RANK_BOUND}, got {rank_bound}")
    rows = []
    for t in simple_types_up_to(rank_bound):
        psi = psi_group(build_root_system([t]))
        rows.append({
            "type": str(t),
            "pi1": psi.pi1.to_dict(),
            "psi": psi.structure.to_dict(),
            "generator": psi.generators[0].render() if psi.generators else None,
        })
    return rows
