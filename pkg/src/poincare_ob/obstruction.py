"""Orders of the obstruction against Poincare families, and the report built on them."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from math import lcm
from typing import Sequence

from . import lattice as lt
from .psi import PsiGroup, ev_map, psi_group, psi_prime
from .rootdata import IsogenyData, RootDatum, TypeClass, isogeny_data, reduce_type

REPORT_SCHEMA_VERSION = 1

VALID = "valid"
RELAXED = "valid-char0-relaxed"
INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class Hypotheses:
    """Genus of the curve and characteristic of the base field (0, a prime, or "any")."""

    genus: int
    characteristic: int | str = "any"

    def __post_init__(self) -> None:
        if not isinstance(self.genus, int) or self.genus < 0:
            raise ValueError(f"genus must be a non-negative integer, got {self.genus!r}")
        c = self.characteristic
        if c != "any" and not (c == 0 or (isinstance(c, int) and lt.is_prime(c))):
            raise ValueError(f"characteristic must be 0, a prime or 'any', got {c!r}")

    @classmethod
    def parse(cls, genus: int, characteristic: str | int | None) -> "Hypotheses":
        if characteristic is None or str(characteristic).lower() == "any":
            return cls(genus, "any")
        try:
            c = int(characteristic)
        except ValueError:
            raise ValueError(f"characteristic must be 0, a prime or 'any', got {characteristic!r}") from None
        return cls(genus, c)

    def _flag(self, bound: int) -> str:
        if self.genus >= bound:
            return VALID
        if self.characteristic == 0 and self.genus == bound - 1:
            return RELAXED
        return INDETERMINATE

    @property
    def generic_flag(self) -> str:
        return self._flag(3)

    @property
    def global_flag(self) -> str:
        # char 0 and g = 2 also holds unless G maps nontrivially to PGL_2; not decided here
        return self._flag(4)


@dataclass(frozen=True)
class Analysis:
    """Every intermediate object of the obstruction computation for one (G, d)."""

    datum: RootDatum
    iso: IsogenyData
    type_class: TypeClass
    psi: PsiGroup
    psi_prime: PsiGroup
    ev_image: lt.FinAbGroup
    ev_cokernel: lt.FinAbGroup

    @property
    def generic_order(self) -> int:
        return lt.exponent(self.ev_cokernel)

    @property
    def global_order(self) -> int:
        return lcm(self.generic_order, self.iso.torsion_exponent)


def analyze(datum: RootDatum, d_lift: Sequence[int]) -> Analysis:
    iso = isogeny_data(datum)
    tc = reduce_type(datum, d_lift, iso)
    psi = psi_group(datum.root_system)
    pp = psi_prime(psi, iso)
    ev = ev_map(pp, iso, tc.d_bar_ad)
    image, coker = lt.hom_image_cokernel(ev.hom)
    if image.order * coker.order != ev.hom.target.order:
        raise lt.IntegrityError("|image| * |cokernel| != |target| for ev")
    return Analysis(datum, iso, tc, psi, pp, image, coker)


def generic_order(datum: RootDatum, d_lift: Sequence[int]) -> int:
    """Exponent of coker(ev): order of the obstruction at the generic point."""
    return analyze(datum, d_lift).generic_order


def global_order(datum: RootDatum, d_lift: Sequence[int]) -> int:
    """lcm of the generic order and the exponent of Hom(Z/Z^0, G_m)."""
    return analyze(datum, d_lift).global_order


def _group_dict(g: lt.FinAbGroup) -> dict:
    return g.to_dict()


@dataclass(frozen=True)
class ObstructionReport:
    group_name: str
    lattice_rank: int
    factors: tuple[str, ...]
    d_lift: tuple[int, ...]
    d_class: tuple[int, ...]
    d_bar: tuple[int, ...]
    pi1_G: dict
    pi1_Gad: dict
    psi: dict
    psi_prime: dict
    ev_image: tuple[int, ...]
    ev_cokernel: tuple[int, ...]
    generic_order: int
    center_torsion_exponent: int
    global_order: int
    exists_generic: bool
    exists_global: bool
    genus: int
    characteristic: int | str
    generic_hypothesis: str
    global_hypothesis: str
    spec_version: int = REPORT_SCHEMA_VERSION

    def to_dict(self) -> dict:
        d = asdict(self)
        for k, v in d.items():
            if isinstance(v, tuple):
                d[k] = list(v)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False)

    @classmethod
    def from_dict(cls, data: dict) -> "ObstructionReport":
        kwargs = {}
        for f in fields(cls):
            v = data[f.name]
            if isinstance(v, list):
                v = tuple(v)
            kwargs[f.name] = v
        return cls(**kwargs)

    @classmethod
    def from_json(cls, text: str) -> "ObstructionReport":
        return cls.from_dict(json.loads(text))


def report(datum: RootDatum, d_lift: Sequence[int], hyp: Hypotheses) -> ObstructionReport:
    a = analyze(datum, d_lift)
    psi_desc = {**_group_dict(a.psi.structure),
                "generators": [g.render() for g in a.psi.generators]}
    pp_desc = {**_group_dict(a.psi_prime.structure),
               "generators": [g.render() for g in a.psi_prime.generators]}
    return ObstructionReport(
        group_name=datum.name,
        lattice_rank=datum.lattice_rank,
        factors=tuple(str(t) for t in datum.factors),
        d_lift=tuple(int(x) for x in d_lift),
        d_class=a.type_class.d,
        d_bar=a.type_class.d_bar,
        pi1_G=_group_dict(a.iso.pi1_G),
        pi1_Gad=_group_dict(a.iso.pi1_Gad),
        psi=psi_desc,
        psi_prime=pp_desc,
        ev_image=a.ev_image.invariant_factors,
        ev_cokernel=a.ev_cokernel.invariant_factors,
        generic_order=a.generic_order,
        center_torsion_exponent=a.iso.torsion_exponent,
        global_order=a.global_order,
        exists_generic=a.generic_order == 1,
        exists_global=a.global_order == 1,
        genus=hyp.genus,
        characteristic=hyp.characteristic,
        generic_hypothesis=hyp.generic_flag,
        global_hypothesis=hyp.global_flag,
    )
