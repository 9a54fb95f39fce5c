"""Command-line front end: ``poincare-ob {describe,psi,obstruct,table,selftest}``."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import selftest
from .catalogue import MAX_RANK_BOUND, table_rows
from .lattice import IntegrityError
from .obstruction import Hypotheses, report
from .presets import GroupParseError, datum_to_dict, load_datum, parse_group
from .psi import psi_group, psi_prime
from .rootdata import RootDataError, RootDatum, isogeny_data

EXIT_OK, EXIT_INPUT, EXIT_INTEGRITY = 0, 2, 3


class InputError(ValueError):
    pass


def _z(g: dict) -> str:
    parts = ["Z"] * g["free_rank"] + [f"Z/{n}" for n in g["invariant_factors"]]
    return " + ".join(parts) if parts else "0"


def _matrix(rows) -> str:
    return "[" + ", ".join("[" + ", ".join(r) + "]" for r in rows) + "]"


def _load(args) -> RootDatum:
    if bool(args.group) == bool(args.datum):
        raise InputError("give exactly one of --group or --datum")
    if args.group:
        return parse_group(args.group)
    try:
        return load_datum(args.datum)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read datum file: {exc}") from None


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise InputError(f"--d must be comma-separated integers, got {text!r}") from None


def describe_payload(datum: RootDatum) -> dict:
    iso = isogeny_data(datum)
    return {
        "name": datum.name,
        "lattice_rank": datum.lattice_rank,
        "factors": [str(t) for t in datum.factors],
        "pi1_G": iso.pi1_G.to_dict(),
        "pi1_Gprime": iso.pi1_Gprime.group.to_dict(),
        "pi1_Gbar": iso.pi1_Gbar.group.to_dict(),
        "pi1_Gad": iso.pi1_Gad.to_dict(),
        "center_chars": iso.center_chars.to_dict(),
        "center_is_torus": iso.center_is_torus,
        "torsion_exponent": iso.torsion_exponent,
        "datum": datum_to_dict(datum),
    }


def cmd_describe(args) -> tuple[dict, str]:
    p = describe_payload(_load(args))
    text = "\n".join([
        f"group:              {p['name']}",
        f"lattice rank:       {p['lattice_rank']}",
        f"factors:            {' x '.join(p['factors']) or '(torus)'}",
        f"π₁(G):              {_z(p['pi1_G'])}",
        f"π₁(G'):             {_z(p['pi1_Gprime'])}",
        f"π₁(Ḡ):              {_z(p['pi1_Gbar'])}",
        f"π₁(G^ad):           {_z(p['pi1_Gad'])}",
        f"Hom(Z, G_m):        {_z(p['center_chars'])}",
        f"center is a torus:  {'yes' if p['center_is_torus'] else 'no'}",
    ])
    return p, text


def cmd_psi(args) -> tuple[dict, str]:
    datum = _load(args)
    iso = isogeny_data(datum)
    psi = psi_group(datum.root_system)
    pp = psi_prime(psi, iso)
    p = {
        "name": datum.name,
        "pi1_Gad": iso.pi1_Gad.to_dict(),
        "psi": {**psi.structure.to_dict(), "generators": [g.render() for g in psi.generators]},
        "psi_prime": {**pp.structure.to_dict(), "generators": [g.render() for g in pp.generators]},
    }
    lines = [f"group:      {datum.name}",
             f"π₁(G^ad):   {_z(p['pi1_Gad'])}",
             f"Ψ(G^ad):    {_z(p['psi'])}"]
    lines += [f"  generator {i}: {_matrix(g)}" for i, g in enumerate(p["psi"]["generators"])]
    lines.append(f"Ψ'(G):      {_z(p['psi_prime'])}")
    lines += [f"  generator {i}: {_matrix(g)}" for i, g in enumerate(p["psi_prime"]["generators"])]
    return p, "\n".join(lines)


def cmd_obstruct(args) -> tuple[dict, str]:
    if args.d is None or args.genus is None:
        raise InputError("obstruct requires --d and --genus")
    datum = _load(args)
    d = _ints(args.d)
    hyp = Hypotheses.parse(args.genus, args.char)
    r = report(datum, d, hyp)
    text = "\n".join([
        f"group:                 {r.group_name}",
        f"d (lift):              {list(r.d_lift)}",
        f"d in π₁(G):            {list(r.d_class)}",
        f"d̄ in π₁(Ḡ):            {list(r.d_bar)}",
        f"Ψ(G^ad):               {_z(r.psi)}",
        f"Ψ'(G):                 {_z(r.psi_prime)}",
        f"image of ev:           {_z({'free_rank': 0, 'invariant_factors': r.ev_image})}",
        f"coker of ev:           {_z({'free_rank': 0, 'invariant_factors': r.ev_cokernel})}",
        f"generic order:         {r.generic_order}",
        f"exp Hom(Z/Z⁰, G_m):    {r.center_torsion_exponent}",
        f"global order:          {r.global_order}",
        f"Poincaré family on some open U: {'yes' if r.exists_generic else 'no'} ({r.generic_hypothesis})",
        f"Poincaré family on all of M^rs: {'yes' if r.exists_global else 'no'} ({r.global_hypothesis})",
    ])
    return r.to_dict(), text


def cmd_table(args) -> tuple[dict, str]:
    bound = args.rank_bound
    if not 1 <= bound <= MAX_RANK_BOUND:
        raise InputError(f"--rank-bound must be between 1 and {MAX_RANK_BOUND}, got {bound}")
    rows = table_rows(bound)
    lines = [f"{'type':<6}{'π₁(G^ad)':<12}{'Ψ(G^ad)':<10}generator"]
    for r in rows:
        gen = _matrix(r["generator"]) if r["generator"] else "---"
        lines.append(f"{r['type']:<6}{_z(r['pi1']):<12}{_z(r['psi']):<10}{gen}")
    return {"rank_bound": bound, "rows": rows}, "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="poincare-ob",
                                 description="Obstruction orders for Poincaré families of G-bundles.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, needs_group=True):
        if needs_group:
            p.add_argument("--group", help='group expression, e.g. "GL(3) x SC(E7)"')
            p.add_argument("--datum", help="root datum JSON file")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--out", help="write output to this file instead of stdout")

    common(sub.add_parser("describe", help="fundamental groups and center of G"))
    common(sub.add_parser("psi", help="Psi(G^ad) and Psi'(G)"))
    ob = sub.add_parser("obstruct", help="obstruction orders for a topological type")
    common(ob)
    ob.add_argument("--d", help="lift of the type d to the cocharacter lattice, comma-separated")
    ob.add_argument("--genus", type=int)
    ob.add_argument("--char", default="any", help="0, a prime, or 'any'")
    tb = sub.add_parser("table", help="Psi for every simple type up to a rank bound")
    common(tb, needs_group=False)
    tb.add_argument("--rank-bound", type=int, default=MAX_RANK_BOUND)
    st = sub.add_parser("selftest", help="run the built-in property checks")
    common(st, needs_group=False)
    st.add_argument("--seed", type=int, default=20240601)
    st.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    return ap


COMMANDS = {"describe": cmd_describe, "psi": cmd_psi, "obstruct": cmd_obstruct, "table": cmd_table}


def _emit(args, payload: dict, text: str) -> None:
    out = json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) if args.format == "json" else text
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out + "\n")
    else:
        print(out)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "selftest":
            outcomes = selftest.run(args.seed, args.inject_fault)
            payload = {"outcomes": [o.__dict__ for o in outcomes]}
            _emit(args, payload, selftest.render(outcomes))
            return EXIT_OK if all(o.status != selftest.FAIL for o in outcomes) else 1
        payload, text = COMMANDS[args.command](args)
        _emit(args, payload, text)
        return EXIT_OK
    except IntegrityError as exc:
        print(f"internal integrity violation: {exc}", file=sys.stderr)
        return EXIT_INTEGRITY
    except (InputError, GroupParseError, RootDataError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
