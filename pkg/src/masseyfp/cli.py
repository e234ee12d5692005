"""Command line front end: ``masseyfp <command> --group FILE ...``.

Exit codes: 0 computed, 1 input error, 2 negative verdict (undefined Massey
product, unsolvable embedding problem, failed realization hypotheses),
3 budget exceeded.  Reports go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

import numpy as np

from . import __version__
from . import cohomology as co
from . import embed as em
from . import massey as ms
from . import unipotent as un
from .linalg import is_prime
from .errors import BudgetExceeded, MasseyFpError, PreconditionError
from .schema import SchemaError, load_group, parse_chars, parse_module, parse_subgroups

EXIT_OK, EXIT_INPUT, EXIT_NEGATIVE, EXIT_BUDGET = 0, 1, 2, 3
COMMANDS = ("group-info", "cohomology", "cup", "massey", "dwyer", "embed", "hstar", "local-global")


class InputError(Exception):
    pass


# -- serialization ------------------------------------------------------------


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def cochain_json(c: co.Cochain) -> dict:
    vals = c.values % c.p
    return {"degree": c.degree, "dim": c.module.dim, "values": vals[..., 0] if c.module.dim == 1 else vals}


def element_json(G, g: int):
    meta = G.meta
    if meta.get("kind") in ("unitriangular", "ubar"):
        return un.unipotent_of(G, g).to_json()["entries"]
    if G.matrices is not None:
        return G.matrices[g]
    return G.labels[g] if G.labels is not None else g


def hom_json(h, gens) -> dict:
    return {"source": h.source.name, "target": h.target.name,
            "generator_images": [{"generator": int(s), "image": h(s), "value": element_json(h.target, h(s))}
                                 for s in gens]}


def ds_json(ds: ms.DefiningSystem) -> dict:
    return {f"a{i}{j}" if ds.n < 9 else f"a{i},{j}": ds[i, j].values[:, 0] for (i, j) in ms.positions(ds.n)}


def emit_report(result: dict, fmt: str = "json") -> str:
    body = _plain(dict(result, version=__version__))
    if fmt == "json":
        return json.dumps(body, sort_keys=True, indent=2) + "\n"
    lines = []

    def walk(prefix, v):
        if isinstance(v, dict) and v:
            for k in sorted(v):
                walk(f"{prefix}.{k}" if prefix else k, v[k])
        else:
            lines.append(f"{prefix}: {json.dumps(v, sort_keys=True)}")

    walk("", body)
    return "\n".join(lines) + "\n"


# -- commands -----------------------------------------------------------------


def _need(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise InputError(f"{args.command} requires --{n.replace('_', '-')}")


def _chars(args, gs, count=None):
    _need(args, "chars")
    chis = parse_chars(args.chars, gs)
    if count is not None and len(chis) != count:
        raise InputError(f"{args.command} takes exactly {count} characters, got {len(chis)}")
    if args.n is not None and len(chis) != args.n:
        raise InputError(f"--n {args.n} disagrees with {len(chis)} characters")
    return chis


def cmd_group_info(args, gs):
    G = gs.group
    out = {"name": G.name, "kind": gs.descriptor.get("kind"), "order": G.order, "exponent": G.exponent,
           "abelian": G.is_abelian(), "generators": gs.generators, "generator_count": len(gs.generators),
           "minimal_generator_search": list(G.search_generators), "characters": gs.character_names}
    figs = []
    if args.plot_dir:
        from . import report
        figs.append(report.cayley_table(G, args.plot_dir))
    return EXIT_OK, out, figs


def cmd_cohomology(args, gs):
    _need(args, "p")
    M = parse_module(args.module, gs, args.p)
    top = 2 if args.n is None else args.n
    dims = {n: co.h_dim(n, M, budget=args.budget) for n in range(top + 1)}
    figs = []
    if args.plot_dir:
        from . import report
        figs.append(report.cohomology_dims(dims, f"{gs.group.name}, {args.module}, p={args.p}", args.plot_dir))
    return EXIT_OK, {"module": args.module, "module_dim": M.dim, "dims": dims}, figs


def cmd_cup(args, gs):
    _need(args, "p")
    a, b = _chars(args, gs, 2)
    w = co.is_coboundary(co.cup(a, b))
    return EXIT_OK, {"cup_is_zero": w is not None, "witness": None if w is None else cochain_json(w)}, []


def _verdict_json(v: ms.MasseyVerdict, gens):
    out = {"verdict": v.verdict, "defined": v.defined, "contains_zero": v.contains_zero,
           "strategy": v.strategy, "n": v.n, "witness_kind": v.witness_kind}
    w = v.witness
    if v.witness_kind == "cup":
        out["witness"] = {"pair": list(w["pair"]), "cup": cochain_json(w["cup"])}
    elif v.witness_kind == "defining_system":
        out["witness"] = ds_json(w)
    elif v.witness_kind == "coset":
        out["witness"] = {"defining_system": ds_json(w.defining_system),
                          "particular": cochain_json(w.particular.representative)}
    elif v.witness_kind == "lift":
        out["witness"] = {"rho_bar": hom_json(w["rho_bar"], gens), "lift": hom_json(w["lift"], gens),
                          "defining_system": ds_json(w["defining_system"])}
    elif v.witness_kind == "rho_bar":
        out["witness"] = {"rho_bar": hom_json(w, gens)}
    else:
        out["witness"] = None
    return out


def cmd_massey(args, gs):
    _need(args, "p")
    chis = _chars(args, gs)
    v = ms.nfold_vanishes(chis, args.strategy, args.budget)
    out = _verdict_json(v, gs.generators)
    if v.defined and v.n == 3:
        coset = ms.triple_massey(*chis)
        out["coset"] = {"spanning_classes": len(coset.indeterminacy_basis),
                        "indeterminacy_dim": ms.indeterminacy_dim(coset),
                        "particular_is_zero": coset.particular.is_zero()}
    figs = []
    if args.plot_dir and v.witness_kind == "defining_system" and gs.group.order <= 256:
        from . import report
        val = ms.value_cochain(v.witness).values[..., 0]
        figs.append(report.cochain_grid(val, "value of the witness system", args.plot_dir))
    return (EXIT_OK if v.defined else EXIT_NEGATIVE), out, figs


def cmd_dwyer(args, gs):
    _need(args, "p")
    chis = _chars(args, gs)
    v = em.dwyer_search(chis, args.budget)
    return (EXIT_OK if v.defined else EXIT_NEGATIVE), _verdict_json(v, gs.generators), []


def cmd_embed(args, gs):
    _need(args, "p")
    chis = _chars(args, gs, 3)
    gens = gs.generators
    if args.surjective:
        try:
            rho = em.u4_realization(*chis)
        except PreconditionError as exc:
            return EXIT_NEGATIVE, {"realized": False, "reason": exc.reason, "message": str(exc)}, []
        return EXIT_OK, {"realized": True, "surjective": True, "rho": hom_json(rho, gens)}, []
    alpha = em.superdiagonal_alpha(gs.group, chis, args.p)
    ep = em.u4_problem(alpha)
    ok, ob = em.hoechsmann_solvable(ep)
    beta = em.lift(alpha, ep.f, budget=args.budget)
    out = {"problem": {"group": gs.group.name, "extension": f"U4(F{args.p}) -> F{args.p}^3",
                       "alpha": hom_json(alpha, gens)},
           "obstruction_vanishes": ok, "lift_exists": beta is not None, "agree": ok == (beta is not None),
           "witness": None if beta is None else hom_json(beta, gens)}
    if ok:
        out["solution_from_obstruction"] = hom_json(em.solution_from_obstruction(ep, ob), gens)
    return (EXIT_OK if ok else EXIT_NEGATIVE), out, []


def cmd_hstar(args, gs):
    _need(args, "p")
    M = parse_module(args.module, gs, args.p)
    star = co.h1_star(M)
    return EXIT_OK, {"module": args.module, "h1_dim": len(co.h1_basis(M)), "h1_star_dim": len(star),
                     "h1_star_basis": [cochain_json(c.representative) for c in star]}, []


def cmd_local_global(args, gs):
    _need(args, "p")
    chis = _chars(args, gs, 3)
    subs = parse_subgroups(args.subgroups, gs.group)
    if ms.triple_massey(*chis) is None:
        return EXIT_NEGATIVE, {"defined": False}, []
    v = em.local_global_vanishing(gs.group, subs, *chis)
    out = {"defined": True, "subgroups": [{"order": len(S), "generators": [S.members[i] for i in S.group.search_generators]}
                         for S in subs],
           "injective_h2": v.hypothesis_holds,
           "kernel_witness": None if v.kernel_witness is None else cochain_json(v.kernel_witness),
           "local_solvable": v.local_solvable, "inferred": v.inferred, "direct_lift": v.direct_lift,
           "massey_contains_zero": v.massey_contains_zero, "consistent": v.consistent}
    return EXIT_OK, out, []


HANDLERS = {
    "group-info": cmd_group_info, "cohomology": cmd_cohomology, "cup": cmd_cup, "massey": cmd_massey,
    "dwyer": cmd_dwyer, "embed": cmd_embed, "hstar": cmd_hstar, "local-global": cmd_local_global,
}


class _ArgError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ArgError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="masseyfp", description="Cohomology and Massey products over F_p.")
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--group", required=True, metavar="FILE")
    ap.add_argument("--p", type=int)
    ap.add_argument("--n", type=int)
    ap.add_argument("--chars", metavar="SPEC", help="comma-separated character names; '-name' negates")
    ap.add_argument("--module", default="trivial", metavar="SPEC", help="trivial, trivialN, colvecN or @file")
    ap.add_argument("--subgroups", default="cyclic", metavar="SPEC", help="cyclic, lines, whole, trivial or @file")
    ap.add_argument("--strategy", default="auto", choices=("auto", "linear", "enumerate", "dwyer"))
    ap.add_argument("--budget", type=int, default=2**22)
    ap.add_argument("--surjective", action="store_true", help="embed: ask for a surjective U4 realization")
    ap.add_argument("--format", default="json", choices=("json", "text"))
    ap.add_argument("--plot-dir", metavar="DIR", help="also write figures into DIR")
    return ap


def run(argv, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except _ArgError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    try:
        if args.p is not None and not is_prime(args.p):
            raise InputError(f"--p must be prime, got {args.p}")
        gs = load_group(args.group, args.p)
        code, result, figs = HANDLERS[args.command](args, gs)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc} {exc.dims}", file=stderr)
        return EXIT_BUDGET
    except (InputError, SchemaError, OSError, MasseyFpError, ValueError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    except Exception as exc:  # keep the exit-code contract closed
        print(f"internal error: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_INPUT
    report = {"command": args.command, "group": gs.group.name, "p": args.p, "result": result}
    if figs:
        report["figures"] = figs
    stdout.write(emit_report(report, args.format))
    return code


def main(argv: Optional[list] = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
