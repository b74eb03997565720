"""Command-line interface: ``cellres {resolve,verify,closure,export,info}``."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from .cellcomplex import build_periodic_complex, fh_p2_complex
from .exactmath import IntMatrix, UnboundedError, invariant_factors
from .lattice import (LatticeEmbedding, embedding_from_basis, lattice_from_toric_embedding, lawrence_lift,
                      quotient_grading)
from .rescomplex import (betti_table, build_resolution, closure_generators, minimality, monomial_module_generators,
                         render_text, term_summary, to_json, to_macaulay2)
from .stratify import CompatibilityError, anderson, ceiling, lcm_from_vertices, variable_names
from .verify import pointedness_check, resolution_certificate


class InputError(ValueError):
    pass


# ------------------------------------------------------------------ parsing

def parse_rational(s: str) -> Fraction:
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError):
        raise InputError(f"not a rational number: {s!r}") from None


def parse_vector(s: str) -> tuple[Fraction, ...]:
    return tuple(parse_rational(x) for x in s.split(",")) if s.strip() else ()


def _int_matrix(obj, what: str) -> list[list[int]]:
    if not isinstance(obj, list) or not all(isinstance(r, list) for r in obj):
        raise InputError(f"{what} must be a JSON array of row arrays")
    for r in obj:
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in r):
            raise InputError(f"{what} must contain integers only")
    if obj and len({len(r) for r in obj}) != 1:
        raise InputError(f"{what} has rows of different lengths")
    return obj


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}") from None


def lattice_from_json(data, mode: str | None = None) -> LatticeEmbedding:
    """Accepts {"n", "basis"} (basis vectors as arrays), {"rays", "mode": "lawrence"} or {"phi_star", "nu"}."""
    if not isinstance(data, dict):
        raise InputError("lattice file must hold a JSON object")
    mode = mode or data.get("mode")
    if mode is None:
        mode = "toric" if "nu" in data else "lawrence" if "rays" in data else "direct"
    if mode == "direct":
        if "basis" not in data:
            raise InputError("direct mode needs a \"basis\" key")
        vecs = _int_matrix(data["basis"], "basis")
        n = data.get("n", len(vecs[0]) if vecs else None)
        if not isinstance(n, int) or n < 0:
            raise InputError("\"n\" must be a nonnegative integer")
        if any(len(v) != n for v in vecs):
            raise InputError(f"every basis vector must have length n = {n}")
        B = IntMatrix([[v[i] for v in vecs] for i in range(n)], n, len(vecs))
        try:
            return embedding_from_basis(B)
        except ValueError as e:
            raise InputError(str(e)) from None
    if mode == "lawrence":
        if "rays" not in data:
            raise InputError("lawrence mode needs a \"rays\" key")
        try:
            return lawrence_lift(_int_matrix(data["rays"], "rays"))
        except ValueError as e:
            raise InputError(str(e)) from None
    if mode == "toric":
        if "nu" not in data or "phi_star" not in data:
            raise InputError("toric mode needs \"phi_star\" and \"nu\" keys")
        nu = _int_matrix(data["nu"], "nu")
        ph = _int_matrix(data["phi_star"], "phi_star")
        cols = len(nu[0]) if nu else 0
        try:
            return lattice_from_toric_embedding(IntMatrix(ph, len(ph), cols), IntMatrix(nu, len(nu), cols))
        except ValueError as e:
            raise InputError(str(e)) from None
    raise InputError(f"unknown mode {mode!r}")


def grading_from_json(data) -> list[list[int]]:
    if isinstance(data, dict):
        data = data.get("matrix", data.get("grading"))
    return _int_matrix(data, "grading")


# ------------------------------------------------------------------ pipeline

def _lattice(args) -> LatticeEmbedding:
    sources = [(f, getattr(args, f)) for f in ("basis", "rays", "embedding") if getattr(args, f, None)]
    if len(sources) != 1:
        raise InputError("give exactly one of --basis, --rays, --embedding (or --builtin fh-p2)")
    flag, path = sources[0]
    default_mode = {"basis": "direct", "rays": "lawrence", "embedding": "toric"}[flag]
    return lattice_from_json(_load_json(path), args.mode or default_mode)


def _epsilon_shift(L: LatticeEmbedding, eps: Fraction, coord: int) -> tuple[Fraction, ...]:
    """eps on first-block coordinate ``coord`` (1-based), mirrored with opposite sign in the second block."""
    if not 1 <= coord <= L.n:
        raise InputError(f"--epsilon-coord must lie in 1..{L.n}")
    s = [Fraction(0)] * L.n
    s[coord - 1] = eps
    if L.is_lawrence() and coord <= L.n // 2:
        s[coord - 1 + L.n // 2] = -eps
    return tuple(s)


def setup(args):
    """Returns (complex, stratification, grading, names)."""
    if getattr(args, "builtin", None) == "fh-p2" or args.strat == "fh-p2":
        C, psi = fh_p2_complex()
        G = quotient_grading(C.lattice, _grading(args, C.lattice, default=[[1, 1, 1, 0, 0, 0], [0, 0, 0, 1, 1, 1]]))
        return C, psi, G, variable_names(C.lattice.n, C.lattice.lawrence_m)
    L = _lattice(args)
    shift = tuple(Fraction(0) for _ in range(L.n))
    if args.shift:
        shift = parse_vector(args.shift)
        if len(shift) != L.n:
            raise InputError(f"--shift has {len(shift)} entries, expected {L.n}")
    if args.epsilon is not None:
        eps = parse_rational(args.epsilon)
        if eps <= 0:
            raise InputError("--epsilon must be positive")
        base = shift
        shift = tuple(a + b for a, b in zip(base, _epsilon_shift(L, eps, args.epsilon_coord)))
        half = tuple(a + b for a, b in zip(base, _epsilon_shift(L, eps / 2, args.epsilon_coord)))
        C, C2 = build_periodic_complex(L, shift), build_periodic_complex(L, half)
        if C.counts() != C2.counts():
            raise InputError(f"epsilon {eps} is not small enough: cell counts {C.counts()} change to "
                             f"{C2.counts()} when it is halved")
    else:
        C = build_periodic_complex(L, shift)
    psi = _stratification(args, C)
    G = quotient_grading(L, _grading(args, L))
    return C, psi, G, variable_names(L.n, L.lawrence_m)


def _grading(args, L, default=None):
    if getattr(args, "grading", None):
        m = grading_from_json(_load_json(args.grading))
        if m and len(m[0]) != L.n:
            raise InputError(f"grading matrix has {len(m[0])} columns, expected {L.n}")
        return m
    return default


def _stratification(args, C):
    if args.strat == "ceiling":
        return ceiling(C)
    if args.strat == "anderson":
        return anderson(C)
    if args.strat == "lcm":
        if not args.labels:
            raise InputError("--strat lcm needs --labels (JSON list of vertex labels in class order)")
        labs = _int_matrix(_load_json(args.labels), "labels")
        verts = C.cells_of_dim(0)
        if len(labs) != len(verts):
            raise InputError(f"--labels has {len(labs)} entries but the complex has {len(verts)} vertex classes")
        return lcm_from_vertices(C, {v.index: lab for v, lab in zip(verts, labs)})
    raise InputError(f"unknown stratification {args.strat!r}")


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


# ------------------------------------------------------------------ commands

def cmd_resolve(args) -> int:
    C, psi, G, names = setup(args)
    F = build_resolution(C, psi, G)
    m = minimality(F, C, psi)
    gens = monomial_module_generators(C, psi, G).render(names)
    betti = [{"index": i, "twist": list(a), "count": k} for (i, a), k in betti_table(F).items()]
    if args.format == "json":
        out = {"summary": {"terms": term_summary(F), "betti": betti, "minimal": m.minimal,
                           "generators": gens},
               "resolution": to_json(F)}
        _emit(args, _dump(out))
    elif args.format == "m2":
        _emit(args, to_macaulay2(F, G.coarsening))
    else:
        head = [f"stratification: {psi.kind}", f"counts: {list(C.counts())}",
                f"generators: {', '.join(gens)}", f"minimal: {str(m.minimal).lower()}"]
        _emit(args, "\n".join(head) + "\n" + render_text(F))
    return 0


def cmd_verify(args) -> int:
    C, psi, G, names = setup(args)
    cert = resolution_certificate(C, psi, G, join_depth=args.join_depth)
    _emit(args, _dump(cert.to_json(timing=args.timing)))
    return 0 if cert.passed else 1


def cmd_closure(args) -> int:
    L = _lattice(args)
    names = variable_names(L.n, L.lawrence_m)
    M = closure_generators(L)
    tors = [t for t in invariant_factors(L.iota) if t > 1] if L.d else []
    out = {"saturated": L.saturated, "torsion": tors,
           "generators": M.render(names), "exponents": [list(g) for g in M.generators]}
    if args.format == "json":
        _emit(args, _dump(out))
    else:
        lines = [f"saturated: {str(L.saturated).lower()}",
                 "torsion: " + (" + ".join(f"Z/{t}" for t in tors) if tors else "0"),
                 "generators:"] + [f"  {g}" for g in out["generators"]]
        _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_export(args) -> int:
    C, psi, G, names = setup(args)
    if args.what == "complex":
        _emit(args, _dump(C.to_json()))
    elif args.what == "stratification":
        _emit(args, _dump(psi.to_json(names)))
    else:
        F = build_resolution(C, psi, G)
        _emit(args, to_macaulay2(F, G.coarsening) if args.format == "m2" else _dump(to_json(F)))
    return 0


def cmd_info(args) -> int:
    if getattr(args, "builtin", None) == "fh-p2":
        L = fh_p2_complex()[0].lattice
    else:
        L = _lattice(args)
    G = quotient_grading(L)
    pt = pointedness_check(L)
    out = {"n": L.n, "d": L.d, "saturated": L.saturated, "lawrence": L.lawrence_m is not None,
           "quotient_free_rank": G.free_rank, "quotient_torsion": list(G.torsion),
           "pointed": pt.pointed, "pointedness_witness": list(pt.witness) if pt.witness else None}
    try:
        C = build_periodic_complex(L)
        out["cell_counts"] = list(C.counts())
    except UnboundedError as e:
        out["cell_counts"] = None
        out["unbounded_direction"] = list(e.direction) if e.direction else None
    _emit(args, _dump(out))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cellres", description="Cellular resolutions of monomial modules over lattices.")
    sub = p.add_subparsers(dest="command", required=True)

    def lattice_opts(sp, builtin=True):
        g = sp.add_argument_group("lattice input")
        g.add_argument("--basis", help="JSON {\"n\": n, \"basis\": [vector, ...]}")
        g.add_argument("--rays", help="JSON {\"rays\": [[...], ...]} (Lawrence lifting of the ray matrix)")
        g.add_argument("--embedding", help="JSON {\"phi_star\": [[...]], \"nu\": [[...]]}")
        g.add_argument("--mode", choices=("direct", "lawrence", "toric"))
        if builtin:
            g.add_argument("--builtin", choices=("fh-p2",), help="built-in complex (P^2 diagonal staircase)")

    def strat_opts(sp):
        sp.add_argument("--strat", choices=("ceiling", "anderson", "lcm", "fh-p2"), default="ceiling")
        sp.add_argument("--shift", help="comma-separated rationals, e.g. \"-1/2,0,-1/2,0\"")
        sp.add_argument("--epsilon", nargs="?", const="1/100", default=None,
                        help="perturb by a small rational (default 1/100 when given without a value)")
        sp.add_argument("--epsilon-coord", type=int, default=3,
                        help="1-based coordinate carrying epsilon (mirrored in the second Lawrence block)")
        sp.add_argument("--labels", help="vertex labels for --strat lcm")
        sp.add_argument("--grading", help="JSON coarsening matrix G with G*iota = 0")
        sp.add_argument("--out", help="write to this file instead of stdout")

    r = sub.add_parser("resolve", help="build the cellular free complex")
    lattice_opts(r)
    strat_opts(r)
    r.add_argument("--format", choices=("json", "text", "m2"), default="text")
    r.set_defaults(func=cmd_resolve)

    v = sub.add_parser("verify", help="certify that the complex is a resolution")
    lattice_opts(v)
    strat_opts(v)
    v.add_argument("--join-depth", type=int, default=2)
    v.add_argument("--timing", action="store_true", help="include the runtime (makes output nondeterministic)")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("closure", help="generators of the integral closure module")
    lattice_opts(c, builtin=False)
    c.add_argument("--format", choices=("json", "text"), default="text")
    c.add_argument("--out")
    c.set_defaults(func=cmd_closure)

    e = sub.add_parser("export", help="dump the complex, stratification or resolution")
    lattice_opts(e)
    strat_opts(e)
    e.add_argument("--what", choices=("complex", "stratification", "resolution"), default="complex")
    e.add_argument("--format", choices=("json", "m2"), default="json")
    e.set_defaults(func=cmd_export)

    i = sub.add_parser("info", help="lattice summary")
    lattice_opts(i)
    i.add_argument("--out")
    i.set_defaults(func=cmd_info)
    return p


def _glue_values(argv: list[str]) -> list[str]:
    # argparse reads "-1/2,0" as an option; glue such values to their flag
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in ("--shift", "--epsilon") and i + 1 < len(argv) and argv[i + 1].startswith("-") \
                and len(argv[i + 1]) > 1 and (argv[i + 1][1].isdigit() or argv[i + 1][1] == "."):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(_glue_values(argv))
    if getattr(args, "join_depth", 2) < 1:
        print("error: --join-depth must be at least 1", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (InputError, CompatibilityError, UnboundedError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
