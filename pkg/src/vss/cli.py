"""Command line driver: build, decompose, semisimplify, verify.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 precondition
violation (not an automorphism, wrong order, invalid heads, missing trace).
"""

import argparse
import json
import os
import sys


def _cap_threads():
    """Apply VSS_THREADS to the BLAS pools before numpy is first imported."""
    t = os.environ.get("VSS_THREADS")
    if t:
        for var in (
            "OMP_NUM_THREADS",
            "OPENBLAS_NUM_THREADS",
            "MKL_NUM_THREADS",
            "VECLIB_MAXIMUM_THREADS",
            "NUMEXPR_NUM_THREADS",
        ):
            os.environ[var] = t


_cap_threads()

USAGE_ERROR = 2
PRECONDITION_ERROR = 3

BUILD_NAMES = (
    "octonions",
    "albert",
    "der-albert",
    "tits-f4",
    "tits-e6",
    "tits-e7",
    "tits-e8",
)

ALBERT_HEADS = {"even": [0, 1, 2, 3, 4, 5], "odd": [11, 13, 19, 21]}
DER_HEADS = {"even": [0, 1, 7, 28, 29, 30], "odd": [36, 38, 44, 46]}


def _emit(args, payload, text_fn):
    if args.format == "text":
        out = text_fn(payload)
    else:
        out = json.dumps(payload, sort_keys=True, indent=2)
    if not out.endswith("\n"):
        out += "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _head_vectors(indices, dim):
    rows = []
    for idx in indices:
        row = [0] * dim
        row[idx] = 1
        rows.append(row)
    return rows


def cmd_build(args):
    import numpy as np

    from vss import algebra as alg
    from vss import constructions as con
    from vss import ffla

    p = args.p if args.p is not None else 5
    ffla.check_modulus(p)
    sigma = None
    heads = None
    if args.name == "octonions":
        algebra = con.build_octonions(p).algebra
    else:
        albert = con.build_albert(p)
        if p == 5:
            triple = con.build_rho_chi(5)
            albert_sigma = con.build_sigma(albert, triple)
        if args.name == "albert":
            algebra = albert.algebra
            if p == 5:
                sigma = albert_sigma
                heads = {
                    "even": _head_vectors(ALBERT_HEADS["even"], 27),
                    "odd": _head_vectors(ALBERT_HEADS["odd"], 27),
                }
        elif args.name == "der-albert":
            lie, mats = con.der_albert(albert)
            algebra = lie
            if p == 5:
                sigma = con.der_sigma(albert, albert_sigma, np.asarray(mats))
                heads = {
                    "even": _head_vectors(DER_HEADS["even"], 52),
                    "odd": _head_vectors(DER_HEADS["odd"], 52),
                }
        else:
            builder = {
                "tits-f4": con.composition_field,
                "tits-e6": con.composition_split_pair,
                "tits-e7": con.composition_matrices2,
                "tits-e8": con.composition_octonions,
            }[args.name]
            tits = con.tits_construction(builder(p), albert.algebra)
            algebra = tits.lie
            if p == 5:
                sigma = con.tits_automorphism(tits, albert_sigma)
    payload = {
        "name": args.name,
        "p": p,
        "dim": int(algebra.dim),
        "algebra": alg.algebra_to_json(algebra),
        "sigma": None if sigma is None else sigma.astype(int).tolist(),
        "paperHeads": heads,
        "provenance": {"p": p, "seed": args.seed},
    }
    _emit(args, payload, lambda d: f"{d['name']}: dim {d['dim']} over GF({d['p']})")
    return 0


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


def _load_algebra_and_sigma(args):
    import numpy as np

    from vss import algebra as alg

    obj = _load_json(args.algebra_file)
    algebra = alg.algebra_from_json(obj["algebra"] if "algebra" in obj else obj)
    sigma = None
    if args.sigma_file:
        data = _load_json(args.sigma_file)
        mat = data["sigma"] if isinstance(data, dict) else data
        sigma = np.array(mat, dtype=np.int64)
    elif isinstance(obj, dict) and obj.get("sigma") is not None:
        sigma = np.array(obj["sigma"], dtype=np.int64)
    if sigma is None:
        raise _MissingSigma("no automorphism given: pass a sigma file or embed one")
    return obj, algebra, sigma


class _MissingSigma(Exception):
    pass


def cmd_decompose(args):
    from vss import recipes

    obj, algebra, sigma = _load_algebra_and_sigma(args)
    cpa = recipes.CpAlgebra(algebra, sigma)
    chains = cpa.space.decompose()
    census = {f"L{ell}": int(n) for ell, n in sorted(chains.census.items())}
    heads = {
        f"L{ell}": [[int(v) for v in ch[0]] for ch in chains.chains if len(ch) == ell]
        for ell in sorted(chains.census)
    }
    payload = {
        "p": int(cpa.p),
        "dim": int(algebra.dim),
        "census": census,
        "heads": heads,
        "provenance": {"p": int(cpa.p), "seed": args.seed},
    }

    def text(d):
        return "\n".join(f"{k}: {v}" for k, v in d["census"].items())

    _emit(args, payload, text)
    return 0


def _resolve_splitting(args, obj, cpa):
    import numpy as np

    from vss import recipes

    choice = args.heads
    if choice == "paper":
        stored = obj.get("paperHeads") if isinstance(obj, dict) else None
        if stored is None:
            return recipes.splitting_from_chains(cpa.space), "auto"
        even = np.array(stored["even"], dtype=np.int64).reshape(-1, cpa.algebra.dim)
        odd = np.array(stored["odd"], dtype=np.int64).reshape(-1, cpa.algebra.dim)
        return recipes.splitting_with_heads(cpa.space, even, odd), "paper"
    if choice == "auto":
        return recipes.splitting_from_chains(cpa.space), "auto"
    data = _load_json(choice)
    even = np.array(data["even"], dtype=np.int64).reshape(-1, cpa.algebra.dim)
    odd = np.array(data["odd"], dtype=np.int64).reshape(-1, cpa.algebra.dim)
    return recipes.splitting_with_heads(cpa.space, even, odd), choice


def cmd_semisimplify(args):
    from vss import algebra as alg
    from vss import recipes

    obj, algebra, sigma = _load_algebra_and_sigma(args)
    cpa = recipes.CpAlgebra(algebra, sigma)
    splitting, head_choice = _resolve_splitting(args, obj, cpa)
    result = recipes.recipe_algebra(cpa, splitting)
    payload = {
        "p": int(cpa.p),
        "even": int(result.super.even_dim),
        "odd": int(result.super.odd_dim),
        "super": alg.algebra_to_json(result.super),
        "heads": {
            "even": splitting.even_basis.astype(int).tolist(),
            "odd": splitting.odd_basis.astype(int).tolist(),
        },
        "canonical": None,
        "provenance": {"p": int(cpa.p), "headChoice": head_choice, "seed": args.seed},
    }
    if args.canonical:
        canon = recipes.canonical_semisimplify(cpa, splitting)
        payload["canonical"] = {
            "star": alg.algebra_to_json(canon.star),
            "phi": canon.phi.astype(int).tolist(),
        }

    def text(d):
        line = f"({d['even']}|{d['odd']}) superalgebra over GF({d['p']})"
        if d["canonical"]:
            line += " with canonical star product and phi"
        return line

    _emit(args, payload, text)
    return 0


def cmd_verify(args):
    from vss import verify

    reports = verify.run_suite(args.suite, p=args.p, trials=args.trials, seed=args.seed)
    payload = verify.reports_to_json(reports)
    payload["suite"] = args.suite
    payload["provenance"] = {"p": args.p, "trials": args.trials, "seed": args.seed}

    def text(d):
        return verify.reports_to_text(reports)

    _emit(args, payload, text)
    return 0 if payload["status"] == "pass" else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="vss",
        description="Exact semisimplification of algebras with an order-p automorphism.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, seed_default=0):
        sp.add_argument("--out", help="write output here instead of stdout")
        sp.add_argument("--format", choices=("json", "text"), default="json")
        sp.add_argument("--seed", type=int, default=seed_default)

    b = sub.add_parser("build", help="emit a named algebra as JSON")
    b.add_argument("name", choices=BUILD_NAMES)
    b.add_argument("--p", type=int, default=None, help="field characteristic (default 5)")
    common(b)
    b.set_defaults(fn=cmd_build)

    d = sub.add_parser("decompose", help="census of an order-p automorphism")
    d.add_argument("algebra_file")
    d.add_argument("sigma_file", nargs="?", default=None)
    common(d)
    d.set_defaults(fn=cmd_decompose)

    s = sub.add_parser("semisimplify", help="apply the recipe to an algebra file")
    s.add_argument("algebra_file")
    s.add_argument("sigma_file", nargs="?", default=None)
    s.add_argument(
        "--heads",
        default="paper",
        help='"paper" (stored distinguished heads), "auto", or a JSON file of head vectors',
    )
    s.add_argument("--canonical", action="store_true", help="also emit the star product")
    common(s)
    s.set_defaults(fn=cmd_semisimplify)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=("k10", "f4", "e8", "chain", "recipes", "all"))
    v.add_argument("--p", type=int, default=None, help="prime for the recipes suite")
    v.add_argument("--trials", type=int, default=20)
    common(v)
    v.set_defaults(fn=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (FileNotFoundError, _MissingSigma) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except json.JSONDecodeError as exc:
        print(f"error: malformed JSON input: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except ValueError as exc:
        # NotOrderP, NotEquivariant, SplittingError, trace errors, bad modulus
        print(f"error: {exc}", file=sys.stderr)
        return PRECONDITION_ERROR


if __name__ == "__main__":
    sys.exit(main())
