"""Command line front end: verification suites and single computations."""

import argparse
import json
import re
import sys
from pathlib import Path

from . import atlas as atlas_mod
from .equiv import (
    decompose_jet_tensor, is_split, thm1_iso, verify_forgetful_model, verify_lemma1,
    verify_lemma2, verify_prop1, verify_thm1,
)
from .errors import SingularityError, UsageError
from .exactnum import Poly, format_scalar, parse_scalar
from .jets import FlatConnectionSpec, jet_cocycle
from .liftop import (
    DiffOperator, check_lift_hypothesis, lift_symbol, nonlift_probe, symbol, verify_symbol_model,
    verify_thm2,
)
from .moebius import MoebiusMap
from .sampling import random_scalar, stream


def int_range(text):
    """"3" or "a..b" (inclusive)."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or a..b range, got {text!r}")
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return list(range(lo, hi + 1))


def _load_json(text, what):
    if text is None:
        raise UsageError(f"{what} is required")
    if text == "-":
        text = sys.stdin.read()
    elif not text.lstrip().startswith(("{", "[")) and Path(text).exists():
        text = Path(text).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {what} at line {exc.lineno} column {exc.colno}: {exc.msg}")


def _matrix_json(M):
    return [[format_scalar(x) for x in row] for row in M]


def _poly_matrix(obj, what):
    """Scalar, coefficient list, or matrix of coefficient lists -> matrix of Poly."""
    try:
        if isinstance(obj, (str, int)):
            return [[Poly([parse_scalar(str(obj))])]]
        if obj and all(isinstance(c, (str, int)) for c in obj):
            return [[Poly([parse_scalar(str(c)) for c in obj])]]
        return [[Poly([parse_scalar(str(c)) for c in e]) for e in row] for row in obj]
    except TypeError as exc:
        raise UsageError(f"cannot read {what}: {exc}")


# -- verify --------------------------------------------------------------------------

def _grid(args, need_k=True, need_n=True):
    ks = args.k if args.k is not None else ([1] if need_k else [None])
    ns = args.n if args.n is not None else ([0] if need_n else [None])
    return [(k, n) for k in ks for n in ns]


def _random_theta(rng, r, degree=3, height=4):
    return [[Poly([random_scalar(rng, height) for _ in range(degree + 1)]) for _ in range(r)]
            for _ in range(r)]


def verify_reports(target, args):
    seed = args.seed
    if target == "thm1":
        for k, n in _grid(args):
            yield verify_thm1(k, n, seed, fresh=args.trials or 25)
    elif target == "props234":
        for k, n in _grid(args):
            if k < 1:
                raise UsageError("props234 needs k >= 1")
            yield verify_forgetful_model(k, n, seed)
    elif target == "prop1":
        ms = args.m or [1]
        for m in ms:
            for n in args.n or [1]:
                if m < 0 or n < 0:
                    raise UsageError("representation degrees must be >= 0")
                yield verify_prop1(m, n, seed, args.trials or 10)
    elif target == "lemma1":
        for k, n in _grid(args):
            if not is_split(k, n):
                raise UsageError("lemma1 needs k > n >= 0")
            yield verify_lemma1(k, n, seed)
    elif target == "lemma2":
        for k, n in _grid(args):
            for r in args.r or [1, 2]:
                yield verify_lemma2(k, n, r, seed, args.trials or 5)
    elif target == "cor1":
        at = _atlas(args.atlas)
        for k, n in _grid(args):
            yield atlas_mod.verify_corollary1(at, k, n, seed)
    elif target == "symbol":
        for k, n in _grid(args):
            for r in args.r or [1]:
                yield verify_symbol_model(k, n, r=r, seed=seed)
    elif target == "thm2":
        cases = [(k, n, l) for k, n in _grid(args) for l in (args.l or [args.k[0] if args.k else 1])]
        admissible = []
        for k, n, l in cases:
            try:
                check_lift_hypothesis(k, n, l)
                admissible.append((k, n, l))
            except UsageError:
                if len(cases) == 1:
                    raise
        if not admissible:
            raise UsageError("no (k, n, l) in the grid satisfies the lifting hypothesis")
        for k, n, l in admissible:
            for r in args.r or [1]:
                rng = stream(seed, "cli-thm2", k, n, l, r)
                for t in range(args.trials or 1):
                    rep = verify_thm2(_random_theta(rng, r), k, n, l, seed=seed)
                    rep["params"]["trial"] = t
                    rep.pop("operator", None)
                    yield rep
    elif target == "remark":
        for n in args.n or [0]:
            rep = nonlift_probe(n, seed=seed)
            rep["expected"] = "feasible" if n == 0 else "infeasible"
            yield rep
    else:
        raise UsageError(f"unknown verify target {target!r}")


def _passed(rep):
    if rep.get("claim") == "remark":
        return rep["status"] == rep["expected"]
    return rep["status"] == "pass"


def _atlas(name):
    name = name or "torus"
    if name in ("torus", "sphere"):
        return atlas_mod.load_fixture(name)
    return atlas_mod.ProjectiveAtlas.from_json(_load_json(name, "--atlas"))


# -- compute ---------------------------------------------------------------------------

def compute(obj, args):
    if obj == "cocycle":
        g = MoebiusMap.from_json(_load_json(args.g, "--g"))
        z0 = parse_scalar(args.z0 or "0")
        (k,), (n,) = args.k or [1], args.n or [0]
        return {"k": k, "n": n, "g": g.to_json(), "z0": format_scalar(z0),
                "matrix": _matrix_json(jet_cocycle(k, n, g, z0))}
    if obj == "intertwiner":
        (k,), (n,) = args.k or [1], args.n or [0]
        return thm1_iso(k, n, args.seed).to_json()
    if obj == "decompose":
        if args.m is not None:
            (m,), (n,) = args.m, args.n or [0]
            if m < 0 or n < 0:
                raise UsageError("representation degrees must be >= 0")
            return {"m": m, "n": n, "degrees": [m + n - 2 * i for i in range(min(m, n) + 1)]}
        (k,), (n,) = args.k or [1], args.n or [0]
        (l,) = args.l or [k]
        b = args.b if args.b is not None else n
        parts = decompose_jet_tensor(k, n, l, b)
        return {"jets": [[k, n], [l, b]], "summands": [{"twist": m, "degree": d} for m, d in parts]}
    if obj == "lift":
        (k,), (n,), (l,) = args.k or [1], args.n or [0], args.l or [1]
        data = _load_json(args.input, "--input") if args.input else {}
        theta = _poly_matrix(data.get("theta", args.theta or "1"), "theta")
        spec = FlatConnectionSpec.from_json(data["connection"]) if "connection" in data else None
        D = lift_symbol(theta, k, n, l, spec, args.seed)
        return D.to_json()
    if obj == "symbol":
        D = DiffOperator.from_json(_load_json(args.input, "--input"))
        sym = symbol(D)
        return {"weight": sym.weight, "symbol": [[str(x) for x in row] for row in sym.matrix]}
    if obj == "probe":
        (n,) = args.n or [0]
        return nonlift_probe(n, seed=args.seed)
    if obj == "atlas-check":
        at = _atlas(args.atlas)
        rep = atlas_mod.check_atlas(at)
        rep["L2=TM"] = atlas_mod.verify_L2_TM(at)["status"]
        return rep
    raise UsageError(f"unknown object {obj!r}")


# -- plumbing ----------------------------------------------------------------------------

def _dump(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _human(rep):
    params = " ".join(f"{k}={v}" for k, v in sorted(rep.get("params", {}).items()))
    status = rep["status"].upper()
    extra = f" witness={_dump(rep['witness'])}" if rep.get("witness") and status == "FAIL" else ""
    return f"{status:<10} {rep['claim']} {params}{extra}"


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k", type=int_range, help="jet order, N or A..B")
    common.add_argument("--n", type=int_range, help="line bundle weight, N or A..B")
    common.add_argument("--l", type=int_range, help="symbol weight for thm2 / lift")
    common.add_argument("--m", type=int_range, help="first degree for prop1 / decompose")
    common.add_argument("--b", type=int, help="second weight for jet tensor decompose")
    common.add_argument("--r", type=int_range, help="bundle rank(s)")
    common.add_argument("--g", help="Moebius map as JSON {a,b,c,d}")
    common.add_argument("--z0", help="base point literal, e.g. 3/4+1/2i")
    common.add_argument("--theta", help="theta0 as JSON coefficient list or matrix")
    common.add_argument("--input", help="JSON input: inline, file path, or - for stdin")
    common.add_argument("--atlas", help="torus, sphere, or atlas JSON")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, help="random samples per case")
    common.add_argument("--height", type=int, default=5, help="height of random samples")
    common.add_argument("--json", action="store_true", help="emit JSON lines")

    p = argparse.ArgumentParser(prog="sl2jets", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("target", choices=["thm1", "props234", "prop1", "lemma1", "lemma2", "cor1",
                                      "symbol", "thm2", "remark"])
    c = sub.add_parser("compute", parents=[common], help="compute one object as JSON")
    c.add_argument("object", choices=["cocycle", "intertwiner", "decompose", "lift", "symbol",
                                      "probe", "atlas-check"])
    return p


_NUMERIC_FLAGS = ("--k", "--n", "--l", "--m", "--b", "--r", "--seed")


def _glue_negative(argv):
    """Let "--n -2..3" through argparse, which would read -2..3 as a flag."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _NUMERIC_FLAGS and i + 1 < len(argv) and re.match(r"^-\d", argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    argv = _glue_negative(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    if args.height < 1 or (args.trials is not None and args.trials < 1):
        print("sl2jets: error: --height and --trials must be positive", file=sys.stderr)
        return 2
    if args.command == "compute" and args.theta and args.theta.strip().startswith("["):
        args.theta = _load_json(args.theta, "--theta")
    try:
        if args.command == "compute":
            out.write(_dump(compute(args.object, args)) + "\n")
            return 0
        ok = True
        for rep in verify_reports(args.target, args):
            rep["seed"] = args.seed
            ok &= _passed(rep)
            out.write((_dump(rep) if args.json else _human(rep)) + "\n")
        return 0 if ok else 1
    except (UsageError, SingularityError, KeyError, TypeError) as exc:
        msg = exc.args[0] if exc.args else exc
        print(f"sl2jets: error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
