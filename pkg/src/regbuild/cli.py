"""Command-line interface.

    regbuild sphere --config sys.json --I 1,2 --J 1,2 --word 0
    regbuild structconst --config sys.json --I .. --J .. --K .. --u-word .. --v-word .. --w-word ..
    regbuild multable --config sys.json --I 1,2,3 --max-len 15
    regbuild commutativity --config sys.json --I 1,2,3 --bound 15
    regbuild walk --config sys.json --I 0 --steps 20 --probs probs.json
    regbuild check --suite f4

Config files are JSON: {"coxeter_matrix": [[1,3],[3,1]], "parameters": ["q","q"]}
(0 encodes an infinite bond); "type": "F4" may replace the matrix.  Words and
subsets are comma-separated 0-based generator indices (or labels); an empty
string is the identity / empty set.

Exit status: 0 success, 1 validation error or failed check, 2 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .catalog import parse_type
from .checks import SUITES, Nonneg, run_suite
from .coxeter import CoxeterMatrixError, CoxeterSystem, NotSphericalError
from .cosets import NotReducedError, enumerate_R, min_double_rep
from .hecke import HeckeAlgebra, SizeCapExceeded, SpanError, commutativity_check, parabolic_product
from .pregallery import parabolic_constant
from .qpoly import InexactDivision, ParamAssignment, VariableMismatch, canonical_string
from .randwalk import WalkError, a2_asymptotic, build_walk, return_series, simple_walk
from .spheres import sphere_size


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


VALIDATION = (
    UsageError,
    CoxeterMatrixError,
    NotSphericalError,
    NotReducedError,
    VariableMismatch,
    WalkError,
    SizeCapExceeded,
    ValueError,
    KeyError,
    OSError,
    json.JSONDecodeError,
)


def _load_config(path: str) -> tuple[CoxeterSystem, ParamAssignment]:
    with open(path) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise ValueError("config must be a JSON object")
    if "coxeter_matrix" in cfg:
        W = CoxeterSystem(cfg["coxeter_matrix"], labels=cfg.get("labels"))
    elif "type" in cfg:
        W = parse_type(cfg["type"])
    else:
        raise ValueError("config needs 'coxeter_matrix' or 'type'")
    params = cfg.get("parameters")
    if params is None:
        raise ValueError("config needs 'parameters' (one per generator)")
    if len(params) != W.rank:
        raise ValueError(f"{len(params)} parameters for rank {W.rank}")
    return W, ParamAssignment(params, W)


def _gen(W: CoxeterSystem, tok: str) -> int:
    tok = tok.strip()
    if tok in W.labels:
        return W.labels.index(tok)
    try:
        s = int(tok)
    except ValueError:
        raise ValueError(f"unknown generator {tok!r}") from None
    if not 0 <= s < W.rank:
        raise ValueError(f"generator {s} out of range 0..{W.rank - 1}")
    return s


def _list(W: CoxeterSystem, text: str) -> list[int]:
    text = text.strip()
    if text in ("", "e"):
        return []
    return [_gen(W, t) for t in text.split(",")]


def _subset(W, text):
    return W.check_subset(_list(W, text))


def _rep(W, word, I, J):
    elem = W.from_word(_list(W, word))
    rep = min_double_rep(elem, I, J)
    if rep.element != elem:
        raise NotReducedError(f"word {word!r} is not ({sorted(I)},{sorted(J)})-reduced; reduced representative is {rep.element.label()}")
    return rep


def _values(params: ParamAssignment, assigns: list[str] | None) -> list[Fraction]:
    table = {}
    for a in assigns or []:
        if "=" not in a:
            raise ValueError(f"--values expects name=value, got {a!r}")
        k, v = a.split("=", 1)
        table[k.strip()] = Fraction(v.strip())
    missing = [v for v in params.vars if v not in table]
    if missing:
        raise ValueError(f"no numeric value for parameter(s) {', '.join(missing)}; use --values")
    return params.values(table)


def cmd_sphere(a, out):
    W, P = _load_config(a.config)
    I, J = _subset(W, a.I), _subset(W, a.J)
    print(canonical_string(sphere_size(I, J, _rep(W, a.word, I, J), P)), file=out)


def cmd_structconst(a, out):
    W, P = _load_config(a.config)
    I, J, K = _subset(W, a.I), _subset(W, a.J), _subset(W, a.K)
    u = _rep(W, a.u_word, I, J)
    v = _rep(W, a.v_word, K, J)
    w = _rep(W, a.w_word, I, K)
    print(canonical_string(parabolic_constant(I, J, K, u, v, w, P)), file=out)


def _wlabel(r) -> str:
    return ",".join(str(s) for s in r.word)


def cmd_multable(a, out):
    W, P = _load_config(a.config)
    I = _subset(W, a.I)
    H = HeckeAlgebra.from_params(W, P)
    reps = enumerate_R(W, I, I, a.max_len)
    table = {}
    for u in reps:
        for v in reps:
            row = parabolic_product(H, I, I, I, u, v)
            table[f"{_wlabel(u)}|{_wlabel(v)}"] = {_wlabel(w): canonical_string(c) for w, c in row.items()}
    json.dump(table, out, sort_keys=True, indent=1)
    out.write("\n")


def cmd_commutativity(a, out):
    W, P = _load_config(a.config)
    I = _subset(W, a.I)
    v = commutativity_check(W, I, a.bound, P)
    res = {
        "commutative_up_to_bound": v.commutative_up_to_bound,
        "bound": v.bound,
        "all_involutions": v.all_involutions,
        "representatives": v.reps_checked,
        "mismatches": [
            {"u": _wlabel(m[0]), "v": _wlabel(m[1]), "w": _wlabel(m[2]), "c_u_vinv": canonical_string(m[3]), "c_v_uinv": canonical_string(m[4])}
            for m in v.mismatches
        ],
    }
    if a.format == "json":
        json.dump(res, out, sort_keys=True, indent=1)
        out.write("\n")
    else:
        print(v.describe(), file=out)


def _is_a2_simple(walk) -> bool:
    W = walk.system
    if W.rank != 3 or any(W.matrix[i][j] != 3 for i in range(3) for j in range(3) if i != j):
        return False
    if len(set(walk.qvals)) != 1 or len(walk.I) != 1:
        return False
    return walk == simple_walk(W, walk.I, walk.qvals)


def cmd_walk(a, out):
    W, P = _load_config(a.config)
    I = _subset(W, a.I)
    qv = _values(P, a.values)
    if a.probs:
        with open(a.probs) as fh:
            raw = json.load(fh)
        probs = {tuple(_list(W, k)): Fraction(v) for k, v in raw.items()}
        walk = build_walk(W, I, probs, qv)
    else:
        walk = simple_walk(W, I, qv)
    if a.steps < 0:
        raise ValueError("--steps must be nonnegative")
    series = return_series(walk, a.steps, exact=None if not a.float else False)
    asym = _is_a2_simple(walk) and walk.qvals[0] > 1 and walk.qvals[0].denominator == 1
    rows = []
    for n, p in enumerate(series):
        ratio = None
        if n >= 2 and series[n - 2]:
            ratio = p / series[n - 2]
        rows.append(
            {
                "n": n,
                "p": str(p) if isinstance(p, Fraction) else repr(float(p)),
                "asymptotic": repr(a2_asymptotic(walk.qvals[0], n)) if asym and n >= 1 else None,
                "ratio_n_minus_2": (str(ratio) if isinstance(ratio, Fraction) else repr(float(ratio))) if ratio is not None else None,
            }
        )
    if a.format == "json":
        json.dump(rows, out, sort_keys=True, indent=1)
        out.write("\n")
    else:
        print("n\tp\tasymptotic\tratio", file=out)
        for r in rows:
            print("\t".join(str(r[k]) if r[k] is not None else "-" for k in ("n", "p", "asymptotic", "ratio_n_minus_2")), file=out)


def cmd_check(a, out):
    nn = Nonneg()
    ok = True
    for r in run_suite(a.suite, nn):
        print(r.line(), file=out)
        ok &= r.passed
    if nn.checked:
        lit = nn.literal_result()
        print(f"[NOTE] {lit.name}: {lit.detail}", file=out)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="regbuild", description="Intersection numbers and Hecke operators on regular buildings.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("sphere", help="size of a generalised sphere F(A,J,w)")
    s.add_argument("--config", required=True)
    s.add_argument("--I", required=True)
    s.add_argument("--J", required=True)
    s.add_argument("--word", required=True)
    s.set_defaults(fn=cmd_sphere)

    s = sub.add_parser("structconst", help="intersection number c_{u,v}^w(I,J,K)")
    s.add_argument("--config", required=True)
    for k in ("--I", "--J", "--K", "--u-word", "--v-word", "--w-word"):
        s.add_argument(k, required=True)
    s.set_defaults(fn=cmd_structconst)

    s = sub.add_parser("multable", help="P-basis multiplication table of the corner algebra")
    s.add_argument("--config", required=True)
    s.add_argument("--I", required=True)
    s.add_argument("--max-len", type=int, required=True)
    s.set_defaults(fn=cmd_multable)

    s = sub.add_parser("commutativity", help="bounded commutativity search")
    s.add_argument("--config", required=True)
    s.add_argument("--I", required=True)
    s.add_argument("--bound", type=int, required=True)
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.set_defaults(fn=cmd_commutativity)

    s = sub.add_parser("walk", help="return probabilities of an isotropic random walk")
    s.add_argument("--config", required=True)
    s.add_argument("--I", required=True)
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--probs", help="JSON map word -> probability (default: simple walk)")
    s.add_argument("--values", nargs="*", metavar="NAME=VALUE", help="numeric values for symbolic parameters")
    s.add_argument("--float", action="store_true", help="force floating point")
    s.add_argument("--format", choices=("tsv", "json"), default="tsv")
    s.set_defaults(fn=cmd_walk)

    s = sub.add_parser("check", help="run a reference suite")
    s.add_argument("--suite", required=True, choices=SUITES)
    s.set_defaults(fn=cmd_check)
    return p


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
        rc = a.fn(a, out)
        return rc or 0
    except VALIDATION as e:
        msg = str(e).replace("\n", " ")
        print(f"error: {type(e).__name__}: {msg}", file=err)
        return 1
    except (AssertionError, SpanError, InexactDivision) as e:
        print(f"internal error: {type(e).__name__}: {e}", file=err)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
