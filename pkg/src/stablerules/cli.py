"""Command-line interface.

Exit codes: 0 success/valid, 1 refuted or disagreement (witness printed),
2 usage or input error.  --json switches to machine-readable output.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import algebra as alg_mod
from . import companions as cmp_mod
from . import filtration as flt_mod
from . import frames as fr_mod
from . import gen as gen_mod
from . import scr as scr_mod
from . import verify as verify_mod
from .domains import DomainSpec
from .syntax import (Sig, ParseError, parse_formula, parse_rule, print_formula,
                     print_rule, subformula_closure)

_SIGS = {s.value: s for s in Sig}

_CLS_SIG = {"HA": Sig.SI, "BIHA": Sig.BSI, "MA": Sig.MD, "MAG": Sig.MD,
            "TEN": Sig.TEN, "FRT": Sig.MSI}


class UsageError(ValueError):
    pass


def _load_algebra(path):
    with open(path) as fh:
        return alg_mod.from_json(json.load(fh))


def _load_frame(path):
    with open(path) as fh:
        return fr_mod.from_json(json.load(fh))


def _rule_from(args, sig):
    text = args.rule
    if text is None:
        raise UsageError("--rule is required")
    try:
        with open(text) as fh:
            text = fh.read().strip()
    except OSError:
        pass
    return parse_rule(text, sig)


def _emit(args, data, text):
    print(json.dumps(data) if args.json else text)


def cmd_parse(args):
    sig = _SIGS[args.sig]
    if "/" in args.input:
        r = parse_rule(args.input, sig)
        _emit(args, {"rule": print_rule(r), "atoms": sorted(r.atoms()),
                     "sfor": len(subformula_closure(r))}, print_rule(r))
    else:
        f = parse_formula(args.input, sig)
        _emit(args, {"formula": print_formula(f), "atoms": sorted(f.atoms())},
              print_formula(f))
    return 0


def cmd_check(args):
    if args.algebra:
        a = _load_algebra(args.algebra)
        rule = _rule_from(args, _CLS_SIG[a.cls])
        v = alg_mod.validates(a, rule, max_atoms=args.max_atoms)
    elif args.frame:
        f = _load_frame(args.frame)
        sig = {"POSET": Sig.SI, "BI": Sig.BSI, "PREORDER": Sig.MD,
               "STRICT": Sig.MD, "TENSE": Sig.TEN, "KM": Sig.MSI}[f.kind]
        rule = _rule_from(args, sig)
        v = fr_mod.frame_validates(f, rule, max_atoms=args.max_atoms)
    else:
        raise UsageError("check needs --algebra or --frame")
    if v.valid:
        _emit(args, {"verdict": "valid"}, "valid")
        return 0
    wit = {f"p{k}": val if isinstance(val, int) else sorted(val)
           for k, val in v.witness.items()}
    _emit(args, {"verdict": "refuted", "witness": wit}, f"refuted, witness {wit}")
    return 1


def cmd_translate(args):
    sig = _SIGS[args.source]
    text = args.input
    if "/" in text:
        out = print_rule(cmp_mod.godel_translate(parse_rule(text, sig)))
    else:
        out = print_formula(cmp_mod.godel_translate(parse_formula(text, sig)))
    _emit(args, {"translated": out}, out)
    return 0


def cmd_scr(args):
    with open(args.algebra) as fh:
        blob = json.load(fh)
    a = alg_mod.from_json(blob)
    dom = DomainSpec.from_json(blob.get("domains", {"variant": _default_variant(a)}))
    s = scr_mod.build_scr(a, dom)
    _emit(args, s.to_json(), print_rule(s.rule))
    return 0


def _default_variant(a):
    return {"HA": "SI", "BIHA": "BSI", "MA": "MOD", "TEN": "TEN",
            "FRT": "MSI", "MAG": "MODPLUS"}[a.cls]


def cmd_rewrite(args):
    sig = _SIGS[args.sig]
    rule = _rule_from(args, sig)
    magari = args.sig == "md" and args.gl
    xs = scr_mod.rewrite_rule_bounded(rule, args.bound, magari=magari)
    data = [s.to_json() for s in xs]
    text = "\n".join(f"[{s.algebra.size} elements] {print_rule(s.rule)}" for s in xs)
    _emit(args, {"count": len(xs), "rules": data}, text or "(no refutation patterns)")
    return 0


def cmd_skeleton(args):
    if args.frame:
        f = _load_frame(args.frame)
        skel, proj = fr_mod.skeleton_frame(f)
        _emit(args, {"frame": skel.to_json(), "projection": list(proj)},
              f"{skel.kind} {skel.rel} projection {proj}")
        return 0
    if args.algebra:
        a = _load_algebra(args.algebra)
        out = cmp_mod.rho_algebra(a)
        _emit(args, out.to_json(), repr(out))
        return 0
    raise UsageError("skeleton needs --frame or --algebra")


def cmd_filtrate(args):
    a = _load_algebra(args.algebra)
    sig = _CLS_SIG[a.cls] if args.sig is None else _SIGS[args.sig]
    listed = set()
    theta = set()
    for part in args.theta.split(";"):
        if part.strip():
            f = parse_formula(part.strip(), sig)
            listed.add(f)
            theta |= f.subformulas()
    if not theta:
        raise UsageError("--theta must contain at least one formula")
    if theta - listed:
        print(f"note: theta closed under subformulas "
              f"({len(theta) - len(listed)} added)", file=sys.stderr)
    atoms = sorted({p for f in theta for p in f.atoms()})
    if args.valuation:
        v = {}
        for item in args.valuation.split(","):
            k, _, val = item.partition("=")
            v[int(k.strip().lstrip("p"))] = int(val)
    else:
        rng = gen_mod.Lcg(args.seed)
        v = {p: rng.below(a.size) for p in atoms}
    res = flt_mod.filtrate(a, v, frozenset(theta), args.method)
    data = res.algebra.to_json()
    data["inclusion"] = list(res.inclusion)
    data["valuation"] = {f"p{k}": val for k, val in res.valuation.items()}
    data["domains"] = res.domains.to_json()
    _emit(args, data,
          f"filtered to {res.algebra.size} elements; inclusion {res.inclusion}")
    return 0


def cmd_enumerate(args):
    for f in gen_mod.enumerate_frames(args.size, args.kind.upper()):
        print(json.dumps(f.to_json()))
    return 0


def cmd_verify(args):
    kwargs = {}
    if args.suite in ("duality", "skeleton", "collapse", "kmgl"):
        if args.max_size:
            kwargs["max_size"] = args.max_size
    if args.suite == "filtration":
        kwargs["instances"] = args.instances
        kwargs["seed"] = args.seed
    if args.suite == "scr":
        kwargs["samples"] = args.instances
        kwargs["seed"] = args.seed
    rep = verify_mod.run_suite(args.suite, **kwargs)
    if args.json:
        print(json.dumps({"suite": rep.name, "checks": rep.checks,
                          "failures": rep.failures}))
    else:
        print(rep.summary())
        for f in rep.failures[:20]:
            print(f"  FAIL: {f}")
    return 0 if rep.ok else 1


def build_parser():
    p = argparse.ArgumentParser(prog="stablerules")
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp):
        sp.add_argument("--json", action="store_true")
        sp.add_argument("--max-atoms", type=int, default=8)
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("parse", help="parse and reprint a formula or rule")
    sp.add_argument("input")
    sp.add_argument("--sig", choices=sorted(_SIGS), required=True)
    common(sp)
    sp.set_defaults(fn=cmd_parse)

    sp = sub.add_parser("check", help="validity of a rule on an algebra or frame")
    sp.add_argument("--algebra")
    sp.add_argument("--frame")
    sp.add_argument("--rule")
    common(sp)
    sp.set_defaults(fn=cmd_check)

    sp = sub.add_parser("translate", help="Goedel-style translation")
    sp.add_argument("input")
    sp.add_argument("--from", dest="source", choices=["si", "bsi", "msi"], required=True)
    common(sp)
    sp.set_defaults(fn=cmd_translate)

    sp = sub.add_parser("scr", help="render the canonical rule of an algebra file")
    sp.add_argument("--algebra", required=True)
    common(sp)
    sp.set_defaults(fn=cmd_scr)

    sp = sub.add_parser("rewrite", help="bounded rewriting into canonical rules")
    sp.add_argument("--rule", required=True)
    sp.add_argument("--sig", choices=sorted(_SIGS), required=True)
    sp.add_argument("--bound", type=int, default=6)
    sp.add_argument("--gl", action="store_true",
                    help="rewrite md rules over Magari targets")
    common(sp)
    sp.set_defaults(fn=cmd_rewrite)

    sp = sub.add_parser("skeleton", help="cluster collapse of a frame, or rho of an algebra")
    sp.add_argument("--frame")
    sp.add_argument("--algebra")
    common(sp)
    sp.set_defaults(fn=cmd_skeleton)

    sp = sub.add_parser("filtrate", help="filtrate an algebra model through theta")
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--theta", required=True,
                    help="semicolon-separated formulas; closed under subformulas")
    sp.add_argument("--method", choices=sorted(flt_mod.METHODS), required=True)
    sp.add_argument("--valuation", help="comma-separated p<i>=<element>")
    sp.add_argument("--sig", choices=sorted(_SIGS))
    common(sp)
    sp.set_defaults(fn=cmd_filtrate)

    sp = sub.add_parser("enumerate", help="frames up to isomorphism, one JSON per line")
    sp.add_argument("--kind", choices=["poset", "preorder", "strict"], required=True)
    sp.add_argument("--size", type=int, required=True)
    common(sp)
    sp.set_defaults(fn=cmd_enumerate)

    sp = sub.add_parser("verify", help="run a property suite")
    sp.add_argument("--suite", choices=sorted(verify_mod.SUITES), required=True)
    sp.add_argument("--max-size", type=int)
    sp.add_argument("--instances", type=int, default=200)
    common(sp)
    sp.set_defaults(fn=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (UsageError, ParseError, OSError, json.JSONDecodeError,
            alg_mod.AlgebraError, fr_mod.FrameError, flt_mod.FiltrationError,
            scr_mod.ScrError, cmp_mod.CompanionError, KeyError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
