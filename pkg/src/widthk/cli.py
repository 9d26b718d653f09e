"""Command-line front end.

Exit codes: 0 property holds / computation done, 1 property fails (witness
printed), 2 input or usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

from . import __version__
from .chern import GeometryDescriptor, GeometryError, sigma_class, sigma_pairing, sigma_universal
from .systems import (
    InvalidSystem,
    SymMatrixSystem,
    classify,
    gen_lower_bound,
    gen_normal_form,
    gen_segre_fourfold,
    gen_special,
    gen_width3_triple,
)
from .width import WidthError, width_k_random, width_k_symbolic, width_k_symmetrized


class UsageError(Exception):
    pass


def _digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _report(argv, digest: str, payload: dict, started: float) -> dict:
    return {
        "tool_version": __version__,
        "input_digest": digest,
        "command": list(argv),
        "payload": payload,
        "timing_ms": round((time.perf_counter() - started) * 1000, 3),
    }


def _load_system(path: str) -> tuple[SymMatrixSystem, bytes]:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    try:
        return SymMatrixSystem.from_json(raw.decode("utf-8")), raw
    except (InvalidSystem, UnicodeDecodeError) as e:
        raise UsageError(f"{path}: {e}") from None


def cmd_check(args, argv) -> tuple[dict, int]:
    started = time.perf_counter()
    s, raw = _load_system(args.file)
    try:
        if args.mode == "symbolic":
            rep = width_k_symbolic(s.matrices, args.k)
        elif args.mode == "symmetrized":
            rep = width_k_symmetrized(s.matrices, args.k)
        else:
            rep = width_k_random(s.matrices, args.k, args.trials, args.seed)
    except WidthError as e:
        raise UsageError(str(e)) from None
    return _report(argv, _digest(raw), rep.to_dict(), started), 0 if rep.holds else 1


def cmd_classify(args, argv) -> tuple[dict, int]:
    started = time.perf_counter()
    s, raw = _load_system(args.file)
    rep = classify(s, seed=args.seed)
    return _report(argv, _digest(raw), rep.to_dict(), started), 0


def cmd_gen(args) -> SymMatrixSystem:
    def need(name):
        v = getattr(args, name)
        if v is None:
            raise UsageError(f"gen {args.kind} needs --{name}")
        return v

    try:
        if args.kind == "segre":
            return gen_segre_fourfold()
        if args.kind == "lower-bound":
            return gen_lower_bound(need("n"), need("k"))
        if args.kind == "width3-triple":
            return gen_width3_triple(need("n"), args.seed)
        if args.kind == "special":
            return gen_special(need("n"), args.seed)
        return gen_normal_form(need("variant"))
    except InvalidSystem as e:
        raise UsageError(str(e)) from None


def _descriptor(args) -> tuple[GeometryDescriptor, bytes]:
    try:
        if args.descriptor:
            try:
                with open(args.descriptor, "rb") as fh:
                    raw = fh.read()
            except OSError as e:
                raise UsageError(f"cannot read {args.descriptor}: {e.strerror}") from None
            return GeometryDescriptor.from_json(raw.decode("utf-8")), raw
        if not args.kind:
            raise UsageError("give --descriptor FILE or --kind")
        obj = {"kind": args.kind}
        for name in ("n", "d", "a", "b"):
            if getattr(args, name) is not None:
                obj[name] = getattr(args, name)
        if args.degrees:
            obj["degrees"] = [int(x) for x in args.degrees.split(",")]
        g = GeometryDescriptor.from_json_obj(obj)
        return g, json.dumps(g.to_json_obj(), sort_keys=True).encode()
    except GeometryError as e:
        raise UsageError(str(e)) from None
    except ValueError as e:
        raise UsageError(f"bad descriptor: {e}") from None


def cmd_sigma(args, argv) -> tuple[dict | str, int]:
    started = time.perf_counter()
    if args.action == "print":
        if args.n is None:
            raise UsageError("sigma print needs --n")
        if args.k < 1:
            raise UsageError("k must be at least 1")
        text = sigma_universal(args.n, args.k).render()
        if args.plain:
            return text, 0
        raw = json.dumps({"n": args.n, "k": args.k}).encode()
        return _report(argv, _digest(raw), {"n": args.n, "k": args.k, "polynomial": text}, started), 0
    g, raw = _descriptor(args)
    try:
        if args.action == "eval":
            c = sigma_class(g, args.k)
            payload = {"descriptor": g.to_json_obj(), "k": args.k, "class": c.render(), "is_zero": c.is_zero()}
        else:
            v = sigma_pairing(g, args.k)
            payload = {"descriptor": g.to_json_obj(), "k": args.k, "pairing": str(v)}
    except GeometryError as e:
        raise UsageError(str(e)) from None
    return _report(argv, _digest(raw), payload, started), 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="widthk", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"widthk {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="decide the width-k condition for a system file")
    c.add_argument("file")
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--mode", choices=("symbolic", "symmetrized", "random"), default="symbolic")
    c.add_argument("--trials", type=int, default=64)
    c.add_argument("--seed", type=int, default=0)

    c = sub.add_parser("classify", help="span rank, kernels, width verdicts, special structure")
    c.add_argument("file")
    c.add_argument("--seed", type=int, default=0)

    c = sub.add_parser("gen", help="write a fixture or planted system as JSON")
    c.add_argument("kind", choices=("lower-bound", "segre", "width3-triple", "special", "normal-form"))
    c.add_argument("--n", type=int)
    c.add_argument("--k", type=int)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--variant", type=int)

    c = sub.add_parser("sigma", help="universal sigma_k polynomials and their values")
    c.add_argument("action", choices=("print", "eval", "pair"))
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--n", type=int)
    c.add_argument("--descriptor")
    c.add_argument("--kind", choices=("hypersurface", "complete_intersection", "ci", "product", "product_proj"))
    c.add_argument("--d", type=int)
    c.add_argument("--degrees", help="comma-separated degrees of a complete intersection")
    c.add_argument("--a", type=int)
    c.add_argument("--b", type=int)
    c.add_argument("--plain", action="store_true", help="print only the polynomial text")
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    try:
        if args.command == "gen":
            sys.stdout.write(cmd_gen(args).to_json() + "\n")
            return 0
        handler = {"check": cmd_check, "classify": cmd_classify, "sigma": cmd_sigma}[args.command]
        out, code = handler(args, argv)
    except UsageError as e:
        print(f"widthk: error: {e}", file=sys.stderr)
        return 2
    if isinstance(out, str):
        sys.stdout.write(out + "\n")
    else:
        sys.stdout.write(json.dumps(out, indent=2) + "\n")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
