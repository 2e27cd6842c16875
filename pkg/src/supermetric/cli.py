"""Command-line front end.

Subcommands: canonicalize, isometry-check, lie-basis, group-op, verify.
Inputs are JSON files in the wire forms of the serialization module; the
algebra setup comes from --config (JSON with generator_count,
coefficient_mode, zero_tolerance, and optionally m, n for verify), with
--mode overriding the coefficient mode.  Reports go to stdout or --out.

Exit codes: 0 success, 2 validation problem (including malformed JSON,
reported with its position), 3 numerical gate failure or a failing verify
run.
"""

from __future__ import annotations

import argparse
import json
import sys

from .algebra import AlgebraConfig
from .canonical import (
    SuperMetric,
    body_reduce,
    canonical_form,
    congruence,
    validate_metric,
)
from .errors import NumericalGateError, ValidationError
from .group import embed_isometry, semidirect_multiply
from .isometry import is_isometry, lie_basis, lie_membership
from .serialization import (
    dumps,
    gamma_from_json,
    gamma_to_json,
    group_element_from_json,
    group_element_to_json,
    matrix_from_json,
    matrix_to_json,
    scalar_to_json,
    supernumber_to_json,
)
from .verify import run_verify

_VERIFY_DEFAULT_L = 4


def _build_parser():
    p = argparse.ArgumentParser(
        prog="supermetric",
        description="Canonical forms, isometry algebra, and the covering "
                    "group toolkit for graded metrics.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, needs_input=True):
        if needs_input:
            sp.add_argument("input", help="path to the JSON input payload")
        sp.add_argument("--config", default=None,
                        help="JSON file with algebra settings")
        sp.add_argument("--mode", choices=["float64", "rational"],
                        default=None, help="coefficient mode override")
        sp.add_argument("--seed", type=int, default=42,
                        help="seed for randomized suites")
        sp.add_argument("--strict", action="store_true",
                        help="enable the convergence gates")
        sp.add_argument("--out", default=None,
                        help="write the report here instead of stdout")

    common(sub.add_parser(
        "canonicalize", help="canonical form and body reduction of a metric"))
    common(sub.add_parser(
        "isometry-check", help="test N^ST Gamma N = Gamma"))
    common(sub.add_parser(
        "lie-basis", help="enumerate the membership-condition bases"))
    common(sub.add_parser(
        "group-op", help="multiply two group elements and embed the result"))
    common(sub.add_parser(
        "verify", help="run the seeded verification suites"),
        needs_input=False)
    return p


def _load_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _build_config(args, payload, default_L=None):
    settings = {}
    if args.config:
        file_cfg = _load_json(args.config)
        if not isinstance(file_cfg, dict):
            raise ValidationError("config file must hold a JSON object")
        settings.update(file_cfg)
    if isinstance(payload, dict) and isinstance(payload.get("algebra"),
                                                dict):
        settings.update(payload["algebra"])
    kwargs = {}
    if "generator_count" in settings:
        kwargs["generator_count"] = settings["generator_count"]
    elif default_L is not None:
        kwargs["generator_count"] = default_L
    if "zero_tolerance" in settings:
        kwargs["zero_tolerance"] = settings["zero_tolerance"]
    mode = args.mode or settings.get("coefficient_mode")
    if mode:
        kwargs["coefficient_mode"] = mode
    return AlgebraConfig(**kwargs), settings


def _cmd_canonicalize(args):
    payload = _load_json(args.input)
    cfg, _ = _build_config(args, payload)
    data = payload.get("metric", payload) if isinstance(payload, dict) \
        else payload
    G = matrix_from_json(data, cfg)
    metric = validate_metric(G)
    raw = canonical_form(metric)
    red = body_reduce(raw, strict=args.strict)
    resid = congruence(red.P, G) - red.Gamma
    return {
        "command": "canonicalize",
        "mode": "rational" if cfg.rational else "float64",
        "P": matrix_to_json(red.P),
        "Gamma": matrix_to_json(red.Gamma),
        "d_raw": [supernumber_to_json(di) for di in raw.d],
        "eta": [int(e.body()) for e in red.d],
        "reducibility": [{
            "index": rec["index"],
            "ratio": scalar_to_json(rec["ratio"], cfg),
            "condition_met": rec["condition_met"],
            "sign": rec["sign"],
            "scale_exact": rec["scale_exact"],
            "lambda": supernumber_to_json(rec["lambda"]),
        } for rec in red.reducibility],
        "body_reducible": raw.body_reducible,
        "residual": scalar_to_json(resid.entry_norm_max(), cfg),
    }


def _cmd_isometry_check(args):
    payload = _load_json(args.input)
    cfg, _ = _build_config(args, payload)
    if not isinstance(payload, dict) or "N" not in payload \
            or "gamma" not in payload:
        raise ValidationError("payload needs 'N' and 'gamma'")
    gamma = gamma_from_json(payload["gamma"], cfg)
    N = matrix_from_json(payload["N"], cfg)
    G = gamma.matrix()
    resid = N.supertranspose() @ G @ N - G
    report = {
        "command": "isometry-check",
        "mode": "rational" if cfg.rational else "float64",
        "isometry": is_isometry(N, gamma),
        "residual": scalar_to_json(resid.entry_norm_max(), cfg),
    }
    membership = lie_membership(N, gamma)
    report["lie_membership"] = {
        "member": membership["member"],
        "violated": membership["violated"],
        "formulations_agree": membership["agree"],
    }
    return report


def _cmd_lie_basis(args):
    payload = _load_json(args.input)
    cfg, _ = _build_config(args, payload)
    if not isinstance(payload, dict) or "gamma" not in payload:
        raise ValidationError("payload needs 'gamma'")
    gamma = gamma_from_json(payload["gamma"], cfg)
    L = payload.get("L")
    basis = lie_basis(gamma, L)
    hJ = []
    for bits, pos in basis.hJ:
        idx = [i + 1 for i in range(bits.bit_length()) if (bits >> i) & 1]
        hJ.append({"index": idx, "position": pos})
    return {
        "command": "lie-basis",
        "mode": "rational" if cfg.rational else "float64",
        "gamma": gamma_to_json(gamma),
        "dims": basis.dims,
        "g0": [matrix_to_json(M) for M in basis.g0],
        "g1": [matrix_to_json(M) for M in basis.g1],
        "hJ": hJ,
    }


def _cmd_group_op(args):
    payload = _load_json(args.input)
    cfg, _ = _build_config(args, payload)
    for key in ("gamma", "h1", "h2"):
        if not isinstance(payload, dict) or key not in payload:
            raise ValidationError("payload needs 'gamma', 'h1' and 'h2'")
    gamma = gamma_from_json(payload["gamma"], cfg)
    h1 = group_element_from_json(payload["h1"], gamma)
    h2 = group_element_from_json(payload["h2"], gamma)
    prod = semidirect_multiply(h1, h2)
    image = embed_isometry(prod)
    hom_resid = (image - embed_isometry(h1) @ embed_isometry(h2)
                 ).entry_norm_max()
    G = gamma.matrix()
    iso_resid = (image.supertranspose() @ G @ image - G).entry_norm_max()
    return {
        "command": "group-op",
        "mode": "rational" if cfg.rational else "float64",
        "product": group_element_to_json(prod),
        "embedded": matrix_to_json(image),
        "residuals": {
            "isometry": scalar_to_json(iso_resid, cfg),
            "embedding_homomorphism": scalar_to_json(hom_resid, cfg),
        },
        "isometry": is_isometry(image, gamma),
    }


def _cmd_verify(args):
    cfg, settings = _build_config(args, None, default_L=_VERIFY_DEFAULT_L)
    m = settings.get("m", 2)
    n = settings.get("n", 2)
    return run_verify(cfg, seed=args.seed, m=m, n=n, strict=args.strict)


_COMMANDS = {
    "canonicalize": _cmd_canonicalize,
    "isometry-check": _cmd_isometry_check,
    "lie-basis": _cmd_lie_basis,
    "group-op": _cmd_group_op,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        report = _COMMANDS[args.command](args)
    except json.JSONDecodeError as exc:
        sys.stderr.write(dumps({
            "error": f"malformed JSON: {exc.msg}",
            "line": exc.lineno,
            "column": exc.colno,
            "exit_code": 2,
        }))
        return 2
    except ValidationError as exc:
        sys.stderr.write(dumps({
            "error": str(exc),
            "kind": type(exc).__name__,
            "exit_code": 2,
        }))
        return 2
    except NumericalGateError as exc:
        sys.stderr.write(dumps({
            "error": str(exc),
            "kind": type(exc).__name__,
            "exit_code": 3,
        }))
        return 3
    except FileNotFoundError as exc:
        sys.stderr.write(dumps({
            "error": f"cannot read {exc.filename}",
            "kind": "FileNotFound",
            "exit_code": 2,
        }))
        return 2

    text = dumps(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 3 if report.get("status") == "fail" else 0


if __name__ == "__main__":
    sys.exit(main())
