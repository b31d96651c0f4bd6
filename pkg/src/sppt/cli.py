"""Command-line front end.

Exit codes: 0 success, 1 numerical or internal error, 2 invalid input,
3 verification failed, 4 basis search exhausted. Every subcommand reads
JSON from ``--input`` (``-`` or omitted means stdin) and writes JSON to
``--output`` (stdout by default).
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

import numpy as np

from . import serialization as ser
from .basis import local_unitary_A, local_unitary_B, random_basis_search
from .classification import classify
from .decomposition import separable_decomposition, verify_decomposition
from .errors import InvalidInput, SpptError
from .factorization import block_cholesky
from .linalg import DEFAULT_TOL
from .states import cc_state, cq_state, random_density, random_super_sppt, werner

EXIT_OK, EXIT_ERROR, EXIT_INVALID, EXIT_VERIFY_FAILED, EXIT_NOT_FOUND = 0, 1, 2, 3, 4


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise InvalidInput(message)


def _read(path: str | None) -> object:
    if path is None or path == "-":
        return ser.loads(sys.stdin.read())
    try:
        with open(path, encoding="utf-8") as fh:
            return ser.loads(fh.read())
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc}") from exc


def _write(obj: object, path: str | None) -> None:
    text = ser.dumps(obj)
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _matrix_file(path: str | None, name: str) -> np.ndarray | None:
    return None if path is None else ser.matrix_from_json(_read(path), name)


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _cmd_gen(args) -> int:
    if args.kind == "werner":
        rho = werner(args.p)
    elif args.kind == "cq":
        raw = _read(args.sigmas)
        if isinstance(raw, dict):
            raw = raw.get("sigmas")
        if not isinstance(raw, list):
            raise InvalidInput("sigmas file must hold a list of matrices")
        sigmas = [ser.matrix_from_json(s, f"sigma[{k}]") for k, s in enumerate(raw)]
        rho = cq_state(args.probs, sigmas, _matrix_file(args.basis_a, "basis_a"))
    elif args.kind == "cc":
        joint = ser.matrix_from_json(_read(args.joint), "joint")
        if np.any(joint.imag != 0):
            raise InvalidInput("joint distribution must be real")
        rho = cc_state(joint.real, _matrix_file(args.basis_a, "basis_a"), _matrix_file(args.basis_b, "basis_b"))
    elif args.kind == "random":
        rho = random_density(args.m, args.n, args.seed, args.rank)
    else:
        rho, _ = random_super_sppt(args.m, args.n, args.seed, args.ranks)
    _write(ser.state_to_json(rho), args.output)
    return EXIT_OK


def _cmd_factor(args) -> int:
    rho = ser.state_from_json(_read(args.input))
    _write(ser.factor_to_json(block_cholesky(rho, args.tol)), args.output)
    return EXIT_OK


def _cmd_classify(args) -> int:
    rho = ser.state_from_json(_read(args.input))
    c = classify(rho, _matrix_file(args.basis, "basis"), args.tol)
    _write(ser.classification_to_json(c), args.output)
    return EXIT_OK


def _cmd_decompose(args) -> int:
    rho = ser.state_from_json(_read(args.input))
    d = separable_decomposition(block_cholesky(rho, args.tol), args.tol)
    _write(ser.decomposition_to_json(d, rho), args.output)
    return EXIT_OK


def _cmd_verify(args) -> int:
    raw = _read(args.decomp)
    d = ser.decomposition_from_json(raw)
    if args.state is not None:
        rho = ser.state_from_json(_read(args.state))
    elif isinstance(raw, dict) and "state" in raw:
        rho = ser.state_from_json(raw["state"])
    else:
        raise InvalidInput("no state given: pass --state or embed it in the decomposition")
    report = verify_decomposition(d, rho, args.tol)
    _write(ser.report_to_json(report), args.output)
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def _cmd_transform(args) -> int:
    rho = ser.state_from_json(_read(args.input))
    u = _matrix_file(args.unitary, "unitary")
    out = local_unitary_A(rho, u) if args.side == "A" else local_unitary_B(rho, u)
    _write(ser.state_to_json(out), args.output)
    return EXIT_OK


def _cmd_search(args) -> int:
    rho = ser.state_from_json(_read(args.input))
    target = "super_sppt" if args.target == "ssppt" else "sppt"
    res = random_basis_search(rho, args.trials, args.tol, args.seed, target)
    if res.found:
        _write({"found": True, "trial": res.trial, "basis": ser.matrix_to_json(res.basis),
                "classification": ser.classification_to_json(res.classification)}, args.output)
        return EXIT_OK
    _write({"found": False, "message": "not found", "trials": res.trials_run,
            "best_trial": res.best_trial, "best_basis": ser.matrix_to_json(res.best_basis),
            "best_classification": ser.classification_to_json(res.best_classification)}, args.output)
    return EXIT_NOT_FOUND


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="sppt", description="SPPT factorization, classification and "
                                                      "separable decomposition of bipartite states.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    def common(p, with_input=True, with_tol=True):
        if with_input:
            p.add_argument("--input", default="-", help="state JSON (default: stdin)")
        p.add_argument("--output", default="-", help="output file (default: stdout)")
        if with_tol:
            p.add_argument("--tol", type=float, default=DEFAULT_TOL)

    gen = sub.add_parser("gen", help="generate a state")
    kinds = gen.add_subparsers(dest="kind", required=True, parser_class=_ArgumentParser)
    p = kinds.add_parser("werner")
    p.add_argument("--p", type=float, required=True)
    common(p, with_input=False, with_tol=False)
    p = kinds.add_parser("cq")
    p.add_argument("--probs", type=_float_list, required=True, help="comma-separated probabilities")
    p.add_argument("--sigmas", required=True, help="JSON list of B-side density matrices")
    p.add_argument("--basis-a", help="A-side unitary JSON; columns are the classical basis")
    common(p, with_input=False, with_tol=False)
    p = kinds.add_parser("cc")
    p.add_argument("--joint", required=True, help="joint distribution table (JSON)")
    p.add_argument("--basis-a")
    p.add_argument("--basis-b")
    common(p, with_input=False, with_tol=False)
    p = kinds.add_parser("random")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rank", type=int)
    common(p, with_input=False, with_tol=False)
    p = kinds.add_parser("random-ssppt")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ranks", type=_int_list, help="comma-separated rank of each pivot block")
    common(p, with_input=False, with_tol=False)
    gen.set_defaults(func=_cmd_gen)

    p = sub.add_parser("factor", help="block Cholesky factor of a state")
    common(p)
    p.set_defaults(func=_cmd_factor)

    p = sub.add_parser("classify", help="PPT / SPPT / super-SPPT verdicts")
    common(p)
    p.add_argument("--basis", help="A-side unitary JSON (columns are the basis vectors)")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("decompose", help="separable decomposition of a super-SPPT state")
    common(p)
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("verify", help="check a decomposition against a state")
    p.add_argument("--decomp", default="-", help="decomposition JSON (default: stdin)")
    p.add_argument("--state", help="state JSON (default: the state embedded in the decomposition)")
    common(p, with_input=False)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("transform", help="apply a local unitary")
    common(p, with_tol=False)
    p.add_argument("--unitary", required=True)
    p.add_argument("--side", choices=["A", "B"], default="A")
    p.set_defaults(func=_cmd_transform)

    p = sub.add_parser("search-basis", help="random search for an SPPT-making A-basis")
    common(p)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--target", choices=["sppt", "ssppt"], default="sppt")
    p.set_defaults(func=_cmd_search)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SpptError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())
