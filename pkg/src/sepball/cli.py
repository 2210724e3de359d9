"""``sepball`` command-line entry point.

Exit status: 0 on success, 1 on input errors, 2 when ``--strict`` is given and
the primary criterion does not certify.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

import numpy as np

from . import criteria, matrixio, nmr, oracle, states
from .errors import SepballError
from .hermitian import MultipartiteStructure

EXIT_OK, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # usage errors are input errors; 2 is reserved for inconclusive verdicts
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


class InputError(Exception):
    """Any user-input problem; the message is printed and the exit status is 1."""


def _structure(text: str) -> MultipartiteStructure:
    try:
        return MultipartiteStructure.parse(text)
    except SepballError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _read_matrix(path: str, tol: float) -> np.ndarray:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return matrixio.loads(text, tol=tol)
    except matrixio.MatrixFormatError as exc:
        raise InputError(f"malformed matrix file: {exc}") from None
    except SepballError as exc:
        raise InputError(f"invalid matrix: {exc}") from None


def _load(args) -> np.ndarray:
    rho = _read_matrix(args.input, args.herm_tol)
    s = getattr(args, "structure", None)
    if s is not None and rho.shape[0] != s.total_dim:
        raise InputError(f"dimension mismatch: matrix has dim {rho.shape[0]} "
                         f"but --structure {s} has total dimension {s.total_dim}")
    return rho


def _emit(args, doc: dict, human: str) -> None:
    if args.output == "json":
        print(json.dumps(doc, indent=2))
    else:
        print(human)


def _result_line(r: criteria.CertificationResult) -> str:
    return (f"{r.criterion:<22} {r.verdict.value:<22} distance={r.distance:.12g} "
            f"radius={r.radius_used:.12g} margin={r.margin:+.6g}")


def cmd_certify(args) -> int:
    rho = _load(args)
    s = args.structure
    results = []
    if s.m >= 2:
        results.append(criteria.certify_unnormalized(rho, s))
    unit_trace = abs(np.trace(rho).real - 1) <= criteria.TRACE_TOL
    if args.normalized and not unit_trace:
        raise InputError(f"--normalized needs a unit-trace matrix, got trace {np.trace(rho).real!r}")
    if unit_trace and s.m >= 2:
        results.append(criteria.certify_normalized(rho, s, tight=args.tight))
    if args.real:
        results.append(criteria.certify_real_separable(rho, s))
        in_rlin = criteria.in_rlin(rho, s)
    if not results:
        raise InputError("need at least two parties, or --real")
    if args.normalized:
        primary = next(r for r in results if r.criterion.startswith("normalized"))
    elif args.real:
        primary = results[-1]
    else:
        primary = results[0]
    doc = {
        "structure": list(s.dims),
        "verdict": primary.verdict.value,
        "primary": primary.criterion,
        "results": [r.to_dict() for r in results],
    }
    if args.real:
        doc["in_rlin"] = in_rlin
    lines = [f"structure {s}: {primary.verdict.value} ({primary.criterion})"]
    lines += ["  " + _result_line(r) for r in results]
    _emit(args, doc, "\n".join(lines))
    if args.strict and not primary.certified:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_mu(args) -> int:
    rho = _load(args)
    try:
        rep = criteria.scaling_report(rho)
    except SepballError as exc:
        raise InputError(str(exc)) from None
    doc = rep.to_dict()
    res = ", ".join(f"{r:.3e}" for r in rep.equivalence_residuals)
    human = (f"mu = {rep.mu:.15g}\npurity = {rep.purity:.15g}\n"
             f"||rho - I/d||_2 = {rep.distance_to_normalized_identity:.15g}\nresiduals = [{res}]")
    _emit(args, doc, human)
    return EXIT_OK


_DEFAULT_STRUCTURE = {
    states.Family.WERNER: (2, 2),
    states.Family.MAX_ENTANGLED: (2, 2),
}


def cmd_gen(args) -> int:
    family = states.Family(args.family)
    dims = args.structure.dims if args.structure else _DEFAULT_STRUCTURE.get(family)
    if dims is None:
        raise InputError(f"--structure is required for family {family.value}")
    params = {}
    for key in ("p", "eps", "eta", "terms"):
        val = getattr(args, key)
        if val is not None:
            params[key] = val
    try:
        spec = states.StateSpec(family, MultipartiteStructure(tuple(dims)), params, args.seed)
        rho = states.build(spec)
    except (SepballError, ValueError) as exc:
        raise InputError(f"cannot generate {family.value}: {exc}") from None
    text = matrixio.dumps(rho, spec=json.loads(spec.to_json()))
    if args.out and args.out != "-":
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def cmd_thresholds(args) -> int:
    if args.eta is not None:
        eta = args.eta
    else:
        try:
            eta = nmr.eta_from_physics(args.temperature, args.field, args.moment)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    if not 0 < eta < 1:
        raise InputError(f"eta must lie in (0, 1), got {eta!r}")
    table = nmr.threshold_table(eta)
    doc = {"eta": eta, "thresholds": [r.to_dict() for r in table]}
    lines = [f"eta = {eta:.6g}", f"{'bound':<22}{'first violating m':>18}{'separable through':>19}"]
    lines += [f"{r.bound_name:<22}{r.first_violating_m:>18}{r.guaranteed_separable_through:>19}" for r in table]
    _emit(args, doc, "\n".join(lines))
    return EXIT_OK


def cmd_oracle(args) -> int:
    rho = _load(args)
    s = args.structure
    if s.m < 2:
        raise InputError("the oracle needs at least two parties")
    tr = np.trace(rho).real
    if tr <= 0:
        raise InputError(f"the oracle needs positive trace, got {tr!r}")
    mins = oracle.ppt_min_eigenvalues(rho / tr, s)
    ppt = {",".join(map(str, k)): v >= -args.ppt_tol for k, v in mins.items()}
    doc = {
        "structure": list(s.dims),
        "ppt": ppt,
        "ppt_min_eigenvalues": {",".join(map(str, k)): v for k, v in mins.items()},
        "ppt_exact": oracle.ppt_is_exact(s),
    }
    lines = [f"side {','.join(map(str, k)):<10} PPT={'yes' if v >= -args.ppt_tol else 'NO'} min eig={v:+.6g}"
             for k, v in mins.items()]
    if oracle.ppt_is_exact(s):
        lines.append("PPT is exact here: " + ("separable" if all(ppt.values()) else "entangled"))
    if args.decompose:
        try:
            dec = oracle.search_decomposition(rho, s, budget=args.budget, tol=args.tol, seed=args.seed)
        except SepballError as exc:
            raise InputError(str(exc)) from None
        doc["decomposition"] = dec.to_dict()
        status = ("exhausted (not an entanglement verdict)" if dec.exhausted else "found")
        lines.append(f"decomposition {status}: {len(dec.weights)} terms, "
                     f"error {dec.reconstruction_error:.3e} after {dec.iterations} iterations")
    _emit(args, doc, "\n".join(lines))
    return EXIT_OK


def cmd_fixture(args) -> int:
    vals = oracle.sqrt2_fixture()
    ok = oracle.sqrt2_fixture_check()
    doc = dict(vals, passed=ok)
    human = "\n".join([f"{k} = {v:.15g}" for k, v in vals.items()] + [f"passed = {ok}"])
    _emit(args, doc, human)
    return EXIT_OK if ok else EXIT_INCONCLUSIVE


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sepball", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("human", "json"), default="human")

    matrix_in = argparse.ArgumentParser(add_help=False)
    matrix_in.add_argument("--input", default="-", help="matrix JSON file, '-' for stdin (default)")
    matrix_in.add_argument("--herm-tol", type=float, default=1e-9, help="Hermiticity tolerance")

    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("certify", parents=[common, matrix_in], help="run the ball criteria")
    p.add_argument("--structure", type=_structure, required=True, help="subsystem dims, e.g. 2,2,2")
    p.add_argument("--normalized", action="store_true", help="make the unit-trace criterion primary")
    tight = p.add_mutually_exclusive_group()
    tight.add_argument("--tight", dest="tight", action="store_true", default=True)
    tight.add_argument("--loose", dest="tight", action="store_false")
    p.add_argument("--real", action="store_true", help="also run the real-subspace criterion")
    p.add_argument("--strict", action="store_true", help="exit 2 unless the primary criterion certifies")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("mu", parents=[common, matrix_in], help="scaling report")
    p.set_defaults(func=cmd_mu, structure=None)

    p = sub.add_parser("gen", parents=[common], help="write a generated matrix as JSON")
    p.add_argument("--family", choices=[f.value for f in states.Family], required=True)
    p.add_argument("--structure", type=_structure)
    p.add_argument("--p", type=float)
    p.add_argument("--eps", type=float)
    p.add_argument("--eta", type=float)
    p.add_argument("--terms", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("thresholds", parents=[common], help="NMR qubit-count thresholds")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--eta", type=float)
    src.add_argument("--temperature", type=float, help="kelvin; needs --field")
    p.add_argument("--field", type=float, help="tesla")
    p.add_argument("--moment", type=float, default=nmr.PROTON_MOMENT, help="J/T (default: proton)")
    p.set_defaults(func=cmd_thresholds)

    p = sub.add_parser("oracle", parents=[common, matrix_in], help="PPT check and decomposition search")
    p.add_argument("--structure", type=_structure, required=True)
    p.add_argument("--decompose", action="store_true")
    p.add_argument("--budget", type=int, default=10_000)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ppt-tol", type=float, default=oracle.PPT_TOL)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("fixture", parents=[common], help="check the sqrt(2) tightness fixture")
    p.set_defaults(func=cmd_fixture)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "thresholds" and args.temperature is not None and args.field is None:
        parser.error("--temperature needs --field")
    try:
        return args.func(args)
    except (InputError, SepballError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
