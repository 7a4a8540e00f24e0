"""Command-line front end.

Subcommands: ``gen`` writes canonical or random states to JSON files,
``tilde`` realigns a state or raw matrix, ``analyze`` runs the
separability analysis and ``check-product`` the product-state test.
Verdicts are data, not errors: analysis commands exit 0 whatever the
verdict. Exit code 2 flags malformed input or parameters, exit 3 an
internal consistency failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from typing import Sequence

import numpy as np

from . import criteria, stateio, states
from .linalg import Tolerances
from .multipartite import parse_partition, regroup, tilde_k
from .states import DensityMatrix, PureState, pure_to_density
from .tilde import tilde


class CliError(Exception):
    """User-facing input error; maps to exit code 2."""


def _load_density(path: str) -> DensityMatrix:
    obj = stateio.load(path)
    if isinstance(obj, PureState):
        return pure_to_density(obj)
    if isinstance(obj, DensityMatrix):
        return obj
    raise CliError(f"{path}: expected a density or pure state file, got a raw matrix")


def _apply_partition(state: DensityMatrix, spec: str | None) -> DensityMatrix:
    if spec is None:
        return state
    try:
        return regroup(state, parse_partition(spec))
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def _tolerances(args: argparse.Namespace) -> Tolerances:
    overrides = {}
    if getattr(args, "tol_psd", None) is not None:
        overrides["psd_tol"] = args.tol_psd
    if getattr(args, "tol_rank", None) is not None:
        overrides["rank_tol"] = args.tol_rank
    try:
        return Tolerances(**overrides)
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def _complex_matrix(matrix: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in matrix]


def _term_diagnostics(terms: list[criteria.ConicTerm]) -> list[dict]:
    return [
        {
            "index": i,
            "singular_value": term.weight,
            "left_psd": term.left_check.passed,
            "left_min_eigenvalue": term.left_check.min_eigenvalue,
            "right_psd": term.right_check.passed,
            "right_min_eigenvalue": term.right_check.min_eigenvalue,
        }
        for i, term in enumerate(terms)
    ]


def _cut_payload(cuts: list[criteria.CutReport]) -> list[dict]:
    return [
        {
            "k": cut.k,
            "passed": cut.passed,
            "singular_values": [float(s) for s in cut.singular_values],
            "terms": _term_diagnostics(cut.terms),
        }
        for cut in cuts
    ]


def _certificate_payload(certificate: object | None) -> dict | None:
    if certificate is None:
        return None
    if isinstance(certificate, criteria.SeparabilityCertificate):
        return {
            "kind": "product-mixture",
            "convention": certificate.convention,
            "terms": [
                {
                    "weight": weight,
                    "first": _complex_matrix(first),
                    "second": _complex_matrix(second),
                }
                for weight, first, second in certificate.terms
            ],
        }
    if isinstance(certificate, criteria.FullSeparabilityResult):
        return {"kind": "full-separability", "cuts": _cut_payload(certificate.cuts)}
    raise TypeError(f"unknown certificate type {type(certificate)!r}")


def _verdict_report(verdict: criteria.SeparabilityVerdict, tol: Tolerances) -> dict:
    if verdict.decomposition is not None:
        singular_values: object = [float(s) for s in verdict.decomposition.singular_values]
        diagnostics: object = _term_diagnostics(verdict.decomposition.terms)
    else:
        singular_values = [
            {"k": cut.k, "values": [float(s) for s in cut.singular_values]}
            for cut in verdict.cuts
        ]
        diagnostics = _cut_payload(verdict.cuts)
    return {
        "verdict": verdict.status.value,
        "witness": (
            {"criterion": verdict.witness.criterion, "value": verdict.witness.value}
            if verdict.witness
            else None
        ),
        "certificate": _certificate_payload(verdict.certificate),
        "singular_values": singular_values,
        "per_term_diagnostics": diagnostics,
        "tolerances_used": asdict(tol),
    }


def _print_verdict_human(report: dict) -> None:
    print(f"verdict: {report['verdict']}")
    witness = report["witness"]
    if witness:
        print(f"witness: {witness['criterion']} = {witness['value']:.12g}")
    values = report["singular_values"]
    if values and isinstance(values[0], dict):
        for entry in values:
            joined = " ".join(f"{v:.12g}" for v in entry["values"])
            print(f"singular values (leg {entry['k']}): {joined}")
    else:
        print("singular values: " + " ".join(f"{v:.12g}" for v in values))
    diagnostics = report["per_term_diagnostics"]
    for entry in diagnostics:
        if "terms" in entry:
            print(f"leg {entry['k']}: {'all pairs PSD' if entry['passed'] else 'non-PSD pair'}")
        else:
            print(
                f"term {entry['index']}: sigma={entry['singular_value']:.12g} "
                f"left_psd={entry['left_psd']} (min eig {entry['left_min_eigenvalue']:.3e}) "
                f"right_psd={entry['right_psd']} (min eig {entry['right_min_eigenvalue']:.3e})"
            )
    if report["certificate"] is not None:
        print("certificate: present")


def _cmd_tilde(args: argparse.Namespace) -> int:
    obj = stateio.load(args.input)
    if isinstance(obj, PureState):
        obj = pure_to_density(obj)
    if isinstance(obj, DensityMatrix):
        matrix = obj.matrix
        file_dims: tuple[int, ...] | None = obj.dims
    else:
        matrix = obj
        file_dims = None
    if args.k is not None:
        dims = tuple(args.dims) if args.dims else file_dims
        if dims is None:
            raise CliError("--k needs subsystem dimensions (--dims or a state file with dims)")
        realigned = tilde_k(matrix, dims, args.k)
    else:
        if args.dims and len(args.dims) != 2:
            raise CliError("--dims without --k must list exactly two dimensions")
        if args.shape is not None:
            shape = tuple(args.shape)
        elif args.dims:
            shape = tuple(args.dims)
        elif file_dims is not None and len(file_dims) == 2:
            shape = file_dims
        else:
            raise CliError("bipartite realignment needs --shape M N (or a two-factor state file)")
        realigned = tilde(matrix, shape, args.convention)
    stateio.save(args.output, realigned)
    return 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    tol = _tolerances(args)
    state = _apply_partition(_load_density(args.input), args.partition)
    if state.num_factors < 2:
        raise CliError("analysis needs at least two subsystems; check dims or --partition")
    verdict = criteria.analyze(state, convention=args.convention, tol=tol)
    report = _verdict_report(verdict, tol)
    if args.json:
        print(json.dumps(report))
    else:
        _print_verdict_human(report)
    return 0


def _cmd_check_product(args: argparse.Namespace) -> int:
    tol = _tolerances(args)
    state = _apply_partition(_load_density(args.input), args.partition)
    if state.num_factors < 2:
        raise CliError("product check needs at least two subsystems; check dims or --partition")
    if state.num_factors == 2:
        check = criteria.check_product_bipartite(
            state, convention=args.convention, tol=tol, pure_mode=args.pure
        )
    else:
        check = criteria.check_product_multipartite(state, tol=tol, pure_mode=args.pure)
    report = {
        "accepted": check.accepted,
        "reason": check.reason,
        "ranks": list(check.ranks),
        "factors": (
            [_complex_matrix(f) for f in check.factors] if check.factors is not None else None
        ),
        "tolerances_used": asdict(tol),
    }
    if args.json:
        print(json.dumps(report))
    elif check.accepted:
        print(f"product state: yes ({len(check.factors)} factors)")
        for i, factor in enumerate(check.factors, start=1):
            print(f"factor {i}:")
            print(np.array2string(factor, precision=10, suppress_small=True))
    else:
        print("product state: no")
        print(f"reason: {check.reason}")
    return 0


def _int_arg(value: str, what: str) -> int:
    try:
        return int(value)
    except ValueError as exc:
        raise CliError(f"{what} must be an integer, got {value!r}") from exc


def _float_arg(value: str, what: str) -> float:
    try:
        return float(value)
    except ValueError as exc:
        raise CliError(f"{what} must be a number, got {value!r}") from exc


def _cmd_gen(args: argparse.Namespace) -> int:
    kind = args.kind
    params = args.params
    def need(count: int, usage: str) -> None:
        if len(params) != count:
            raise CliError(f"gen {kind} expects {usage}")

    try:
        if kind == "bell":
            need(1, "one index in 1..4")
            state: DensityMatrix = states.bell(_int_arg(params[0], "index"))
        elif kind == "ghz":
            need(1, "the number of parties")
            state = states.ghz(_int_arg(params[0], "parties"))
        elif kind == "mixed":
            if not params:
                raise CliError("gen mixed expects one or more subsystem dimensions")
            state = states.maximally_mixed(tuple(_int_arg(p, "dimension") for p in params))
        elif kind == "werner":
            need(1, "the mixing parameter p in [0, 1]")
            state = states.werner(_float_arg(params[0], "p"))
        elif kind == "random-separable":
            need(2, "the two factor dimensions")
            dims = (_int_arg(params[0], "m"), _int_arg(params[1], "n"))
            state, _ = states.random_separable(dims, terms=args.terms, seed=args.seed)
        elif kind == "random-density":
            need(2, "the dimension and the rank")
            state = states.random_density(
                _int_arg(params[0], "dim"), _int_arg(params[1], "rank"), seed=args.seed
            )
        else:  # pragma: no cover - argparse choices guard this
            raise CliError(f"unknown kind {kind!r}")
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    stateio.save(args.output, state)
    return 0


def _tilde_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="sepcert tilde", description="Realign a state or matrix and write the result."
    )
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--shape", nargs=2, type=int, metavar=("M", "N"))
    p.add_argument("--dims", nargs="+", type=int, metavar="D")
    p.add_argument("--k", type=int, help="realign around this leg (1-based)")
    p.add_argument("--convention", type=int, choices=range(1, 9), default=8)
    return p


def _analyze_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="sepcert analyze", description="Run the separability analysis on a state file."
    )
    p.add_argument("input")
    p.add_argument("--partition", help='e.g. "(1,2)(3)" or "(12)(3)" to regroup legs')
    p.add_argument("--convention", type=int, choices=range(1, 9), default=8)
    p.add_argument("--tol-psd", type=float, dest="tol_psd")
    p.add_argument("--tol-rank", type=float, dest="tol_rank")
    p.add_argument("--json", action="store_true")
    return p


def _gen_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="sepcert gen", description="Write a canonical or random state file."
    )
    p.add_argument(
        "kind",
        choices=["bell", "ghz", "mixed", "werner", "random-separable", "random-density"],
    )
    p.add_argument("params", nargs="*")
    p.add_argument("output")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--terms", type=int, default=1)
    return p


def _check_product_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="sepcert check-product", description="Test whether a state is a tensor product."
    )
    p.add_argument("input")
    p.add_argument("--pure", action="store_true", help="require rank-one factors")
    p.add_argument("--partition", help="regroup legs before the check")
    p.add_argument("--convention", type=int, choices=range(1, 9), default=8)
    p.add_argument("--tol-psd", type=float, dest="tol_psd")
    p.add_argument("--tol-rank", type=float, dest="tol_rank")
    p.add_argument("--json", action="store_true")
    return p


_COMMANDS = {
    "tilde": (_tilde_parser, _cmd_tilde, "realign a state or matrix"),
    "analyze": (_analyze_parser, _cmd_analyze, "run the separability analysis"),
    "gen": (_gen_parser, _cmd_gen, "write a canonical or random state file"),
    "check-product": (_check_product_parser, _cmd_check_product, "tensor-product test"),
}


def _usage() -> str:
    lines = ["usage: sepcert COMMAND [options]", "", "commands:"]
    lines += [f"  {name:<14} {doc}" for name, (_, _, doc) in _COMMANDS.items()]
    return "\n".join(lines)


def main(argv: Sequence[str] | None = None) -> int:
    args_list = list(sys.argv[1:] if argv is None else argv)
    if not args_list:
        print(_usage(), file=sys.stderr)
        return 2
    if args_list[0] in ("-h", "--help"):
        print(_usage())
        return 0
    command = args_list[0]
    if command not in _COMMANDS:
        print(f"error: unknown command {command!r}\n{_usage()}", file=sys.stderr)
        return 2
    make_parser, func, _ = _COMMANDS[command]
    try:
        # Intermixed parsing lets options sit between positionals, e.g.
        # "gen random-separable 2 3 --seed 7 out.json".
        args = make_parser().parse_intermixed_args(args_list[1:])
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return func(args)
    except criteria.InternalConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return 3
    except (CliError, stateio.StateFileError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
