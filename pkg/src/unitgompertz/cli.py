"""Command-line interface.

Exit codes: 0 success, 1 domain or usage error, 2 convergence or estimation
failure, 3 I/O error.  Numbers are written with 17 significant digits so
that a value read back is bit-identical to the one written.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Any, Iterable, Optional, Sequence, TextIO

import numpy as np

from . import entropy, lmom, oracle, trunc
from .data import DataSample
from .dist import UnitGompertz
from .errors import ArgumentError, DomainError, EstimationError, UnitGompertzError

__all__ = ["main", "build_parser", "read_values", "SCHEMA_VERSION"]

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2
EXIT_IO = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit with 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt(v: float) -> str:
    return f"{v:.17g}"


def _parse_real(token: str, where: str) -> float:
    try:
        v = float(token)
    except ValueError:
        raise ArgumentError(f"{where}: cannot parse {token!r} as a real number") from None
    if not math.isfinite(v):
        raise ArgumentError(f"{where}: {token!r} is not a finite number")
    return v


def read_values(path: str, *, unit_interval: bool = True) -> list[float]:
    """Read one real per line; blank lines and ``#`` comments are skipped.

    Raises:
        ArgumentError: on a token that is not a finite real (names the line).
        DomainError: when ``unit_interval`` and a value is outside (0, 1).
        OSError: when the file cannot be read.
    """
    stream = sys.stdin if path == "-" else open(path, encoding="utf-8")
    values = []
    try:
        for lineno, raw in enumerate(stream, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            where = f"{path}, line {lineno}"
            v = _parse_real(line, where)
            if unit_interval and not 0.0 < v < 1.0:
                raise DomainError(f"{where}: value {line!r} is outside (0, 1)")
            values.append(v)
    finally:
        if stream is not sys.stdin:
            stream.close()
    return values


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _document(command: str, params: dict, results: Any) -> str:
    doc = {"schema": SCHEMA_VERSION, "command": command, "params": params, "results": results}
    return json.dumps(_jsonable(doc), indent=2, allow_nan=False) + "\n"


def _csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(c) if isinstance(c, float) else str(c) for c in row))
    return "\n".join(lines) + "\n"


def _emit(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _dist(args: argparse.Namespace) -> UnitGompertz:
    return UnitGompertz(args.alpha, args.beta)


def _params(args: argparse.Namespace) -> dict:
    return {"alpha": args.alpha, "beta": args.beta}


# -- subcommands ----------------------------------------------------------------

_EVALUATORS = {
    "pdf": lambda d, x: float(d.pdf(x)),
    "cdf": lambda d, x: float(d.cdf(x)),
    "quantile": lambda d, x: float(d.quantile(x)),
    "trunc-below": lambda d, x: float(trunc.truncated_mean_below(d, x)),
    "trunc-above": lambda d, x: float(trunc.truncated_mean_above(d, x)),
}


def cmd_eval(args: argparse.Namespace) -> int:
    d = _dist(args)
    if args.x:
        xs = [_parse_real(tok, f"--x value #{i}") for i, tok in enumerate(args.x, start=1)]
    else:
        xs = read_values(args.input, unit_interval=False)
    fn = _EVALUATORS[args.which]
    if args.which == "quantile":
        for i, x in enumerate(xs, start=1):
            if not 0.0 < x < 1.0:
                raise DomainError(f"quantile level #{i} = {x!r} must lie in (0, 1)")
    rows = [(x, fn(d, x)) for x in xs]
    if args.format == "json":
        text = _document("eval", {**_params(args), "which": args.which}, [list(r) for r in rows])
    else:
        text = _csv(("x", "value"), rows)
    _emit(text, args.out)
    return EXIT_OK


def cmd_sample(args: argparse.Namespace) -> int:
    if args.n < 1:
        raise ArgumentError(f"--n must be at least 1, got {args.n}")
    x = _dist(args).draw(args.n, args.seed)
    _emit("".join(fmt(float(v)) + "\n" for v in x), args.out)
    return EXIT_OK


def _load_sample(path: str, minimum: int) -> DataSample:
    values = read_values(path)
    if len(values) < minimum:
        raise ArgumentError(f"{path}: need at least {minimum} observations, got {len(values)}")
    return DataSample(np.array(values))


def cmd_fit(args: argparse.Namespace) -> int:
    data = _load_sample(args.input, 4)
    sample_l = lmom.sample_lmoments(data)
    try:
        fitted, diag = lmom.fit_by_lmoments(data)
    except EstimationError as exc:
        best = exc.best
        results = {
            "converged": False,
            "alpha": best.alpha if best is not None else None,
            "beta": best.beta if best is not None else None,
            "diagnostics": exc.diagnostics.to_dict() if exc.diagnostics is not None else None,
            "sample_lmoments": sample_l.to_dict(),
            "message": str(exc),
        }
        _emit(_document("fit", {"input": args.input, "n": data.n}, results), args.out)
        raise
    results = {
        "converged": True,
        "alpha": fitted.alpha,
        "beta": fitted.beta,
        "residual": diag.residual,
        "diagnostics": diag.to_dict(),
        "sample_lmoments": sample_l.to_dict(),
    }
    _emit(_document("fit", {"input": args.input, "n": data.n}, results), args.out)
    return EXIT_OK


def cmd_lmom(args: argparse.Namespace) -> int:
    if args.input is not None:
        if args.alpha is not None or args.beta is not None:
            raise ArgumentError("give either --input or --alpha/--beta, not both")
        data = _load_sample(args.input, 4)
        lm = lmom.sample_lmoments(data)
        params: dict = {"input": args.input, "n": data.n}
    else:
        if args.alpha is None or args.beta is None:
            raise ArgumentError("lmom needs --input or both --alpha and --beta")
        lm = lmom.population_lmoments(_dist(args))
        params = _params(args)
    fields = ("lambda1", "lambda2", "lambda3", "lambda4", "tau2", "tau3", "tau4")
    if args.format == "json":
        text = _document("lmom", params, lm.to_dict())
    else:
        text = _csv(("quantity", "value"), [(f, float(getattr(lm, f))) for f in fields])
    _emit(text, args.out)
    return EXIT_OK


_FAMILIES = {
    "tsallis": "tsallis",
    "mh": "mathai_haubold",
    "mathai-haubold": "mathai_haubold",
}


def cmd_entropy(args: argparse.Namespace) -> int:
    d = _dist(args)
    family = _FAMILIES[args.family]
    gammas = [_parse_real(tok, f"--gamma value #{i}") for i, tok in enumerate(args.gamma, start=1)]
    if args.paper_formula and family != "mathai_haubold":
        raise ArgumentError("--paper-formula applies to the Mathai-Haubold family only")
    values = []
    for g in gammas:
        if family == "tsallis":
            values.append(entropy.tsallis(d, g, args.method))
        else:
            values.append(entropy.mathai_haubold(d, g, args.method, paper_formula=args.paper_formula))
    if args.format == "json":
        params = {**_params(args), "family": family, "method": args.method, "paper_formula": args.paper_formula}
        text = _document("entropy", params, [v.to_dict() for v in values])
    else:
        text = _csv(("gamma", "value"), [(v.gamma, v.value) for v in values])
    _emit(text, args.out)
    return EXIT_OK


def cmd_gof(args: argparse.Namespace) -> int:
    data = _load_sample(args.input, 20)
    failure = None
    try:
        fitted, diag = lmom.fit_by_lmoments(data)
    except EstimationError as exc:
        # a failed fit is itself evidence of misfit; judge the best in-bounds parameters
        if exc.best is None:
            raise
        failure, fitted, diag = exc, exc.best, exc.diagnostics
    report = trunc.characterization_gof(data, fitted, args.n_eval)
    fit = {"converged": failure is None, "alpha": fitted.alpha, "beta": fitted.beta,
           "diagnostics": diag.to_dict() if diag is not None else None}
    results = {"fit": fit, "gof": report.to_dict()}
    _emit(_document("gof", {"input": args.input, "n": data.n, "n_eval": args.n_eval}, results), args.out)
    if failure is not None:
        raise failure
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    d = _dist(args)
    cfg = oracle.VerifyConfig(mc_n=args.mc_n, seed=args.seed)
    reports = oracle.verify_all(d, cfg)
    ok = oracle.all_agree(reports)
    summary = {
        "all_agree": ok,
        "counted": sum(1 for r in reports if not r.informational),
        "informational": sum(1 for r in reports if r.informational),
    }
    params = {**_params(args), "mc_n": args.mc_n, "seed": args.seed}
    doc = _document("verify", params, {"summary": summary, "reports": [r.to_dict() for r in reports]})
    if args.format == "json":
        _emit(doc, args.out)
    else:
        _emit(oracle.format_table(reports) + "\n", None)
        if args.out is not None:
            _emit(doc, args.out)
    return EXIT_OK if ok else EXIT_NUMERIC


# -- parser -------------------------------------------------------------------


def _positive(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse {text!r} as a real number") from None
    if not (math.isfinite(v) and v > 0.0):
        raise argparse.ArgumentTypeError(f"must be a finite positive number, got {text!r}")
    return v


def _count(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse {text!r} as an integer") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="unitgompertz", description="Unit-Gompertz distribution toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def params(sp: argparse.ArgumentParser, required: bool = True) -> None:
        sp.add_argument("--alpha", type=_positive, required=required, help="shape alpha > 0")
        sp.add_argument("--beta", type=_positive, required=required, help="shape beta > 0")

    def output(sp: argparse.ArgumentParser, formats: bool = True) -> None:
        sp.add_argument("--out", help="output path (default: standard output)")
        if formats:
            sp.add_argument("--format", choices=("csv", "json"), default="csv")

    sp = sub.add_parser("eval", help="evaluate pdf, cdf, quantile or truncated means")
    params(sp)
    sp.add_argument("--which", choices=tuple(_EVALUATORS), required=True)
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--x", nargs="+", metavar="X", help="points (or levels for quantile)")
    src.add_argument("--input", help="file with one value per line")
    output(sp)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("sample", help="draw a seeded sample, one value per line")
    params(sp)
    sp.add_argument("--n", type=_count, required=True)
    sp.add_argument("--seed", type=_count, required=True)
    output(sp, formats=False)
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("fit", help="fit alpha and beta by L-moment matching (JSON)")
    sp.add_argument("--input", required=True)
    output(sp, formats=False)
    sp.set_defaults(func=cmd_fit)

    sp = sub.add_parser("lmom", help="sample or population L-moments")
    params(sp, required=False)
    sp.add_argument("--input")
    output(sp)
    sp.set_defaults(func=cmd_lmom)

    sp = sub.add_parser("entropy", help="Tsallis or Mathai-Haubold entropy")
    params(sp)
    sp.add_argument("--family", choices=tuple(_FAMILIES), required=True)
    sp.add_argument("--gamma", nargs="+", required=True)
    sp.add_argument("--method", choices=entropy.METHODS, default="closed_form")
    sp.add_argument("--paper-formula", action="store_true",
                    help="Mathai-Haubold only: use the published closed-form display")
    output(sp)
    sp.set_defaults(func=cmd_entropy)

    sp = sub.add_parser("gof", help="fit, then compare empirical and fitted truncated means (JSON)")
    sp.add_argument("--input", required=True)
    sp.add_argument("--n-eval", type=_count, default=7)
    output(sp, formats=False)
    sp.set_defaults(func=cmd_gof)

    sp = sub.add_parser("verify", help="run the closed-form verification battery")
    params(sp)
    sp.add_argument("--mc-n", type=_count, default=oracle.VerifyConfig.mc_n)
    sp.add_argument("--seed", type=_count, default=oracle.VerifyConfig.seed)
    sp.add_argument("--out", help="also write the JSON report here")
    sp.add_argument("--format", choices=("table", "json"), default="table")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[Sequence[str]] = None, stderr: Optional[TextIO] = None) -> int:
    err = stderr if stderr is not None else sys.stderr
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, ArgumentError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except UnitGompertzError as exc:
        print(f"error: {exc}", file=err)
        return exc.exit_code
    except (ArithmeticError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=err)
        return EXIT_NUMERIC if isinstance(exc, ArithmeticError) else EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_IO


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
