"""Command-line front end.

Three verbs:

* ``fit``:     regress a CSV of samples onto one family, writing
               ``model.json`` and ``residuals.csv``;
* ``example``: run one of the three built-in demo scenarios;
* ``tables``:  print the exact rational coefficient rows of the
               biorthogonal polynomials, for inspection.

Exit codes: 0 success, 2 unusable input (malformed CSV, bad flags),
3 family/domain mismatch (samples outside the family's interval, or a
family that cannot fit from sampled data at all).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from .biorth import build
from .demos import run_closed_form_decay, run_high_order_wiggle, run_noisy_chirp
from .exact import ExactPoly, ScaleTag, Weight
from .families import FamilyKind, FamilySpec
from .regress import (EvenPanelParityError, FitModel, NonUniformGridError,
                      SampleSet, UnsupportedSpaceError, bic_score, fit,
                      l2_error, moments_from_samples)

__all__ = ["main", "load_model", "format_beta_row"]

MAX_ORDER = 64
MAX_TABLE_ORDER = 20

EXIT_BAD_INPUT = 2
EXIT_DOMAIN = 3


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


# ----------------------------------------------------------------------
# shared plumbing
# ----------------------------------------------------------------------

def _family_from_args(name: str, b: str | None) -> FamilySpec:
    kind = FamilyKind(name)
    if kind is FamilyKind.LEGENDRE_SHIFTED:
        try:
            bval = Fraction(b) if b is not None else Fraction(1)
        except (ValueError, ZeroDivisionError):
            raise CliError(EXIT_BAD_INPUT, f"--b must be a rational, got {b!r}")
        if bval <= 0:
            raise CliError(EXIT_BAD_INPUT, "--b must be positive")
        return FamilySpec.legendre_shifted(bval)
    if b is not None:
        raise CliError(EXIT_BAD_INPUT,
                       f"--b applies to legendre0b only, not {name}")
    if kind is FamilyKind.LAGUERRE:
        return FamilySpec.laguerre()
    if kind is FamilyKind.LEGENDRE_SYM:
        return FamilySpec.legendre_sym()
    return FamilySpec.chebyshev()


def _read_samples(path: Path) -> SampleSet:
    if not path.exists():
        raise CliError(EXIT_BAD_INPUT, f"input file not found: {path}")
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise CliError(EXIT_BAD_INPUT, f"{path}: empty file")
            if [h.strip().lower() for h in header] != ["x", "y"]:
                raise CliError(EXIT_BAD_INPUT,
                               f"{path}: header must be 'x,y', got {','.join(header)!r}")
            xs, ys = [], []
            for lineno, row in enumerate(reader, start=2):
                if not row:
                    continue
                if len(row) != 2:
                    raise CliError(EXIT_BAD_INPUT,
                                   f"{path}:{lineno}: expected two fields, got {len(row)}")
                try:
                    xs.append(float(row[0]))
                    ys.append(float(row[1]))
                except ValueError:
                    raise CliError(EXIT_BAD_INPUT,
                                   f"{path}:{lineno}: non-numeric value in {row!r}")
    except OSError as exc:
        raise CliError(EXIT_BAD_INPUT, f"{path}: {exc}")
    if not xs:
        raise CliError(EXIT_BAD_INPUT, f"{path}: no data rows")
    try:
        return SampleSet(np.asarray(xs), np.asarray(ys))
    except ValueError as exc:
        raise CliError(EXIT_BAD_INPUT, f"{path}: {exc}")


def _rational_string(value: Fraction, scale: ScaleTag) -> str:
    body = str(value)
    if scale is ScaleTag.INV_PI:
        return f"({body})/pi"
    return body


def _model_to_json(model: FitModel) -> dict:
    params: dict[str, str] = {}
    if model.family.kind is FamilyKind.LEGENDRE_SHIFTED:
        params["b"] = str(model.family.b)
    exact = model.coeffs_exact
    return {
        "family": model.family.kind.value,
        "params": params,
        "k": model.k,
        "exponents": list(model.exponents),
        "coeffs": [f"{c:.17g}" for c in model.coeffs],
        "coeffs_exact": ([_rational_string(c, model.scale) for c in exact]
                         if exact is not None else None),
        "diagnostics": dict(model.diagnostics),
    }


def load_model(source: str | Path | dict) -> FitModel:
    """Rebuild an evaluable FitModel from model.json (path or parsed dict).

    Only the float coefficient strings are consulted; they are written
    with 17 significant digits, so the rebuilt model evaluates bit for
    bit like the one that was saved.
    """
    if not isinstance(source, dict):
        source = json.loads(Path(source).read_text(encoding="utf-8"))
    fam = _family_from_args(source["family"], source["params"].get("b"))
    coeffs = tuple(float(s) for s in source["coeffs"])
    return FitModel(family=fam, k=int(source["k"]),
                    exponents=tuple(int(e) for e in source["exponents"]),
                    coeffs=coeffs, coeffs_exact=None, scale=fam.poly_scale,
                    diagnostics=dict(source.get("diagnostics", {})))


# ----------------------------------------------------------------------
# verbs
# ----------------------------------------------------------------------

def _cmd_fit(args) -> int:
    fam = _family_from_args(args.family, args.b)
    if not 0 <= args.k <= MAX_ORDER:
        raise CliError(EXIT_BAD_INPUT, f"--k must be in 0..{MAX_ORDER}")
    if not 0 <= args.removals <= args.k:
        raise CliError(EXIT_BAD_INPUT,
                       "--removals must leave at least one active exponent")
    samples = _read_samples(Path(args.input))

    space = fam.space
    if not (space.contains(samples.xs[0]) and space.contains(samples.xs[-1])):
        hi_text = "inf" if space.hi is None else f"{float(space.hi):g}"
        raise CliError(EXIT_DOMAIN,
                       f"samples span [{samples.xs[0]:g}, {samples.xs[-1]:g}] but "
                       f"family {fam.describe()} lives on "
                       f"[{float(space.lo):g}, {hi_text}]")
    try:
        mom = moments_from_samples(samples, fam.space, args.k)
    except UnsupportedSpaceError as exc:
        raise CliError(EXIT_DOMAIN, f"family {fam.describe()}: {exc}")
    except (NonUniformGridError, EvenPanelParityError) as exc:
        raise CliError(EXIT_BAD_INPUT, f"{args.input}: {exc}")

    model = fit(fam, args.k, mom, removals=args.removals)
    fitted = model(samples.xs)
    model.diagnostics.update({
        "l2_error": float(l2_error(model, samples)),
        "max_abs_error": float(np.max(np.abs(samples.ys - fitted))),
        "bic": float(bic_score(model, samples)),
        "n_params": model.n_params,
    })

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "model.json").write_text(
        json.dumps(_model_to_json(model), sort_keys=True, indent=2) + "\n",
        encoding="utf-8")
    with (out_dir / "residuals.csv").open("w", encoding="utf-8") as fh:
        fh.write("x,y,fit,abs_error\n")
        for x, y, f in zip(samples.xs, samples.ys, fitted):
            fh.write(f"{x:.17g},{y:.17g},{f:.17g},{abs(y - f):.17g}\n")

    print(f"fit {fam.describe()} k={args.k}"
          + (f" removals={args.removals}" if args.removals else "")
          + f": n_params={model.n_params}"
          f" l2_error={model.diagnostics['l2_error']:.6g}"
          f" bic={model.diagnostics['bic']:.6g}")
    print(f"wrote {out_dir / 'model.json'} and {out_dir / 'residuals.csv'}")
    return 0


def _cmd_example(args) -> int:
    out_dir = Path(args.out)
    if args.number == 1:
        report = run_noisy_chirp(out_dir, seed=args.seed)
        fits = report["fits"]
        print(f"noisy chirp (seed={report['seed']}): "
              f"err(k17)={fits['k17']['error_vs_truth']:.4e} "
              f"err(pruned)={fits['pruned']['error_vs_truth']:.4e} "
              f"err(k14)={fits['k14']['error_vs_truth']:.4e}")
        print(f"removed exponents: {fits['pruned']['removed']}  "
              f"BIC: {fits['k17']['bic']:.2f} < {fits['pruned']['bic']:.2f} "
              f"< {fits['k14']['bic']:.2f} "
              f"(ordering {'holds' if report['bic_ordering_ok'] else 'violated'})")
    elif args.number == 2:
        report = run_closed_form_decay(out_dir)
        for row in report["fits"]:
            print(f"{row['target']:>13} {row['family']:>10} k={row['k']:>2}: "
                  f"max|err| on [0,10] = {row['max_abs_error_0_10']:.4e}")
    else:
        report = run_high_order_wiggle(out_dir)
        for fam_name in ("legendre", "chebyshev"):
            e = report[fam_name]
            print(f"{fam_name:>9} k=36: rms_error={e['rms_error']:.4e} "
                  f"max|err|={e['max_abs_error']:.4e}")
        base = report["baseline"]
        print(f" baseline k=36: condition~{base['condition_estimate']:.2e} "
              f"mean|err| ratio vs legendre = {base['mean_error_ratio_vs_legendre']:.1f}")
    print(f"wrote {out_dir / 'report.json'}")
    return 0


def format_beta_row(n: int, poly: ExactPoly) -> str:
    """One display line: 'beta_2: 30 - 180 x + 180 x^2' (exact rationals)."""
    terms = []
    for e, c in enumerate(poly.coeffs):
        if c == 0:
            continue
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            xpart = "x" if e == 1 else f"x^{e}"
            body = xpart if mag == 1 else f"{mag} {xpart}"
        if not terms:
            terms.append(body if c > 0 else f"-{body}")
        else:
            terms.append(f"{'+' if c > 0 else '-'} {body}")
    body = " ".join(terms) if terms else "0"
    if poly.scale is ScaleTag.INV_PI:
        body = f"(1/pi) * ({body})"
    return f"beta_{n}: {body}"


def _cmd_tables(args) -> int:
    fam = _family_from_args(args.family, args.b)
    if not 0 <= args.k <= MAX_TABLE_ORDER:
        raise CliError(EXIT_BAD_INPUT,
                       f"--k must be in 0..{MAX_TABLE_ORDER} for exact tables")
    s = build(fam, args.k)
    print(f"{fam.describe()}, order {args.k}: monomial coefficients of each "
          "biorthogonal row")
    for n in s.active:
        print(format_beta_row(n, s.beta(n)))
    return 0


# ----------------------------------------------------------------------
# argument parsing
# ----------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biopoly",
        description="Polynomial regression through biorthogonal sequences, "
                    "plus the demo scenarios and exact coefficient tables.")
    sub = parser.add_subparsers(dest="verb", required=True)

    families = [k.value for k in FamilyKind]

    p_fit = sub.add_parser("fit", help="fit a CSV of samples (header x,y)")
    p_fit.add_argument("--family", required=True, choices=families)
    p_fit.add_argument("--b", default=None,
                       help="right endpoint for legendre0b, as a rational "
                            "(default 1)")
    p_fit.add_argument("--k", type=int, required=True,
                       help=f"fit order, 0..{MAX_ORDER}")
    p_fit.add_argument("--removals", type=int, default=0,
                       help="greedy term removals after the full fit")
    p_fit.add_argument("--input", required=True, help="CSV path, header x,y")
    p_fit.add_argument("--out", required=True, help="output directory")
    p_fit.set_defaults(func=_cmd_fit)

    p_ex = sub.add_parser("example", help="run a built-in demo scenario")
    p_ex.add_argument("number", type=int, choices=(1, 2, 3),
                      help="1 noisy chirp, 2 closed-form decay targets, "
                           "3 order-36 fits vs the naive solver")
    p_ex.add_argument("--seed", type=int, default=42,
                      help="noise seed for scenario 1 (default 42; "
                           "ignored by 2 and 3)")
    p_ex.add_argument("--out", required=True, help="output directory")
    p_ex.set_defaults(func=_cmd_example)

    p_tab = sub.add_parser("tables",
                           help="print exact biorthogonal coefficient rows")
    p_tab.add_argument("--family", required=True, choices=families)
    p_tab.add_argument("--b", default=None,
                       help="right endpoint for legendre0b (default 1)")
    p_tab.add_argument("--k", type=int, required=True,
                       help=f"order, 0..{MAX_TABLE_ORDER}")
    p_tab.set_defaults(func=_cmd_tables)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"biopoly: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
