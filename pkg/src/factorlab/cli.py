"""Command-line interface.

Subcommands cover each stage plus the full run:

    synth      write a seeded synthetic factor CSV
    ingest     validate a CSV and report its shape
    screen     per-predictor simple-regression screening
    fit        linear fit with the coefficient table and outlier flags
    diagnose   fit plus the full diagnostics bundle and figures
    forest     train and serialize a random forest
    evaluate   cross-validated linear-vs-forest comparison
    analyze    the whole pipeline into one output directory
    report     re-render report.txt/tables/figures from stored report.json

Exit codes: 0 success, 2 input or validation error, 3 numerical error,
1 internal error. Failures print a machine-readable JSON object to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import NumericalError, ValidationError
from .pipeline import (
    PipelineOptions,
    run_analyze,
    run_diagnose,
    run_evaluate,
    run_fit,
    run_forest,
    run_ingest,
    run_report,
    run_screen,
    run_synth,
)
from .version import SPEC_VERSION

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def _csv_list(text: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in text.split(",") if part.strip())


def _add_common(parser: argparse.ArgumentParser, *, needs_input=True, needs_out=True):
    if needs_input:
        parser.add_argument("--input", required=True, help="input CSV path")
    if needs_out:
        parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--seed", type=int, default=0, help="master random seed")
    parser.add_argument("--response", default=None, help="response column name")
    parser.add_argument(
        "--predictors", type=_csv_list, default=None,
        help="comma-separated predictor columns (default: all non-response)",
    )
    parser.add_argument("--k", type=int, default=10, help="cross-validation folds")
    parser.add_argument("--alpha", type=float, default=0.05,
                        help="significance level")
    parser.add_argument("--outlier-threshold", type=float, default=3.0,
                        help="|studentized residual| cut for outlier flags")
    parser.add_argument("--vif-threshold", type=float, default=4.0,
                        help="variance inflation cut for collinearity flags")
    parser.add_argument("--trees", type=int, default=500,
                        help="forest size")
    parser.add_argument("--min-leaf", type=int, default=5,
                        help="minimum rows per leaf")
    parser.add_argument("--format", choices=("json", "text"), default="text",
                        help="stdout summary format")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="factorlab",
        description="Stock-factor regression analysis and model comparison.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="write a seeded synthetic factor CSV")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--companies", type=int, default=5)
    p.add_argument("--quarters", type=int, default=14)
    p.add_argument("--noise-sd", type=float, default=25.0)
    p.add_argument("--format", choices=("json", "text"), default="text")

    p = sub.add_parser("ingest", help="validate a CSV without writing anything")
    _add_common(p, needs_out=False)

    for name, help_text in (
        ("screen", "per-predictor screening table"),
        ("fit", "linear fit with inference"),
        ("diagnose", "fit plus the diagnostics bundle"),
        ("forest", "train and serialize a random forest"),
        ("evaluate", "cross-validated model comparison"),
        ("analyze", "full pipeline"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_common(p)
        if name == "analyze":
            p.add_argument(
                "--drop-collinear", action="store_true",
                help="iteratively drop predictors with VIF above the threshold",
            )
            p.add_argument(
                "--remove-outliers", action="store_true",
                help="remove flagged outlier rows and refit before evaluation",
            )

    p = sub.add_parser("report", help="re-render outputs from stored report.json")
    p.add_argument("--out", required=True, help="directory holding report.json")
    p.add_argument("--format", choices=("json", "text"), default="text")

    return parser


def _options(args: argparse.Namespace) -> PipelineOptions:
    return PipelineOptions(
        input=args.input,
        out=getattr(args, "out", ""),
        seed=args.seed,
        response=args.response,
        predictors=args.predictors,
        k=args.k,
        alpha=args.alpha,
        outlier_threshold=args.outlier_threshold,
        vif_threshold=args.vif_threshold,
        trees=args.trees,
        min_leaf=args.min_leaf,
        drop_collinear=getattr(args, "drop_collinear", False),
        remove_outliers=getattr(args, "remove_outliers", False),
    )


def _summarize(args: argparse.Namespace, doc: dict) -> None:
    if args.format == "json":
        print(json.dumps(doc, indent=2, default=str))
        return
    if "comparison" in doc:
        c = doc["comparison"]
        star = " *" if c["significant"] else ""
        print(
            f"comparison: t={c['t_stat']:.4g}, p={c['p_value']:.4g}, "
            f"winner={c['winner']}{star}"
        )
    if "fit" in doc and doc["fit"]:
        f = doc["fit"]
        print(
            f"fit: R^2={f['r_squared']:.4g}, F={f['f_stat']:.4g} on "
            f"{f['df_model']} and {f['df_resid']} df"
        )
    out = getattr(args, "out", None)
    if out:
        print(f"artifacts written under {out}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "synth":
            info = run_synth(args.seed, args.out, args.companies, args.quarters,
                             args.noise_sd)
            if args.format == "json":
                print(json.dumps(info))
            else:
                print(f"wrote {info['rows']} rows to {info['path']}")
            return EXIT_OK
        if args.command == "ingest":
            info = run_ingest(_options(args))
            if args.format == "json":
                print(json.dumps(info))
            else:
                print(
                    f"valid: {info['rows']} rows, "
                    f"{len(info['columns'])} columns, response {info['response']}"
                )
            return EXIT_OK
        if args.command == "report":
            doc = run_report(args.out)
            _summarize(args, doc)
            return EXIT_OK
        runner = {
            "screen": run_screen,
            "fit": run_fit,
            "diagnose": run_diagnose,
            "forest": run_forest,
            "evaluate": run_evaluate,
            "analyze": run_analyze,
        }[args.command]
        doc = runner(_options(args))
        _summarize(args, doc)
        return EXIT_OK
    except ValidationError as exc:
        return _fail(exc, EXIT_VALIDATION)
    except NumericalError as exc:
        return _fail(exc, EXIT_NUMERICAL)
    except OSError as exc:
        return _fail(exc, EXIT_VALIDATION)
    except Exception as exc:  # noqa: BLE001 - the CLI boundary reports, never crashes
        return _fail(exc, EXIT_INTERNAL)


def _fail(exc: Exception, code: int) -> int:
    payload = {
        "spec_version": SPEC_VERSION,
        "error": {
            "type": type(exc).__name__,
            "message": str(exc),
            "exit_code": code,
        },
    }
    print(json.dumps(payload), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
