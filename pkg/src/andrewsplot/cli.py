"""Command-line entry point: plot | bands | spectrum | verify | serve.

Exit codes: 0 success, 1 input error, 2 numerical non-convergence,
3 failed verification check.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional

from . import andrews, dataset, jacobi, pca, pipeline, render, service, verify
from .andrews import NonConvergedError
from .dataset import DatasetError, LabelSpec
from .pipeline import ComputeRequest, RequestError

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NUMERICAL = 2
EXIT_VERIFY = 3


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the CLI contract reserves 2 for
    # numerical non-convergence and uses 1 for any input problem.
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(message)


def _add_shared_flags(p: argparse.ArgumentParser):
    p.add_argument("--dataset", required=True, help="CSV path or bundled id (iris, breast-cancer, diabetes)")
    p.add_argument("--label-col", help="label column name or zero-based index")
    p.add_argument("--quartile-col", help="numeric column to bin into quartile labels")
    p.add_argument("--mode", choices=["classic", "ssqv"], default="classic")
    p.add_argument("--alpha", type=float, help="smoothing weight (required for --mode ssqv)")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--samples", type=int, default=512)
    p.add_argument("--n0", type=int, help="initial truncation size")
    p.add_argument("--n-max", type=int, default=4096, help="truncation size cap")
    p.add_argument("--no-center", action="store_true", help="skip mean-centering before the SVD")
    p.add_argument("--standardize", action="store_true", help="scale features to unit variance")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=["svg", "json", "csv"], default="svg")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="andrewsplot", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_plot = sub.add_parser("plot", help="render the curves of a dataset")
    _add_shared_flags(p_plot)

    p_bands = sub.add_parser("bands", help="render per-class envelope bands")
    _add_shared_flags(p_bands)

    p_spec = sub.add_parser("spectrum", help="print the low operator spectrum and its convergence")
    p_spec.add_argument("--alpha", type=float, required=True)
    p_spec.add_argument("--d", type=int, required=True, help="number of low modes")
    p_spec.add_argument("--tol", type=float, default=1e-9)
    p_spec.add_argument("--n0", type=int)
    p_spec.add_argument("--n-max", type=int, default=4096)

    p_verify = sub.add_parser("verify", help="run the invariant suite on a dataset")
    _add_shared_flags(p_verify)

    p_serve = sub.add_parser("serve", help="run the JSON HTTP service")
    p_serve.add_argument("--port", type=int, default=8080)
    p_serve.add_argument("--datasets-dir", help="directory of CSVs (default: bundled fixtures)")
    p_serve.add_argument("--allow-upload", action="store_true")
    return parser


def _label_spec(args) -> LabelSpec:
    if args.label_col is not None and args.quartile_col is not None:
        raise CliError("--label-col and --quartile-col are mutually exclusive")
    if args.label_col is not None:
        return LabelSpec.from_column(args.label_col)
    if args.quartile_col is not None:
        return LabelSpec.from_quartile(args.quartile_col)
    return LabelSpec.none()


def _load_dataset(name: str, spec: LabelSpec) -> dataset.Dataset:
    path = Path(name)
    if path.is_file():
        return dataset.load_csv(path, spec)
    registry = pipeline.load_registry()
    if name in registry:
        entry = registry[name]
        # explicit label flags override the bundled default
        return dataset.load_csv(entry.path, spec if spec.mode != "none" else entry.label_spec)
    raise CliError(f"dataset not found: no file or bundled dataset named {name!r}")


def _request(args, want_bands: bool) -> ComputeRequest:
    return ComputeRequest(
        dataset=args.dataset,
        mode=args.mode,
        alpha=args.alpha,
        samples=args.samples,
        center=not args.no_center,
        standardize=args.standardize,
        label=_label_spec(args),
        tol=args.tol,
        size0=args.n0,
        size_max=args.n_max,
        want_bands=want_bands,
    )


def _write_out(payload: bytes, out: Optional[str]):
    if out is None or out == "-":
        sys.stdout.buffer.write(payload)
    else:
        Path(out).write_bytes(payload)


def _cmd_plot(args, bands_only: bool) -> int:
    req = _request(args, want_bands=bands_only)
    ds = _load_dataset(args.dataset, req.label)
    if bands_only and ds.labels is None:
        raise CliError(
            "band rendering needs class labels; select them with --label-col or --quartile-col"
        )
    result = pipeline.run(req, ds)
    if args.format == "json":
        _write_out(render.dumps(pipeline.document_from_result(result)), args.out)
    elif args.format == "csv":
        _write_out(render.emit_csv(result.curves), args.out)
    else:
        style = render.StyleOptions(show_curves=not bands_only, show_bands=bands_only)
        _write_out(render.emit_svg(result.curves, result.bands or None, style), args.out)
    return EXIT_OK


def _cmd_spectrum(args) -> int:
    if args.alpha <= 0:
        raise CliError("--alpha must be positive")
    if args.d < 1:
        raise CliError("--d must be at least 1")
    basis = jacobi.converge_spectrum(
        args.alpha, args.d, tol=args.tol, size0=args.n0, size_max=args.n_max
    )
    report = basis.report
    print(f"alpha={args.alpha:g} d={args.d} tol={args.tol:g}")
    print("lowest eigenvalues (ascending) with parity:")
    for i, pair in enumerate(basis.pairs):
        print(f"  lambda_{i + 1} = {pair.value:.15g}  [{pair.parity}]")
    print("convergence history (rows: truncation size N, columns: lambda_k(N)):")
    header = "     N" + "".join(f"  {('lambda_' + str(k + 1)):>22}" for k in range(args.d))
    print(header)
    for col, size in enumerate(report.schedule):
        row = f"{size:>6d}" + "".join(
            f"  {report.histories[k, col]:>22.15g}" for k in range(report.histories.shape[0])
        )
        print(row)
    print(f"N_final={report.final_size} max_last_delta={report.max_last_delta:.3e} "
          f"converged={report.converged} tail_bound_ok={report.tail_bound_ok}")
    for pair in basis.pairs:
        try:
            ok, bound = jacobi.tail_decay_check(pair, args.alpha)
            status = "within" if ok else "EXCEEDS"
            print(f"  tail |v_N|={abs(pair.vector[-1]):.3e} {status} bound {bound:.3e}")
        except jacobi.TailBoundInapplicableError as exc:
            print(f"  tail bound inapplicable: {exc}")
    return EXIT_OK if report.converged else EXIT_NUMERICAL


def _cmd_verify(args) -> int:
    req = _request(args, want_bands=True)
    ds = _load_dataset(args.dataset, req.label)
    ds = pipeline.prepare_dataset(ds, req)
    model = pca.fit(ds, center=req.center)
    basis = pipeline.build_basis(req, model.dim)
    results = verify.run_checks(ds, basis, model, alpha=args.alpha, samples=min(args.samples, 256))
    print(verify.format_table(results))
    if basis.report is not None:
        print(f"N_final={basis.report.final_size}")
    code = verify.exit_code(results)
    if code != 0:
        failed = [r.name for r in results if not r.passed]
        print(f"failed checks: {', '.join(failed)}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command in ("plot", "bands", "verify"):
            if args.mode == "ssqv" and args.alpha is None:
                raise CliError("--mode ssqv requires --alpha")
            if args.mode == "classic" and args.alpha is not None:
                raise CliError("--alpha is only meaningful with --mode ssqv")
        if args.command == "plot":
            return _cmd_plot(args, bands_only=False)
        if args.command == "bands":
            return _cmd_plot(args, bands_only=True)
        if args.command == "spectrum":
            return _cmd_spectrum(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "serve":
            service.serve(args.port, args.datasets_dir, args.allow_upload)
            return EXIT_OK
        raise CliError(f"unknown command {args.command!r}")
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DatasetError, RequestError, andrews.AndrewsError, jacobi.JacobiError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NonConvergedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def entry():  # console-script hook
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
