"""Command-line front end.

Four subcommands: ``analyze`` (Gramians, ranks, contractivity curve),
``spectrum`` (predicted lattice spectrum versus the computed generator
spectrum), ``verify`` (the named invariant suite, on a model file or on
random models), and ``fock`` (spectra of truncated second quantizations of
an arbitrary contraction).

Exit codes: 0 success, 1 input or validation error, 2 numerical hypothesis
failure (unstable drift, eigensolver breakdown, degenerate measure where a
nondegenerate one is required), 3 invariant or match failure.  Human
summaries go to stdout, machine reports to JSON/CSV files written
atomically (temp file, then rename).  The environment variable
``OU_SPECTRA_TOL_PROFILE`` (strict | default | loose) selects the
tolerance preset; a model file may override individual fields.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from importlib import resources

import numpy as np

from . import config
from .errors import (
    DegenerateMeasure,
    InputError,
    NumericalError,
    Unstable,
)
from .gramian import (
    contractivity_constant,
    gramian_report,
    gramian_t,
    invertibility_equivalence_report,
    is_stable,
    rank_psd,
    rkhs_factor,
    smu_norm,
    spectral_abscissa,
    validate,
)
from .ou_operator import assemble_L, poly_basis
from .spectra import (
    LatticeWindow,
    SpectrumSet,
    eig,
    hausdorff,
    lattice_spectrum,
    match_report,
    product_set,
)
from .tensor_fock import second_quantization
from . import verification
from . import gramian as _gramian_mod

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NUMERICAL = 2
EXIT_SUITE = 3


# --- model files -------------------------------------------------------------

def list_bundled():
    """Names of the example models that ship with the package."""
    root = resources.files(__package__) / "models"
    return sorted(p.name[:-len(".json")] for p in root.iterdir()
                  if p.name.endswith(".json"))


def bundled_model_path(name):
    """Filesystem path of a bundled model (usable as a CLI argument)."""
    path = resources.files(__package__) / "models" / (name + ".json")
    if not path.is_file():
        raise InputError(
            "no bundled model %r (available: %s)"
            % (name, ", ".join(list_bundled())))
    return str(path)


def load_model(path, tol=None):
    """Read a model JSON file (or a bundled model name) into an OUModel.

    The file must contain row-major nested arrays under "A" and "Q";
    optional keys "name" and "tolerances" (field -> value overrides).
    """
    if not os.path.exists(path):
        try:
            path = bundled_model_path(path)
        except InputError:
            raise InputError("model file not found: %s" % path) from None
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError("cannot read model file %s: %s" % (path, exc)) \
            from None
    if not isinstance(data, dict) or "A" not in data or "Q" not in data:
        raise InputError('model file %s must be a JSON object with keys '
                         '"A" and "Q"' % path)
    if tol is None:
        try:
            tol = config.from_env()
        except ValueError as exc:
            raise InputError(str(exc)) from None
    overrides = data.get("tolerances", {})
    if overrides:
        try:
            tol = tol.with_overrides(overrides)
        except (ValueError, TypeError) as exc:
            raise InputError("bad tolerance overrides in %s: %s"
                             % (path, exc)) from None
    name = data.get("name", os.path.splitext(os.path.basename(path))[0])
    try:
        return validate(data["A"], data["Q"], name=name, tol=tol)
    except (TypeError, ValueError) as exc:
        raise InputError("model file %s does not parse to matrices: %s"
                         % (path, exc)) from None


def parse_t_grid(text):
    """Parse ``start:stop:step`` into an inclusive positive grid.

    The endpoint is included when it lies within 1e-12 of a grid point.
    """
    parts = text.split(":")
    if len(parts) != 3:
        raise InputError("t-grid must look like start:stop:step, got %r"
                         % text)
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise InputError("t-grid entries must be numbers, got %r"
                         % text) from None
    if start <= 0 or step <= 0 or stop < start:
        raise InputError("t-grid needs 0 < start <= stop and step > 0")
    count = int(math.floor((stop - start) / step + 1e-12))
    grid = [start + k * step for k in range(count + 1)]
    if abs(grid[-1] - stop) > 1e-12 * max(1.0, abs(stop)) \
            and grid[-1] + step <= stop + 1e-12 * max(1.0, abs(stop)):
        grid.append(grid[-1] + step)
    return np.asarray(grid)


# --- report plumbing ---------------------------------------------------------

def _to_jsonable(obj):
    """Recursively convert to JSON-safe values; non-finite floats become
    string sentinels so every numeric entry in a report is finite."""
    if isinstance(obj, dict):
        return {str(k): _to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        val = float(obj)
        if not math.isfinite(val):
            return repr(val)
        return val
    if isinstance(obj, complex):
        return {"re": _to_jsonable(obj.real), "im": _to_jsonable(obj.imag)}
    return obj


def _atomic_write_text(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json_report(path, report):
    _atomic_write_text(
        path, json.dumps(_to_jsonable(report), indent=2, sort_keys=True)
        + "\n")


def _write_curve_csv(path, rows, header):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(repr(float(v)) for v in row))
    _atomic_write_text(path, "\n".join(lines) + "\n")


def _write_spectrum_csv(path, spec):
    lines = ["re,im"]
    for z in spec.points:
        lines.append("%s,%s" % (repr(float(z.real)), repr(float(z.imag))))
    _atomic_write_text(path, "\n".join(lines) + "\n")


def _default_out(args, suffix):
    if args.out:
        return args.out
    stem = os.path.splitext(os.path.basename(args.model))[0]
    return stem + suffix


# --- subcommands -------------------------------------------------------------

def cmd_analyze(args):
    model = load_model(args.model)
    grid = parse_t_grid(args.t_grid)
    out_path = _default_out(args, ".analyze.json")
    csv_path = os.path.splitext(out_path)[0] + ".curve.csv"

    alpha = spectral_abscissa(model.A)
    if not is_stable(model):
        raise Unstable(
            "analysis needs a stable drift; spectral abscissa is %.6g"
            % alpha)
    report_t = float(grid[-1])
    gram = gramian_report(model, report_t)
    factor = rkhs_factor(gram.Q_inf, model.tol.rank_tol)

    rows = []
    for t in grid:
        rows.append((float(t), smu_norm(model, factor, float(t)),
                     contractivity_constant(model, float(t))))
    _write_curve_csv(csv_path, rows, header=("t", "smu_norm", "K"))

    lyap = float(np.abs(model.A @ gram.Q_inf + gram.Q_inf @ model.A.T
                        + model.Q).max())
    F1 = _gramian_mod.flow(model, 1.0)
    split = float(np.linalg.norm(
        gram.Q_inf - gramian_t(model, 1.0) - F1 @ gram.Q_inf @ F1.T, 2))
    checks = {
        "lyapunov_residual_ok": lyap <= model.tol.lyap_tol
        * (1.0 + float(np.abs(model.Q).max())),
        "splitting_identity_ok": split <= 1e-8
        * max(float(np.linalg.norm(gram.Q_inf, 2)), 1e-300),
        "contraction_ok": all(r[1] <= 1.0 + 1e-10 for r in rows),
    }
    report = {
        "schema": 1,
        "command": "analyze",
        "model": {"name": model.name, "A": model.A, "Q": model.Q},
        "t_grid": {"start": float(grid[0]), "stop": float(grid[-1]),
                   "count": len(grid)},
        "gramian": gram.to_dict(),
        "rkhs_rank": factor.rank,
        "lyapunov_residual": lyap,
        "splitting_residual_t1": split,
        "invertibility": invertibility_equivalence_report(model).to_dict(),
        "curve_csv": csv_path,
        "curve_first": {"t": rows[0][0], "smu_norm": rows[0][1],
                        "K": rows[0][2]},
        "curve_last": {"t": rows[-1][0], "smu_norm": rows[-1][1],
                       "K": rows[-1][2]},
        "checks": checks,
        "passed": all(checks.values()),
    }
    write_json_report(out_path, report)
    print("model %s: abscissa %.6g, rank(Q_inf)=%d, strong_feller=%s"
          % (model.name, alpha, gram.rank_Q_inf, gram.strong_feller))
    print("curve over %d points -> %s" % (len(rows), csv_path))
    print("report -> %s (%s)" % (out_path,
                                 "pass" if report["passed"] else "FAIL"))
    return EXIT_OK


def cmd_spectrum(args):
    model = load_model(args.model)
    out_path = _default_out(args, ".spectrum.json")
    if not is_stable(model):
        raise Unstable(
            "spectral prediction needs a stable drift (abscissa %.6g); "
            "hypothesis failed: stability" % spectral_abscissa(model.A))
    q_inf = _gramian_mod.gramian_inf(model)
    if rank_psd(q_inf, model.tol.rank_tol) < model.dim:
        raise DegenerateMeasure(
            "spectral prediction needs an invertible steady-state "
            "covariance; hypothesis failed: nondegeneracy (rank %d < %d)"
            % (rank_psd(q_inf, model.tol.rank_tol), model.dim))

    N = args.degree
    drift_eigs = eig(model.A)
    re_min = args.re_min if args.re_min is not None else \
        N * float(drift_eigs.points.real.min()) - 1e-6
    im_auto = max(N * float(np.abs(drift_eigs.points.imag).max()), 1e-6)
    im_max = args.im_max if args.im_max is not None else im_auto + 1e-6
    window = LatticeWindow(re_min=re_min, im_max=im_max, max_terms=N)

    predicted = lattice_spectrum(drift_eigs, window)
    galerkin = eig(assemble_L(model, poly_basis(model.dim, N)))
    computed = galerkin.restricted(re_min=re_min, im_max=im_max)
    match = match_report(computed, predicted, args.tol)

    pred_csv = os.path.splitext(out_path)[0] + ".predicted.csv"
    comp_csv = os.path.splitext(out_path)[0] + ".computed.csv"
    _write_spectrum_csv(pred_csv, predicted)
    _write_spectrum_csv(comp_csv, computed)
    report = {
        "schema": 1,
        "command": "spectrum",
        "model": {"name": model.name, "A": model.A, "Q": model.Q},
        "degree": N,
        "window": {"re_min": re_min, "im_max": im_max, "max_terms": N},
        "predicted": predicted.to_json_dict(),
        "computed": computed.to_json_dict(),
        "match": match.to_dict(),
        "predicted_csv": pred_csv,
        "computed_csv": comp_csv,
        "passed": match.passed,
    }
    write_json_report(out_path, report)
    print("predicted %d points, computed %d points, hausdorff %.3e (tol %g)"
          % (len(predicted), len(computed), match.hausdorff, args.tol))
    print("report -> %s (%s)" % (out_path,
                                 "pass" if match.passed else "FAIL"))
    return EXIT_OK if match.passed else EXIT_SUITE


def cmd_verify(args):
    if (args.model is None) == (args.random is None):
        raise InputError(
            "verify needs exactly one of a model path or --random SEED "
            "COUNT")
    tol = config.from_profile(args.tol) if args.tol else None
    if args.model is not None:
        model = load_model(args.model, tol)
        checks = verification.model_suite(
            model, degree=args.degree, levels=args.levels)
        subject = "model %s" % model.name
    else:
        seed, count = (int(v) for v in args.random)
        checks = verification.random_suite(
            seed, count, degree=args.degree, levels=args.levels)
        subject = "%d random models (seed %d)" % (count, seed)
    summary = verification.summarize(checks)
    summary["command"] = "verify"
    summary["subject"] = subject
    out_path = args.out or "verify_report.json"
    write_json_report(out_path, summary)
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        line = "%s %-40s residual %.3e (tol %.3e)" % (
            status, c.name, c.residual, c.tolerance)
        if c.detail:
            line += "  [%s]" % c.detail
        print(line)
    print("%d checks, %d failed -> %s"
          % (summary["n_checks"], summary["n_failed"], out_path))
    return EXIT_OK if summary["all_passed"] else EXIT_SUITE


def cmd_fock(args):
    try:
        with open(args.matrix) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError("cannot read matrix file %s: %s"
                         % (args.matrix, exc)) from None
    raw = data["T"] if isinstance(data, dict) and "T" in data else data
    try:
        T = np.asarray(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError("matrix file %s does not parse: %s"
                         % (args.matrix, exc)) from None
    if T.ndim != 2 or T.shape[0] != T.shape[1]:
        raise InputError("matrix must be square, got shape %r" % (T.shape,))
    N = args.levels
    sym = second_quantization(
        T, N, symmetric=True, allow_noncontraction=args.allow_noncontraction)
    full = second_quantization(
        T, N, symmetric=False,
        allow_noncontraction=args.allow_noncontraction)
    base = eig(T)
    predicted = SpectrumSet([1.0 + 0.0j])
    for n in range(1, N + 1):
        predicted = predicted.union(product_set(base, n))
    sym_spec = sym.spectrum()
    full_spec = full.spectrum()
    distances = {
        "sym_vs_predicted": hausdorff(sym_spec, predicted),
        "tensor_vs_predicted": hausdorff(full_spec, predicted),
        "sym_vs_tensor": hausdorff(sym_spec, full_spec),
    }
    out_path = args.out or "fock_report.json"
    report = {
        "schema": 1,
        "command": "fock",
        "T": T,
        "levels": N,
        "operator_norm": float(np.linalg.norm(T, 2)),
        "sym_spectrum": sym_spec.to_json_dict(),
        "tensor_spectrum": full_spec.to_json_dict(),
        "predicted": predicted.to_json_dict(),
        "hausdorff": distances,
    }
    write_json_report(out_path, report)
    print("norm %.6g, %d symmetric / %d tensor spectrum points"
          % (report["operator_norm"], len(sym_spec), len(full_spec)))
    for key, val in sorted(distances.items()):
        print("  %-22s %.3e" % (key, val))
    print("report -> %s" % out_path)
    return EXIT_OK


# --- parser ------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    # Usage mistakes are input errors (exit 1), not numerical ones.
    def error(self, message):
        self.print_usage(sys.stderr)
        print("error: %s" % message, file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def build_parser():
    parser = _Parser(
        prog="ou-spectra",
        description="Gramians, second quantization, and spectral "
                    "cross-validation for finite-dimensional "
                    "Ornstein-Uhlenbeck generators.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("analyze", help="Gramians, ranks, contractivity "
                                       "curve")
    p.add_argument("model", help="model JSON path or bundled name (%s)"
                   % ", ".join(list_bundled()))
    p.add_argument("--t-grid", default="0.1:5.0:0.1",
                   help="start:stop:step, inclusive endpoints "
                        "(default %(default)s)")
    p.add_argument("--out", default=None,
                   help="report path (default <model>.analyze.json)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("spectrum", help="lattice prediction vs computed "
                                        "generator spectrum")
    p.add_argument("model")
    p.add_argument("--degree", type=int, default=4,
                   help="polynomial degree cap (default %(default)s)")
    p.add_argument("--re-min", type=float, default=None,
                   help="window floor for Re (default: cover all sums)")
    p.add_argument("--im-max", type=float, default=None,
                   help="window cap for |Im| (default: cover all sums)")
    p.add_argument("--tol", type=float, default=1e-6,
                   help="match tolerance (default %(default)s)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", help="run the named invariant suite")
    p.add_argument("model", nargs="?", default=None)
    p.add_argument("--random", nargs=2, metavar=("SEED", "COUNT"),
                   default=None, help="verify random stable models instead")
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--tol", choices=sorted(config.PROFILES), default=None,
                   help="tolerance profile (overrides the environment)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fock", help="spectra of truncated second "
                                    "quantizations")
    p.add_argument("--matrix", required=True,
                   help='JSON file: nested array or {"T": [[...]]}')
    p.add_argument("--levels", type=int, default=4)
    p.add_argument("--allow-noncontraction", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_fock)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except InputError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
