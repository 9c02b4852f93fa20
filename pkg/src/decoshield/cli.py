"""Command-line front end: strength sweeps to CSV, optimum queries, and a
self-verification command that cross-checks every closed form against the
generic pipeline and the numeric search oracles.

Exit codes: 0 success, 1 verification failure, 2 bad arguments.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from typing import Iterable, Iterator, Sequence

import numpy as np

from .channels import (
    GadParams,
    apply_channel,
    apply_via_dilation,
    check_trace_preserving,
    gad_channel,
)
from .entangle import (
    EntangledInput,
    concurrence_lambda1,
    concurrence_lambda2,
    channel_degraded_state,
    lambda2_max,
    measured_coefficients,
    optimal_parameters,
    optimal_reversal,
    pipeline_state,
    protected_state,
    reversed_state,
)
from .linalg import equatorial_state, fidelity, wootters_concurrence
from .optimize import SearchBox, grid_maximize, simplex_maximize, stationarity_check
from .qubit import (
    apply_protection,
    average_fidelity_six,
    baseline_fidelity,
    bb84_error_rate,
    g_value,
    optimal_average,
    optimal_strengths,
    protect_equatorial,
)
from .weakmeas import PostSelectionError

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2


class CliError(Exception):
    """Argument-level problem; reported with the offending flag name."""


def _range_type(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected LO:HI:STEPS, got {text!r}")
    try:
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if steps < 1:
        raise argparse.ArgumentTypeError(f"steps must be at least 1, got {steps}")
    if hi < lo:
        raise argparse.ArgumentTypeError(f"need LO <= HI, got {text!r}")
    return np.linspace(lo, hi, steps)


def _config_tokens(path: str) -> list[str]:
    tokens: list[str] = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise CliError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if not key or not value:
                raise CliError(f"{path}:{lineno}: empty key or value")
            tokens.extend(["--" + key.replace("_", "-"), value])
    return tokens


def _inject_config(argv: list[str]) -> list[str]:
    """Expand --config FILE into flag tokens placed right after the
    subcommand, so explicitly passed flags (parsed later) win."""
    path = None
    for i, token in enumerate(argv):
        if token == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif token.startswith("--config="):
            path = token.split("=", 1)[1]
    if path is None or not argv:
        return argv
    return [argv[0], *_config_tokens(path), *argv[1:]]


def _gad(p: float, r: float, label: str) -> GadParams:
    try:
        return GadParams(p, r)
    except ValueError as exc:
        raise CliError(f"{label}: {exc}") from None


def _format_cell(value: object) -> str:
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def _write_csv(
    path: str, header: Sequence[str], rows: Iterable[Sequence[object]]
) -> None:
    def dump(fh) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format_cell(cell) for cell in row])

    if path == "-":
        dump(sys.stdout)
    else:
        with open(path, "w", newline="") as fh:
            dump(fh)


def _strength_axis(args: argparse.Namespace, flag: str) -> np.ndarray:
    axis = getattr(args, flag.strip("-").replace("-", "_"))
    if axis is None:
        if args.grid < 2:
            raise CliError(f"--grid: need at least 2 points, got {args.grid}")
        axis = np.linspace(1.0 / args.grid, 1.0, args.grid)
    if float(axis[0]) <= 0.0:
        raise CliError(f"{flag}: strengths must be positive")
    return axis


def _cmd_qubit_fidelity(args: argparse.Namespace) -> int:
    params = _gad(args.p, args.r, "--p/--r")
    ms = _strength_axis(args, "--m-range")
    ns = _strength_axis(args, "--n-range")
    rows = []
    for m in ms:
        for n in ns:
            res = protect_equatorial(params, float(m), float(n))
            rows.append((float(m), float(n), res.fidelity, res.success_prob))
    _write_csv(args.out, ("m", "n", "fidelity", "success_prob"), rows)
    return EXIT_OK


def _cmd_qubit_average(args: argparse.Namespace) -> int:
    params = _gad(args.p, args.r, "--p/--r")
    ms = _strength_axis(args, "--m-range")
    ns = _strength_axis(args, "--n-range")
    rows = []
    for m in ms:
        for n in ns:
            rep = average_fidelity_six(params, float(m), float(n))
            rows.append((float(m), float(n), rep.f0, rep.f1, rep.fe, rep.favg))
    _write_csv(args.out, ("m", "n", "f0", "f1", "fe", "favg"), rows)
    return EXIT_OK


def _cmd_qkd_error(args: argparse.Namespace) -> int:
    params = _gad(args.p, args.r, "--p/--r")
    ms = _strength_axis(args, "--m-range")
    ns = _strength_axis(args, "--n-range")
    rows = []
    for m in ms:
        for n in ns:
            rows.append((float(m), float(n), bb84_error_rate(params, float(m), float(n))))
    _write_csv(args.out, ("m", "n", "error_rate"), rows)
    return EXIT_OK


def _cmd_entangle(args: argparse.Namespace) -> int:
    ch1 = _gad(args.p1, args.r1, "--p1/--r1")
    ch2 = _gad(args.p2, args.r2, "--p2/--r2")
    if not 0.0 <= args.alpha_sq <= 1.0:
        raise CliError(f"--alpha-sq: must lie in [0, 1], got {args.alpha_sq}")
    inp = EntangledInput.from_alpha_sq(args.alpha_sq)
    rows = []
    for m in args.sweep_m:
        m = float(m)
        try:
            coeffs = measured_coefficients(inp, ch1, ch2, m, 1.0)
            n1, n2 = optimal_reversal(coeffs)
            lam2 = concurrence_lambda2(coeffs, n1, n2)
            _, success = protected_state(inp, ch1, ch2, m, 1.0, n1, n2)
        except (ValueError, PostSelectionError) as exc:
            raise CliError(f"--sweep-m: at m={m:g}: {exc}") from None
        rows.append((m, n1, n2, lam2, max(0.0, lam2), success))
    _write_csv(
        args.out, ("m", "n1", "n2", "lambda2", "concurrence", "success_prob"), rows
    )
    return EXIT_OK


def _cmd_optimal(args: argparse.Namespace) -> int:
    single = args.p is not None or args.r is not None
    pair = any(v is not None for v in (args.p1, args.r1, args.p2, args.r2))
    if single == pair:
        raise CliError("give either --p/--r (one qubit) or --p1/--r1/--p2/--r2")
    lines: list[tuple[str, object]] = []
    if single:
        if args.p is None or args.r is None:
            raise CliError("--p and --r are both required for the one-qubit query")
        params = _gad(args.p, args.r, "--p/--r")
        try:
            best = optimal_strengths(params)
            avg = optimal_average(params)
        except ValueError as exc:
            raise CliError(f"--p/--r: {exc}") from None
        if best.projective:
            success = 0.0
        else:
            success = protect_equatorial(params, best.m, best.n).success_prob
        lines = [
            ("m_opt", best.m),
            ("n_opt", best.n),
            ("fidelity_max", best.f_max),
            ("fidelity_baseline", baseline_fidelity(params)),
            ("favg_max", avg.f_max),
            ("qkd_error_min", 1.0 - best.f_max),
            ("success_prob", success),
            ("projective", best.projective),
        ]
    else:
        for flag, value in (("--p1", args.p1), ("--r1", args.r1),
                            ("--p2", args.p2), ("--r2", args.r2)):
            if value is None:
                raise CliError(f"{flag} is required for the two-qubit query")
        ch1 = _gad(args.p1, args.r1, "--p1/--r1")
        ch2 = _gad(args.p2, args.r2, "--p2/--r2")
        if not 0.0 <= args.alpha_sq <= 1.0:
            raise CliError(f"--alpha-sq: must lie in [0, 1], got {args.alpha_sq}")
        report = optimal_parameters(EntangledInput.from_alpha_sq(args.alpha_sq), ch1, ch2)
        lines = [
            ("lambda1", report.lambda1),
            ("concurrence_unprotected", max(0.0, report.lambda1)),
            ("m_opt", report.m_opt),
            ("n1_opt", report.n1_opt),
            ("n2_opt", report.n2_opt),
            ("lambda2_max", report.lambda2_max),
            ("concurrence_protected", max(0.0, report.lambda2_max)),
            ("h", report.h),
            ("alpha_sq_opt", report.alpha_sq_opt),
            ("success_prob", report.success_prob),
            ("degenerate", report.degenerate),
        ]
    for key, value in lines:
        print(f"{key} = {value!r}")
    return EXIT_OK


def _random_channel(rng: np.random.Generator) -> GadParams:
    return GadParams(float(rng.uniform(0.05, 0.95)), float(rng.uniform(0.02, 0.95)))


def _random_density(rng: np.random.Generator, dim: int = 2) -> np.ndarray:
    mat = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = mat @ mat.conj().T
    return rho / rho.trace()


def _random_input(rng: np.random.Generator) -> EntangledInput:
    alpha_sq = float(rng.uniform(0.05, 0.95))
    phase_a, phase_b = rng.uniform(0.0, 2.0 * math.pi, size=2)
    return EntangledInput(
        math.sqrt(alpha_sq) * complex(np.exp(1j * phase_a)),
        math.sqrt(1.0 - alpha_sq) * complex(np.exp(1j * phase_b)),
    )


def _verification_checks() -> Iterator[tuple[str, bool, str]]:
    rng = np.random.default_rng(716253)

    defect = 0.0
    for _ in range(60):
        params = _random_channel(rng)
        ch = gad_channel(params)
        defect = max(defect, check_trace_preserving(ch))
        thermal = np.diag([params.p, 1.0 - params.p]).astype(complex)
        defect = max(defect, float(np.max(np.abs(apply_channel(ch, thermal) - thermal))))
    yield "kraus-completeness", defect <= 1e-12, f"max defect {defect:.2e} (tol 1e-12)"

    gap = 0.0
    for _ in range(60):
        params = _random_channel(rng)
        rho = _random_density(rng)
        via_kraus = apply_channel(gad_channel(params), rho)
        via_env = apply_via_dilation(params, rho)
        gap = max(gap, float(np.max(np.abs(via_kraus - via_env))))
    yield "dilation-vs-kraus", gap <= 1e-12, f"max gap {gap:.2e} (tol 1e-12)"

    gap = 0.0
    for _ in range(300):
        params = _random_channel(rng)
        m, n = (float(v) for v in rng.uniform(0.05, 2.0, size=2))
        phi = float(rng.uniform(0.0, 2.0 * math.pi))
        res = protect_equatorial(params, m, n, phi)
        state, prob = apply_protection(params, m, n, equatorial_state(phi))
        gap = max(gap, float(np.max(np.abs(res.output_state - state))))
        gap = max(gap, abs(res.success_prob - prob))
        gap = max(gap, abs(res.fidelity - fidelity(equatorial_state(phi), state)))
    yield "qubit-closed-form-vs-pipeline", gap <= 1e-12, f"max gap {gap:.2e} (tol 1e-12)"

    gap = 0.0
    for _ in range(150):
        ch1, ch2 = _random_channel(rng), _random_channel(rng)
        inp = _random_input(rng)
        m1, m2, n1, n2 = (float(v) for v in rng.uniform(0.05, 2.0, size=4))
        coeffs, success = protected_state(inp, ch1, ch2, m1, m2, n1, n2)
        closed, _ = reversed_state(coeffs, n1, n2)
        generic, prob = pipeline_state(inp, ch1, ch2, m1, m2, n1, n2)
        gap = max(gap, float(np.max(np.abs(closed - generic))))
        gap = max(gap, abs(success - prob))
    yield "entangle-closed-form-vs-pipeline", gap <= 1e-12, f"max gap {gap:.2e} (tol 1e-12)"

    gap = 0.0
    for _ in range(100):
        ch1, ch2 = _random_channel(rng), _random_channel(rng)
        inp = _random_input(rng)
        base = channel_degraded_state(inp, ch1, ch2)
        gap = max(
            gap,
            abs(max(0.0, concurrence_lambda1(base)) - wootters_concurrence(base.matrix())),
        )
        n1, n2 = (float(v) for v in rng.uniform(0.1, 1.5, size=2))
        m1 = float(rng.uniform(0.1, 1.5))
        coeffs = measured_coefficients(inp, ch1, ch2, m1, 1.0)
        rho, _ = reversed_state(coeffs, n1, n2)
        gap = max(
            gap,
            abs(max(0.0, concurrence_lambda2(coeffs, n1, n2)) - wootters_concurrence(rho)),
        )
    yield "xstate-vs-wootters", gap <= 1e-10, f"max gap {gap:.2e} (tol 1e-10)"

    gap = 0.0
    for _ in range(60):
        params = _random_channel(rng)
        m, n = (float(v) for v in rng.uniform(0.05, 2.0, size=2))
        fid = protect_equatorial(params, m, n).fidelity
        gap = max(gap, abs(bb84_error_rate(params, m, n) - (1.0 - fid)))
    yield "qkd-error-complement", gap <= 1e-12, f"max gap {gap:.2e} (tol 1e-12)"

    params = GadParams(0.8, 0.3)
    best = optimal_strengths(params)

    def qubit_objective(point: np.ndarray) -> float:
        return protect_equatorial(params, float(point[0]), float(point[1])).fidelity

    box = SearchBox.cube(1e-3, 2.0, 60, 2)
    seed = grid_maximize(qubit_objective, box)
    refined = simplex_maximize(qubit_objective, seed.argmax, box)
    arg_gap = float(np.max(np.abs(refined.argmax - np.array([best.m, best.n]))))
    val_gap = abs(refined.value - best.f_max)
    ok = arg_gap <= 1e-3 and val_gap <= 1e-6
    yield (
        "qubit-optimum-oracle",
        ok,
        f"argmax gap {arg_gap:.2e} (tol 1e-3), value gap {val_gap:.2e} (tol 1e-6)",
    )

    ch1, ch2 = GadParams(0.9, 0.5), GadParams(0.95, 0.3)
    inp = EntangledInput.from_alpha_sq(0.5)

    def lam2_objective(point: np.ndarray) -> float:
        coeffs = measured_coefficients(inp, ch1, ch2, float(point[0]), 1.0)
        return concurrence_lambda2(coeffs, float(point[1]), float(point[2]))

    box3 = SearchBox.cube(1e-3, 1.5, 21, 3)
    seed3 = grid_maximize(lam2_objective, box3)
    refined3 = simplex_maximize(lam2_objective, seed3.argmax, box3)
    val_gap = abs(refined3.value - lambda2_max(ch1, ch2))
    yield (
        "entangle-optimum-oracle",
        val_gap <= 1e-6,
        f"value gap {val_gap:.2e} (tol 1e-6)",
    )

    def favg_objective(point: np.ndarray) -> float:
        return average_fidelity_six(params, float(point[0]), float(point[1])).favg

    grad = stationarity_check(favg_objective, np.array([best.m, best.n]), 1e-5)
    yield "average-optimum-stationary", grad <= 1e-6, f"max slope {grad:.2e} (tol 1e-6)"

    report = optimal_parameters(inp, ch1, ch2)
    alphas = np.linspace(0.005, 0.995, 199)
    probs = []
    for a_sq in alphas:
        rep = optimal_parameters(EntangledInput.from_alpha_sq(float(a_sq)), ch1, ch2)
        probs.append(rep.success_prob)
    peak = float(alphas[int(np.argmax(probs))])
    step = float(alphas[1] - alphas[0])
    peak_gap = abs(peak - report.alpha_sq_opt)
    yield (
        "success-peak-location",
        peak_gap <= step,
        f"scan peak {peak:.4f} vs 1/(1+h) {report.alpha_sq_opt:.4f} (tol {step:.4f})",
    )

    worst = 0.0
    g_worst = 0.0
    for p in np.linspace(0.05, 0.95, 20):
        for r in np.linspace(0.02, 0.95, 20):
            grid_params = GadParams(float(p), float(r))
            worst = min(
                worst,
                optimal_strengths(grid_params).f_max - baseline_fidelity(grid_params),
            )
            g_worst = max(g_worst, g_value(grid_params) - 1.0)
    ok = worst >= -1e-12 and g_worst <= 1e-12
    yield (
        "protection-never-hurts",
        ok,
        f"min fidelity gain {worst:.2e}, max penalty excess {g_worst:.2e}",
    )


def _cmd_verify(args: argparse.Namespace) -> int:
    failures = 0
    for name, ok, detail in _verification_checks():
        print(f"[{'ok' if ok else 'FAIL'}] {name}: {detail}")
        if not ok:
            failures += 1
    if failures:
        print(f"{failures} check(s) failed")
        return EXIT_VERIFY_FAILED
    print("all checks passed")
    return EXIT_OK


def _add_sweep_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--p", type=float, required=True, help="stationary weight on |0>")
    sp.add_argument("--r", type=float, required=True, help="damping strength")
    sp.add_argument(
        "--grid", type=int, default=100,
        help="points per strength axis when no explicit range is given (default 100)",
    )
    sp.add_argument(
        "--m-range", type=_range_type, metavar="LO:HI:STEPS",
        help="pre-measurement strengths (default 1/grid:1:grid)",
    )
    sp.add_argument(
        "--n-range", type=_range_type, metavar="LO:HI:STEPS",
        help="reversal strengths (default 1/grid:1:grid)",
    )
    _add_output_flags(sp)


def _add_output_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--out", default="-", help="output CSV path, '-' for stdout")
    sp.add_argument("--config", help="key=value defaults file; explicit flags win")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="decoshield",
        description="Weak-measurement protection against finite-temperature damping.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser(
        "qubit-fidelity",
        help="sweep equatorial-state fidelity over strengths",
        description="CSV columns: m,n,fidelity,success_prob (row order: m outer, n inner).",
    )
    _add_sweep_flags(sp)
    sp.set_defaults(handler=_cmd_qubit_fidelity)

    sp = sub.add_parser(
        "qubit-average",
        help="sweep the six-state average fidelity over strengths",
        description="CSV columns: m,n,f0,f1,fe,favg (row order: m outer, n inner).",
    )
    _add_sweep_flags(sp)
    sp.set_defaults(handler=_cmd_qubit_average)

    sp = sub.add_parser(
        "qkd-error",
        help="sweep the four-state key-distribution error rate",
        description="CSV columns: m,n,error_rate (row order: m outer, n inner).",
    )
    _add_sweep_flags(sp)
    sp.set_defaults(handler=_cmd_qkd_error)

    sp = sub.add_parser(
        "entangle",
        help="sweep protected concurrence over the pre-measurement strength",
        description=(
            "CSV columns: m,n1,n2,lambda2,concurrence,success_prob; n1,n2 are "
            "re-optimized at every m."
        ),
    )
    sp.add_argument("--p1", type=float, required=True, help="qubit-1 stationary weight")
    sp.add_argument("--r1", type=float, required=True, help="qubit-1 damping strength")
    sp.add_argument("--p2", type=float, required=True, help="qubit-2 stationary weight")
    sp.add_argument("--r2", type=float, required=True, help="qubit-2 damping strength")
    sp.add_argument(
        "--alpha-sq", type=float, default=0.5,
        help="weight |alpha|^2 of the |00> component (default 0.5)",
    )
    sp.add_argument(
        "--sweep-m", type=_range_type, metavar="LO:HI:STEPS",
        default=None, help="pre-measurement sweep (default 0:1:200)",
    )
    _add_output_flags(sp)
    sp.set_defaults(handler=_cmd_entangle_with_default)

    sp = sub.add_parser(
        "optimal",
        help="print the optimal strengths and what they attain",
        description=(
            "One qubit: --p/--r. Two qubits: --p1/--r1/--p2/--r2 [--alpha-sq]. "
            "Values are printed at full precision, one key = value per line."
        ),
    )
    sp.add_argument("--p", type=float, help="one-qubit stationary weight")
    sp.add_argument("--r", type=float, help="one-qubit damping strength")
    sp.add_argument("--p1", type=float, help="qubit-1 stationary weight")
    sp.add_argument("--r1", type=float, help="qubit-1 damping strength")
    sp.add_argument("--p2", type=float, help="qubit-2 stationary weight")
    sp.add_argument("--r2", type=float, help="qubit-2 damping strength")
    sp.add_argument("--alpha-sq", type=float, default=0.5, help="|alpha|^2 (default 0.5)")
    sp.add_argument("--config", help="key=value defaults file; explicit flags win")
    sp.set_defaults(handler=_cmd_optimal)

    sp = sub.add_parser(
        "verify",
        help="cross-check closed forms against pipelines and search oracles",
        description="Prints one [ok]/[FAIL] line per check; exit 1 on any failure.",
    )
    sp.add_argument("--config", help="accepted for symmetry; no keys are read")
    sp.set_defaults(handler=_cmd_verify)

    return parser


def _cmd_entangle_with_default(args: argparse.Namespace) -> int:
    if args.sweep_m is None:
        args.sweep_m = np.linspace(0.0, 1.0, 200)
    return _cmd_entangle(args)


def entry(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        argv = _inject_config(argv)
        args = parser.parse_args(argv)
        return args.handler(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(entry())
