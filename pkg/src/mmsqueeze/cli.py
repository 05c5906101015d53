"""Command-line front end.

Subcommands::

    state      write a covariance file for a named family or a circuit
    xi         evaluate the multi-mode squeezing witness of a covariance file
    sweep      xi^2 against r for a named family, as CSV
    chi-sweep  non-Gaussian witness of the fourth-order squeezed state, as CSV
    check      validate a covariance file

Exit codes: 0 success (a "not entangled" verdict is still a success), 1 I/O
or parse error, 2 invalid input data, 3 unconverged numerics under --strict.
"""

from __future__ import annotations

import argparse
import csv
import io as _stringio
import json
import sys
import warnings
from dataclasses import dataclass

import numpy as np

from .fock import fourth_order_chi
from .gaussian_states import FAMILIES, evolve_covariance, named_state, vacuum_covariance
from .io import FileFormatError, covariance_to_dict, read_circuit, read_covariance
from .optimizer import OptimizerConfig
from .phase_space import (
    PSD_TOL,
    SYMMETRY_TOL,
    CovarianceError,
    Partition,
    PartitionError,
    UnphysicalCovarianceWarning,
    as_partition,
    build_symplectic_form,
    heisenberg_gap,
    n_modes_of,
    physicality_violation,
    validate_covariance,
)
from .witness import xi_squared

EXIT_OK = 0
EXIT_IO = 1
EXIT_INVALID = 2
EXIT_UNCONVERGED = 3

SWEEP_COLUMNS = ("r", "xi2_numeric", "xi2_analytic", "inverse_xi2", "converged")
CHI_COLUMNS = ("r", "s", "chi", "converged", "cutoff_used")
INAPPLICABLE = "inapplicable"
HEISENBERG_PAIRS = 100
HEISENBERG_TOL = 1e-12


class UsageError(Exception):
    """Bad flags or unparsable values; maps to exit code 1."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    seed: int = 42
    restarts: int = 16
    tol: float = 1e-12
    max_iter: int = 10_000
    strict: bool = False

    def optimizer_config(self) -> OptimizerConfig:
        return OptimizerConfig(seed=self.seed, n_random=self.restarts, tol=self.tol, max_iter=self.max_iter)


def parse_grid(text: str) -> np.ndarray:
    """Parse ``"start:stop:step"`` (stop included) or a comma list.

    Grids must be finite and strictly increasing.
    """
    try:
        if ":" in text:
            start, stop, step = (float(t) for t in text.split(":"))
            if not step > 0:
                raise UsageError(f"grid step must be positive in {text!r}")
            n = int(np.floor((stop - start) / step + 1e-9)) + 1
            if n < 1:
                raise UsageError(f"empty grid {text!r}")
            grid = np.round(start + step * np.arange(n), 12)
        else:
            grid = np.array([float(t) for t in text.split(",")])
    except ValueError as exc:
        raise UsageError(f"cannot parse grid {text!r}") from exc
    if not np.all(np.isfinite(grid)):
        raise UsageError(f"grid {text!r} has non-finite values")
    if np.any(np.diff(grid) <= 0):
        raise UsageError(f"grid {text!r} is not strictly increasing")
    return grid


def parse_partition(text: str | None) -> Partition | None:
    if text is None:
        return None
    try:
        return Partition.parse(text)
    except PartitionError as exc:
        raise UsageError(str(exc)) from exc


def analytic_xi2(family: str, r: float, partition: Partition) -> float:
    """Closed-form minimized xi^2, where one is known.

    Known cases: the vacuum (any partition), the trivial one-block partition of
    a pure state, and the all-singletons partition of ``tms2`` and ``tms3``.
    """
    n = partition.n_modes
    if family == "vacuum" or partition == Partition.trivial(n):
        return 1.0
    if partition == Partition.singletons(n):
        if family == "tms2":
            return (1 + np.exp(-4 * r)) / 2
        if family == "tms3":
            return (1 + 2 * np.exp(-4 * r)) / 3
    raise ValueError(f"no closed form for family {family!r} with partition {partition}")


def _family_modes(family: str, modes: int | None) -> int:
    return {"tms2": 2, "tms3": 3}.get(family, modes or 1)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _load_covariance(path: str, strict: bool) -> np.ndarray:
    gamma, _ = read_covariance(path)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", UnphysicalCovarianceWarning)
        gamma = validate_covariance(gamma, strict=strict)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return gamma


def cmd_state(args, config: RunConfig) -> int:
    if args.circuit is not None:
        circuit = read_circuit(args.circuit)
        gamma = evolve_covariance(vacuum_covariance(circuit.n_modes), circuit)
    else:
        if args.family is None:
            raise UsageError("state needs --family or --circuit")
        gamma = named_state(args.family, args.r, args.modes)
    _emit(json.dumps(covariance_to_dict(gamma), indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_xi(args, config: RunConfig) -> int:
    partition = parse_partition(args.partition)
    gamma = _load_covariance(args.file, config.strict)
    verdict = xi_squared(gamma, as_partition(partition, n_modes_of(gamma)), config.optimizer_config())
    _emit(verdict.to_json() + "\n", args.out)
    label = "entangled" if verdict.entangled else "no entanglement detected"
    print(
        f"xi^2 = {verdict.xi_squared:.12g} for partition {verdict.partition}: {label}\n"
        f"g_opt = {np.array2string(verdict.g_opt, precision=6)}",
        file=sys.stderr,
    )
    if not verdict.converged:
        print("warning: optimizer did not converge", file=sys.stderr)
        if config.strict:
            return EXIT_UNCONVERGED
    return EXIT_OK


def cmd_sweep(args, config: RunConfig) -> int:
    grid = parse_grid(args.r_grid)
    n = _family_modes(args.family, args.modes)
    partition = as_partition(parse_partition(args.partition), n)
    analytic_xi2(args.family, 0.0, partition)  # reject families without a closed form up front
    buf = _stringio.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    all_converged = True
    for r in grid:
        verdict = xi_squared(named_state(args.family, r, n), partition, config.optimizer_config())
        ref = analytic_xi2(args.family, r, partition)
        all_converged &= verdict.converged
        writer.writerow([repr(float(r)), repr(verdict.xi_squared), repr(float(ref)), repr(1 / verdict.xi_squared), int(verdict.converged)])
    _emit(buf.getvalue(), args.out)
    if not all_converged:
        print("warning: some rows did not converge", file=sys.stderr)
        if config.strict:
            return EXIT_UNCONVERGED
    return EXIT_OK


def cmd_chi_sweep(args, config: RunConfig) -> int:
    r_grid = parse_grid(args.r_grid)
    s_grid = parse_grid(args.s_grid)
    if np.any(r_grid < 0) or np.any((s_grid < 0) | (s_grid > 1)):
        raise ValueError("need r >= 0 and 0 <= s <= 1")
    if args.cutoff == "auto":
        cutoff, auto = 20, True
    else:
        try:
            cutoff, auto = int(args.cutoff), False
        except ValueError as exc:
            raise UsageError(f"--cutoff must be an integer or 'auto', got {args.cutoff!r}") from exc
    buf = _stringio.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CHI_COLUMNS)
    all_converged = True
    for r in r_grid:
        for s in s_grid:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                point = fourth_order_chi(float(r), float(s), cutoff, auto=auto)
            all_converged &= point.converged
            chi = repr(point.chi) if point.applicable else INAPPLICABLE
            writer.writerow([repr(float(r)), repr(float(s)), chi, int(point.converged), point.cutoff_used])
    _emit(buf.getvalue(), args.out)
    if not all_converged:
        print("warning: some rows did not converge; raise --cutoff or use --cutoff auto", file=sys.stderr)
        if config.strict:
            return EXIT_UNCONVERGED
    return EXIT_OK


def check_report(gamma: np.ndarray, seed: int = 42, n_pairs: int = HEISENBERG_PAIRS) -> list[tuple[str, bool, str]]:
    """Named pass/fail checks with a detail string each."""
    gamma = np.asarray(gamma, dtype=float)
    report = []
    asym = float(np.max(np.abs(gamma - gamma.T)))
    report.append(("symmetry", asym <= SYMMETRY_TOL, f"max |g - g^T| = {asym:.3e}"))
    sym = 0.5 * (gamma + gamma.T)
    lam = float(np.linalg.eigvalsh(sym)[0])
    report.append(("positive semidefinite", lam >= -PSD_TOL, f"min eigenvalue {lam:.6g}"))
    viol = physicality_violation(sym)
    report.append(("physicality", viol <= PSD_TOL, f"violation of gamma + i Omega/2 >= 0: {viol:.3e}"))
    rng = np.random.default_rng(seed)
    dim = gamma.shape[0]
    omega = build_symplectic_form(dim // 2)
    worst = np.inf
    for _ in range(n_pairs):
        h, g = rng.normal(size=(2, dim))
        worst = min(worst, heisenberg_gap(sym, h, g) / max(1.0, float(h @ omega @ g) ** 2 / 4))
    report.append(("heisenberg-robertson", worst >= -HEISENBERG_TOL, f"min relative gap over {n_pairs} pairs {worst:.3e}"))
    return report


def cmd_check(args, config: RunConfig) -> int:
    gamma, _ = read_covariance(args.file)
    report = check_report(gamma, seed=config.seed)
    lines = [f"{'PASS' if ok else 'FAIL'}  {name}: {detail}" for name, ok, detail in report]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if all(ok for _, ok, _ in report) else EXIT_INVALID


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_IO, f"{self.prog}: error: {message}\n")


def _add_optimizer_flags(p):
    p.add_argument("--seed", type=int, default=42, help="seed for the random optimizer starts")
    p.add_argument("--restarts", type=int, default=16, help="number of random starts")
    p.add_argument("--tol", type=float, default=1e-12, help="Nelder-Mead function tolerance")
    p.add_argument("--max-iter", type=int, default=10_000, help="iteration budget per start")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mmsqueeze", description="Multi-mode squeezing entanglement witnesses.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("state", help="write a covariance file")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--family", choices=FAMILIES)
    src.add_argument("--circuit", help="circuit JSON file")
    p.add_argument("--r", type=float, default=0.0, help="squeezing parameter")
    p.add_argument("--modes", type=int, help="number of modes (vacuum only)")
    p.add_argument("--out", help="output path (default: stdout)")

    p = sub.add_parser("xi", help="evaluate the squeezing witness")
    p.add_argument("file", help="covariance JSON file")
    p.add_argument("--partition", help='mode partition, e.g. "1,2|3" (default: all modes split)')
    _add_optimizer_flags(p)
    p.add_argument("--strict", action="store_true", help="treat unphysical input and non-convergence as errors")
    p.add_argument("--out", help="verdict JSON path (default: stdout)")

    p = sub.add_parser("sweep", help="xi^2 against r as CSV")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--modes", type=int, help="number of modes (vacuum only)")
    p.add_argument("--r-grid", default="0:2:0.1", help='"start:stop:step" or comma list (default 0:2:0.1)')
    p.add_argument("--partition", help="mode partition (default: all modes split)")
    _add_optimizer_flags(p)
    p.add_argument("--strict", action="store_true", help="exit 3 if any row did not converge")
    p.add_argument("--out", help="CSV path (default: stdout)")

    p = sub.add_parser("chi-sweep", help="non-Gaussian witness as CSV")
    p.add_argument("--r-grid", default="0:0.3:0.02")
    p.add_argument("--s-grid", default="0,0.5,1")
    p.add_argument("--cutoff", default="20", help="Fock cutoff per mode, or 'auto'")
    p.add_argument("--strict", action="store_true", help="exit 3 if any row did not converge")
    p.add_argument("--out", help="CSV path (default: stdout)")

    p = sub.add_parser("check", help="validate a covariance file")
    p.add_argument("file", help="covariance JSON file")
    p.add_argument("--seed", type=int, default=42, help="seed for the random direction pairs")
    p.add_argument("--out", help="report path (default: stdout)")
    return parser


COMMANDS = {
    "state": cmd_state,
    "xi": cmd_xi,
    "sweep": cmd_sweep,
    "chi-sweep": cmd_chi_sweep,
    "check": cmd_check,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code
    config = RunConfig(
        command=args.command,
        seed=getattr(args, "seed", 42),
        restarts=getattr(args, "restarts", 16),
        tol=getattr(args, "tol", 1e-12),
        max_iter=getattr(args, "max_iter", 10_000),
        strict=getattr(args, "strict", False),
    )
    try:
        return COMMANDS[args.command](args, config)
    except (OSError, FileFormatError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (CovarianceError, PartitionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
