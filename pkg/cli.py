"""Command-line front end for three-qubit state preparation and characterization.

Subcommands:
    make             closed-form generic, GHZ, W or pseudopure state
    circuit          gate-level preparation circuit and its output state
    pulse-sim        NMR pulse program simulated from the pseudopure start state
    tomo             simulated tomography records (CSV)
    tomo-invert      density matrix from tomography records
    reconstruct      pure state from two two-party marginals
    fidelity         normalized Hilbert-Schmidt fidelity of two state files
    export-tomograph bar data (row, col, re, im) of a state
    rank-check       rank of a tomography operation set
    pipeline         prepare -> tomography -> inversion -> fidelity report

Angles are in degrees on the command line. Exit codes: 0 success, 1 usage
or other failure, 2 degenerate marginals (generalized GHZ exception),
3 inconsistent marginals.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Any, NoReturn

import numpy as np
import pandas as pd
from dotenv import load_dotenv

import gates
import pulsesim
import reconstruct
import states
import tomo
from logger import LogSettings, get_logger, setup_logging
from qcore import (
    DensityMatrix,
    Ket,
    as_density,
    basis_labels,
    fidelity,
    state_from_dict,
    state_to_dict,
)
from utils.env_utils import get_env_var, get_int_env_var
from utils.fs_utils import get_validated_path_from_env, read_json, write_json

if TYPE_CHECKING:
    from collections.abc import Callable, Iterator, Sequence

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DEGENERATE = 2
EXIT_INCONSISTENT = 3

KINDS = ("generic", "ghz", "w")
LEVELS = ("closed", "gate", "pulse")
AMPLITUDE_ATOL = 1e-12


class PipelineStageError(RuntimeError):
    """A pipeline stage failed; the original error is the __cause__."""

    def __init__(self, stage: str) -> None:
        super().__init__(f"Pipeline stage '{stage}' failed")
        self.stage = stage


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with EXIT_USAGE."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_USAGE)


def _degrees_between(low: float, high: float) -> Callable[[str], float]:
    def parse(text: str) -> float:
        try:
            value = float(text)
        except ValueError as e:
            msg = f"'{text}' is not a number"
            raise argparse.ArgumentTypeError(msg) from e
        if not low <= value <= high:
            msg = f"{value} is outside [{low:g}, {high:g}] degrees"
            raise argparse.ArgumentTypeError(msg)
        return value

    return parse


def _finite_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError as e:
        msg = f"'{text}' is not a number"
        raise argparse.ArgumentTypeError(msg) from e
    if not math.isfinite(value):
        msg = f"{text} is not finite"
        raise argparse.ArgumentTypeError(msg)
    return value


def _non_negative(text: str) -> float:
    value = _finite_float(text)
    if value < 0:
        msg = f"{value} must be non-negative"
        raise argparse.ArgumentTypeError(msg)
    return value


_quarter_turn = _degrees_between(0.0, 90.0)


@dataclass(frozen=True)
class RunConfig:
    """Settings shared by the subcommands, resolved from flags and environment."""

    command: str
    inputs: tuple[Path, ...]
    output: Path | None
    system: pulsesim.SpinSystem
    reconstruction: reconstruct.ReconstructionConfig
    seed: int
    noise_sigma: float = 0.0
    relaxation: bool = False
    variant: pulsesim.Variant = "short"

    def __post_init__(self) -> None:
        if self.output is not None and self.output.resolve() in {
            p.resolve() for p in self.inputs
        }:
            msg = f"Output path '{self.output}' is also an input"
            raise ValueError(msg)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> RunConfig:
        inputs = tuple(
            Path(p)
            for name in ("input", "ab", "bc", "ac", "params", "first", "second")
            if (p := getattr(args, name, None)) is not None
        )
        output = getattr(args, "out", None)
        recon = reconstruct.ReconstructionConfig.from_env()
        recon = dataclasses.replace(
            recon,
            tol_degen=_override(args, "tol_degen", recon.tol_degen),
            tol_inconsistent=_override(
                args,
                "tol_inconsistent",
                recon.tol_inconsistent,
            ),
        )
        seed = getattr(args, "seed", None)
        return cls(
            command=args.command,
            inputs=inputs,
            output=Path(output) if output is not None else None,
            system=(
                _load_system(args)
                if hasattr(args, "offsets")
                else pulsesim.SpinSystem.default()
            ),
            reconstruction=recon,
            seed=(
                get_int_env_var("TRIQ_SEED", tomo.DEFAULT_NOISE_SEED)
                if seed is None
                else seed
            ),
            noise_sigma=getattr(args, "noise_sigma", 0.0),
            relaxation=getattr(args, "relaxation", "off") == "on",
            variant=getattr(args, "variant", "short"),
        )


def _override(args: argparse.Namespace, name: str, default: float) -> float:
    value = getattr(args, name, None)
    return default if value is None else value


def _load_system(args: argparse.Namespace) -> pulsesim.SpinSystem:
    """Spin system from --system, else TRIQ_SYSTEM_FILE, else the built-in constants."""
    path: str | Path | None = getattr(args, "system", None)
    if path is None and get_env_var("TRIQ_SYSTEM_FILE"):
        path = get_validated_path_from_env(
            "TRIQ_SYSTEM_FILE",
            "spin system",
            check_is_file=True,
        )
    if path is None:
        system = pulsesim.SpinSystem.default()
    else:
        system = pulsesim.SpinSystem.from_dict(read_json(path, "spin system file"))
        logger.info("Loaded spin system from %s", path)
    if not getattr(args, "offsets", False):
        system = dataclasses.replace(system, nu=(0.0, 0.0, 0.0))
    return system


def _emit(text: str) -> None:
    sys.stdout.write(f"{text}\n")


def _load_state(path: str | Path) -> Ket | DensityMatrix:
    """Read a Ket or Matrix JSON file, symmetrizing and normalizing matrices."""
    payload = read_json(path, "state file")
    return state_from_dict(payload, hermitize=True, normalize=True)


def _load_density(path: str | Path) -> DensityMatrix:
    return as_density(_load_state(path))


def _write_state(path: Path, state: Ket | DensityMatrix) -> None:
    write_json(path, state_to_dict(state))
    kind = "ket" if isinstance(state, Ket) else "density matrix"
    logger.info("Wrote %s to %s", kind, path)


def _amplitude_frame(ket: Ket) -> pd.DataFrame:
    labels = basis_labels(3)
    rows = [
        {
            "basis": f"|{labels[i]}>",
            "re": amp.real,
            "im": amp.imag,
            "abs": abs(amp),
            "phase_deg": math.degrees(np.angle(amp)),
        }
        for i, amp in enumerate(ket.amps)
        if abs(amp) > AMPLITUDE_ATOL
    ]
    return pd.DataFrame(rows, columns=["basis", "re", "im", "abs", "phase_deg"])


def _print_ket(ket: Ket) -> None:
    table = _amplitude_frame(ket).to_string(
        index=False,
        float_format=lambda v: f"{v:.3f}",
    )
    _emit(table)


def _generic_params(args: argparse.Namespace) -> states.GenericParams:
    if getattr(args, "params", None):
        payload = read_json(args.params, "generic parameters")
        return states.GenericParams.from_dict(payload)
    return states.GenericParams.from_degrees(
        args.alpha,
        args.beta,
        args.gamma,
        args.delta,
        args.phi,
    )


def _target_ket(kind: str, args: argparse.Namespace) -> Ket:
    """Closed-form state requested by the arguments."""
    if kind == "generic":
        return states.generic_ket(_generic_params(args))
    if kind == "ghz":
        return states.ghz_ket(math.radians(args.alpha))
    return states.w_ket(
        math.radians(args.beta),
        math.radians(args.gamma),
        phase=math.radians(args.w_phase),
    )


def _build_circuit(kind: str, args: argparse.Namespace) -> tuple[gates.Circuit, int]:
    """Gate-level circuit and its start basis state."""
    if kind == "generic":
        params = _generic_params(args)
        return gates.build_generic_circuit(params, fuse=not args.no_fuse), 0
    if kind == "ghz":
        return gates.build_ghz_circuit(math.radians(args.alpha)), 0
    if args.w_phase:
        msg = (
            "The gate-level W circuit has no phase gate; "
            "use --w-phase with the pulse level"
        )
        raise ValueError(msg)
    simplified = not args.full_w
    circuit = gates.build_w_circuit(
        math.radians(args.beta),
        math.radians(args.gamma),
        simplified=simplified,
    )
    start = gates.W_START_SIMPLIFIED if simplified else gates.W_START_FULL
    return circuit, start


def _compile_program(
    kind: str,
    args: argparse.Namespace,
    cfg: RunConfig,
) -> pulsesim.PulseProgram:
    if kind == "generic":
        program = pulsesim.compile_generic(
            _generic_params(args),
            cfg.system,
            variant=cfg.variant,
        )
    elif kind == "ghz":
        program = pulsesim.compile_ghz(
            math.radians(args.alpha),
            cfg.system,
            schedule=args.schedule,
            variant=cfg.variant,
        )
    else:
        program = pulsesim.compile_w(
            math.radians(args.beta),
            math.radians(args.gamma),
            cfg.system,
            variant=cfg.variant,
            qubit3_phase=math.radians(args.w_phase),
        )
    return program.finalized()


def _simulate_pulses(
    program: pulsesim.PulseProgram,
    cfg: RunConfig,
    epsilon: float = 1.0,
) -> DensityMatrix:
    start = states.pseudopure(states.PseudopureSpec(program.initial_state, epsilon))
    return pulsesim.evolve(program, start, cfg.system, relaxation=cfg.relaxation)


def cmd_make(args: argparse.Namespace, cfg: RunConfig) -> None:
    """Write a closed-form state and print its amplitudes."""
    if args.kind == "pseudopure":
        spec = states.PseudopureSpec.from_label(args.state, args.epsilon)
        rho = states.pseudopure(spec)
        _write_state(cfg.output, rho)
        _emit(f"pseudopure |{args.state}> epsilon={args.epsilon:g}")
        return
    ket = _target_ket(args.kind, args)
    if args.kind == "generic":
        amps = states.generic_amplitudes(_generic_params(args))
        _emit(
            "a1..a5 = "
            + ", ".join(f"{a:.3f}" for a in amps.as_tuple())
            + f"; phi = {math.degrees(amps.phi):.1f} deg",
        )
    _write_state(cfg.output, ket)
    _print_ket(ket)


def cmd_circuit(args: argparse.Namespace, cfg: RunConfig) -> None:
    """Run the gate-level circuit from its start state."""
    circuit, start = _build_circuit(args.kind, args)
    ket = gates.apply(circuit, Ket.basis(start))
    if args.circuit_out:
        write_json(args.circuit_out, gates.circuit_to_list(circuit))
    _write_state(cfg.output, ket)
    _emit(f"start |{start:03b}>: " + " ".join(circuit.labels()))
    _print_ket(ket)
    _emit(f"fidelity to closed form: {fidelity(ket, _target_ket(args.kind, args)):.3f}")


def cmd_pulse_sim(args: argparse.Namespace, cfg: RunConfig) -> None:
    """Compile and simulate a pulse program."""
    program = _compile_program(args.kind, args, cfg)
    rho = _simulate_pulses(program, cfg, args.epsilon)
    if args.program_out:
        write_json(args.program_out, pulsesim.program_to_dict(program))
    _write_state(cfg.output, rho)
    _emit(
        f"{program.label}: {len(program.events)} events,"
        f" {pulsesim.duration(program) * 1e3:.2f} ms,"
        f" relaxation {'on' if cfg.relaxation else 'off'}",
    )
    _emit(f"fidelity to closed form: {fidelity(rho, _target_ket(args.kind, args)):.3f}")


def cmd_tomo(args: argparse.Namespace, cfg: RunConfig) -> None:
    """Simulate tomography records for an operation set."""
    ops, target = tomo.op_set(args.ops)
    rho = _load_density(args.input)
    records = tomo.simulate_experiment(
        rho,
        ops,
        target,
        noise_sigma=cfg.noise_sigma,
        rng=np.random.default_rng(cfg.seed),
    )
    frame = tomo.records_to_frame(records)
    cfg.output.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(cfg.output, index=False)
    _emit(f"{len(records)} operations, {len(frame)} lines on target {target}")


def cmd_tomo_invert(args: argparse.Namespace, cfg: RunConfig) -> None:
    """Invert tomography records to a density matrix."""
    records = tomo.read_records_csv(args.input)
    rho = tomo.invert(records, args.target)
    _write_state(cfg.output, rho)
    _emit(f"residual {tomo.tomography_residual(records, rho, args.target):.3e}")


def cmd_reconstruct(args: argparse.Namespace, cfg: RunConfig) -> None:
    """Reconstruct a pure state from (rho_AB, rho_BC) or (rho_AB, rho_AC)."""
    rho_ab = _load_density(args.ab)
    if args.bc is not None:
        rho_bc = _load_density(args.bc)
        ket = reconstruct.reconstruct_pure(rho_ab, rho_bc, cfg.reconstruction)
    else:
        ket = reconstruct.reconstruct_from_ab_ac(
            rho_ab,
            _load_density(args.ac),
            cfg.reconstruction,
        )
    _write_state(cfg.output, ket)
    _print_ket(ket)
    if args.reference:
        reference = _load_state(args.reference)
        _emit(f"fidelity to reference: {fidelity(ket, reference):.3f}")


def cmd_fidelity(args: argparse.Namespace, _cfg: RunConfig) -> None:
    value = fidelity(_load_state(args.first), _load_state(args.second))
    _emit(f"{value:.{args.digits}f}")


def cmd_export_tomograph(args: argparse.Namespace, cfg: RunConfig) -> None:
    """Write 64 (or 16) bars in binary basis order."""
    frame = tomo.tomograph_frame(_load_density(args.input))
    cfg.output.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(cfg.output, index=False)
    _emit(f"{len(frame)} bars written to {cfg.output}")


def cmd_rank_check(args: argparse.Namespace, _cfg: RunConfig) -> None:
    if args.op_list:
        ops = tomo.parse_ops(s for s in args.op_list.split(",") if s.strip())
        target = args.target
    else:
        ops, target = tomo.op_set(args.ops)
    rank = tomo.measurement_rank(ops, target)
    unknowns = tomo.unknown_count(target)
    status = "complete" if rank == unknowns else "incomplete"
    names = " ".join(str(o) for o in ops)
    _emit(f"{names}: rank {rank} of {unknowns} on {target} ({status})")


@contextmanager
def _stage(name: str) -> Iterator[None]:
    try:
        yield
    except Exception as e:
        raise PipelineStageError(name) from e
    logger.debug("Pipeline stage '%s' done", name)


def run_pipeline(args: argparse.Namespace, cfg: RunConfig) -> dict[str, Any]:
    """Prepare, tomograph, invert and score; optionally reconstruct from marginals."""
    report: dict[str, Any] = {
        "kind": args.kind,
        "level": args.level,
        "relaxation": cfg.relaxation,
        "noise_sigma": cfg.noise_sigma,
    }
    rng = np.random.default_rng(cfg.seed)
    with _stage("prepare"):
        target = _target_ket(args.kind, args)
        if args.level == "closed":
            prepared = target.density()
        elif args.level == "gate":
            circuit, start = _build_circuit(args.kind, args)
            prepared = gates.apply(circuit, Ket.basis(start)).density()
        else:
            program = _compile_program(args.kind, args, cfg)
            prepared = _simulate_pulses(program, cfg)
            report["duration_s"] = pulsesim.duration(program)
        report["prepared_fidelity"] = fidelity(target, prepared)

    with _stage("tomography"):
        records = tomo.simulate_experiment(
            prepared,
            tomo.FULL_OPS,
            noise_sigma=cfg.noise_sigma,
            rng=rng,
        )
    with _stage("inversion"):
        tomographed = tomo.invert(records)
        report["tomography_fidelity"] = fidelity(target, tomographed)
        report["tomography_residual"] = tomo.tomography_residual(records, tomographed)

    if args.marginals:
        with _stage("pair-tomography"):
            pairs = {
                label: tomo.invert(
                    tomo.simulate_experiment(
                        prepared,
                        tomo.PAIR_OPS[label],
                        label,
                        noise_sigma=cfg.noise_sigma,
                        rng=rng,
                    ),
                    label,
                )
                for label in ("AB", "BC")
            }
        with _stage("reconstruction"):
            ket = reconstruct.reconstruct_pure(
                pairs["AB"],
                pairs["BC"],
                cfg.reconstruction,
            )
            report["reconstruction_fidelity"] = fidelity(target, ket)
            report["reconstruction_vs_tomograph"] = fidelity(tomographed, ket)
    return report


def cmd_pipeline(args: argparse.Namespace, cfg: RunConfig) -> None:
    report = run_pipeline(args, cfg)
    for key, value in report.items():
        shown = f"{value:.3f}" if isinstance(value, float) else str(value)
        _emit(f"{key:<28} {shown}")
    if args.report:
        write_json(args.report, report)


def _add_kind_params(parser: argparse.ArgumentParser, kind: str) -> None:
    if kind == "generic":
        alpha, beta, gamma, delta, phi = states.CANONICAL_GENERIC_DEG
        parser.add_argument("--alpha", type=_quarter_turn, default=alpha)
        parser.add_argument("--beta", type=_quarter_turn, default=beta)
        parser.add_argument("--gamma", type=_quarter_turn, default=gamma)
        parser.add_argument("--delta", type=_quarter_turn, default=delta)
        parser.add_argument("--phi", type=_finite_float, default=phi)
        parser.add_argument(
            "--params",
            help="JSON file with alpha_deg .. phi_deg (overrides the angle flags)",
        )
    elif kind == "ghz":
        parser.add_argument("--alpha", type=_quarter_turn, default=45.0)
    else:
        parser.add_argument(
            "--beta",
            type=_quarter_turn,
            default=math.degrees(states.STANDARD_W_BETA),
        )
        parser.add_argument(
            "--gamma",
            type=_quarter_turn,
            default=math.degrees(states.STANDARD_W_GAMMA),
        )
        parser.add_argument(
            "--w-phase",
            type=_finite_float,
            default=0.0,
            help="relative phase on |001> in degrees (90 gives the i|001> W state)",
        )


def _add_kind_subparsers(
    parent: argparse.ArgumentParser,
    handler: Callable[[argparse.Namespace, RunConfig], None],
    extra: Callable[[argparse.ArgumentParser, str], None],
    kinds: Sequence[str] = KINDS,
) -> None:
    sub = parent.add_subparsers(dest="kind", required=True)
    for kind in kinds:
        p = sub.add_parser(kind)
        if kind in KINDS:
            _add_kind_params(p, kind)
        extra(p, kind)
        p.set_defaults(handler=handler)


def _add_pulse_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--system",
        help="spin system JSON (default: TRIQ_SYSTEM_FILE or built-in)",
    )
    p.add_argument(
        "--offsets",
        action="store_true",
        help="use the offsets of the system file",
    )
    p.add_argument("--relaxation", choices=["on", "off"], default="off")
    p.add_argument("--variant", choices=list(pulsesim.VARIANTS), default="short")
    p.add_argument("--schedule", choices=list(pulsesim.SCHEDULES), default="parallel")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="triq",
        description="Three-qubit state preparation, tomography and reconstruction",
    )
    parser.add_argument(
        "--log-level",
        help="DEBUG, INFO, WARNING (default: TRIQ_LOG_LEVEL or INFO)",
    )
    parser.add_argument(
        "--log-dir",
        help="log directory (default: TRIQ_LOG_DIR or logs)",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    make = commands.add_parser("make", help="closed-form state")

    def make_extra(p: argparse.ArgumentParser, kind: str) -> None:
        p.add_argument("--out", required=True)
        if kind == "pseudopure":
            p.add_argument("--state", default="000")
            p.add_argument("--epsilon", type=float, default=1.0)

    _add_kind_subparsers(make, cmd_make, make_extra, (*KINDS, "pseudopure"))

    circuit = commands.add_parser("circuit", help="gate-level preparation")

    def circuit_extra(p: argparse.ArgumentParser, kind: str) -> None:
        p.add_argument("--out", required=True)
        p.add_argument("--circuit-out")
        if kind == "generic":
            p.add_argument("--no-fuse", action="store_true")
        if kind == "w":
            p.add_argument("--full-w", action="store_true", help="start from |000>")

    _add_kind_subparsers(circuit, cmd_circuit, circuit_extra)

    pulse = commands.add_parser("pulse-sim", help="pulse-level preparation")

    def pulse_extra(p: argparse.ArgumentParser, _kind: str) -> None:
        p.add_argument("--out", required=True)
        p.add_argument("--program-out")
        p.add_argument("--epsilon", type=float, default=1.0)
        _add_pulse_flags(p)

    _add_kind_subparsers(pulse, cmd_pulse_sim, pulse_extra)

    p = commands.add_parser("tomo", help="simulate tomography records")
    p.add_argument("--ops", default="full", help="full, compact, ab, bc or ac")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--noise-sigma", type=_non_negative, default=0.0)
    p.add_argument("--seed", type=int)
    p.set_defaults(handler=cmd_tomo)

    p = commands.add_parser("tomo-invert", help="invert tomography records")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--target", choices=["full", *tomo.PAIR_TARGETS])
    p.set_defaults(handler=cmd_tomo_invert)

    p = commands.add_parser("reconstruct", help="pure state from two marginals")
    p.add_argument("--ab", required=True)
    partner = p.add_mutually_exclusive_group(required=True)
    partner.add_argument("--bc")
    partner.add_argument("--ac")
    p.add_argument("--out", required=True)
    p.add_argument("--reference", help="state file to compare the result with")
    p.add_argument("--tol-degen", type=_non_negative)
    p.add_argument("--tol-inconsistent", type=_non_negative)
    p.set_defaults(handler=cmd_reconstruct)

    p = commands.add_parser("fidelity", help="fidelity of two state files")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--digits", type=int, default=3)
    p.set_defaults(handler=cmd_fidelity)

    p = commands.add_parser("export-tomograph", help="bar data of a state")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_export_tomograph)

    p = commands.add_parser("rank-check", help="rank of a tomography operation set")
    p.add_argument("--ops", default="full", help="full, compact, ab, bc or ac")
    p.add_argument("--op-list", help="comma-separated ops, e.g. III,IXI,IYI,XXI")
    p.add_argument("--target", default="full", choices=["full", *tomo.PAIR_TARGETS])
    p.set_defaults(handler=cmd_rank_check)

    pipeline = commands.add_parser("pipeline", help="end-to-end fidelity report")

    def pipeline_extra(p: argparse.ArgumentParser, kind: str) -> None:
        p.add_argument("--level", choices=LEVELS, default="closed")
        p.add_argument("--noise-sigma", type=_non_negative, default=0.0)
        p.add_argument("--seed", type=int)
        p.add_argument("--marginals", action="store_true")
        p.add_argument("--report", help="write the report as JSON")
        _add_pulse_flags(p)
        if kind == "generic":
            p.add_argument("--no-fuse", action="store_true")
        if kind == "w":
            p.add_argument("--full-w", action="store_true")

    _add_kind_subparsers(pipeline, cmd_pipeline, pipeline_extra)
    return parser


def _exit_code(exc: BaseException) -> int:
    """Map an error (or the cause of a pipeline stage error) to an exit code."""
    cause: BaseException | None = exc
    while cause is not None:
        if isinstance(cause, reconstruct.DegeneracyError):
            return EXIT_DEGENERATE
        if isinstance(cause, reconstruct.InconsistentMarginalsError):
            return EXIT_INCONSISTENT
        cause = cause.__cause__
    return EXIT_USAGE


def main(argv: Sequence[str] | None = None) -> None:
    """Parse arguments, configure logging and run one subcommand."""
    load_dotenv()
    args = build_parser().parse_args(argv)
    try:
        setup_logging(LogSettings.resolve("triq", args.log_level, args.log_dir))
        cfg = RunConfig.from_args(args)
        args.handler(args, cfg)
    except Exception as e:
        code = _exit_code(e)
        logger.exception("Command '%s' failed (exit code %d)", args.command, code)
        sys.exit(code)


if __name__ == "__main__":
    main()
