"""
BitAssist command line.

Every command builds a Report (values, certificates, checks), renders it as
text or structured JSON, and exits 0 on success, 2 on invalid input, 3 on a
solver budget or convergence failure, 4 when a certificate check fails.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from bitassist import __version__
from bitassist.core.config import settings
from bitassist.core.errors import BitAssistError, CertificateMismatchError, InputValidationError
from bitassist.core.logging import setup_logging
from bitassist.models.channel import Channel
from bitassist.models.correlation import Correlation
from bitassist.models.status import ReportFormat
from bitassist.schemas.options import SolverOptions
from bitassist.schemas.report import Report
from bitassist.schemas.strategy import StrategyFile
from bitassist.services import assist, channels, correlations, protocol, sampling, storage
from bitassist.services.formatter import format_report
from bitassist.services.generators import get_generator, list_all_generators

logger = logging.getLogger(__name__)


# === Input resolution ===


def _parse_generator_spec(spec: str):
    """NAME or NAME:key=value,key=value"""
    name, _, rest = spec.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, sep, value = item.partition("=")
        if not sep:
            raise InputValidationError(f"Bad generator parameter {item!r} in {spec!r}")
        params[key.strip()] = value.strip()
    return get_generator(name), params


def resolve_channel(arg: str, renormalize: bool = False) -> Channel:
    """A channel file, or a generator spec such as "prevedel" or "hashing:m=2" """
    if Path(arg).exists():
        return storage.load_channel(arg, renormalize=renormalize)
    try:
        generator, params = _parse_generator_spec(arg)
    except InputValidationError:
        raise InputValidationError(f"File not found and not a generator: {arg}")
    if generator.kind != "channel":
        raise InputValidationError(f"Generator {generator.name!r} does not produce a channel")
    return generator.build(**params)


def resolve_correlation(arg: str) -> Correlation:
    if Path(arg).exists():
        return storage.load_correlation(arg)
    try:
        generator, params = _parse_generator_spec(arg)
    except InputValidationError:
        raise InputValidationError(f"File not found and not a generator: {arg}")
    if generator.kind != "correlation":
        raise InputValidationError(f"Generator {generator.name!r} does not produce a correlation")
    return generator.build(**params)


def solver_options(args: argparse.Namespace) -> SolverOptions:
    return SolverOptions.from_settings(
        seed=args.seed,
        restarts=args.restarts,
        iterations=args.iterations,
        tol=args.tol,
        family_restarts=args.family_restarts,
    )


def _matrix(m: np.ndarray) -> List[List[List[float]]]:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def _floats(v: np.ndarray) -> List[float]:
    return [float(x) for x in np.asarray(v).ravel()]


# === Commands ===


def cmd_succ(args: argparse.Namespace) -> Report:
    ch = resolve_channel(args.channel, args.renormalize)
    value = channels.succ_unassisted(ch)
    oracle = channels.brute_force_succ(ch)
    x0, x1 = oracle.pair
    report = Report(command="succ", inputs={"channel": args.channel})
    report.values.update(succ=value, brute_force=oracle.value)
    report.certificates.update(
        encoder_pair=[ch.inputs[x0], ch.inputs[x1]], diam1=channels.diam1(ch.rows)
    )
    report.add_check("oracle_agreement", abs(value - oracle.value) <= 1e-9)
    return report


def cmd_succ_ns(args: argparse.Namespace) -> Report:
    ch = resolve_channel(args.channel, args.renormalize)
    result = assist.succ_ns(ch)
    report = Report(command="succ-ns", inputs={"channel": args.channel})
    report.values.update(succ_ns=result.value, succ=channels.succ_unassisted(ch))
    report.certificates.update(center=_floats(result.center), max_distance=result.residual)
    report.add_check("center_attains_value", abs(result.residual - 2 * (result.value - 0.5)) <= 1e-8)
    report.add_check("at_least_unassisted", result.value >= report.values["succ"] - 1e-9)
    return report


def cmd_succ_q2(args: argparse.Namespace) -> Report:
    ch = resolve_channel(args.channel, args.renormalize)
    opts = solver_options(args)
    result = assist.succ_qn(ch, args.dim, opts)
    rad = result.radius
    succ = channels.succ_unassisted(ch)
    ceiling = assist.succ_ns(ch).value

    report = Report(
        command="succ-q2",
        inputs={"channel": args.channel},
        options={"dim": args.dim, **opts.model_dump()},
    )
    report.values.update(
        succ_q=result.value,
        heuristic=result.heuristic,
        succ=succ,
        succ_ns=ceiling,
        radius=rad.radius,
        dual_lower_bound=rad.dual_lower_bound,
        gap=rad.gap,
    )
    report.certificates.update(family=result.family.describe(), center=_matrix(rad.center.matrix))
    if rad.has_certificate:
        strategy = assist.strategy_from_certificate(ch, result.family, rad)
        report.values["strategy_success"] = assist.eval_strategy_success(ch, strategy)
        report.certificates["lambdas"] = [_matrix(m.matrix) for m in rad.lambdas]
        report.certificates["lambdas_prime"] = [_matrix(m.matrix) for m in rad.lambdas_prime]
    report.add_check("dual_below_radius", rad.dual_lower_bound <= rad.radius + 1e-7)
    if not result.heuristic:
        report.add_check("dual_gap", rad.gap <= settings.RAD_GAP_TOL)
    report.add_check("at_least_unassisted", result.value >= succ - 1e-9)
    report.add_check("within_ns_ceiling", result.value <= ceiling + 1e-6)
    return report


def cmd_locfrac(args: argparse.Namespace) -> Report:
    d = resolve_correlation(args.correlation)
    report = Report(command="locfrac", inputs={"correlation": args.correlation})
    report.add_check("nonsignaling", correlations.is_nonsignaling(d))
    result = correlations.local_fraction(d)
    report.values.update(local_fraction=result.alpha, chsh=list(correlations.chsh_values(d)))

    names = [b.name for b in correlations.deterministic_boxes()]
    report.certificates["weights"] = {
        name: float(w) for name, w in zip(names, result.weights) if w > 1e-12
    }
    local = np.tensordot(result.weights, np.stack([b.table for b in correlations.deterministic_boxes()]), axes=1)
    rebuilt = local
    if result.residual is not None:
        rebuilt = local + (1 - result.alpha) * result.residual.table
        report.certificates["residual"] = result.residual.table.tolist()
        report.add_check("residual_nonsignaling", correlations.is_nonsignaling(result.residual, 1e-7))
    report.add_check("decomposition_reconstructs", float(np.max(np.abs(rebuilt - d.table))) <= 1e-8)
    return report


def _bound_lines(report: Report, check: assist.BoundCheck) -> None:
    report.values[f"bound_{check.name}"] = check.bound
    for key, value in check.extra.items():
        report.values[f"{check.name}_{key}"] = value
    report.add_check(f"{check.name}_holds", check.holds)


def cmd_simulate(args: argparse.Namespace) -> Report:
    ch = resolve_channel(args.channel, args.renormalize)
    d = resolve_correlation(args.correlation)
    report = Report(
        command="simulate", inputs={"channel": args.channel, "correlation": args.correlation}
    )
    succ = channels.succ_unassisted(ch)
    report.values["succ"] = succ
    nonsignaling = correlations.is_nonsignaling(d)
    report.values["device_nonsignaling"] = nonsignaling

    if args.strategy:
        report.inputs["strategy"] = args.strategy
        strat = storage.load_strategy(args.strategy, ch, d)
        value = protocol.simulate(ch, d, strat)
        report.values["value"] = value
    else:
        result = protocol.optimal_assisted_succ(ch, d)
        value = result.value
        strat = result.strategy
        report.values.update(optimum=value, encoders_checked=result.encoders_checked)
        report.certificates["strategy"] = StrategyFile.from_strategy(strat, ch, d).model_dump()
        report.add_check("witness_reproduces", abs(protocol.simulate(ch, d, strat) - value) <= 1e-12)
        report.add_check("at_least_unassisted", value >= succ - 1e-9)
        if args.save_strategy:
            storage.save_strategy(strat, ch, d, args.save_strategy)

    thm5 = protocol.check_bound_thm5(ch, d, value)
    _bound_lines(report, thm5)
    report.values["thm5_equality"] = abs(value - thm5.bound) <= 1e-9
    if nonsignaling:
        ceiling = assist.succ_ns(ch).value
        report.values["succ_ns"] = ceiling
        report.add_check("within_ns_ceiling", value <= ceiling + 1e-8)
        if d.is_binary:
            _bound_lines(report, protocol.check_bound_thm6(ch, d, value))
    return report


def cmd_gen(args: argparse.Namespace) -> Report:
    generator = get_generator(args.name)
    params = {
        key: getattr(args, key)
        for key in generator.parameters
        if getattr(args, key, None) is not None
    }
    artifact = generator.build(**params)
    stem = generator.name + "".join(f"-{k}{v}" for k, v in sorted(params.items()))
    out = Path(args.out) if args.out else storage.default_output_path(stem)

    report = Report(command="gen", options={"name": generator.name, **params})
    if generator.kind == "channel":
        path = storage.save_channel(artifact, out)
        reloaded = storage.load_channel(path)
        report.values.update(inputs=reloaded.num_inputs, outputs=reloaded.num_outputs)
        report.add_check("reloads_bit_exact", np.array_equal(reloaded.matrix, artifact.matrix))
    else:
        path = storage.save_correlation(artifact, out)
        reloaded = storage.load_correlation(path)
        report.values["sizes"] = list(reloaded.sizes)
        report.values["nonsignaling"] = correlations.is_nonsignaling(reloaded)
        report.add_check("reloads_bit_exact", np.array_equal(reloaded.table, artifact.table))
    report.values.update(kind=generator.kind, path=path)
    return report


def _verify_channel(report: Report, ch: Channel, label: str, tally: Dict) -> None:
    thm4 = assist.check_bound_thm4(ch)
    _record(report, tally, "thm4", label, thm4)
    if channels.succ_unassisted(ch) - 0.5 <= 1e-9:
        return
    box = correlations.tsirelson_box()
    if protocol.enumeration_size(ch, box) <= settings.ENUMERATION_BUDGET:
        lower = protocol.optimal_assisted_succ(ch, box).value
        _record(report, tally, "cor9", label, assist.check_bound_cor9(ch, lower))


def _verify_pair(report: Report, ch, d, label: str, tally: Dict) -> None:
    if protocol.enumeration_size(ch, d) > settings.ENUMERATION_BUDGET:
        logger.warning(f"Skipping {label}: enumeration over budget")
        return
    value = protocol.optimal_assisted_succ(ch, d).value
    _record(report, tally, "thm5", label, protocol.check_bound_thm5(ch, d, value))
    if correlations.is_nonsignaling(d):
        ceiling = assist.succ_ns(ch).value
        tally.setdefault("ns_ceiling", []).append(value - ceiling - 1e-8)
        if value > ceiling + 1e-8:
            report.certificates.setdefault("violations", []).append(f"ns_ceiling {label}")
        if d.is_binary:
            _record(report, tally, "thm6", label, protocol.check_bound_thm6(ch, d, value))


def _record(report: Report, tally: Dict, name: str, label: str, check: assist.BoundCheck) -> None:
    slack = 1e-6 if name in ("thm6", "cor9") else 1e-9
    tally.setdefault(name, []).append(check.value - check.bound - slack)
    if not check.holds:
        report.certificates.setdefault("violations", []).append(f"{name} {label}")


def cmd_verify_bounds(args: argparse.Namespace) -> Report:
    report = Report(command="verify-bounds", options={"seed": args.seed, "random": args.random})
    chans = [(path, resolve_channel(path, args.renormalize)) for path in args.channel]
    boxes = [(path, resolve_correlation(path)) for path in args.correlation]
    for path, _ in chans:
        report.inputs[f"channel:{path}"] = path
    for path, _ in boxes:
        report.inputs[f"correlation:{path}"] = path
    if not chans and not args.random:
        raise InputValidationError("verify-bounds needs --channel files or --random N")

    tally: Dict[str, List[float]] = {}
    for path, ch in chans:
        _verify_channel(report, ch, path, tally)
        for box_path, d in boxes:
            _verify_pair(report, ch, d, f"{path}+{box_path}", tally)

    seed = settings.DEFAULT_SEED if args.seed is None else args.seed
    for i in range(args.random):
        rng = sampling.rng_for(seed, 0xB0, i)
        ch = sampling.random_channel(rng, int(rng.integers(2, 5)), int(rng.integers(2, 5)))
        _verify_channel(report, ch, f"random#{i}", tally)
        _verify_pair(report, ch, sampling.random_ns_box(rng), f"random#{i}+ns", tally)

    for name, excess in sorted(tally.items()):
        report.values[f"{name}_count"] = len(excess)
        report.values[f"{name}_worst_excess"] = max(excess)
        report.add_check(name, max(excess) <= 0.0)
    return report


# === Parser ===


COMMANDS: Dict[str, Callable[[argparse.Namespace], Report]] = {
    "succ": cmd_succ,
    "succ-ns": cmd_succ_ns,
    "succ-q2": cmd_succ_q2,
    "locfrac": cmd_locfrac,
    "simulate": cmd_simulate,
    "gen": cmd_gen,
    "verify-bounds": cmd_verify_bounds,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="master seed (default 0)")
    common.add_argument("--restarts", type=int, default=None, help="radius restarts")
    common.add_argument("--iterations", type=int, default=None, help="subgradient iterations")
    common.add_argument("--family-restarts", type=int, default=None, help="seesaw restarts")
    common.add_argument("--tol", type=float, default=None, help="radius tolerance")
    common.add_argument(
        "--format",
        choices=[f.value for f in ReportFormat],
        default=ReportFormat.HUMAN.value,
        help="report format",
    )
    common.add_argument("--out", default=None, help="write the report (or generated file) here")
    common.add_argument("--renormalize", action="store_true", help="renormalize channel rows")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")

    parser = argparse.ArgumentParser(
        prog="bitassist",
        description="One-shot success probabilities of sending a bit with assistance",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("succ", parents=[common], help="unassisted success")
    p.add_argument("channel")
    p = sub.add_parser("succ-ns", parents=[common], help="non-signaling assisted success")
    p.add_argument("channel")
    p = sub.add_parser("succ-q2", parents=[common], help="entanglement assisted success")
    p.add_argument("channel")
    p.add_argument("--dim", type=int, default=2, help="local dimension n (2 to 4)")
    p = sub.add_parser("locfrac", parents=[common], help="local fraction of a binary box")
    p.add_argument("correlation")
    p = sub.add_parser("simulate", parents=[common], help="optimal or given assisted protocol")
    p.add_argument("channel")
    p.add_argument("correlation")
    p.add_argument("--strategy", default=None, help="evaluate this strategy file")
    p.add_argument("--save-strategy", default=None, help="write the witness strategy here")

    generators = list_all_generators()
    p = sub.add_parser("gen", parents=[common], help="emit a named channel or device")
    p.add_argument("name", choices=sorted(generators))
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--j", type=int, default=None)
    p.add_argument("--sign", choices=["+", "-"], default=None)
    p.add_argument("--index", type=int, default=None)
    p.add_argument("--inputs", type=int, default=None)
    p.add_argument("--outputs", type=int, default=None)

    p = sub.add_parser("verify-bounds", parents=[common], help="bound sweeps over files")
    p.add_argument("--channel", action="append", default=[], help="channel file (repeatable)")
    p.add_argument(
        "--correlation", action="append", default=[], help="correlation file (repeatable)"
    )
    p.add_argument("--random", type=int, default=0, help="number of random instances")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.verbose)

    try:
        report = COMMANDS[args.command](args)
    except BitAssistError as e:
        logger.error(str(e))
        return e.exit_code

    if args.command != "gen":
        report.options.setdefault("seed", settings.DEFAULT_SEED if args.seed is None else args.seed)
    text = format_report(report, ReportFormat(args.format))
    if args.out and args.command != "gen":
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)

    if not report.ok:
        failed = sorted(name for name, passed in report.checks.items() if not passed)
        logger.error(str(CertificateMismatchError(f"Checks failed: {', '.join(failed)}")))
        return CertificateMismatchError.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
