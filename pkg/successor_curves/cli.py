"""
CLI Module
Command-line entry point: generate curve families, apply successor
transforms, run the verification suites and convert exported samples
"""

import argparse
import logging
import math
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from config.default_config import DEFAULT_SUITES, FAMILY_PRESETS
from .errors import CurveGeometryError, ValidationError
from .exporters import profiles_from_samples, read_curve_csv, write_curve_csv, write_curve_obj
from .geomcore import Frame, FrenetApparatus, frame_defect, successor_chain
from .natural import (
    CurveSamples, IntegrationConfig, integrate_frenet, integrate_position,
    sample_apparatus, uniform_grid,
)
from .profiles import ConstantProfile, PhaseFunction
from .utilities import (
    find_config_file, get_default_config, load_config, log_system_info,
    resolve_settings, setup_logging,
)
from .verification import SUITES, run_suites
from .zoo import (
    SlantHelixParams, circular_helix_theta, constant_precession_profile,
    helix_apparatus, plane_apparatus, salkowski_profile, slant_helix_apparatus,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERIC = 3

OUTPUT_KINDS = ("csv", "obj", "report")

# family -> (required parameters, optional parameters with defaults)
FAMILY_PARAMETERS: Dict[str, Tuple[Tuple[str, ...], Dict[str, float]]] = {
    "plane": (("kappa",), {}),
    "helix": (("kappa", "tau"), {}),
    "slant-helix": (("theta",), {"helix_kappa": 1.0, "phi0": 0.0}),
    "salkowski": (("m",), {}),
    "constant-precession": (("omega", "mu"), {}),
    "custom-profile": ((), {"kappa": None, "tau": None}),
}

PARAMETER_FLAGS = {
    "kappa": "--kappa-const",
    "tau": "--tau-const",
    "theta": "--theta",
    "helix_kappa": "--helix-kappa",
    "phi0": "--phase0",
    "m": "--m",
    "omega": "--omega",
    "mu": "--mu",
}

ANGLE_PARAMETERS = ("theta", "phi0")

_PI_TERM = re.compile(r"^(?P<sign>[+-]?)(?P<coef>(?:\d+\.?\d*|\.\d+)(?:e[+-]?\d+)?)?\*?pi$",
                      re.IGNORECASE)


def parse_real(text: Any) -> float:
    """Parse a real such as 0.5, 1e-3, pi, -2pi or pi/3"""
    if isinstance(text, (int, float)):
        return float(text)
    raw = str(text).strip()
    try:
        return float(raw)
    except ValueError:
        pass

    numerator, slash, denominator = raw.partition("/")
    match = _PI_TERM.match(numerator.strip())
    if match is None:
        raise ValidationError(f"cannot parse {raw!r} as a real number")
    sign = -1.0 if match.group('sign') == '-' else 1.0
    coef = match.group('coef')
    value = sign * math.pi * (1.0 if coef is None else float(coef))
    if slash:
        try:
            value /= float(denominator)
        except (ValueError, ZeroDivisionError) as e:
            raise ValidationError(f"cannot parse {raw!r}: {e}") from e
    return value


def parse_range(value: Any) -> Tuple[float, float]:
    """Parse "A:B" (or a two-element list from the config file)"""
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValidationError(f"range needs two bounds, got {value!r}")
        lo, hi = (parse_real(v) for v in value)
    else:
        parts = str(value).split(':')
        if len(parts) != 2:
            raise ValidationError(f"range must look like A:B, got {value!r}")
        lo, hi = (parse_real(p) for p in parts)
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise ValidationError(f"range {value!r} must satisfy A < B")
    return lo, hi


@dataclass
class JobSpec:
    """One curve job: family, parameters, sampling and outputs"""

    family: str
    parameters: Dict[str, float]
    s_range: Tuple[float, float]
    step: float
    outputs: List[str]
    renorm_every: int = 1
    output_prefix: Optional[str] = None
    profile_csv: Optional[str] = None
    phi0s: Tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.family not in FAMILY_PARAMETERS:
            raise ValidationError(f"unknown family {self.family!r}; choose from {', '.join(FAMILY_PARAMETERS)}")
        required, optional = FAMILY_PARAMETERS[self.family]
        missing = [p for p in required if self.parameters.get(p) is None]
        if missing:
            flags = ', '.join(PARAMETER_FLAGS[p] for p in missing)
            raise ValidationError(f"family {self.family} needs {flags}")
        unknown = [p for p in self.parameters if p not in required and p not in optional]
        if unknown:
            raise ValidationError(f"family {self.family} does not take {', '.join(unknown)}")
        for name, value in self.parameters.items():
            if value is not None and not math.isfinite(value):
                raise ValidationError(f"parameter {name} must be finite")

        if self.family == "custom-profile":
            given = [self.parameters.get(p) is not None for p in ("kappa", "tau")]
            if self.profile_csv is None and not all(given):
                raise ValidationError("custom-profile needs --profile-csv or both --kappa-const and --tau-const")
            if self.profile_csv is not None and any(given):
                raise ValidationError("custom-profile takes either --profile-csv or constants, not both")
        elif self.profile_csv is not None:
            raise ValidationError("--profile-csv is only valid for custom-profile")

        if not (math.isfinite(self.step) and self.step > 0.0):
            raise ValidationError(f"step must be positive, got {self.step}")
        if int(self.renorm_every) != self.renorm_every or self.renorm_every < 1:
            raise ValidationError(f"renorm-every must be a positive integer, got {self.renorm_every}")
        bad = [o for o in self.outputs if o not in OUTPUT_KINDS]
        if bad or not self.outputs:
            raise ValidationError(f"outputs must be chosen from {', '.join(OUTPUT_KINDS)}, got {self.outputs}")

    def parameter(self, name: str) -> float:
        value = self.parameters.get(name)
        if value is None:
            value = FAMILY_PARAMETERS[self.family][1][name]
        return value

    @property
    def prefix(self) -> str:
        if self.output_prefix:
            return self.output_prefix
        return f"{self.family}-successor" if self.phi0s else self.family


class CurveJobRunner:
    """Builds the apparatus of a job, samples it and writes the requested outputs"""

    def __init__(self, job: JobSpec):
        self.job = job
        self.integration = IntegrationConfig(step=job.step, renorm_every=job.renorm_every)
        logger.info(f"Job {job.family} on [{job.s_range[0]:g}, {job.s_range[1]:g}] "
                    f"step {job.step:g}, parameters {job.parameters}")

    def build_apparatus(self) -> FrenetApparatus:
        job = self.job
        family = job.family
        if family == "plane":
            return plane_apparatus(ConstantProfile(job.parameter("kappa")))
        if family == "helix":
            kappa = job.parameter("kappa")
            return helix_apparatus(ConstantProfile(kappa), circular_helix_theta(kappa, job.parameter("tau")))
        if family == "slant-helix":
            theta = job.parameter("theta")
            rate = ConstantProfile(SlantHelixParams(theta).m * job.parameter("helix_kappa"))
            params = SlantHelixParams(theta, PhaseFunction(job.parameter("phi0"), rate))
            return slant_helix_apparatus(params).frenet()

        if family == "salkowski":
            profiles = salkowski_profile(job.parameter("m"))
            kappa, tau = profiles.kappa, profiles.tau
        elif family == "constant-precession":
            profiles = constant_precession_profile(job.parameter("omega"), job.parameter("mu"))
            kappa, tau = profiles.kappa, profiles.tau
        elif job.profile_csv is not None:
            kappa, tau = profiles_from_samples(read_curve_csv(job.profile_csv))
        else:
            kappa, tau = ConstantProfile(job.parameter("kappa")), ConstantProfile(job.parameter("tau"))
        return integrate_frenet(kappa, tau, Frame.canonical(), job.s_range, self.integration)

    def grid_for(self, app: FrenetApparatus):
        return app.grid if app.sampled else uniform_grid(self.job.s_range, self.job.step)

    def sample(self, app: FrenetApparatus, grid=None) -> CurveSamples:
        grid = self.grid_for(app) if grid is None else grid
        sampled = app if app.sampled else sample_apparatus(app, grid)
        return integrate_position(sampled)

    def summary(self, samples: CurveSamples, label: str) -> Dict[str, Any]:
        summary = {
            "family": self.job.family,
            "apparatus": label,
            "s_range": f"{samples.s_grid[0]:.17g}:{samples.s_grid[-1]:.17g}",
            "nodes": len(samples),
            "step": self.job.step,
            "closure_residual": samples.closure_residual(),
            "unit_speed_defect": samples.unit_speed_defect(),
            "max_frame_defect": frame_defect(samples.frames),
            "kappa_min": float(samples.kappa.min()),
            "kappa_max": float(samples.kappa.max()),
            "tau_min": float(samples.tau.min()),
            "tau_max": float(samples.tau.max()),
        }
        for name, value in sorted(self.job.parameters.items()):
            if value is not None:
                summary[f"param_{name}"] = value
        if self.job.phi0s:
            summary["phi0"] = ",".join(f"{p:.17g}" for p in self.job.phi0s)
        return summary

    def write_outputs(self, samples: CurveSamples, summary: Dict[str, Any]) -> List[Path]:
        prefix = self.job.prefix
        written = []
        if "csv" in self.job.outputs:
            written.append(write_curve_csv(samples, f"{prefix}.csv"))
        if "obj" in self.job.outputs:
            written.append(write_curve_obj(samples, f"{prefix}.obj", name=Path(prefix).name))
        lines = [f"{key}={value}" for key, value in summary.items()]
        if "report" in self.job.outputs:
            report = Path(f"{prefix}.txt")
            report.write_text("\n".join(lines) + "\n")
            written.append(report)
        print("\n".join(lines))
        return written


def cmd_generate(job: JobSpec) -> int:
    """Sample a curve family and write the requested outputs"""
    runner = CurveJobRunner(job)
    app = runner.build_apparatus()
    samples = runner.sample(app)
    runner.write_outputs(samples, runner.summary(samples, app.label))
    return EXIT_OK


def cmd_successor(job: JobSpec) -> int:
    """Apply one successor transform per phi0 to a family and write the result"""
    if not job.phi0s:
        raise ValidationError("successor needs at least one --phi0")
    runner = CurveJobRunner(job)
    source = runner.build_apparatus()
    chain = successor_chain(source, job.phi0s)
    samples = runner.sample(chain, runner.grid_for(source))
    runner.write_outputs(samples, runner.summary(samples, chain.label))
    return EXIT_OK


def cmd_verify(suites: Sequence[str], output_prefix: Optional[str] = None,
               max_workers: Optional[int] = None) -> int:
    """Run invariant suites; exit 0 iff every check passes"""
    results = run_suites(suites, max_workers=max_workers)
    lines = []
    for name, checks in results.items():
        lines.extend(f"{name}.{check.report_line()}" for check in checks)
    passed = all(check.passed for checks in results.values() for check in checks)
    total = sum(len(checks) for checks in results.values())
    lines.append(f"summary {'PASS' if passed else 'FAIL'} {total} checks")
    print("\n".join(lines))
    if output_prefix:
        Path(f"{output_prefix}.txt").write_text("\n".join(lines) + "\n")
    return EXIT_OK if passed else 1


def cmd_export(input_path: str, fmt: str, output_path: str) -> int:
    """Convert a sampled-curve CSV to OBJ or re-serialize it as CSV"""
    samples = read_curve_csv(input_path)
    if fmt == "obj":
        write_curve_obj(samples, output_path, name=Path(output_path).stem)
    else:
        write_curve_csv(samples, output_path)
    return EXIT_OK


def _add_common_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--config', help="flat YAML config file (default: $SC_CONFIG, then ./config.yaml)")
    parser.add_argument('--log-level', help="DEBUG, INFO, WARNING or ERROR")
    parser.add_argument('--log-file', help="also log to this file")


def _add_job_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--family', choices=list(FAMILY_PARAMETERS))
    parser.add_argument('--preset', choices=list(FAMILY_PRESETS),
                        help="start from a parameter preset; explicit flags override it")
    for name, flag in PARAMETER_FLAGS.items():
        parser.add_argument(flag, dest=name, help=f"{name} (accepts pi, 2pi, pi/3, ...)")
    parser.add_argument('--profile-csv', help="custom-profile: read kappa and tau columns from a CSV")
    parser.add_argument('--range', dest='range', help="arc-length range A:B; write --range=-A:B for negative A")
    parser.add_argument('--step', type=float, help="integration and sampling step")
    parser.add_argument('--renorm-every', type=int, help="steps between re-orthonormalizations")
    parser.add_argument('--out', dest='outputs', nargs='+', choices=OUTPUT_KINDS)
    parser.add_argument('--output', dest='output_prefix', help="output path prefix")
    parser.add_argument('--deg', action='store_true', help="angles are given in degrees")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="successor-curves",
        description="Natural equations, successor transforms and slant helices",
    )
    commands = parser.add_subparsers(dest='command', required=True)

    generate = commands.add_parser('generate', help="sample a curve family")
    _add_common_options(generate)
    _add_job_options(generate)

    successor = commands.add_parser('successor', help="successor curves of a family")
    _add_common_options(successor)
    _add_job_options(successor)
    successor.add_argument('--phi0', dest='phi0s', action='append',
                           help="integration constant of one successor step (repeat to chain)")

    verify = commands.add_parser('verify', help="run invariant suites")
    _add_common_options(verify)
    verify.add_argument('--suite', dest='suites', action='append',
                        help=f"one of {', '.join(SUITES)} or all (repeatable)")
    verify.add_argument('--list', action='store_true', help="list suite names and exit")
    verify.add_argument('--workers', type=int, help="worker threads")
    verify.add_argument('--output', dest='output_prefix', help="also write the report to PREFIX.txt")

    export = commands.add_parser('export', help="convert an exported CSV")
    _add_common_options(export)
    export.add_argument('--input', required=True, help="CSV written by generate or successor")
    export.add_argument('--format', choices=("obj", "csv"), default="obj")
    export.add_argument('--output', required=True, help="destination file")
    return parser


def _angle(value: float, degrees: bool) -> float:
    return math.radians(value) if degrees else value


def job_from_args(args: argparse.Namespace, settings: Dict[str, Any]) -> JobSpec:
    """Combine preset, flags and resolved settings into a validated JobSpec"""
    parameters: Dict[str, float] = {}
    family = args.family
    if args.preset:
        preset = dict(FAMILY_PRESETS[args.preset])
        preset_family = preset.pop('family')
        if family and family != preset_family:
            raise ValidationError(f"preset {args.preset} is a {preset_family}, not a {family}")
        family = preset_family
        parameters.update({k: float(v) for k, v in preset.items()})
    if family is None:
        raise ValidationError("choose a curve with --family or --preset")

    for name in PARAMETER_FLAGS:
        raw = getattr(args, name)
        if raw is not None:
            value = parse_real(raw)
            parameters[name] = _angle(value, args.deg) if name in ANGLE_PARAMETERS else value

    phi0s = tuple(_angle(parse_real(p), args.deg) for p in (getattr(args, 'phi0s', None) or ()))
    outputs = settings['outputs']
    if isinstance(outputs, str):
        outputs = [outputs]
    try:
        renorm_every = int(settings['renorm_every'])
    except (TypeError, ValueError) as e:
        raise ValidationError(f"renorm_every must be an integer: {e}") from e
    return JobSpec(
        family=family,
        parameters=parameters,
        s_range=parse_range(settings['range']),
        step=parse_real(settings['step']),
        outputs=list(outputs),
        renorm_every=renorm_every,
        output_prefix=settings['output_prefix'],
        profile_csv=args.profile_csv,
        phi0s=phi0s,
    )


def _dispatch(args: argparse.Namespace, settings: Dict[str, Any]) -> int:
    if args.command == 'verify':
        if args.list:
            print("\n".join(SUITES))
            return EXIT_OK
        return cmd_verify(args.suites or DEFAULT_SUITES, args.output_prefix, args.workers)
    if args.command == 'export':
        return cmd_export(args.input, args.format, args.output)

    job = job_from_args(args, settings)
    if args.command == 'successor':
        return cmd_successor(job)
    return cmd_generate(job)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_VALIDATION

    try:
        setup_logging(args.log_level or get_default_config()['log_level'], args.log_file)
        config_path = find_config_file(args.config)
        file_config = load_config(str(config_path)) if config_path else {}

        flags = {key: getattr(args, key, None)
                 for key in ('range', 'step', 'renorm_every', 'outputs', 'log_level', 'log_file')}
        if args.command in ('generate', 'successor'):
            flags['output_prefix'] = args.output_prefix
        settings = resolve_settings(flags, file_config)
        if file_config.get('log_level') or file_config.get('log_file'):
            setup_logging(settings['log_level'], settings['log_file'])
        log_system_info()

        return _dispatch(args, settings)

    except ValidationError as e:
        logger.error(f"Invalid input: {e}")
        return EXIT_VALIDATION
    except OSError as e:
        logger.error(f"File error: {e}")
        return EXIT_VALIDATION
    except CurveGeometryError as e:
        logger.error(f"Numeric failure: {e}")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
