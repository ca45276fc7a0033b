"""Command-line interface for diffusion descriptors."""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from .exceptions import ConfigError, DescriptorError
from .models.descriptor import DescriptorKind
from .models.matching import ScoreMode

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per operation."""
    parser = argparse.ArgumentParser(
        prog="diffusion-descriptors",
        description="Diffusion descriptors - continuous SIFT, domain-size pooling and diffusion continuation",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Generate a synthetic matching scene
  diffusion-descriptors generate-sample --out ./sample --seed 7

  # Compute a descriptor
  diffusion-descriptors descriptor --kind dsp_closed_inner --config ./sample/config.json ./sample/field.pgm ./out/field.desc

  # Match templates against candidate warps
  diffusion-descriptors match ./sample/field.pgm ./sample/templates ./sample/candidates.json --kind sift

  # Run the toy continuation
  diffusion-descriptors toy-diffuse --schedule 1,0.5,0.25,0 --out ./toy

  # Check every closed form against quadrature
  diffusion-descriptors verify-identities --seed 42 --count 100 --out ./verify

  # Render figures of a results directory (needs the viz extra)
  diffusion-descriptors plot ./toy
        """,
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="Log progress to stderr")

    subparsers = parser.add_subparsers(dest="command", help="Available commands")
    kinds = [k.value for k in DescriptorKind]
    scores = [s.value for s in ScoreMode]

    # Descriptor command
    desc_parser = subparsers.add_parser("descriptor", help="Compute a descriptor of a PGM image")
    desc_parser.add_argument("image", type=str, help="Input PGM (P2 or P5)")
    desc_parser.add_argument("output", type=str, help="Payload path; the header goes to <output>.json")
    desc_parser.add_argument("--kind", type=str, choices=kinds, default="sift", help="Descriptor kind (default: sift)")
    desc_parser.add_argument("--config", type=str, help="JSON configuration file")
    desc_parser.add_argument("--csv", action="store_true", help="Also write <output>.csv for plotting")

    # Match command
    match_parser = subparsers.add_parser("match", help="Winner-take-all template matching")
    match_parser.add_argument("image", type=str, help="Input PGM")
    match_parser.add_argument("templates", type=str, help="Directory of template PGMs sharing one size")
    match_parser.add_argument("candidates", type=str, help="Candidate transforms (JSON)")
    match_parser.add_argument("--kind", type=str, choices=kinds, default="sift", help="Field-side descriptor kind")
    match_parser.add_argument("--score", type=str, choices=scores, help="Scoring mode (overrides config)")
    match_parser.add_argument("--config", type=str, help="JSON configuration file")
    match_parser.add_argument("--out", type=str, help="Also write match.json and resolved_config.json here")

    # Toy continuation command
    toy_parser = subparsers.add_parser("toy-diffuse", help="Diffusion continuation on the toy instance")
    _add_homotopy_arguments(toy_parser)
    toy_parser.add_argument("--schedule", type=str, help="Comma-separated decreasing sigmas ending at 0")
    toy_parser.add_argument("--landscape-only", action="store_true", help="Only write the --sigma landscape")
    toy_parser.add_argument(
        "--allow-multimodal", action="store_true",
        help="Continue even if the first-stage landscape has several local minima",
    )

    # Landscape command
    land_parser = subparsers.add_parser("landscape", help="Write one smoothed cost landscape")
    _add_homotopy_arguments(land_parser)

    # Identity verification command
    verify_parser = subparsers.add_parser("verify-identities", help="Check closed forms against quadrature oracles")
    verify_parser.add_argument("--seed", type=int, help="Random seed (overrides config; default 42)")
    verify_parser.add_argument("--count", type=int, default=100, help="Draws per identity (default: 100)")
    verify_parser.add_argument("--suite", action="append", help="Run only this suite (repeatable)")
    verify_parser.add_argument("--config", type=str, help="JSON configuration file")
    verify_parser.add_argument("--out", type=str, help="Output directory (default: config io.out_dir)")

    # Plot command
    plot_parser = subparsers.add_parser("plot", help="Render PNG figures of the CSVs in a results directory")
    plot_parser.add_argument("directory", type=str, help="Directory written by toy-diffuse, landscape or verify-identities")
    plot_parser.add_argument("--dpi", type=int, default=120, help="Figure resolution (default: 120)")

    # Generate sample data command
    gen_parser = subparsers.add_parser("generate-sample", help="Generate a synthetic matching scene")
    gen_parser.add_argument("--out", type=str, default="./sample_data", help="Output directory")
    gen_parser.add_argument("--seed", type=int, help="Random seed for reproducibility")

    return parser


def _add_homotopy_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=str, help="JSON configuration file")
    parser.add_argument("--toy", type=str, help="Toy instance JSON (default: the shipped instance)")
    parser.add_argument("--sigma", type=float, help="Diffusion level of the single landscape")
    parser.add_argument("--out", type=str, help="Output directory (default: config io.out_dir)")


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main CLI entry point; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )

    commands = {
        "descriptor": run_descriptor,
        "match": run_match,
        "toy-diffuse": run_toy_diffuse,
        "landscape": run_landscape,
        "verify-identities": run_verify_identities,
        "generate-sample": run_generate_sample,
        "plot": run_plot,
    }
    if args.command not in commands:
        parser.print_help()
        return EXIT_USAGE

    try:
        return commands[args.command](args)
    except (DescriptorError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def _load_config(args):
    """Config from --config (defaults otherwise) with CLI overrides applied."""
    from .data_loaders.config_loader import Config, ConfigLoader

    config = ConfigLoader().load(args.config) if getattr(args, "config", None) else Config()
    if getattr(args, "seed", None) is not None:
        config.seed = args.seed
    if getattr(args, "out", None):
        config.io.out_dir = args.out
    if getattr(args, "score", None):
        config.matching.score = ScoreMode(args.score)
    if getattr(args, "csv", False):
        config.io.write_csv = True
    if getattr(args, "schedule", None):
        from .models.homotopy import DiffusionSchedule

        try:
            config.homotopy.schedule = DiffusionSchedule.parse(args.schedule)
        except (ValueError, DescriptorError) as e:
            raise ConfigError(f"--schedule: {e}", "homotopy.schedule") from e
    return config


def run_descriptor(args) -> int:
    """Compute one descriptor and save it."""
    from .analytics.descriptors import DescriptorEngine
    from .data_loaders.pgm_loader import PGMLoader
    from .utils.report_generator import ReportGenerator

    config = _load_config(args)
    field = PGMLoader().load(args.image)
    logger.info("Computing %s descriptor of %s (%dx%d)", args.kind, args.image, field.width, field.height)

    descriptor = DescriptorEngine(config.descriptor).compute(field, DescriptorKind(args.kind))
    report = ReportGenerator()
    written = report.save_descriptor(descriptor, args.output, csv_export=config.io.write_csv)
    report.save_resolved_config(config.to_dict(), Path(args.output).parent, {"kind": args.kind})

    print(f"Saved {args.kind} descriptor {descriptor.values.shape} to:")
    for path in written:
        print(f"  {path}")
    return EXIT_OK


def run_match(args) -> int:
    """Match templates against warped copies of the image."""
    from .analytics.matching import TemplateMatcher
    from .data_loaders.candidate_loader import CandidateLoader
    from .data_loaders.pgm_loader import PGMLoader
    from .utils.report_generator import ReportGenerator

    config = _load_config(args)
    loader = PGMLoader()
    field = loader.load(args.image)

    template_dir = Path(args.templates)
    if not template_dir.is_dir():
        raise ConfigError(f"template directory {template_dir} does not exist", "templates")
    paths = sorted(template_dir.glob("*.pgm"))
    if not paths:
        raise ConfigError(f"no .pgm templates in {template_dir}", "templates")
    templates = [loader.load(p) for p in paths]

    candidates = CandidateLoader().load(args.candidates)
    logger.info("Matching %d candidates against %d templates", len(candidates), len(templates))

    matcher = TemplateMatcher(config.descriptor, DescriptorKind(args.kind), config.matching.score)
    result = matcher.match(field, candidates, templates, [p.stem for p in paths])

    report = ReportGenerator()
    text = report.generate_match_json(result)
    if args.out:
        out_dir = Path(args.out)
        (out_dir / "match.json").parent.mkdir(parents=True, exist_ok=True)
        (out_dir / "match.json").write_text(text, encoding="utf-8")
        report.save_resolved_config(config.to_dict(), out_dir, {"kind": args.kind})
    print(text, end="")
    print(report.generate_match_summary(result), file=sys.stderr)
    return EXIT_OK


def _toy_problem(args, config):
    from .data_loaders.toy_loader import ToyLoader

    loader = ToyLoader()
    if args.toy:
        return loader.load(args.toy, config.homotopy.lam)
    return loader.load_default(config.homotopy.lam)


def _write_single_landscape(args, config, sigma: float) -> int:
    from .analytics.homotopy import landscape
    from .utils.report_generator import ReportGenerator

    problem = _toy_problem(args, config)
    grid = landscape(problem, config.homotopy.grid, sigma)
    out_dir = Path(config.io.out_dir)
    report = ReportGenerator()
    path = report.save_cost_grid_csv(grid, out_dir / f"landscape_sigma{sigma:g}.csv")
    report.save_resolved_config(config.to_dict(), out_dir, {"sigma": sigma})

    i, j = grid.argmin()
    print(f"Landscape (sigma {sigma:g}) saved to {path}")
    print(f"  Grid minimum: c1 = {grid.c1_axis[i]:.4f}, theta = {grid.theta_axis[j]:.4f}, value = {grid.values[i, j]:.6g}")
    return EXIT_OK


def run_toy_diffuse(args) -> int:
    """Continuation through the schedule, or a single landscape with --landscape-only."""
    from .analytics.homotopy import continuation_minimize, landscape, smooth_cost
    from .utils.report_generator import ReportGenerator

    config = _load_config(args)
    schedule = config.homotopy.resolved_schedule
    if args.landscape_only:
        sigma = args.sigma if args.sigma is not None else schedule.sigmas[0]
        return _write_single_landscape(args, config, sigma)

    problem = _toy_problem(args, config)
    logger.info("Continuation over %d stages: %s", len(schedule), list(schedule.sigmas))
    trajectory = continuation_minimize(
        problem,
        schedule,
        config.homotopy.grid,
        start=config.homotopy.start,
        require_unique=not args.allow_multimodal,
    )

    out_dir = Path(config.io.out_dir)
    report = ReportGenerator()
    raw = landscape(problem, config.homotopy.grid, 0.0)
    for stage, sigma in enumerate(schedule.sigmas):
        grid = smooth_cost(raw, sigma) if sigma > 0 else raw
        report.save_cost_grid_csv(grid, out_dir / f"landscape_stage{stage}.csv")
    report.save_trajectory_csv(trajectory, out_dir / "trajectory.csv")
    report.save_resolved_config(config.to_dict(), out_dir)

    print(report.generate_trajectory_summary(trajectory))
    print(f"\nResults saved to: {out_dir}")
    return EXIT_OK


def run_landscape(args) -> int:
    """Write a single landscape CSV."""
    config = _load_config(args)
    sigma = args.sigma if args.sigma is not None else 0.0
    return _write_single_landscape(args, config, sigma)


def run_verify_identities(args) -> int:
    """Run the identity suites; exit 1 if any draw is out of tolerance."""
    from .analytics.identities import IdentityVerifier
    from .utils.report_generator import ReportGenerator

    config = _load_config(args)
    try:
        verifier = IdentityVerifier(
            seed=config.seed,
            count=args.count,
            suites=tuple(args.suite) if args.suite else tuple(IdentityVerifier.TOLERANCES),
        )
    except ValueError as e:
        raise ConfigError(str(e)) from e

    checks = verifier.run()
    out_dir = Path(config.io.out_dir)
    report = ReportGenerator()
    path = report.save_verification_csv(checks, out_dir / "identities.csv")
    report.save_resolved_config(config.to_dict(), out_dir, {"count": args.count})

    print(report.generate_verification_summary(checks))
    print(f"\nReport saved to: {path}")

    failed = [c for c in checks if not c.passed]
    if failed:
        worst = IdentityVerifier.worst(checks)
        print(
            f"error: {len(failed)} identity draw(s) out of tolerance; worst {worst.identity_name} "
            f"error {worst.error:.3e} (tolerance {worst.tolerance:.0e}) at {worst.params}",
            file=sys.stderr,
        )
        return EXIT_VERIFICATION_FAILED
    return EXIT_OK


def run_generate_sample(args) -> int:
    """Generate a synthetic matching scene."""
    from .utils.sample_data_generator import SampleDataGenerator

    seed = 42 if args.seed is None else args.seed
    print("Generating sample data...")
    print(f"  Seed: {seed}")

    scene = SampleDataGenerator(seed=seed).export_sample_data(args.out)

    print(f"  Field: {scene['field'].width}x{scene['field'].height}")
    print(f"  Templates: {', '.join(scene['templates'])}")
    print(f"  Candidates: {len(scene['candidates'])}")
    print(f"\nSample data saved to: {args.out}")
    return EXIT_OK


def run_plot(args) -> int:
    """Render figures of the CSV outputs in a directory."""
    from .utils.plotting import PlotGenerator

    directory = Path(args.directory)
    if not directory.is_dir():
        raise ConfigError(f"not a directory: {directory}", "directory")
    written = PlotGenerator(dpi=args.dpi).plot_output_dir(directory)
    if not written:
        raise ConfigError(f"no landscape or identity CSVs in {directory}", "directory")

    print(f"Saved {len(written)} figure(s) to:")
    for path in written:
        print(f"  {path}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
