"""Main entry point for the off-diagonal phase toolkit."""

import argparse
import sys

from domain.config import SCENARIO_KINDS, Scenario, ScenarioStore, create_shared_store, load_scenario
from domain.errors import ConfigInvalid, IoError
from domain.shared_store import console, format_final_output
from flows.flow_factory import get_flow

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG_ERROR = 2

DESCRIPTIONS = {
    "qubit-scan": "Closed-form qubit traces and nodal points over an (eta, alpha, lambda1) grid",
    "families": "f coefficients and phases of an orthogonal family under a diagonal or permuting unitary",
    "two-photon": "Simulated two-photon interferometer fringes with phase extraction",
    "verify": "Run the verification suite and emit a pass/fail report",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, default=None, help="JSON scenario file")
    common.add_argument("--out", type=str, default=None, help="Output file (default: stdout)")
    common.add_argument("--format", choices=["csv", "json"], default=None, help="Output format")
    common.add_argument("--seed", type=int, default=None, help="Random seed")
    common.add_argument("--steps", type=int, default=None, help="Path-integration steps")
    common.add_argument("--tol", type=float, default=None, help="Indeterminacy threshold")
    common.add_argument("--quiet", action="store_true", help="Suppress status lines and summary")

    parser = argparse.ArgumentParser(
        prog="offdiag-phases",
        description="Off-diagonal geometric phases of mixed states and their two-photon interferometry.",
    )
    subparsers = parser.add_subparsers(dest="kind", required=True)
    for kind in SCENARIO_KINDS:
        subparsers.add_parser(kind, parents=[common], help=DESCRIPTIONS[kind], description=DESCRIPTIONS[kind])
    return parser


def run_scenario(scenario: Scenario, quiet: bool = False) -> ScenarioStore:
    """
    Run the flow for a validated scenario.

    Args:
        scenario: Validated scenario
        quiet: Suppress status lines

    Returns:
        The final ScenarioStore, with rows, summary and verification results
    """
    shared_store = create_shared_store(scenario, quiet)
    shared_dict = {"store": shared_store}

    flow = get_flow(scenario.kind)
    flow.run(shared_dict)

    return shared_dict["store"]


def run_cli(argv: list[str] | None = None) -> int:
    """Parse arguments, run the scenario and return the exit code."""
    args = build_parser().parse_args(argv)
    overrides = {
        "seed": args.seed,
        "steps": args.steps,
        "tol": args.tol,
        "out": args.out,
        "format": args.format,
    }

    try:
        scenario = load_scenario(args.kind, args.config, overrides)
        store = run_scenario(scenario, quiet=args.quiet)
    except (ConfigInvalid, IoError) as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR

    if not args.quiet:
        print("\n" + format_final_output(store), file=console(store))

    return EXIT_OK if store.passed else EXIT_CHECK_FAILED


def main():
    """Main synchronous entry point."""
    try:
        code = run_cli()
    except KeyboardInterrupt:
        print("\n\n⚠️ Process interrupted by user.", file=sys.stderr)
        code = EXIT_CHECK_FAILED
    except Exception as e:
        print(f"\n❌ Unexpected error: {str(e)}", file=sys.stderr)
        code = EXIT_CHECK_FAILED
    sys.exit(code)


if __name__ == "__main__":
    main()
