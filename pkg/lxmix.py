#!/usr/bin/env python3
"""
CLI for Constraint-Preserving Mixer Synthesis

Command-line interface for synthesizing and checking LX-QAOA mixers:
- synth / cost-table: optimal and per-pair mixer costs for a feasible set
- khot / multikhot / product: structured mixer families
- emit-circuit / validate: gate lists and statevector validity checks
- stats / maxcut-demo: cost statistics and the constrained MAXCUT harness

Usage:
    python lxmix.py synth --input feasible.txt --output plan.json
    python lxmix.py cost-table --input feasible.txt --output costs.csv
    python lxmix.py stats --n 5 --sizes 2 4 8 16 32 --trials 100
    python lxmix.py validate --plan plan.json --corrupt
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional

# Add backend to Python path
backend_path = Path(__file__).parent / "backend" / "src"
sys.path.insert(0, str(backend_path))

try:
    from pydantic import ValidationError

    from app.core.config import settings
    from app.core.mixer_constants import CsvColumns, QaoaDefaults
    from app.models.run_config import RunConfig
    from app.services.mixer_commands import run_command
except ImportError as e:
    print(f"Error importing mixer modules: {e}")
    print("Make sure you're running from the project root directory")
    sys.exit(1)


def setup_logging(log_level: str = "INFO", log_file: Optional[str] = None):
    """Setup logging configuration."""
    log_format = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    logging.basicConfig(
        level=getattr(logging, log_level.upper()),
        format=log_format,
        handlers=[
            logging.StreamHandler(sys.stderr)
        ],
        force=True,
    )

    if log_file:
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(logging.Formatter(log_format))
        logging.getLogger().addHandler(file_handler)

    return logging.getLogger(__name__)


EPILOG = f"""
CSV columns:
  cost-table   {",".join(CsvColumns.COST_TABLE)}
  stats        {",".join(CsvColumns.STATS_AGGREGATE)}
  stats detail {",".join(CsvColumns.STATS_DETAIL)}
  maxcut-demo  {",".join(CsvColumns.MAXCUT)}
Floats are written with 15 significant digits. LXMIX_SEED overrides the
--seed default.

Examples:
  %(prog)s synth --input fig8.txt --output plan.json
  %(prog)s multikhot --n 5 --k1 1 --k2 4
  %(prog)s emit-circuit --plan plan.json --beta 0.3 --output circuit.txt
  %(prog)s maxcut-demo --depths 1 3 5 --output maxcut.csv
"""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Synthesize constraint-preserving QAOA mixers",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=EPILOG,
    )
    parser.add_argument("--log-level", default=settings.log_level,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
                        help="Logging level (default: INFO)")
    parser.add_argument("--log-file", default=settings.log_file,
                        help="Log file path (default: stderr only)")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", type=Path, help="Feasible-set file (product spec for 'product')")
    common.add_argument("--output", type=Path, help="Output file (default: stdout)")
    common.add_argument("--seed", type=int, default=settings.seed,
                        help=f"Random seed (default: {settings.seed})")
    common.add_argument("--no-restrict", dest="restrict", action="store_false",
                        help="Disable projector restriction")
    common.add_argument("--selection", choices=["exact", "greedy"], default="exact",
                        help="Candidate selection (default: exact)")
    common.add_argument("--method", choices=["pauli", "expm", "circuit"], default="pauli",
                        help="Statevector evolution method (default: pauli)")

    subparsers = parser.add_subparsers(dest="command", required=True)

    synth = subparsers.add_parser("synth", parents=[common], help="Synthesize an optimal mixer plan")
    synth.add_argument("--chain-order", choices=["input", "sorted"], default="sorted",
                       help="State order of the reported chain baseline")

    subparsers.add_parser("cost-table", parents=[common], help="Per-pair unrestricted / restricted costs")

    stats = subparsers.add_parser("stats", parents=[common], help="Chain vs optimal cost statistics")
    stats.add_argument("--n", type=int, required=True, help="Qubit count")
    stats.add_argument("--sizes", type=int, nargs="+", default=[], help="Feasible-set sizes (default: 2..2^n)")
    stats.add_argument("--trials", type=int, default=100, help="Trials per size (default: 100)")
    stats.add_argument("--chain-order", choices=["input", "sorted"], default="sorted")
    stats.add_argument("--detail-output", type=Path, help="Per-trial CSV")

    khot = subparsers.add_parser("khot", parents=[common], help="Mixer for k-hot states")
    khot.add_argument("--n", type=int, required=True)
    khot.add_argument("--k", type=int, required=True)

    multikhot = subparsers.add_parser("multikhot", parents=[common], help="Mixer for Hamming weight in [k1, k2]")
    multikhot.add_argument("--n", type=int, required=True)
    multikhot.add_argument("--k1", type=int, required=True)
    multikhot.add_argument("--k2", type=int, required=True)

    subparsers.add_parser("product", parents=[common], help="Tensor-product mixer from a product spec file")

    maxcut = subparsers.add_parser("maxcut-demo", parents=[common], help="Constrained MAXCUT LX-QAOA run")
    maxcut.add_argument("--instance", type=Path, help="Instance file (default: seeded random instance)")
    maxcut.add_argument("--depths", type=int, nargs="+", default=list(QaoaDefaults.DEPTHS))

    emit = subparsers.add_parser("emit-circuit", parents=[common], help="Gate list for a plan")
    emit.add_argument("--plan", type=Path, help="Plan JSON file")
    emit.add_argument("--beta", type=float, default=0.5, help="Mixer angle (default: 0.5)")

    validate = subparsers.add_parser("validate", parents=[common], help="Check leakage and transitions")
    validate.add_argument("--plan", type=Path, required=True, help="Plan JSON file")
    validate.add_argument("--corrupt", action="store_true",
                          help="Flip one projector term first (negative control)")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    fields = {k: v for k, v in vars(args).items() if k in RunConfig.model_fields and v is not None}
    return RunConfig(**fields)


def main(argv=None) -> int:
    """Main CLI function."""
    args = build_parser().parse_args(argv)
    logger = setup_logging(args.log_level, args.log_file)

    try:
        config = config_from_args(args)
    except ValidationError as e:
        logger.error(f"Invalid arguments: {e}")
        return 2

    logger.info(f"Running {config.command} (seed {config.seed})")
    try:
        return run_command(config)
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        return 130


if __name__ == "__main__":
    sys.exit(main())
