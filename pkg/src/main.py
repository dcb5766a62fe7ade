#!/usr/bin/env python3
"""
Command-line entry point for ADCodes
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent))

import colorama

from core import __version__
from core.analysis import fidelity_curve, first_order_residuals, fit_fidelity_deficit
from core.codeset import (
    CodeSet,
    ConflictMode,
    load_code_set,
    save_code_set,
    validate_code_set,
)
from core.config_manager import AppConfig, ConfigManager
from core.exceptions import ADCodesError, CodeSetError, RecoveryConstructionError, ResourceLimitError
from core.recovery import build_recovery, verify_recovery
from core.run_manifest import RunManifest
from core.search import (
    SearchConfig,
    SearchStrategy,
    load_reference_table,
    rate_table,
    reference_slope,
    search,
)
from ui.display_utils import DisplayUtils
from ui.svg_plot import fidelity_svg
from utils.file_utils import FileUtils
from utils.system_utils import SystemUtils
from utils.validation_utils import ValidationUtils


logger = logging.getLogger("adcodes.cli")

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_INVALID_CODE = 4
EXIT_VERIFY_FAILED = 5

REFERENCE_SLOPE = 0.85
REFERENCE_SLOPE_TOL = 0.02
DEFAULT_VERIFY_GAMMAS = "0.01,0.05,0.1,0.3"


class UsageError(Exception):
    """Bad arguments detected after parsing"""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adcodes",
        description="ADCodes - self-complementary codes for the amplitude damping channel",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python adcodes.py search 8 --mode strict --strategy greedy-lex
  python adcodes.py table --from 4 --to 16 --out table.csv
  python adcodes.py fidelity src/data/code_8_12.json --gamma-grid 0:0.02:0.5 --svg fig.svg
  python adcodes.py verify src/data/code_8_12.json --gammas 0.01,0.05,0.1,0.3
        """
    )
    parser.add_argument('--config', default='config.json',
                        help='Path to configuration file (default: config.json)')
    parser.add_argument('--log-level', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help='Override the configured log level')
    parser.add_argument('--threads', type=int, help='Worker cap for grid points and residual jobs')
    parser.add_argument('--manifest', help='Where to write the run manifest')
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")

    subparsers = parser.add_subparsers(dest='command', required=True)

    modes = [m.value for m in ConflictMode]
    strategies = [s.value for s in SearchStrategy]

    p_search = subparsers.add_parser('search', help='Search for a code set of word length n')
    p_search.add_argument('n', type=int, help='Word length')
    p_search.add_argument('--mode', choices=modes, default=ConflictMode.STRICT.value)
    p_search.add_argument('--strategy', choices=strategies, default=SearchStrategy.GREEDY_LEX.value)
    p_search.add_argument('--budget', type=float, help='Time budget in seconds')
    p_search.add_argument('--out', help='Code set JSON file (default: code_<n>.json)')

    p_table = subparsers.add_parser('table', help='Encoded dimension over a range of n')
    p_table.add_argument('--from', dest='n_from', type=int, default=4)
    p_table.add_argument('--to', dest='n_to', type=int, default=16)
    p_table.add_argument('--mode', choices=modes, default=ConflictMode.STRICT.value)
    p_table.add_argument('--strategy', choices=strategies, default=SearchStrategy.GREEDY_LEX.value)
    p_table.add_argument('--budget', type=float, help='Time budget per row in seconds')
    p_table.add_argument('--out', default='table.csv', help='CSV output (default: table.csv)')
    p_table.add_argument('--check-reference', action='store_true',
                         help='Also check the slope of the bundled reference table')

    p_fidelity = subparsers.add_parser('fidelity', help='Fidelity curve of a code set')
    p_fidelity.add_argument('codeset_file')
    p_fidelity.add_argument('--gamma-grid', default='0:0.02:0.5', help='START:STEP:END, END included')
    p_fidelity.add_argument('--out', default='fidelity.csv', help='CSV output (default: fidelity.csv)')
    p_fidelity.add_argument('--svg', help='Optional SVG plot')

    p_verify = subparsers.add_parser('verify', help='Check recovery structure and first-order correction')
    p_verify.add_argument('codeset_file')
    p_verify.add_argument('--gammas', default=DEFAULT_VERIFY_GAMMAS, help='Comma-separated damping probabilities')
    p_verify.add_argument('--threshold', type=float, help='Bound on max |a1| (default from configuration)')
    p_verify.add_argument('--max-error-weight', type=int, help='Only build elements up to this error weight')
    p_verify.add_argument('--out', help='Optional JSON report')

    return parser


def load_configuration(args: argparse.Namespace) -> AppConfig:
    manager = ConfigManager(args.config)
    manager.load_config()
    manager.update(log_level=args.log_level, threads=args.threads)
    errors = manager.validate_config()
    if errors:
        raise UsageError("Invalid configuration: " + "; ".join(errors))
    return manager.config


def manifest_path(args: argparse.Namespace, primary_output: Optional[str]) -> Path:
    if args.manifest:
        return Path(args.manifest)
    if primary_output:
        return Path(f"{primary_output}.manifest.json")
    return Path(f"{args.command}.manifest.json")


def start_manifest(args: argparse.Namespace) -> RunManifest:
    parameters = {key: value for key, value in sorted(vars(args).items())}
    return RunManifest(command=args.command, parameters=parameters, version=__version__,
                       system=SystemUtils.get_system_info())


def write_output(path: str, writer: Callable[[], bool], manifest: RunManifest):
    if not writer():
        raise OSError(f"Could not write {path}")
    manifest.record_output(path)


def load_valid_code(path: str) -> Optional[CodeSet]:
    """Load and validate a code file, printing the problems when it fails"""
    try:
        code = load_code_set(path)
    except (OSError, ValueError) as e:
        DisplayUtils.print_error(f"Cannot read code set {path}: {e}")
        return None
    report = validate_code_set(code)
    if not report.valid:
        DisplayUtils.print_error(f"Code set {path} is not valid under {code.mode.value} conflicts")
        for line in report.violation_lines():
            print(f"  {line}")
        return None
    DisplayUtils.print_success(f"Code set {path}: n={code.n}, k={code.k}, mode={code.mode.value}")
    return code


def check_simulation_size(code: CodeSet, config: AppConfig):
    if code.n > config.simulation_max_qubits:
        raise ResourceLimitError(
            f"Simulation is limited to {config.simulation_max_qubits} qubits, code has n={code.n}"
        )
    SystemUtils.ensure_simulation_fits(code.n)


def cmd_search(args: argparse.Namespace, config: AppConfig) -> int:
    search_config = SearchConfig(
        n=args.n,
        mode=args.mode,
        strategy=args.strategy,
        time_budget=args.budget or config.default_time_budget,
        exact_max_n=config.exact_max_n,
        greedy_max_n=config.greedy_max_n,
        graph_max_n=config.graph_max_n,
        cache_dir=config.effective_cache_dir(),
        max_word_length=config.max_word_length,
    )
    manifest = start_manifest(args)
    result = search(search_config)
    if result.k == 0:
        DisplayUtils.print_error("Search budget exhausted before any code set was found")
        return EXIT_BUDGET

    out = args.out or f"code_{args.n}.json"
    save_code_set(result.code, out)
    manifest.record_output(out)

    reference = load_reference_table().get(args.n)
    DisplayUtils.print_key_values({
        "n": args.n,
        "k": result.k,
        "log2k": f"{result.log2k:.4f}",
        "optimal": "yes" if result.optimal else "no",
        "reference k": reference if reference is not None else "-",
        "elapsed": f"{result.elapsed:.3f}s",
    }, title=f"Search ({search_config.strategy.value}, {search_config.mode.value})")
    DisplayUtils.print_success(f"Code set written to {out}")

    manifest.finish().write(manifest_path(args, out))
    return EXIT_OK


def cmd_table(args: argparse.Namespace, config: AppConfig) -> int:
    try:
        ValidationUtils.validate_range(args.n_from, args.n_to, 2, config.table_max_n)
    except ValueError as e:
        raise UsageError(str(e)) from e

    manifest = start_manifest(args)
    base = SearchConfig(
        n=args.n_from,
        mode=args.mode,
        strategy=args.strategy,
        time_budget=args.budget or config.default_time_budget,
        exact_max_n=config.exact_max_n,
        greedy_max_n=config.greedy_max_n,
        graph_max_n=config.graph_max_n,
        cache_dir=config.effective_cache_dir(),
        max_word_length=config.max_word_length,
    )
    report = rate_table(args.n_from, args.n_to, base, table_max_n=config.table_max_n)

    rows = []
    for row in report.rows:
        if row.k:
            rows.append([row.n, row.k, f"{row.log2k:.4f}", row.reference_k or "-",
                         "yes" if row.optimal else "no"])
        else:
            rows.append([row.n, "-", "-", row.reference_k or "-", f"absent: {row.reason}"])
    DisplayUtils.print_table(rows, ["n", "k", "log2k", "reference k", "optimal"], title="Encoded dimensions")

    if not report.produced_rows:
        DisplayUtils.print_error("No table rows were produced")
        return EXIT_BUDGET

    write_output(args.out, lambda: FileUtils.write_csv_file(args.out, report.CSV_HEADER, report.csv_rows()),
                 manifest)

    if report.slope is None:
        DisplayUtils.print_warning("Slope undefined (fewer than two rows)")
    else:
        DisplayUtils.print_info(f"Slope of log2 k against n: {report.slope:.4f}")

    status = EXIT_OK
    if args.check_reference:
        slope = reference_slope()
        passed = abs(slope - REFERENCE_SLOPE) <= REFERENCE_SLOPE_TOL
        DisplayUtils.print_check(passed, f"reference table slope {slope:.4f} (expected {REFERENCE_SLOPE}"
                                         f" +/- {REFERENCE_SLOPE_TOL})")
        if not passed:
            status = EXIT_VERIFY_FAILED

    DisplayUtils.print_success(f"Table written to {args.out}")
    manifest.finish().write(manifest_path(args, args.out))
    return status


def cmd_fidelity(args: argparse.Namespace, config: AppConfig) -> int:
    try:
        grid = ValidationUtils.parse_gamma_grid(args.gamma_grid)
    except ValueError as e:
        raise UsageError(str(e)) from e

    code = load_valid_code(args.codeset_file)
    if code is None:
        return EXIT_INVALID_CODE
    check_simulation_size(code, config)

    manifest = start_manifest(args)
    workers = SystemUtils.worker_count(config.threads)
    curve = fidelity_curve(code, grid, workers=workers, max_qubits=config.simulation_max_qubits)
    write_output(args.out, lambda: FileUtils.write_text_file(args.out, curve.csv_text()), manifest)
    DisplayUtils.print_success(f"Fidelity curve ({len(grid)} points) written to {args.out}")

    if args.svg:
        svg = fidelity_svg(curve.gammas, curve.f_code, curve.f_bare,
                           code_label=f"({code.n},{code.k}) code",
                           bare_label=f"bare {curve.bare_qubit_count} qubits")
        write_output(args.svg, lambda: FileUtils.write_text_file(args.svg, svg), manifest)
        DisplayUtils.print_success(f"Plot written to {args.svg}")

    fit = fit_fidelity_deficit(code, window=config.fidelity_fit_window, degree=config.fidelity_fit_degree,
                               workers=workers, max_qubits=config.simulation_max_qubits)
    DisplayUtils.print_key_values({
        "a1": f"{fit.coefficient(1):.3e}",
        "a2": f"{fit.coefficient(2):.6g}",
        "fit window": f"(0, {config.fidelity_fit_window:g}]",
    }, title="1 - F(gamma) fit")

    manifest.finish().write(manifest_path(args, args.out))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, config: AppConfig) -> int:
    try:
        gammas = ValidationUtils.parse_gamma_list(args.gammas)
    except ValueError as e:
        raise UsageError(str(e)) from e
    threshold = args.threshold if args.threshold is not None else config.residual_threshold

    code = load_valid_code(args.codeset_file)
    if code is None:
        return EXIT_INVALID_CODE
    check_simulation_size(code, config)

    manifest = start_manifest(args)
    passed = True
    recovery_checks: List[Dict] = []
    for gamma in gammas:
        recovery = build_recovery(code, gamma, max_error_weight=args.max_error_weight,
                                  max_qubits=config.simulation_max_qubits)
        report = verify_recovery(recovery)
        DisplayUtils.print_check(report.passed, f"recovery at gamma={gamma:g} "
                                                f"({len(recovery.elements)} elements, completion rank "
                                                f"{recovery.completion_rank})")
        for line in report.lines():
            print(f"    {line}")
        passed = passed and report.passed
        recovery_checks.append({"gamma": gamma, "passed": report.passed,
                                "gram_deviation": report.gram_deviation,
                                "completeness_deviation": report.completeness_deviation})

    residuals = first_order_residuals(code, config.residual_gammas, degree=config.fit_degree,
                                      workers=SystemUtils.worker_count(config.threads),
                                      max_qubits=config.simulation_max_qubits)
    max_a1 = residuals.max_first_order
    residuals_ok = residuals.passed(threshold)
    worst = residuals.worst()
    DisplayUtils.print_check(residuals_ok, f"first-order residuals: max |a1| = {max_a1:.3e} "
                                           f"(threshold {threshold:g})")
    if worst is not None and not residuals_ok:
        print(f"    worst: {residuals.describe(worst)}")
    passed = passed and residuals_ok

    if args.out:
        document = {
            "code": {"n": code.n, "k": code.k, "mode": code.mode.value},
            "recovery_checks": recovery_checks,
            "residual_gammas": list(residuals.gammas),
            "max_first_order": max_a1,
            "threshold": threshold,
            "passed": passed,
        }
        write_output(args.out, lambda: FileUtils.write_json_file(args.out, document), manifest)

    manifest.finish().write(manifest_path(args, args.out))
    if passed:
        DisplayUtils.print_success("All checks passed")
        return EXIT_OK
    DisplayUtils.print_error("Verification failed")
    return EXIT_VERIFY_FAILED


COMMANDS = {
    'search': cmd_search,
    'table': cmd_table,
    'fidelity': cmd_fidelity,
    'verify': cmd_verify,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Main function"""
    colorama.just_fix_windows_console()
    parser = build_parser()
    args = parser.parse_args(argv)

    SystemUtils.setup_logging(args.log_level or "INFO")
    try:
        config = load_configuration(args)
    except (ValueError, UsageError) as e:
        DisplayUtils.print_error(str(e))
        return EXIT_USAGE
    SystemUtils.setup_logging(config.log_level, config.log_dir)

    try:
        return COMMANDS[args.command](args, config)
    except UsageError as e:
        DisplayUtils.print_error(str(e))
        return EXIT_USAGE
    except CodeSetError as e:
        DisplayUtils.print_error(str(e))
        if e.report is not None:
            for line in e.report.violation_lines():
                print(f"  {line}")
        return EXIT_INVALID_CODE
    except RecoveryConstructionError as e:
        logger.exception("Recovery construction failed")
        DisplayUtils.print_error(f"Internal error: {e}")
        return EXIT_UNEXPECTED
    except (ResourceLimitError, ADCodesError, ValueError) as e:
        DisplayUtils.print_error(str(e))
        return EXIT_USAGE
    except KeyboardInterrupt:
        DisplayUtils.print_warning("\nOperation cancelled by user")
        return EXIT_UNEXPECTED
    except Exception as e:
        logger.exception("Unexpected failure")
        DisplayUtils.print_error(f"Error: {e}")
        return EXIT_UNEXPECTED


if __name__ == "__main__":
    sys.exit(main())
