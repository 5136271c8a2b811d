"""
witt-strata - Main entry point
Exact Newton polygons, Legendre transforms and prime-ideal strata
"""

import sys
import os
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

import click
import yaml
from dotenv import load_dotenv
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.table import Table

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

from enclosures import DEFAULT_CAP_BITS, DEFAULT_START_BITS
from errors import ProfileError, VerificationError, WittError, ZeroElementError
from fa_family import FaSpec, build_fa, fa_stratum_verdict
from legendre import inverse_legendre, legendre_eval, legendre_full
from newton import ConvexProfile, newton_polygon
from plotting import PlotConfig, render_csv, render_svg
from strata import StratumVerdict, VerdictKind, classify, stratum_chain_witness
from valuation import INF, CoefficientProfile, ValueWithCertificate, gauss_valuation, parse_rational
from verification import SUITES, VerifySettings, run_suites

# tables and status on stderr; data on stdout
console = Console(stderr=True)
logger = logging.getLogger(__name__)

DEFAULT_CONFIG = "config/settings.yaml"


def setup_logging(level: str = "INFO", log_file: Optional[str] = None):
    """Setup logging configuration"""
    logging.basicConfig(
        level=level.upper(),
        format="%(message)s",
        handlers=[
            RichHandler(
                console=console,
                rich_tracebacks=True,
                show_time=False,
                show_path=False
            )
        ]
    )

    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(
            logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s')
        )
        logging.getLogger().addHandler(file_handler)


def load_config(config_path: str = DEFAULT_CONFIG) -> dict:
    """Load configuration from YAML file"""
    if not os.path.exists(config_path):
        logger.warning(f"Config file not found: {config_path}. Using defaults.")
        return {}

    with open(config_path, 'r') as f:
        return yaml.safe_load(f) or {}


@dataclass
class WittConfig:
    """Settings shared by every command"""
    default_bits: Optional[int] = None
    auto_margin_bits: int = 64
    start_bits: int = DEFAULT_START_BITS
    cap_bits: int = DEFAULT_CAP_BITS
    default_n: int = 50
    verify: VerifySettings = field(default_factory=VerifySettings)
    plot: PlotConfig = field(default_factory=PlotConfig)
    log_level: str = "INFO"
    log_file: Optional[str] = None

    @staticmethod
    def from_dict(data: dict) -> 'WittConfig':
        precision = data.get('precision', {}) or {}
        intervals = data.get('intervals', {}) or {}
        log = data.get('logging', {}) or {}
        env_bits = os.getenv('WITT_PRECISION')
        return WittConfig(
            default_bits=int(env_bits) if env_bits else precision.get('default_bits'),
            auto_margin_bits=precision.get('auto_margin_bits', 64),
            start_bits=intervals.get('start_bits', DEFAULT_START_BITS),
            cap_bits=intervals.get('cap_bits', DEFAULT_CAP_BITS),
            default_n=(data.get('fa', {}) or {}).get('default_n', 50),
            verify=VerifySettings.from_dict(data.get('verify')),
            plot=PlotConfig.from_dict(data.get('plot')),
            log_level=log.get('level', 'INFO'),
            log_file=log.get('file'),
        )


def read_json(path: str) -> dict:
    try:
        with open(path, 'r') as f:
            return json.load(f)
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise ProfileError(f"{path} is not valid JSON: {e}") from e


def write_output(text: str, out: Optional[str]):
    """Write to a file, or to stdout when no file is given"""
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        with open(out, 'w') as f:
            f.write(text)
        console.print(f"[green]✓ Wrote {out}[/green]")
    else:
        click.echo(text, nl=not text.endswith("\n"))


def dump(data: dict) -> str:
    return json.dumps(data, indent=2) + "\n"


def load_polygon(path: str) -> ConvexProfile:
    """A polygon file, a profile file, or an f_a build report"""
    data = read_json(path)
    if "nodes" in data:
        return ConvexProfile.from_dict(data)
    if "entries" in data:
        return newton_polygon(CoefficientProfile.from_dict(data))
    if "profile" in data:
        return newton_polygon(CoefficientProfile.from_dict(data["profile"]))
    raise ProfileError(f"{path} holds neither a polygon nor a profile")


def rational_option(value: Optional[str]):
    return None if value is None else parse_rational(value)


def show_verdict(verdict: StratumVerdict, title: str):
    table = Table(title=title)
    table.add_column("Field", style="cyan")
    table.add_column("Value", style="green")
    table.add_row("lambda", str(verdict.lam))
    table.add_row("verdict", verdict.kind.value)
    table.add_row("provenance", verdict.provenance.value)
    table.add_row("member", {True: "✓", False: "✗", None: "undecided"}[verdict.member])
    if verdict.value is not None:
        table.add_row("value", str(verdict.value))
    if verdict.horizon:
        table.add_row("horizon", str(verdict.horizon))
    table.add_row("reason", verdict.reason)
    console.print(table)


@click.group()
@click.option('--config', 'config_path', default=None, help='Configuration file path (default: $WITT_CONFIG or config/settings.yaml)')
@click.option('--log-level', default=None, help='Logging level')
@click.pass_context
def cli(ctx, config_path, log_level):
    """witt-strata - exact valuations, Newton polygons and strata"""
    load_dotenv()
    config_data = load_config(config_path or os.getenv('WITT_CONFIG', DEFAULT_CONFIG))
    config = WittConfig.from_dict(config_data)
    setup_logging(log_level or config.log_level, config.log_file)
    ctx.obj = config


@cli.command('build-fa')
@click.option('--a', 'a', required=True, help='Exponent a > 1 as num/den')
@click.option('--n', 'n', type=int, default=None, help='Truncation N (default from config)')
@click.option('--precision', type=int, default=None, help='Working precision in bits (default: $WITT_PRECISION or automatic)')
@click.option('--out', default=None, help='Report file (default: stdout)')
@click.pass_obj
def build_fa_command(config: WittConfig, a, n, precision, out):
    """Build the separating element f_a up to index N"""
    n = n or config.default_n
    bits = precision or config.default_bits or FaSpec.recommended_precision(n, config.auto_margin_bits)
    report = build_fa(FaSpec(parse_rational(a), n, bits))

    table = Table(title=f"f_a build (a={report.spec.a})")
    table.add_column("Field", style="cyan")
    table.add_column("Value", style="green")
    table.add_row("truncation", str(n))
    table.add_row("precision", f"{bits} bits")
    table.add_row("nodes", f"1..{n}")
    table.add_row("certified breakpoints", str(report.max_certified_index))
    table.add_row("largest error bound", f"{float(max(report.error_bounds)):.3g}")
    console.print(table)

    write_output(dump(report.to_dict()), out)


@cli.command('eval')
@click.option('--profile', 'profile_path', required=True, type=click.Path(exists=True), help='Coefficient profile JSON')
@click.option('--s', 's', required=True, help='Gauss parameter s >= 0 as num/den')
def eval_command(profile_path, s):
    """Gauss valuation v_s of a profile"""
    f = CoefficientProfile.from_dict(read_json(profile_path))
    try:
        result = gauss_valuation(f, parse_rational(s))
    except ZeroElementError:
        # v_s(0) = inf for every s
        result = ValueWithCertificate(INF, True)
    if not result.exact:
        logger.warning("value is only an upper bound at this truncation")
    click.echo(str(result))


@cli.command('polygon')
@click.option('--profile', 'profile_path', required=True, type=click.Path(exists=True), help='Coefficient profile JSON')
@click.option('--out', default=None, help='Polygon file (default: stdout)')
def polygon_command(profile_path, out):
    """Newton polygon of a profile"""
    f = CoefficientProfile.from_dict(read_json(profile_path))
    write_output(dump(newton_polygon(f).to_dict()), out)


@cli.command('transform')
@click.option('--polygon', 'polygon_path', required=True, type=click.Path(exists=True), help='Polygon or profile JSON')
@click.option('--t', 'ts', multiple=True, help='Point(s) t >= 0 as num/den')
@click.option('--full', is_flag=True, help='Print the full piecewise-linear transform')
@click.option('--roundtrip', is_flag=True, help='Check that inverting the transform gives the polygon back')
@click.option('--out', default=None, help='Output file for --full (default: stdout)')
def transform_command(polygon_path, ts, full, roundtrip, out):
    """Legendre transform of a polygon"""
    P = load_polygon(polygon_path)
    if not (ts or full or roundtrip):
        raise click.UsageError("give --t, --full or --roundtrip")

    for t in ts:
        value = legendre_eval(P, parse_rational(t))
        click.echo(str(value) if len(ts) == 1 else f"t={parse_rational(t)}: {value}")

    if full:
        write_output(dump(legendre_full(P).to_dict()), out)

    if roundtrip:
        if inverse_legendre(legendre_full(P)) != P:
            raise VerificationError("inverse transform does not reproduce the polygon")
        console.print("[green]✓ Round trip reproduces the polygon[/green]")


@cli.command('classify')
@click.option('--polygon', 'polygon_path', required=True, type=click.Path(exists=True), help='Polygon, profile or f_a report JSON')
@click.option('--lambda', 'lam', required=True, help='Stratum index in [0, 1] as num/den')
@click.option('--mu', default=None, help='Second index mu > lambda for the inclusion witness')
@click.option('--horizon', type=int, default=100, help='Number of breakpoints to sample')
@click.option('--a', 'a', default=None, help='Treat the polygon as f_a with this exponent')
@click.option('--out', default=None, help='Strata report file (default: stdout)')
@click.option('--csv', 'csv_path', default=None, help='Write the ratio brackets as CSV')
@click.pass_obj
def classify_command(config: WittConfig, polygon_path, lam, mu, horizon, a, out, csv_path):
    """Membership evidence for p_lambda"""
    P = load_polygon(polygon_path)
    lam_value, mu_value = parse_rational(lam), rational_option(mu)

    def verdict_at(index):
        if a is not None:
            return fa_stratum_verdict(parse_rational(a), index, horizon, P)
        return classify(P, index, horizon)

    verdict = verdict_at(lam_value)
    show_verdict(verdict, "Stratum verdict")
    report = {"verdict": verdict.to_dict()}

    if mu_value is not None:
        chain = stratum_chain_witness(P, lam_value, mu_value, horizon, config.start_bits, config.cap_bits)
        report["chain"] = chain.to_dict()
        if a is not None:
            report["verdict_mu"] = verdict_at(mu_value).to_dict()
        mark = "✓" if chain.pointwise_holds and chain.implication_holds else "✗"
        console.print(f"{mark} inclusion p_{chain.lam} ⊂ p_{chain.mu} checked at {chain.checked} breakpoints")

    if csv_path and verdict.evidence is not None:
        write_output(verdict.evidence.to_csv(), csv_path)
    write_output(dump(report), out)

    if verdict.kind in (VerdictKind.INCONCLUSIVE, VerdictKind.BOUNDARY):
        return 3
    return 0


@cli.command('verify')
@click.option('--suite', type=click.Choice(('all',) + SUITES), default='all', help='Suite to run')
@click.option('--seed', type=int, default=0, help='Random seed')
@click.option('--workers', type=int, default=1, help='Worker processes')
@click.option('--out', default=None, help='JSON summary file')
@click.pass_obj
def verify_command(config: WittConfig, suite, seed, workers, out):
    """Run the property suites"""
    names: List[str] = list(SUITES) if suite == 'all' else [suite]
    console.print(Panel.fit(f"[bold cyan]verify[/bold cyan] {', '.join(names)} (seed {seed})", border_style="cyan"))
    results = run_suites(names, seed, config.verify, workers)

    table = Table(title="Verification")
    table.add_column("Suite", style="cyan")
    table.add_column("Passed", style="green")
    table.add_column("Failed", style="red")
    table.add_column("Time", style="yellow")
    for result in results:
        table.add_row(result.name, str(result.passed), str(result.failed), f"{result.seconds:.1f}s")
    console.print(table)

    if out:
        write_output(dump({"seed": seed, "suites": [r.to_dict() for r in results]}), out)

    failed = [r for r in results if not r.ok]
    if failed:
        for result in failed:
            for label in result.failures:
                console.print(f"[red]✗ {result.name}: {label}[/red]")
        raise VerificationError(f"{len(failed)} suite(s) failed")
    console.print("[green]✓ All suites passed[/green]")


@cli.command('plot')
@click.option('--polygon', 'polygon_path', required=True, type=click.Path(exists=True), help='Polygon or profile JSON')
@click.option('--out', required=True, help='Output file')
@click.option('--format', 'fmt', type=click.Choice(['svg', 'csv']), default='svg', help='Output format')
@click.pass_obj
def plot_command(config: WittConfig, polygon_path, out, fmt):
    """Draw a polygon next to its Legendre transform"""
    P = load_polygon(polygon_path)
    text = render_svg(P, config.plot) if fmt == 'svg' else render_csv(P, config.plot)
    write_output(text, out)


def main(argv: Optional[List[str]] = None) -> int:
    """Run the CLI and translate failures into exit codes"""
    try:
        result = cli.main(args=argv, prog_name="witt", standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.exceptions.Abort:
        console.print("\n[yellow]Aborted[/yellow]")
        return 1
    except click.ClickException as e:
        e.show()
        return 1
    except WittError as e:
        console.print(f"[red]✗ {e}[/red]")
        return e.exit_code
    return result if isinstance(result, int) else 0


if __name__ == "__main__":
    sys.exit(main())
