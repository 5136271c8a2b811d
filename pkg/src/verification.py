"""
Property suites for witt-strata
Seeded random checks of every identity the library relies on, against
brute-force oracles where one exists
"""

import logging
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from enclosures import rational_power
from errors import ProfileError
from fa_family import (
    FaBuildReport,
    FaSpec,
    build_fa,
    explicit_bracket_bounds,
    identity_III_check,
    prop4_verdict,
    reference_Fa,
    slope_estimate_check,
    threshold,
    value_sandwich_check,
)
from legendre import (
    corollary1_check,
    inverse_legendre,
    legendre_eval,
    legendre_full,
    rescale_transform,
)
from newton import (
    ConvexProfile,
    eval_polygon,
    frobenius_polygon,
    minkowski_product,
    newton_polygon,
    sum_lower_bound,
)
from strata import (
    certified_breakpoints,
    classify,
    membership_in_m,
    product_witness,
    stratum_chain_witness,
)
from valuation import (
    INF,
    CoefficientProfile,
    frobenius_pullback,
    gauss_valuation,
    extend_profile,
    monotonicity_check,
)

logger = logging.getLogger(__name__)

SUITES = ("hull", "legendre", "corollary1", "frobenius", "fa", "strata")
MAX_REPORTED_FAILURES = 10


@dataclass
class VerifySettings:
    """Sample sizes for every suite"""
    hull_profiles: int = 200
    max_entries: int = 50
    legendre_polygons: int = 200
    legendre_points: int = 100
    product_pairs: int = 100
    product_points: int = 50
    corollary_polygons: int = 200
    frobenius_profiles: int = 100
    frobenius_points: int = 50
    strata_polygons: int = 500
    fa_values: List[str] = field(default_factory=lambda: ["3/2", "2", "3"])
    fa_n: int = 300

    @staticmethod
    def from_dict(data: Optional[dict]) -> 'VerifySettings':
        data = dict(data or {})
        known = set(VerifySettings.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            logger.warning(f"Ignoring unknown verify settings: {sorted(unknown)}")
        return VerifySettings(**{k: v for k, v in data.items() if k in known})

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: int
    failed: int
    failures: Tuple[str, ...] = ()
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def to_dict(self) -> dict:
        return {
            "suite": self.name,
            "passed": self.passed,
            "failed": self.failed,
            "failures": list(self.failures),
        }


# --- generators ---------------------------------------------------------

def random_rational(rng: random.Random, max_num: int = 40, max_den: int = 6) -> Fraction:
    return Fraction(rng.randint(0, max_num), rng.randint(1, max_den))


def random_t(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(0, 60), rng.randint(1, 12))


def random_profile(rng: random.Random, max_entries: int = 50, max_index: int = 80) -> CoefficientProfile:
    count = rng.randint(1, max_entries)
    indices = rng.sample(range(max_index), min(count, max_index))
    return CoefficientProfile.finite({i: random_rational(rng) for i in indices})


def random_polygon(rng: random.Random, max_entries: int = 50) -> ConvexProfile:
    return newton_polygon(random_profile(rng, max_entries))


def random_truncation(rng: random.Random, max_entries: int = 50) -> Tuple[CoefficientProfile, CoefficientProfile]:
    """A truncated profile and one completion of it with valuations >= 0 beyond N"""
    entries = random_profile(rng, max_entries).finite_entries()
    truncation = max(i for i, _ in entries) + rng.randint(0, 5)
    f = CoefficientProfile.truncated(entries, truncation)
    beyond = rng.sample(range(truncation + 1, truncation + 40), rng.randint(0, 6))
    return f, extend_profile(f, [(i, random_rational(rng)) for i in beyond])


# --- oracles ------------------------------------------------------------

def brute_force_hull(points: Sequence[Tuple[int, Fraction]]) -> List[Tuple[int, Fraction]]:
    """
    Vertices of the decreasing hull by the exposing-t criterion

    (x, y) is a vertex iff some t >= 0 makes y + t*x the unique minimum
    of all y' + t*x'. Each other point bounds t from one side.
    """
    best: Dict[int, Fraction] = {}
    for x, y in points:
        if y is not INF and (x not in best or y < best[x]):
            best[x] = y

    vertices = []
    for x, y in best.items():
        lower, upper = Fraction(0), None
        for ox, oy in best.items():
            if ox > x:
                lower = max(lower, (y - oy) / (ox - x))
            elif ox < x:
                bound = (oy - y) / (x - ox)
                upper = bound if upper is None else min(upper, bound)
        if upper is None or lower < upper:
            vertices.append((x, y))
    return sorted(vertices)


def grid_legendre(P: ConvexProfile, t: Fraction) -> Fraction:
    """inf of P(x) + t*x over the integers 0 .. last node + 10"""
    return min(eval_polygon(P, x) + t * x for x in range(P.xs[-1] + 11))


# --- suites -------------------------------------------------------------

Check = Tuple[str, bool]


def _hull_checks(rng: random.Random, settings: VerifySettings) -> Iterator[Check]:
    for k in range(settings.hull_profiles):
        f = random_profile(rng, settings.max_entries)
        P = newton_polygon(f)
        yield f"hull profile {k}", list(P.nodes) == brute_force_hull(f.finite_entries())
        yield f"hull profile {k} idempotent", newton_polygon(P.as_profile()) == P


def _legendre_checks(rng: random.Random, settings: VerifySettings) -> Iterator[Check]:
    for k in range(settings.legendre_polygons):
        f = random_profile(rng, settings.max_entries)
        P = newton_polygon(f)
        transform = legendre_full(P)
        yield f"roundtrip polygon {k}", inverse_legendre(transform) == P
        for _ in range(settings.legendre_points):
            t = random_t(rng)
            value = legendre_eval(P, t).value
            ok = (
                value == grid_legendre(P, t)
                and value == transform.evaluate(t)
                and value == gauss_valuation(f, t).value
            )
            yield f"transform of polygon {k} at t={t}", ok

    for k in range(settings.product_pairs):
        P = random_polygon(rng, settings.max_entries)
        Q = random_polygon(rng, settings.max_entries)
        product, bound = minkowski_product(P, Q), sum_lower_bound(P, Q)
        for _ in range(settings.product_points):
            t = random_t(rng)
            lp, lq = legendre_eval(P, t).value, legendre_eval(Q, t).value
            ok = (
                legendre_eval(product, t).value == lp + lq
                and legendre_eval(bound, t).value == min(lp, lq)
            )
            yield f"product pair {k} at t={t}", ok


def _corollary1_checks(rng: random.Random, settings: VerifySettings) -> Iterator[Check]:
    for k in range(settings.corollary_polygons):
        P = random_polygon(rng, settings.max_entries)
        for i in range(1, len(P.nodes) + 1):
            yield f"polygon {k} node {i}", corollary1_check(P, i).holds


def _frobenius_checks(rng: random.Random, settings: VerifySettings) -> Iterator[Check]:
    for k in range(settings.frobenius_profiles):
        f = random_profile(rng, settings.max_entries)
        P = newton_polygon(f)
        for p in (2, 3, 5):
            pulled = frobenius_pullback(f, p)
            yield (
                f"profile {k} polygon at p={p}",
                newton_polygon(pulled) == frobenius_polygon(P, p)
                and legendre_full(frobenius_polygon(P, p)) == rescale_transform(legendre_full(P), p),
            )
            for _ in range(settings.frobenius_points):
                t = random_t(rng)
                ok = gauss_valuation(pulled, t).value == gauss_valuation(f, p * t).value / p
                yield f"profile {k} at p={p}, t={t}", ok
        s, t = sorted((random_t(rng), random_t(rng)))
        yield f"profile {k} monotone on [{s}, {t}]", monotonicity_check(f, s, t)

        lam = Fraction(rng.randint(0, 6), 6)
        scaled = frobenius_polygon(P, rng.choice((2, 3, 5)))
        members = {classify(X, lam, len(P.nodes)).member for X in (P, scaled)}
        yield f"profile {k} stratum {lam} fixed", len(members) == 1

        truncated, completed = random_truncation(rng, settings.max_entries)
        for _ in range(settings.frobenius_points):
            t = random_t(rng)
            listed, true = gauss_valuation(truncated, t), gauss_valuation(completed, t).value
            ok = listed.value == true if listed.exact else true <= listed.value
            yield f"truncation {k} certificate at t={t}", ok


def _fa_checks(rng: random.Random, settings: VerifySettings) -> Iterator[Check]:
    for a in settings.fa_values:
        report = build_fa(FaSpec.with_default_precision(a, settings.fa_n))
        yield f"a={a} nodes at 1..{settings.fa_n}", report.polygon.xs == list(range(1, settings.fa_n + 1))
        yield f"a={a} slope estimate", slope_estimate_check(report).holds
        yield f"a={a} value sandwich", value_sandwich_check(report).holds
        yield f"a={a} rounding within tolerance", all(
            e < tol for e, tol in zip(report.error_bounds, report.tolerances)
        )
        for i in range(1, report.max_certified_index + 1):
            yield f"a={a} identity at i={i}", identity_III_check(report, i).holds
        i = rng.randint(1, 40)
        here, there = reference_Fa(a, i), reference_Fa(a, i + 1)
        power = rational_power(Fraction(i), report.spec.a)
        yield f"a={a} telescoping at i={i}", (
            here.lo - there.hi <= 1 / power.lo and 1 / power.hi <= here.hi - there.lo
        )
        yield from _agreement_checks(a, report)


def _agreement_checks(a: str, report: FaBuildReport) -> Iterator[Check]:
    """Empirical brackets of a build against the analytic verdict and explicit bounds"""
    cut = threshold(report.spec.a)
    available = certified_breakpoints(report.polygon)
    for nu in (cut / 2, (cut + 1) / 2):
        verdict = prop4_verdict(report.spec.a, nu, available, polygon=report.polygon)
        yield f"a={a} verdict at nu={nu}", (
            verdict.member is (nu > cut) and verdict.horizon == available
        )
        if verdict.evidence is None:
            continue
        # the explicit upper bound needs i >= 3
        for point in verdict.evidence.points[2:]:
            bounds = explicit_bracket_bounds(report.spec.a, nu, point.index)
            yield f"a={a} explicit bounds at nu={nu}, i={point.index}", (
                bounds.lower <= point.lower.hi and point.upper.lo <= bounds.upper
            )


def _strata_checks(rng: random.Random, settings: VerifySettings) -> Iterator[Check]:
    for k in range(settings.strata_polygons):
        P = random_polygon(rng, settings.max_entries)
        expected = all(y > 0 for _, y in P.nodes)
        yield f"polygon {k} in m", membership_in_m(P).member == expected

        low = rng.randint(0, 5)
        lam, mu = Fraction(low, 6), Fraction(rng.randint(low + 1, 6), 6)
        chain = stratum_chain_witness(P, lam, mu, horizon=len(P.nodes))
        yield f"polygon {k} chain {lam} < {mu}", chain.pointwise_holds and chain.implication_holds

        if k % 10 == 0:
            Q = random_polygon(rng, settings.max_entries)
            yield f"polygon {k} product ratios", product_witness(P, Q, Fraction(1, 2)).holds


SUITE_CHECKS: Dict[str, Callable[[random.Random, VerifySettings], Iterator[Check]]] = {
    "hull": _hull_checks,
    "legendre": _legendre_checks,
    "corollary1": _corollary1_checks,
    "frobenius": _frobenius_checks,
    "fa": _fa_checks,
    "strata": _strata_checks,
}


def run_suite(name: str, seed: int, settings: VerifySettings) -> SuiteResult:
    """Run one suite; the generator is seeded from (seed, name) alone"""
    if name not in SUITE_CHECKS:
        raise ProfileError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    rng = random.Random(f"{seed}:{name}")
    start = time.perf_counter()
    passed, failures = 0, []
    for label, ok in SUITE_CHECKS[name](rng, settings):
        if ok:
            passed += 1
        else:
            failures.append(label)
            logger.warning(f"[{name}] failed: {label}")
    elapsed = time.perf_counter() - start
    logger.info(f"[{name}] {passed} passed, {len(failures)} failed in {elapsed:.1f}s")
    return SuiteResult(name, passed, len(failures), tuple(failures[:MAX_REPORTED_FAILURES]), elapsed)


def run_suites(
    names: Sequence[str],
    seed: int,
    settings: Optional[VerifySettings] = None,
    workers: int = 1,
) -> List[SuiteResult]:
    """Run suites in order, optionally across worker processes"""
    settings = settings or VerifySettings()
    if workers <= 1 or len(names) <= 1:
        return [run_suite(name, seed, settings) for name in names]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(run_suite, name, seed, settings) for name in names]
        return [future.result() for future in futures]
