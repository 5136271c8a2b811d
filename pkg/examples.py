#!/usr/bin/env python3
"""
Example: Basic witt-strata usage
Demonstrates how to use witt-strata programmatically
"""

import sys
from fractions import Fraction
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / 'src'))

from valuation import CoefficientProfile, gauss_valuation, frobenius_pullback
from newton import newton_polygon, minkowski_product
from legendre import legendre_eval, legendre_full, corollary1_check
from strata import classify, stratum_chain_witness
from fa_family import FaSpec, build_fa, identity_III_check, prop4_verdict, explicit_bracket_bounds


def example_valuations():
    """Example: Gauss valuations and Newton polygons"""
    print("="*60)
    print("Example 1: Valuations and Polygons")
    print("="*60)

    # f = [a_0] + [a_2] pi^2 + pi^4 with v(a_0) = 3, v(a_2) = 1
    f = CoefficientProfile.finite({0: 3, 2: 1, 4: 0})
    P = newton_polygon(f)
    print(f"Nodes: {[(x, str(y)) for x, y in P.nodes]}")

    for s in (Fraction(0), Fraction(1, 4), Fraction(1)):
        print(f"  v_{s}(f) = {gauss_valuation(f, s)}   L(N(f))({s}) = {legendre_eval(P, s)}")

    for i in range(1, len(P.nodes) + 1):
        result = corollary1_check(P, i)
        print(f"  node {i}: N(n_i) = {result.lhs}, -s_i n_i + L(s_i) = {result.rhs}")

    pulled = frobenius_pullback(f, 2)
    print(f"v_1(phi^-1 f) = {gauss_valuation(pulled, 1)} = v_2(f)/2 = {gauss_valuation(f, 2).value / 2}")
    print()


def example_products():
    """Example: Products add transforms"""
    print("="*60)
    print("Example 2: Products")
    print("="*60)

    P = newton_polygon(CoefficientProfile.finite({0: 2, 1: 0}))
    Q = newton_polygon(CoefficientProfile.finite({0: 1, 3: 0}))
    R = minkowski_product(P, Q)
    print(f"Product nodes: {[(x, str(y)) for x, y in R.nodes]}")
    for t in (Fraction(1, 3), Fraction(1), Fraction(3)):
        total = legendre_eval(P, t).value + legendre_eval(Q, t).value
        print(f"  t={t}: L(R) = {legendre_eval(R, t).value}, L(P) + L(Q) = {total}")
    print(f"Transform breakpoints: {[str(t) for t in legendre_full(R).breakpoint_ts]}")
    print()


def example_strata():
    """Example: Strata of finite polygons"""
    print("="*60)
    print("Example 3: Strata")
    print("="*60)

    in_m = newton_polygon(CoefficientProfile.finite({0: 1, 5: Fraction(1, 3)}))
    not_in_m = newton_polygon(CoefficientProfile.finite({0: 1, 5: 0}))
    for name, P in (("v_0 = 1/3", in_m), ("v_0 = 0", not_in_m)):
        verdict = classify(P, Fraction(1, 2), horizon=10)
        print(f"  {name}: {verdict.kind.value} ({verdict.provenance.value}), member={verdict.member}")

    chain = stratum_chain_witness(in_m, Fraction(1, 4), Fraction(3, 4), horizon=10)
    print(f"  p_1/4 inside p_3/4 at every sampled t <= 1: {chain.pointwise_holds}")
    print()


def example_separating_family():
    """Example: The separating element f_2"""
    print("="*60)
    print("Example 4: Separating Family")
    print("="*60)

    report = build_fa(FaSpec.with_default_precision(Fraction(2), 60))
    print(f"✓ Built f_2 with nodes 1..{report.spec.n} at {report.spec.precision} bits")
    print(f"  certified breakpoints: {report.max_certified_index}")
    print(f"  identity at i=10: {identity_III_check(report, 10).holds}")

    for nu in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
        verdict = prop4_verdict(Fraction(2), nu, horizon=20, polygon=report.polygon)
        print(f"  nu={nu}: {verdict.kind.value}, member={verdict.member}")

    bounds = explicit_bracket_bounds(Fraction(2), Fraction(3, 4), 10000)
    print(f"  lower bracket at nu=3/4, i=10^4 exceeds {float(bounds.lower):.2f}")
    print()


def main():
    """Run all examples"""
    print("\n" + "="*60)
    print("  witt-strata Usage Examples")
    print("="*60 + "\n")

    examples = [
        ("Valuations", example_valuations),
        ("Products", example_products),
        ("Strata", example_strata),
        ("Separating Family", example_separating_family),
    ]

    for name, example_func in examples:
        try:
            example_func()
        except KeyboardInterrupt:
            print("\n\n⚠ Example interrupted by user\n")
            break
        except Exception as e:
            print(f"\n✗ Example {name} failed: {e}\n")
            import traceback
            traceback.print_exc()

    print("="*60)
    print("Examples completed!")
    print("="*60)


if __name__ == "__main__":
    main()
