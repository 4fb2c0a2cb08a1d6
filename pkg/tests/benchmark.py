"""
Benchmark suite for confluence-kit.

Run with: python -m tests.benchmark
"""

import cmath
import time
from functools import wraps

from confluence_kit import Kit
from confluence_kit.borel_laplace import tilde_transform
from confluence_kit.closed_form import conjugation_route, monodromies, stokes_confluent
from confluence_kit.hg_model import build_companion
from confluence_kit.regression import REGRESSION_SET
from confluence_kit.verification import numeric_monodromies

GAUSS = REGRESSION_SET["gauss_real"].params
QUARTIC = REGRESSION_SET["quartic"].params


def benchmark(name: str, iterations: int = 1000):
    """Decorator to benchmark a function."""

    def decorator(func):
        @wraps(func)
        def wrapper():
            start = time.perf_counter()
            for _ in range(iterations):
                func()
            end = time.perf_counter()
            elapsed = (end - start) * 1000  # Convert to ms
            avg = elapsed / iterations
            print(f"{name:50} | {elapsed:>10.2f}ms total | {avg:>8.4f}ms avg")
            return elapsed

        return wrapper

    return decorator


@benchmark("Companion matrix (n=4)", 10000)
def bench_companion():
    build_companion(QUARTIC)


@benchmark("Closed-form monodromies (n=4)", 5000)
def bench_monodromies():
    monodromies(QUARTIC)


@benchmark("Stokes matrices at |rho| = 1e3 (n=2)", 5000)
def bench_stokes():
    stokes_confluent(GAUSS, 1000 * cmath.exp(0.3j))


@benchmark("Conjugation route (n=4)", 2000)
def bench_route():
    conjugation_route(QUARTIC.with_rho(50.0))


@benchmark("Floquet basis at s = 1/2 (n=4)", 200)
def bench_floquet():
    Kit.floquet(QUARTIC)


@benchmark("Formal transform, 60 orders (n=4)", 50)
def bench_formal():
    tilde_transform(QUARTIC)


@benchmark("Numeric monodromy loops (n=2)", 5)
def bench_loops():
    numeric_monodromies(GAUSS)


if __name__ == "__main__":
    print("=" * 80)
    print("confluence-kit Performance Benchmark")
    print("=" * 80)
    print(f"{'Test Name':<50} | {'Total Time':>10} | {'Avg Time':>8}")
    print("-" * 80)

    bench_companion()
    bench_monodromies()
    bench_stokes()
    bench_route()
    bench_floquet()
    bench_formal()
    bench_loops()

    print("=" * 80)
