"""Benchmark function values and registry behaviour."""

import numpy as np
import pytest

from fdo_mlp.benchmarks import (benchmark_names, get_benchmark, rastrigin,
                                rosenbrock, sphere)


class TestSphere:
    def test_global_minimum(self):
        assert sphere([0.0, 0.0, 0.0]) == 0.0

    def test_values(self):
        assert sphere([1.0, 2.0]) == 5.0
        assert sphere([-3.0]) == 9.0


class TestRastrigin:
    def test_global_minimum(self):
        assert rastrigin([0.0, 0.0]) == pytest.approx(0.0, abs=1e-12)

    def test_unit_point(self):
        # cos(2*pi) = 1, so 10 + 1 - 10.
        assert rastrigin([1.0]) == pytest.approx(1.0, abs=1e-10)

    def test_half_point(self):
        # cos(pi) = -1, so 10 + 0.25 + 10.
        assert rastrigin([0.5]) == pytest.approx(20.25, abs=1e-12)


class TestRosenbrock:
    def test_global_minimum(self):
        assert rosenbrock([1.0, 1.0]) == 0.0

    def test_values(self):
        assert rosenbrock([0.0, 0.0]) == 1.0
        assert rosenbrock([1.0, 2.0]) == 100.0

    def test_needs_two_dimensions(self):
        with pytest.raises(ValueError):
            rosenbrock([1.0])


class TestRegistry:
    def test_names(self):
        assert benchmark_names() == ["rastrigin", "rosenbrock", "sphere"]

    def test_unknown_name(self):
        with pytest.raises(ValueError, match="unknown benchmark"):
            get_benchmark("ackley", 3)

    def test_minimum_at_argmin(self):
        for name in benchmark_names():
            bench = get_benchmark(name, 6)
            assert abs(bench.evaluate(bench.argmin) - bench.known_minimum) < 1e-12

    def test_deterministic_and_pure(self):
        rng = np.random.default_rng(3)
        for name in benchmark_names():
            bench = get_benchmark(name, 5)
            for _ in range(20):
                x = rng.uniform(*bench.default_bounds, 5)
                assert bench.evaluate(x) == bench.evaluate(x.copy())

    def test_rosenbrock_dimension_guard(self):
        with pytest.raises(ValueError):
            get_benchmark("rosenbrock", 1)
