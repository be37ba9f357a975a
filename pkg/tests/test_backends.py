import math
import os
import subprocess
import sys

import numpy as np
import pytest

from contlattice._backend import compiled_kernels, python_kernels

needs_compiled = pytest.mark.skipif(compiled_kernels is None, reason="extension not built")


def test_constants_match(kernels):
    for name in ("Z_SWITCH", "Y_SWITCH", "MAX_SERIES_TERMS", "Y_NEGATIVE_CAP"):
        assert getattr(kernels, name) == getattr(python_kernels, name)


@pytest.mark.parametrize("twice_nu", [-1, 0, 1, 2, 5, 40, 80])
@pytest.mark.parametrize("z", [1e-6, 0.5, 10.0, 35.0, 35.5, 200.0, 1500.0])
def test_bessel_agreement(kernels, twice_nu, z):
    m, s = kernels.bessel_i_scaled(twice_nu, z)
    m0, s0 = python_kernels.bessel_i_scaled(twice_nu, z)
    assert math.log(m) + s == pytest.approx(math.log(m0) + s0, abs=1e-14 * max(1.0, abs(s0)))


@pytest.mark.parametrize("n", [0, 1, 3])
@pytest.mark.parametrize("y", [-24.0, 0.0, 1.0, 306.0, 400.0])
def test_reduced_agreement(kernels, n, y):
    m, s = kernels.reduced_bessel_scaled(n, y)
    m0, s0 = python_kernels.reduced_bessel_scaled(n, y)
    assert m * math.exp(s - s0) == pytest.approx(m0, rel=1e-14)


def test_paths_agree(kernels):
    pos, sw, sg = kernels.simulate_paths(12345, 1.5, 1.3, 2.0, 1000, 5000)
    pos0, sw0, sg0 = python_kernels.simulate_paths(12345, 1.5, 1.3, 2.0, 1000, 5000)
    np.testing.assert_array_equal(sw, sw0)
    np.testing.assert_array_equal(sg, sg0)
    np.testing.assert_allclose(pos, pos0, rtol=0, atol=1e-13)
    assert list(kernels.path_switch_times(12345, 1.5, 1.3, 2.0, 1003)) == pytest.approx(
        python_kernels.path_switch_times(12345, 1.5, 1.3, 2.0, 1003), abs=1e-15)


@needs_compiled
def test_compiled_selected_by_default():
    from contlattice import BACKEND

    assert BACKEND == ("python" if os.environ.get("CONTLATTICE_PURE_PYTHON") else "cython")


def test_pure_python_override():
    code = "import contlattice, sys; print(contlattice.BACKEND, contlattice.cbinom(2.0, 1.0))"
    env = dict(os.environ, CONTLATTICE_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    backend, value = out.stdout.split()
    assert backend == "python"
    assert float(value) == pytest.approx(7.7404443139467926616, rel=1e-14)
