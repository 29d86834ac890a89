import numpy as np
import pytest

from lambdamu import _closure_py, kernels


def _naive(rel):
    r = rel.copy()
    n = len(r)
    for k in range(n):
        r |= np.outer(r[:, k], r[k, :])
    return r


@pytest.mark.parametrize("n", [0, 1, 5, 63, 64, 65, 130])
def test_python_closure_matches_naive(n):
    rng = np.random.default_rng(n)
    rel = rng.random((n, n)) < 0.03
    assert np.array_equal(_closure_py.transitive_closure(rel), _naive(rel))


@pytest.mark.parametrize("n", [0, 1, 5, 64, 65, 200])
def test_selected_backend_matches_fallback(n):
    rng = np.random.default_rng(100 + n)
    rel = rng.random((n, n)) < 0.02
    assert np.array_equal(kernels.transitive_closure(rel), _closure_py.transitive_closure(rel))


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")


def test_compiled_backend_if_built():
    try:
        from lambdamu import _kernels
    except ImportError:
        pytest.skip("compiled extension not built")
    rel = np.eye(3, dtype=bool)
    rel[0, 1] = rel[1, 2] = True
    assert _kernels.transitive_closure(rel)[0, 2]
