"""
Tests for orthogonal expansions and convergence studies
"""

import numpy as np
import pytest

from symdom.approx import (
    BUILTINS,
    best_error_l2,
    builtin_function,
    convergence_study,
    default_center,
    kfunctional_proxy,
    l2_errors,
    localization_profile,
    make_space,
    partial_sum_eval,
    project,
    resolve_quad_degree,
    sampled_sup_errors,
)
from symdom.config import Settings, clear_settings, set_settings
from symdom.errors import IndexOutOfRangeError, InvalidParameterError, QuadratureUnderresolvedWarning
from symdom.revolution import rev_contains
from symdom.types import DomainParams

DOMAIN = DomainParams(a=0.25, b=1.0, c=2.0)
CONE = DomainParams(a=0.0, b=1.0, c=1.0)


@pytest.fixture(autouse=True)
def fresh_settings():
    clear_settings()
    yield
    clear_settings()


def test_make_space():
    """Test building spaces by name"""
    assert make_space("curved2d", DOMAIN, 0.0, 0.0).dim == 2
    assert make_space("revolution", CONE, 0.0, 0.0).dim == 3
    with pytest.raises(InvalidParameterError):
        make_space("sphere", DOMAIN, 0.0, 0.0)


def test_resolve_quad_degree():
    """Test the default margin and the underresolution warning"""
    assert resolve_quad_degree(5) == 18
    assert resolve_quad_degree(5, 12) == 12
    with pytest.warns(QuadratureUnderresolvedWarning):
        resolve_quad_degree(5, 6)
    with pytest.raises(IndexOutOfRangeError):
        resolve_quad_degree(-1)


def test_projection_of_constant():
    """Test that 1 has a single coefficient"""
    space = make_space("curved2d", DOMAIN, 0.5, 0.25)
    expansion = project(space, builtin_function("one", 2), 4)
    coefs = expansion.coefficients()
    assert coefs[(0, 0)] == pytest.approx(1.0)
    assert all(abs(v) < 1e-12 for k, v in coefs.items() if k != (0, 0))
    assert expansion.degree_energy()[0] == pytest.approx(1.0)


def test_polynomial_is_reproduced():
    """Test that an even polynomial of degree 2 is reproduced by S_2"""
    space = make_space("curved2d", DOMAIN, 0.0, 0.5)
    f = builtin_function("quadratic", 2)
    expansion = project(space, f, 4)
    pts = space.sample(20, np.random.default_rng(0))
    coords = (pts[:, 0], pts[:, 1])
    assert np.allclose(partial_sum_eval(expansion, 2, coords, space), f(*coords), atol=1e-10)
    assert best_error_l2(space, f, 2) < 1e-10
    with pytest.raises(IndexOutOfRangeError):
        partial_sum_eval(expansion, 5, coords)


def test_errors_decrease_for_smooth_function():
    """Test L2 and sampled sup errors for a smooth function on a solid"""
    space = make_space("revolution", CONE, 0.0, 0.0)
    f = builtin_function("builtin:expcos", 3)
    l2 = l2_errors(space, f, [0, 2, 4, 6])
    assert all(b < a for a, b in zip(l2, l2[1:]))
    sup = sampled_sup_errors(space, f, [2, 6], samples=200, seed=1)
    assert sup[1] < sup[0]


def test_parallel_coefficients_match_serial():
    """Test that worker threads do not change the coefficients"""
    space = make_space("curved2d", DOMAIN, 0.0, 0.0)
    f = builtin_function("expcos", 2)
    serial = project(space, f, 5).coefficients()
    set_settings(Settings(threads=3))
    threaded = project(space, f, 5).coefficients()
    assert serial.keys() == threaded.keys()
    assert all(serial[k] == pytest.approx(threaded[k], abs=1e-14) for k in serial)


def test_kfunctional_proxy_bounds_best_error():
    """Test that the proxy dominates the best approximation error"""
    space = make_space("curved2d", DOMAIN, 0.0, 0.0)
    f = builtin_function("expcos", 2)
    n = 4
    proxy = kfunctional_proxy(space, f, 2, 1.0 / n, n)
    assert best_error_l2(space, f, n) <= proxy + 1e-12
    assert kfunctional_proxy(space, f, 1, 0.0, n) == pytest.approx(best_error_l2(space, f, n), rel=1e-10)
    with pytest.raises(InvalidParameterError):
        kfunctional_proxy(space, f, 3, 0.1, n)


def test_convergence_study():
    """Test the study report and its fitted decay"""
    space = make_space("curved2d", DOMAIN, 0.0, 0.0)
    report = convergence_study(space, builtin_function("expcos", 2), [1, 2, 4, 6, 8], samples=300, seed=4, label="expcos")
    assert report.label == "expcos"
    assert report.degrees == [1, 2, 4, 6, 8]
    assert len(report.l2_errors) == len(report.sup_errors) == 5
    assert report.decay_order > 1.0
    assert report.runtime_seconds >= 0.0


def test_localization_profile():
    """Test the binned localized kernel profile"""
    center = default_center(CONE)
    assert rev_contains(CONE, center)
    profile = localization_profile(CONE, 0.0, 4, samples=500, seed=2)
    assert profile.center == pytest.approx(center)
    assert profile.profile[0] >= 1.0 - 1e-12
    assert len(profile.bin_edges) == len(profile.profile) + 1
    assert sum(profile.counts) == 501
    assert all(a >= b for a, b in zip(profile.envelope, profile.envelope[1:]))
    with pytest.raises(InvalidParameterError):
        localization_profile(CONE, 0.0, 4, bin_width=0.0)


def test_builtin_lookup():
    """Test built-in function names"""
    assert builtin_function("builtin:one", 3)(0.1, 0.2, 0.3) == pytest.approx(1.0)
    assert {name for name, _ in BUILTINS} == {"expcos", "one", "quadratic"}
    with pytest.raises(InvalidParameterError):
        builtin_function("builtin:sinc", 2)


@pytest.mark.parametrize(
    "name,dp",
    [("revolution", DomainParams(a=0.0, b=1.0, c=1.0)), ("curved2d", DomainParams(a=0.0, b=1.0, c=0.5))],
)
def test_smooth_function_reaches_degree_sixteen_accuracy(name, dp):
    """Test strictly decreasing L2 errors down to 1e-8 at degree 16"""
    space = make_space(name, dp, 0.0, 0.0)
    f = builtin_function("expcos", space.dim)
    errors = l2_errors(space, f, range(17))
    assert all(cur < prev for prev, cur in zip(errors, errors[1:]) if prev > 1e-12)
    assert errors[16] <= 1e-8
    report = convergence_study(space, f, range(1, 17), samples=200, seed=3)
    assert report.decay_order >= 4.0


def test_localization_at_degree_sixteen():
    """Test two orders of magnitude of decay across the first unit of distance"""
    profile = localization_profile(CONE, 0.0, 16, samples=3000, seed=5)
    assert profile.counts[9] > 0
    assert profile.profile[0] >= 1.0 - 1e-12
    assert profile.profile[9] <= 1e-2 * profile.profile[0]
    assert all(a >= b for a, b in zip(profile.envelope, profile.envelope[1:]))
