"""Tests for differentials, Hamiltonian fields and Poisson brackets."""

import numpy as np
import pytest

from symqm import (
    ComplexFunction,
    ObservableFunction,
    SymplecticSpace,
    bracket_commutator_report,
    commutator,
    complex_bracket,
    differential,
    hamiltonian_vector_field,
    make_hermitian,
    poisson_bracket,
    quadratic_form,
)
from symqm.errors import DimensionMismatchError
from symqm.sampling import random_hermitian, random_unit_state

X = make_hermitian([[0, 1], [1, 0]])
Y = make_hermitian([[0, -1j], [1j, 0]])
Z = make_hermitian([[1, 0], [0, -1]])
IDENT = make_hermitian(np.eye(2))
SPACE = SymplecticSpace(2)


def _fd_directional(func, psi, y, h=1e-7):
    """Independent directional derivative, used as the oracle throughout."""
    return (func(psi + h * y) - func(psi - h * y)) / (2 * h)


def test_observable_function_kinds():
    f = ObservableFunction.expectation_of(Z, SPACE)
    assert f.kind == "expectation"
    assert f([1, 0]) == 1.0
    g = ObservableFunction.from_callable(lambda v: float(np.vdot(v, v).real), SPACE)
    assert g.kind == "generic"
    assert g([1, 0]) == 1.0
    with pytest.raises(ValueError):
        ObservableFunction(space=SPACE)


def test_complex_function_kinds():
    u = ComplexFunction.coordinate([1, 0], SPACE)
    assert u.kind == "coordinate"
    assert u([1j, 0]) == 1j
    v = ComplexFunction.from_callable(lambda a: complex(a[0] * a[1]), SPACE)
    assert v.kind == "generic"


def test_coordinate_functional_real_linear():
    rng = np.random.default_rng(0)
    u = ComplexFunction.coordinate(random_unit_state(2, 1), SPACE)
    psi = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    for t in (0.25, -3.0):
        assert abs(u(t * psi) - t * u(psi)) <= 1e-12 * (1 + abs(u(psi)))


def test_differential_examples():
    f_ident = ObservableFunction.expectation_of(IDENT, SPACE)
    psi = random_unit_state(2, 2)
    assert differential(f_ident, psi, 1j * psi) == 0.0

    f_z = ObservableFunction.expectation_of(Z, SPACE)
    assert differential(f_z, [1, 0], [0, 1]) == 0.0


def test_differential_analytic_vs_finite_difference():
    rng = np.random.default_rng(3)
    for trial in range(50):
        n = int(rng.integers(2, 6))
        space = SymplecticSpace(n)
        a = make_hermitian(random_hermitian(n, 100, index=trial))
        f = ObservableFunction.expectation_of(a, space)
        psi = random_unit_state(n, 101, index=trial)
        y = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        oracle = _fd_directional(lambda p: np.vdot(p, a.matrix @ p).real, psi, y)
        assert abs(differential(f, psi, y) - oracle) <= 1e-6 * (1 + np.linalg.norm(a.matrix, 2))
        # generic backend agrees with the analytic one
        g = ObservableFunction.from_callable(lambda v: np.vdot(v, a.matrix @ v).real, space)
        assert abs(differential(f, psi, y) - differential(g, psi, y)) <= 1e-6


def test_hamiltonian_vector_field_examples():
    f_z = ObservableFunction.expectation_of(Z, SPACE)
    np.testing.assert_allclose(np.asarray(hamiltonian_vector_field(f_z, [1, 0])), [-1j, 0])

    f_i = ObservableFunction.expectation_of(IDENT, SPACE)
    psi = random_unit_state(2, 4)
    np.testing.assert_allclose(np.asarray(hamiltonian_vector_field(f_i, psi)), -1j * psi)

    f_zero = ObservableFunction.expectation_of(make_hermitian(np.zeros((2, 2))), SPACE)
    np.testing.assert_array_equal(np.asarray(hamiltonian_vector_field(f_zero, psi)), [0, 0])


def test_hamiltonian_vector_field_generic_path():
    rng = np.random.default_rng(5)
    for trial in range(20):
        n = int(rng.integers(2, 5))
        space = SymplecticSpace(n, hbar=0.5 if trial % 2 else 1.0)
        a = make_hermitian(random_hermitian(n, 200, index=trial))
        psi = random_unit_state(n, 201, index=trial)
        analytic = -1j / space.hbar * (a.matrix @ psi)
        g = ObservableFunction.from_callable(lambda v: np.vdot(v, a.matrix @ v).real, space)
        numeric = np.asarray(hamiltonian_vector_field(g, psi))
        assert np.max(np.abs(numeric - analytic)) <= 1e-6 * (1 + np.linalg.norm(a.matrix, 2))


def test_poisson_bracket_examples():
    f = ObservableFunction.expectation_of(X, SPACE)
    g = ObservableFunction.expectation_of(Y, SPACE)
    psi = random_unit_state(2, 6)
    assert poisson_bracket(f, f, psi) == 0.0
    assert poisson_bracket(f, g, [1, 0]) == 2.0
    ident = ObservableFunction.expectation_of(IDENT, SPACE)
    assert abs(poisson_bracket(f, ident, psi)) <= 1e-15


def test_poisson_bracket_antisymmetry_and_backends():
    rng = np.random.default_rng(7)
    for trial in range(10):
        n = int(rng.integers(2, 5))
        space = SymplecticSpace(n)
        a = make_hermitian(random_hermitian(n, 300, index=trial))
        b = make_hermitian(random_hermitian(n, 301, index=trial))
        f = ObservableFunction.expectation_of(a, space)
        g = ObservableFunction.expectation_of(b, space)
        psi = random_unit_state(n, 302, index=trial)
        fg = poisson_bracket(f, g, psi)
        gf = poisson_bracket(g, f, psi)
        assert abs(fg + gf) <= 1e-12 * (1 + abs(fg))
        numeric = poisson_bracket(f, g, psi, method="finite_difference", step=1e-5)
        scale = 1 + np.linalg.norm(a.matrix, 2) * np.linalg.norm(b.matrix, 2)
        assert abs(fg - numeric) <= 1e-6 * scale
        num_anti = poisson_bracket(g, f, psi, method="finite_difference", step=1e-5)
        assert abs(numeric + num_anti) <= 1e-6 * scale


def test_poisson_bracket_bilinear_over_operators():
    rng = np.random.default_rng(8)
    space = SymplecticSpace(3)
    a = make_hermitian(random_hermitian(3, 400))
    b = make_hermitian(random_hermitian(3, 401))
    c = make_hermitian(random_hermitian(3, 402))
    alpha, beta = rng.standard_normal(2)
    combo = make_hermitian(alpha * a.matrix + beta * b.matrix)
    psi = random_unit_state(3, 403)
    f_combo = ObservableFunction.expectation_of(combo, space)
    f_c = ObservableFunction.expectation_of(c, space)
    lhs = poisson_bracket(f_combo, f_c, psi)
    rhs = (alpha * poisson_bracket(ObservableFunction.expectation_of(a, space), f_c, psi)
           + beta * poisson_bracket(ObservableFunction.expectation_of(b, space), f_c, psi))
    assert abs(lhs - rhs) <= 1e-12 * (1 + abs(lhs))


def test_complex_bracket_eigencoordinate():
    # i*hbar*{<Z>, u} = a u with u the coordinate of the +1 eigenvector
    f = ObservableFunction.expectation_of(Z, SPACE)
    u = ComplexFunction.coordinate([1, 0], SPACE)
    psi = np.array([1, 1]) / np.sqrt(2)
    value = 1j * complex_bracket(f, u, psi)
    assert abs(value - (+1) * (1 / np.sqrt(2))) <= 1e-15


def test_complex_bracket_zero_and_identity():
    f = ObservableFunction.expectation_of(Z, SPACE)
    zero = ComplexFunction.coordinate([0, 0], SPACE)
    psi = random_unit_state(2, 9)
    assert complex_bracket(f, zero, psi) == 0

    # the identity operator generates a global phase: i*hbar*{<I>, u} = u
    ident = ObservableFunction.expectation_of(IDENT, SPACE)
    u = ComplexFunction.coordinate(random_unit_state(2, 10), SPACE)
    value = 1j * complex_bracket(ident, u, psi)
    assert abs(value - u(psi)) <= 1e-15
    fd = 1j * complex_bracket(ident, u, psi, method="finite_difference", step=1e-5)
    assert abs(fd - u(psi)) <= 1e-6


def test_complex_bracket_backends_agree():
    rng = np.random.default_rng(11)
    for trial in range(10):
        n = int(rng.integers(2, 5))
        space = SymplecticSpace(n)
        a = make_hermitian(random_hermitian(n, 500, index=trial))
        f = ObservableFunction.expectation_of(a, space)
        u = ComplexFunction.coordinate(random_unit_state(n, 501, index=trial), space)
        psi = random_unit_state(n, 502, index=trial)
        analytic = complex_bracket(f, u, psi)
        numeric = complex_bracket(f, u, psi, method="finite_difference", step=1e-5)
        assert abs(analytic - numeric) <= 1e-6 * (1 + np.linalg.norm(a.matrix, 2))


def test_bracket_commutator_report_same_operator():
    rep = bracket_commutator_report(X, X, SPACE, 10, seed=0)
    assert rep.analytic_max == 0.0


def test_bracket_commutator_report_pauli_pair():
    rep = bracket_commutator_report(X, Y, SPACE, 100, seed=0)
    assert rep.analytic_max <= 1e-12
    assert rep.finite_difference_max <= 1e-5


def test_bracket_commutator_report_random_8x8():
    space = SymplecticSpace(8)
    a = make_hermitian(random_hermitian(8, 600))
    b = make_hermitian(random_hermitian(8, 601))
    rep = bracket_commutator_report(a, b, space, 20, seed=1)
    assert rep.finite_difference_max <= 1e-5 * rep.scale
    assert rep.analytic_max <= 1e-12 * rep.scale


def test_bracket_commutator_report_deterministic():
    rep1 = bracket_commutator_report(X, Z, SPACE, 25, seed=7)
    rep2 = bracket_commutator_report(X, Z, SPACE, 25, seed=7)
    assert rep1 == rep2


def test_bracket_identity_pointwise():
    # i*hbar*{<A>,<B>}(psi) equals <psi|[A,B]|psi> for each sampled state
    space = SymplecticSpace(4, hbar=0.7)
    a = make_hermitian(random_hermitian(4, 700))
    b = make_hermitian(random_hermitian(4, 701))
    f = ObservableFunction.expectation_of(a, space)
    g = ObservableFunction.expectation_of(b, space)
    comm = commutator(a, b)
    for i in range(20):
        psi = random_unit_state(4, 702, index=i)
        lhs = 1j * space.hbar * poisson_bracket(f, g, psi)
        rhs = quadratic_form(comm, psi)
        assert abs(lhs - rhs) <= 1e-12 * (1 + abs(rhs))


def test_dimension_mismatch_raises():
    f = ObservableFunction.expectation_of(Z, SPACE)
    with pytest.raises(DimensionMismatchError):
        differential(f, [1, 0, 0], [0, 1, 0])
    g3 = ObservableFunction.expectation_of(make_hermitian(np.eye(3)), SymplecticSpace(3))
    with pytest.raises(DimensionMismatchError):
        poisson_bracket(f, g3, [1, 0])
