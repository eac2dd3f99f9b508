import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bergtoep import Domain, build_quadrature, integrate
from bergtoep.bergman import (BasisIndexSet, CoeffVector, analytic_decompose, basis_norm_sq,
                              eval_basis, project_basis, project_kernel)
from bergtoep.symbols import Symbol, Term, parse_symbol

from conftest import area_integral, quad_radial

DISK, ANNULUS = Domain.disk(), Domain.annulus(0.5)


def test_index_sets():
    d = BasisIndexSet(DISK, 4)
    assert list(d.indices) == [0, 1, 2, 3] and d.offset(2) == 2
    a = BasisIndexSet(ANNULUS, 2)
    assert list(a.indices) == [-2, -1, 0, 1, 2] and a.offset(-2) == 0 and a.offset(1) == 3
    with pytest.raises(IndexError):
        d.offset(-1)


def test_basis_norm_examples():
    assert basis_norm_sq(DISK, 0) == pytest.approx(math.pi, abs=1e-15)
    assert basis_norm_sq(DISK, 3) == pytest.approx(2 * math.pi * quad_radial(lambda r: r ** 7, 0, 1),
                                                   rel=1e-14)
    assert basis_norm_sq(ANNULUS, -1) == pytest.approx(2 * math.pi * math.log(2), rel=1e-14)
    assert basis_norm_sq(ANNULUS, -1) == pytest.approx(4.355172, abs=1e-6)
    with pytest.raises(ValueError):
        basis_norm_sq(DISK, -1)


@pytest.mark.parametrize("n", [-6, -2, 0, 1, 5])
def test_annulus_norms_against_quadrature(n):
    want = 2 * math.pi * quad_radial(lambda r: r ** (2 * n + 1), 0.5, 1)
    assert basis_norm_sq(ANNULUS, n) == pytest.approx(want, rel=1e-12)


def test_eval_basis_examples():
    assert eval_basis(DISK, 0, 0.3j) == pytest.approx(1 / math.sqrt(math.pi))
    assert eval_basis(DISK, 0, 0.3j) == pytest.approx(0.5641896, abs=1e-7)
    assert eval_basis(DISK, 1, 0.5) == pytest.approx(0.3989423, abs=1e-7)
    # (4/3) / sqrt(2 pi ln 2)
    assert eval_basis(ANNULUS, -1, 0.75) == pytest.approx(0.6389046837367041, abs=1e-12)
    with pytest.raises(ValueError):
        eval_basis(DISK, 0, 1.2)
    with pytest.raises(ValueError):
        eval_basis(ANNULUS, 0, 0.1)


@pytest.mark.parametrize("domain", [DISK, ANNULUS])
def test_basis_is_orthonormal(domain):
    rule = build_quadrature(domain, 40, 64)
    idx = BasisIndexSet(domain, 6)
    from bergtoep.bergman import basis_matrix
    E = basis_matrix(idx, rule.points)
    G = (np.conj(E) * rule.weights) @ E.T
    assert np.allclose(G, np.eye(idx.size), atol=1e-12)


def test_project_examples(disk_rule):
    assert np.all(project_basis(DISK, parse_symbol("zbar"), 8).coeffs == 0)
    f = project_basis(DISK, parse_symbol("z*zbar"), 8)
    assert f[0] == pytest.approx(math.sqrt(math.pi) / 2, abs=1e-15)
    assert f[0] == pytest.approx(0.886227, abs=1e-6)
    assert np.all(f.coeffs[1:] == 0)
    g = project_basis(DISK, parse_symbol("z^2*zbar"), 8)
    # (2/3) z = (2/3) ||z|| e_1
    assert g[1] == pytest.approx(2 / 3 * math.sqrt(math.pi / 2), abs=1e-15)
    q = project_basis(DISK, lambda z: z ** 2 * np.conj(z), 8, disk_rule)
    assert np.allclose(q.coeffs, g.coeffs, atol=1e-12)


@pytest.mark.parametrize("m, n", [(m, n) for m in range(5) for n in range(5)])
def test_closed_form_projection_of_monomials(m, n, disk_rule):
    s = Symbol([Term(1, m, n)])
    f = project_basis(DISK, s, 8)
    expected = np.zeros(8, dtype=complex)
    if m >= n:
        expected[m - n] = (m - n + 1) / (m + 1) * math.sqrt(basis_norm_sq(DISK, m - n))
    assert np.allclose(f.coeffs, expected, atol=1e-14)
    q = project_basis(DISK, s.__call__, 8, disk_rule)
    assert np.allclose(q.coeffs, expected, atol=1e-8)


@pytest.mark.parametrize("text", ["zbar", "log(r)*z", "z*zbar^2 + r^0.5", "zbar^3*r^-1.5 + z^2"])
def test_annulus_projection_paths_agree(text, annulus_rule):
    s = parse_symbol(text)
    closed = project_basis(ANNULUS, s, 6)
    quad = project_basis(ANNULUS, s.__call__, 6, annulus_rule)
    assert np.allclose(closed.coeffs, quad.coeffs, atol=1e-10)


def test_annulus_projection_against_oracle():
    s = parse_symbol("log(r)*z*zbar^2")
    c = project_basis(ANNULUS, s, 3)[-1]
    want = area_integral(lambda z: np.log(abs(z)) * z * np.conj(z) ** 2 / np.conj(z), 0.5) \
        / math.sqrt(basis_norm_sq(ANNULUS, -1))
    assert abs(c - want) < 1e-10


def test_kernel_projection_examples(disk_rule):
    assert abs(project_kernel(lambda w: w ** 2, [0.3], disk_rule)[0] - 0.09) < 1e-8
    assert abs(project_kernel(np.conj, [0.3], disk_rule)[0]) < 1e-8
    g = parse_symbol("zbar + z^2")
    kv = project_kernel(g, [0.2], disk_rule)[0]
    bv = project_basis(DISK, g, 32)(0.2)
    assert abs(kv - bv) < 1e-6
    with pytest.warns(RuntimeWarning):
        project_kernel(g, [0.97], disk_rule)
    with pytest.raises(ValueError):
        project_kernel(g, [1.0], disk_rule)
    with pytest.raises(ValueError):
        project_kernel(g, [0.7], build_quadrature(ANNULUS, 8, 8))


def test_kernel_and_basis_agree_on_non_polynomial(disk_rule):
    # P(r^0.5 zbar z^2) is not a polynomial; N = 32 truncation still matches inside |z| <= 0.9
    g = parse_symbol("r^0.5*z^2*zbar + zbar^2*z")
    pts = 0.9 * np.exp(1j * np.linspace(0, 5, 7)) * np.linspace(0.2, 1, 7)
    kv = project_kernel(g, pts, disk_rule)
    bv = project_basis(DISK, g, 32)(pts)
    assert np.max(np.abs(kv - bv)) < 1e-6


def test_decompose_examples(disk_rule):
    d = analytic_decompose(DISK, parse_symbol("z^3"), 8, disk_rule)
    assert d.residual_norm < 1e-12
    assert d.f[3] == pytest.approx(math.sqrt(basis_norm_sq(DISK, 3)))
    d = analytic_decompose(DISK, parse_symbol("zbar"), 8, disk_rule)
    assert d.f.norm() == 0
    assert d.residual_norm == pytest.approx(math.sqrt(math.pi / 2), abs=1e-12)
    assert d.residual_norm == pytest.approx(1.253314, abs=1e-6)
    d = analytic_decompose(DISK, parse_symbol("z^2*zbar"), 8, disk_rule)
    assert d.residual_norm ** 2 == pytest.approx(math.pi * (1 / 4 - 2 / 9), abs=1e-12)
    # quadrature oracle for ||z^2 zbar||^2 = pi / 4
    assert integrate(disk_rule, lambda z: np.abs(z) ** 6) == pytest.approx(math.pi / 4, abs=1e-13)
    assert d.u_symbol == parse_symbol("z^2*zbar") - d.f.to_symbol()


term_st = st.builds(
    Term, c=st.complex_numbers(min_magnitude=0.1, max_magnitude=10, allow_nan=False),
    m=st.integers(0, 4), n=st.integers(0, 4),
    alpha=st.sampled_from([0.0, 0.5, 1.0]), p=st.integers(0, 1),
)
symbol_st = st.lists(term_st, min_size=1, max_size=4).map(Symbol)


@settings(max_examples=25, deadline=None)
@given(symbol_st, st.sampled_from([DISK, ANNULUS]))
def test_decomposition_properties(s, domain):
    # log r on the disk needs many radial nodes: Gauss-Legendre converges only algebraically there
    rule = build_quadrature(domain, 256, 32)
    N = 8
    d = analytic_decompose(domain, s, N, rule)
    # residual orthogonal to the retained basis
    idx = BasisIndexSet(domain, N)
    for j in idx.indices:
        ip = integrate(rule, lambda z: d.residual(z) * np.conj(eval_basis(domain, int(j), z)))
        assert abs(ip) < 1e-8
    # Pythagoras
    total = integrate(rule, lambda z: np.abs(s(z)) ** 2).real
    assert total == pytest.approx(d.f.norm() ** 2 + d.residual_norm ** 2, abs=1e-8)
    # idempotence: projecting the realised f returns f
    again = project_basis(domain, d.f.to_symbol(), N)
    assert np.allclose(again.coeffs, d.f.coeffs, atol=1e-10)


def test_coeff_vector_roundtrip_on_annulus():
    idx = BasisIndexSet(ANNULUS, 3)
    v = CoeffVector(idx, np.arange(7) - 3 + 0.5j)
    pts = np.array([0.6, 0.7j, -0.8 + 0.1j])
    assert np.allclose(v.to_symbol()(pts), v(pts), atol=1e-12)
    with pytest.raises(ValueError):
        CoeffVector(idx, np.zeros(4))
