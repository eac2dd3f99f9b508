"""Independent oracles shared by the test modules.

Nothing here goes through the package's closed forms or its tensor rule:
integrals use mpmath / scipy adaptive quadrature and products use explicit loops.
"""

import math

import mpmath
import numpy as np
import pytest
from scipy import integrate

from bergtoep import Domain, build_quadrature


def quad_radial(f, a, b):
    """1-D integral by tanh-sinh (mpmath); robust to endpoint singularities."""
    with mpmath.workdps(30):
        return float(mpmath.quad(lambda x: f(float(x)), [a, b]))


def area_integral(g, rho=0.0):
    """``int g dA`` over ``rho < r < 1`` with nested adaptive quadrature."""
    def inner(r):
        re = integrate.quad(lambda t: (g(r * np.exp(1j * t))).real, 0, 2 * math.pi,
                            epsabs=1e-13, limit=200)[0]
        im = integrate.quad(lambda t: (g(r * np.exp(1j * t))).imag, 0, 2 * math.pi,
                            epsabs=1e-13, limit=200)[0]
        return re * r, im * r
    re = quad_radial(lambda r: inner(r)[0], rho, 1.0)
    im = quad_radial(lambda r: inner(r)[1], rho, 1.0)
    return complex(re, im)


def oracle_entry(phi, j, k, rho=0.0):
    """``<phi e_k, e_j>`` from scratch: monomial norms and a 2-D adaptive integral."""
    def norm_sq(n):
        return 2 * math.pi * quad_radial(lambda r: r ** (2 * n + 1), rho, 1.0)
    val = area_integral(lambda z: phi(z) * z ** k * np.conj(z) ** j, rho)
    return val / math.sqrt(norm_sq(j) * norm_sq(k))


def loop_matmul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    out = [[0j] * p for _ in range(n)]
    for i in range(n):
        for j in range(p):
            s = 0j
            for l in range(m):
                s += A[i][l] * B[l][j]
            out[i][j] = s
    return out


def shift_matrix(weights, N, step=1):
    """Dense forward weighted shift ``e_k -> weights(k) e_{k+step}`` as nested lists."""
    M = [[0j] * N for _ in range(N)]
    for k in range(N - step):
        M[k + step][k] = weights(k)
    return M


def bergman_shift_weight(k):
    return math.sqrt((k + 1) / (k + 2))


@pytest.fixture(scope="session")
def disk():
    return Domain.disk()


@pytest.fixture(scope="session")
def annulus():
    return Domain.annulus(0.5)


@pytest.fixture(scope="session")
def disk_rule(disk):
    return build_quadrature(disk, 64, 256)


@pytest.fixture(scope="session")
def annulus_rule(annulus):
    return build_quadrature(annulus, 64, 256)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
