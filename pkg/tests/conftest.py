"""Shared test utilities: independent oracles the estimators are checked
against. These deliberately avoid the library's own code paths.
"""

import math

import numpy as np
import pytest


def benettin_lyapunov(n=30000, dt=0.01, sigma=10.0, rho=28.0, beta=8.0 / 3.0,
                      transient=2000):
    """Largest Lyapunov exponent of the Lorenz system by the tangent-space
    (Benettin) method: integrate the variational equation alongside the flow
    with RK4 and average the log growth of the tangent vector. This is the
    reference the Wolf estimator is judged against.
    """
    def rhs(u):
        x, y, z = u
        return np.array([sigma * (y - x), x * (rho - z) - y, x * y - beta * z])

    def jac(u):
        x, y, z = u
        return np.array([[-sigma, sigma, 0.0],
                         [rho - z, -1.0, -x],
                         [y, x, -beta]])

    def step(u):
        k1 = rhs(u)
        k2 = rhs(u + 0.5 * dt * k1)
        k3 = rhs(u + 0.5 * dt * k2)
        k4 = rhs(u + dt * k3)
        return u + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)

    u = np.array([1.0, 1.0, 1.0])
    for _ in range(transient):
        u = step(u)

    v = np.array([1.0, 0.0, 0.0])
    total = 0.0
    for _ in range(n):
        f1 = rhs(u)
        f2 = rhs(u + 0.5 * dt * f1)
        f3 = rhs(u + 0.5 * dt * f2)
        j1 = jac(u) @ v
        j2 = jac(u + 0.5 * dt * f1) @ (v + 0.5 * dt * j1)
        j3 = jac(u + 0.5 * dt * f2) @ (v + 0.5 * dt * j2)
        j4 = jac(u + dt * f3) @ (v + dt * j3)
        v = v + (dt / 6.0) * (j1 + 2 * j2 + 2 * j3 + j4)
        u = step(u)
        nv = np.linalg.norm(v)
        total += math.log(nv)
        v /= nv
    return total / (n * dt)


def logistic_derivative_lyapunov(orbit, r=4.0):
    """Analytic oracle for the logistic map: orbit average of ln|r(1-2x)|."""
    return float(np.mean(np.log(np.abs(r * (1.0 - 2.0 * orbit)))))


def brute_force_pair_fraction(pts, eps, w):
    """O(n^2) reference for the correlation integral: fraction of pairs with
    index gap > w and max-norm distance < eps.
    """
    n = len(pts)
    hits = 0
    total = 0
    for i in range(n):
        for j in range(i + w + 1, n):
            total += 1
            if np.max(np.abs(pts[i] - pts[j])) < eps:
                hits += 1
    if total == 0:
        raise ValueError("no admissible pairs")
    return hits / total, hits, total


def box_counting_dimension(pts, eps_coarse=0.1, eps_fine=0.05):
    """Coarse two-scale box-counting dimension of a normalized point cloud:
    slope of log N(eps) between two scales. Crude, but independent of the
    pair-counting machinery.
    """
    def n_boxes(eps):
        idx = np.floor(pts / eps).astype(np.int64)
        return len({tuple(row) for row in idx})

    return math.log(n_boxes(eps_fine) / n_boxes(eps_coarse)) / math.log(eps_coarse / eps_fine)


@pytest.fixture(scope="session")
def benettin_reference():
    """Session-cached Benettin exponent for the standard Lorenz parameters."""
    return benettin_lyapunov(n=30000, dt=0.01)
