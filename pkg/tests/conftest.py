import numpy as np
import pytest

from stable_border.monomial import parse_term

LINE = [(-1, -5), (0, -2), (1, 1), (2, 4.1)]
LINE_ALIGNED = [(-1, -5), (0, -2), (1, 1), (2, 4)]
ELLIPSE = [(-5.07, 0.02), (4.98, 0), (3.05, 8.07), (3.01, -8.02), (-3.02, 7.99),
           (-2.98, -8), (4.01, 5.94), (3.98, -6.06), (-3.92, 6.03), (-4.01, -6)]
HYPERBOLA = [(1, 6), (2, 3), (2.449, 2.449), (3, 2), (6, 1)]


def terms(text, n=2):
    """``"1 y x y^2"`` -> list of PowerProduct."""
    return [parse_term(t, n) for t in text.split()]


def circle_points(s, seed, noise=0.01):
    """``s`` points at equal angles on the unit circle, each coordinate
    moved by less than ``noise``."""
    rng = np.random.default_rng(seed)
    theta = 2 * np.pi * np.arange(s) / s
    return np.column_stack([np.cos(theta), np.sin(theta)]) + rng.uniform(-noise, noise, (s, 2)) * 0.999


_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion."""
    def record(name, passed, detail=""):
        _ACCEPTANCE_LINES.append(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}".rstrip())
        print(_ACCEPTANCE_LINES[-1])
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_ls_instance(rng, max_s=8, max_n=3, max_cond=1e3):
    """Random first-order least-squares data: M0 (s x k) with k <= s, M1,
    v0, v1, drawn until M0 is well conditioned."""
    from stable_border.folinalg import FirstOrderMatrix, FirstOrderVector

    while True:
        s = int(rng.integers(2, max_s + 1))
        n = int(rng.integers(1, max_n + 1))
        k = int(rng.integers(1, s + 1))
        M0 = rng.normal(size=(s, k))
        if np.linalg.cond(M0) < max_cond:
            break
    ns = n * s
    M = FirstOrderMatrix(M0, rng.normal(size=(s, k, ns)))
    v = FirstOrderVector(rng.normal(size=s), rng.normal(size=(s, ns)))
    return M, v


def ls_truncation_errors(M, v, res, e):
    """Distance between the exact least-squares solution/residual at
    ``M0 + M1 e`` and the first-order prediction."""
    A = M.at(e)
    b = v.v0 + v.v1 @ e
    x = np.linalg.lstsq(A, b, rcond=None)[0]
    rho = b - A @ x
    err_x = np.linalg.norm(x - (res.alpha0 + res.alpha1 @ e))
    err_r = np.linalg.norm(rho - (res.rho0 + res.rho1 @ e))
    return err_x, err_r
