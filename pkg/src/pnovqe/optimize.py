"""BFGS minimizer with strong-Wolfe line search, and the VQE driver."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ansatz import Ansatz
from .operators import QubitOperator
from .simulator import ansatz_expectation, gradient as ansatz_gradient

_C1 = 1e-4
_C2 = 0.9


@dataclass(frozen=True)
class OptimizationResult:
    x: np.ndarray
    fun: float
    grad_norm: float
    iterations: int
    n_function_evals: int
    n_gradient_evals: int
    converged: bool
    trajectory: tuple            # per-iteration (energy, grad inf-norm)
    metadata: dict = field(default_factory=dict, compare=False)


class _Counted:
    def __init__(self, fn, what):
        self.fn = fn
        self.what = what
        self.count = 0

    def __call__(self, x):
        self.count += 1
        value = self.fn(x)
        if not np.all(np.isfinite(value)):
            raise RuntimeError(
                f"non-finite {self.what} at theta = {np.asarray(x).tolist()}"
            )
        return value


def minimize(objective, grad, x0, grad_tol: float = 1e-6, max_iter: int = 500) -> OptimizationResult:
    """BFGS with inverse-Hessian updates and a strong-Wolfe line search.

    Exits when the gradient infinity-norm drops below ``grad_tol`` or after
    ``max_iter`` iterations; NaN or Inf in the objective or gradient aborts
    with the offending parameter vector in the message.
    """
    f = _Counted(objective, "objective")
    g = _Counted(grad, "gradient")
    x = np.array(x0, dtype=float)
    n = x.size
    fx = f(x)
    gx = np.asarray(g(x), dtype=float)
    gnorm = float(np.max(np.abs(gx))) if n else 0.0
    trajectory = [(float(fx), gnorm)]
    if gnorm < grad_tol:
        return OptimizationResult(
            x=x, fun=float(fx), grad_norm=gnorm, iterations=0,
            n_function_evals=f.count, n_gradient_evals=g.count,
            converged=True, trajectory=tuple(trajectory),
        )

    h_inv = np.eye(n)
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        direction = -h_inv @ gx
        slope = float(direction @ gx)
        if slope >= 0.0:
            h_inv = np.eye(n)
            direction = -gx
            slope = float(direction @ gx)
            if slope >= 0.0:
                break
        alpha, fx_new, gx_new = _wolfe_line_search(f, g, x, direction, fx, slope)
        if alpha is None:
            break
        step = alpha * direction
        x_new = x + step
        y = gx_new - gx
        sy = float(step @ y)
        if sy > 1e-14 * np.linalg.norm(step) * np.linalg.norm(y):
            rho = 1.0 / sy
            outer = np.outer(step, y)
            h_inv = (
                (np.eye(n) - rho * outer) @ h_inv @ (np.eye(n) - rho * outer.T)
                + rho * np.outer(step, step)
            )
        x, fx, gx = x_new, fx_new, gx_new
        gnorm = float(np.max(np.abs(gx)))
        trajectory.append((float(fx), gnorm))
        if gnorm < grad_tol:
            converged = True
            break

    return OptimizationResult(
        x=x, fun=float(fx), grad_norm=float(np.max(np.abs(gx))) if n else 0.0,
        iterations=iterations,
        n_function_evals=f.count, n_gradient_evals=g.count,
        converged=converged, trajectory=tuple(trajectory),
    )


def _wolfe_line_search(f, g, x, direction, f0, slope0, max_steps: int = 25):
    """Strong Wolfe conditions (c1 = 1e-4, c2 = 0.9), initial step 1."""

    def phi(alpha):
        return f(x + alpha * direction)

    def dphi(alpha):
        grad = np.asarray(g(x + alpha * direction), dtype=float)
        return float(grad @ direction), grad

    alpha_prev, phi_prev = 0.0, f0
    alpha = 1.0
    for i in range(max_steps):
        phi_a = phi(alpha)
        if phi_a > f0 + _C1 * alpha * slope0 or (i > 0 and phi_a >= phi_prev):
            return _zoom(f, g, x, direction, f0, slope0, alpha_prev, phi_prev, alpha)
        d_a, grad_a = dphi(alpha)
        if abs(d_a) <= -_C2 * slope0:
            return alpha, phi_a, grad_a
        if d_a >= 0.0:
            return _zoom(f, g, x, direction, f0, slope0, alpha, phi_a, alpha_prev)
        alpha_prev, phi_prev = alpha, phi_a
        alpha *= 2.0
    return None, None, None


def _zoom(f, g, x, direction, f0, slope0, lo, phi_lo, hi, max_steps: int = 40):
    for _ in range(max_steps):
        alpha = 0.5 * (lo + hi)
        phi_a = f(x + alpha * direction)
        if phi_a > f0 + _C1 * alpha * slope0 or phi_a >= phi_lo:
            hi = alpha
            continue
        grad_a = np.asarray(g(x + alpha * direction), dtype=float)
        d_a = float(grad_a @ direction)
        if abs(d_a) <= -_C2 * slope0:
            return alpha, phi_a, grad_a
        if d_a * (hi - lo) >= 0.0:
            hi = lo
        lo, phi_lo = alpha, phi_a
    # fall back to the best admissible point found
    grad_a = np.asarray(g(x + lo * direction), dtype=float)
    if lo > 0.0:
        return lo, f(x + lo * direction), grad_a
    return None, None, None


def run_vqe(
    hamiltonian: QubitOperator,
    ansatz: Ansatz,
    grad_tol: float = 1e-6,
    max_iter: int = 500,
    gradient_method: str = "adjoint",
    restarts: int = 0,
    restart_scale: float = 0.1,
    seed: int = 0,
) -> OptimizationResult:
    """Minimize <H> over the ansatz parameters, starting from zero.

    Optional random restarts (uniform in +-restart_scale, seeded) rerun the
    minimization and keep the best energy; the restart count is logged in
    the result metadata.
    """
    n = ansatz.n_parameters

    def objective(theta):
        return ansatz_expectation(hamiltonian, ansatz, theta)

    def grad(theta):
        return ansatz_gradient(hamiltonian, ansatz, theta, method=gradient_method)

    if n == 0:
        energy = objective(np.zeros(0))
        return OptimizationResult(
            x=np.zeros(0), fun=energy, grad_norm=0.0, iterations=0,
            n_function_evals=1, n_gradient_evals=0, converged=True,
            trajectory=((energy, 0.0),),
            metadata={"restarts": 0, "gradient_method": gradient_method},
        )

    best = minimize(objective, grad, np.zeros(n), grad_tol=grad_tol, max_iter=max_iter)
    rng = np.random.default_rng(seed)
    for _ in range(restarts):
        theta0 = rng.uniform(-restart_scale, restart_scale, size=n)
        candidate = minimize(objective, grad, theta0, grad_tol=grad_tol, max_iter=max_iter)
        if candidate.fun < best.fun:
            best = candidate
    best.metadata.update(
        {"restarts": restarts, "gradient_method": gradient_method, "grad_tol": grad_tol}
    )
    return best
