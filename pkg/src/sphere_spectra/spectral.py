"""Smallest nonzero generalized eigenpair of a (stiffness, mass) pair.

The stiffness matrix of a closed surface has the constants in its kernel,
so the solver works on the mass-orthogonal complement of the constant
vector: block shift-invert iteration at shift 0, with Jacobi-preconditioned
conjugate-gradient inner solves and explicit deflation of the constant
mode every iteration, followed by a Rayleigh-Ritz projection of the block.

Everything is deterministic for a fixed seed: the start block comes from a
seeded generator and all kernels are single-threaded numpy/LAPACK calls.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

__all__ = ["EigenResult", "ConvergenceError",
           "smallest_nonzero_eig", "rayleigh_quotient"]


class ConvergenceError(RuntimeError):
    """Eigeniteration did not reach the residual tolerance.

    Carries the best eigenvalue estimate, vector and residual so far.
    """

    def __init__(self, message, best_value, best_vector, residual, iterations):
        super().__init__(message)
        self.best_value = best_value
        self.best_vector = best_vector
        self.residual = residual
        self.iterations = iterations


@dataclass
class EigenResult:
    """Smallest nonzero eigenpair with its convergence record.

    `residual` is the mass-weighted relative residual
    ||L x - lam M x||_{M^-1} / (lam ||x||_M).  `cluster` lists all Ritz
    values within 1e-3 relative of lambda1 (eigenvalue multiplicity as
    seen at the discrete level); `values` holds the whole Ritz block.
    """
    lambda1: float
    eigenvector: np.ndarray
    residual: float
    iterations: int
    cluster: list = field(default_factory=list)
    values: list = field(default_factory=list)

    @property
    def multiplicity(self):
        return len(self.cluster)


def _cg(matvec, b, precond, x0, rtol, max_iter, project):
    """Preconditioned CG for the (consistent) singular system L x = b.

    `project` removes the kernel component; applied to the running
    solution and residual to stop roundoff drift into the kernel.
    """
    x = project(x0.copy())
    r = b - matvec(x)
    r = project(r)
    z = precond(r)
    p = z.copy()
    rz = float(r @ z)
    bnorm = float(np.linalg.norm(b))
    if bnorm == 0.0:
        return np.zeros_like(b)
    for k in range(max_iter):
        ap = matvec(p)
        alpha = rz / float(p @ ap)
        x += alpha * p
        r -= alpha * ap
        if k % 50 == 49:
            x = project(x)
            r = project(b - matvec(x))
        if np.linalg.norm(r) <= rtol * bnorm:
            break
        z = precond(r)
        rz_new = float(r @ z)
        p = z + (rz_new / rz) * p
        rz = rz_new
    return project(x)


def smallest_nonzero_eig(pair, tol=1e-8, max_iter=10000, block=6, seed=0):
    """Smallest nonzero eigenvalue of  stiffness x = lam mass x.

    pair: LaplacePair (or anything with .stiffness CSR and .mass vector).
    Returns an EigenResult whose eigenvector is M-orthogonal to constants
    and M-normalized.  Raises ConvergenceError when the residual target
    is not met within max_iter outer iterations.
    """
    if tol < 1e-12:
        raise ValueError("tol below 1e-12 is not resolvable in double precision")
    stiff = pair.stiffness
    mass = np.asarray(pair.mass, dtype=float)
    n = mass.shape[0]
    block = min(block, n - 1)

    # M-normalized constant (kernel) vector
    e_const = np.ones(n) / np.sqrt(mass.sum())

    def m_orth(x):
        return x - e_const * float((mass * e_const) @ x)

    def project_kernel(x):
        # Euclidean projection off the stiffness kernel, for CG iterates
        return x - x.mean()

    diag = stiff.diagonal()
    diag = np.where(diag > 1e-300, diag, 1.0)

    def precond(r):
        return r / diag

    rng = np.random.default_rng(seed)
    x_blk = rng.standard_normal((n, block))
    x_blk = np.column_stack([m_orth(x_blk[:, j]) for j in range(block)])
    y_blk = np.zeros_like(x_blk)
    theta = np.full(block, np.inf)
    best = (np.inf, None, np.inf)
    inner_rtol = 1e-6

    for it in range(1, max_iter + 1):
        for j in range(block):
            rhs = mass * x_blk[:, j]
            y_blk[:, j] = _cg(stiff.dot, rhs, precond, y_blk[:, j],
                              rtol=inner_rtol, max_iter=20 * int(np.sqrt(n)) + 200,
                              project=project_kernel)
            y_blk[:, j] = m_orth(y_blk[:, j])
        # Rayleigh-Ritz on the block
        a_small = y_blk.T @ (stiff @ y_blk)
        b_small = y_blk.T @ (mass[:, None] * y_blk)
        a_small = 0.5 * (a_small + a_small.T)
        b_small = 0.5 * (b_small + b_small.T)
        theta, w_small = scipy.linalg.eigh(a_small, b_small)
        x_blk = y_blk @ w_small
        norms = np.sqrt(np.einsum("ij,ij->j", x_blk, mass[:, None] * x_blk))
        x_blk /= norms[None, :]

        lam = float(theta[0])
        resid = stiff @ x_blk[:, 0] - lam * (mass * x_blk[:, 0])
        res = float(np.sqrt((resid ** 2 / mass).sum())) / max(lam, 1e-300)
        if res < best[2]:
            best = (lam, x_blk[:, 0].copy(), res)
        if res <= tol:
            cluster = [float(t) for t in theta
                       if abs(t - lam) <= 1e-3 * max(abs(lam), 1e-300)]
            vec = m_orth(x_blk[:, 0])
            return EigenResult(lambda1=lam, eigenvector=vec, residual=res,
                               iterations=it, cluster=cluster,
                               values=[float(t) for t in theta])
        inner_rtol = max(1e-12, min(1e-6, 0.01 * res))
    raise ConvergenceError(
        f"no convergence to tol={tol} within {max_iter} iterations "
        f"(best residual {best[2]:.3e})",
        best_value=best[0], best_vector=best[1], residual=best[2],
        iterations=max_iter)


def rayleigh_quotient(x, pair):
    """Rayleigh quotient (x L x) / (x M x) after removing the constant mode.

    Raises ValueError when the deflated vector has zero mass norm (e.g.
    for constant input).
    """
    x = np.asarray(x, dtype=float)
    mass = np.asarray(pair.mass, dtype=float)
    before = float(x @ (mass * x))
    e_const = np.ones(len(x)) / np.sqrt(mass.sum())
    x = x - e_const * float((mass * e_const) @ x)
    xmx = float(x @ (mass * x))
    if not np.isfinite(xmx) or xmx <= 1e-24 * max(before, 1e-300):
        raise ValueError("vector has zero mass norm after deflation")
    return float(x @ (pair.stiffness @ x)) / xmx
