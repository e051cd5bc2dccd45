"""Radial reductions of volumetric integral identities on round spheres.

On rotationally symmetric configurations (geodesic balls, annuli and the
hemisphere over an equatorial S^n inside S^(n+1)) the integral identities
relating Hessian, gradient and boundary data reduce to 1D quadrature:

* dv = omega_n sin(r)^n dr against the polar radius,
* Laplacian of a radial g:   g'' + n cot(r) g',
* squared Hessian of radial g:   g''^2 + n (g' cot r)^2.

The hemisphere case additionally separates a degree-1 equatorial
eigenfunction, leaving the radial factor ODE
F'' + n cot(t) F' - (n / sin^2 t) F = 0 with the regular branch F ~ t.

Every `verify_*` function computes both sides of its identity or
inequality with independent numerics (quadrature, finite differences,
or an ODE solve) and reports the gap or slack.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .constants import sphere_volume
from .quadrature import integrate

__all__ = [
    "RadialProfile", "PROFILES", "IdentityReport", "InequalityReport",
    "HemisphereExtension", "ChainReport",
    "ball_volume_element", "radial_harmonic_derivative",
    "verify_bochner_radial", "verify_reilly_radial",
    "verify_interior_gradient_radial", "solve_hemisphere_extension",
    "verify_choiwang_chain_hemisphere", "verify_collar_trace_hemisphere",
]


@dataclass(frozen=True)
class RadialProfile:
    """C^2 radial function with closed-form derivatives."""
    name: str
    f: callable
    fp: callable
    fpp: callable


PROFILES = {
    "cos": RadialProfile("cos", np.cos, lambda r: -np.sin(r),
                         lambda r: -np.cos(r)),
    "r2": RadialProfile("r2", lambda r: r ** 2, lambda r: 2.0 * r,
                        lambda r: 2.0 * np.ones_like(np.asarray(r, dtype=float))),
    "r4": RadialProfile("r4", lambda r: r ** 4, lambda r: 4.0 * r ** 3,
                        lambda r: 12.0 * r ** 2),
    "gauss": RadialProfile("gauss", lambda r: np.exp(-r ** 2),
                           lambda r: -2.0 * r * np.exp(-r ** 2),
                           lambda r: (4.0 * r ** 2 - 2.0) * np.exp(-r ** 2)),
    "lorentz": RadialProfile("lorentz", lambda r: 1.0 / (1.0 + r ** 2),
                             lambda r: -2.0 * r / (1.0 + r ** 2) ** 2,
                             lambda r: (6.0 * r ** 2 - 2.0) / (1.0 + r ** 2) ** 3),
    "sin2": RadialProfile("sin2", lambda r: np.sin(r) ** 2,
                          lambda r: np.sin(2.0 * r),
                          lambda r: 2.0 * np.cos(2.0 * r)),
}


@dataclass(frozen=True)
class IdentityReport:
    name: str
    lhs: float
    rhs: float
    gap: float          # |lhs - rhs|
    tol: float
    passed: bool
    extras: dict = field(default_factory=dict)


@dataclass(frozen=True)
class InequalityReport:
    """Record of `lhs <= rhs`; slack = rhs - lhs (>= -tol to pass)."""
    name: str
    lhs: float
    rhs: float
    slack: float
    tol: float
    passed: bool
    extras: dict = field(default_factory=dict)


def _check_dim(n):
    if not float(n).is_integer() or n < 2:
        raise ValueError(f"dimension n must be an integer >= 2, got {n!r}")
    return int(n)


def _quad(f, a, b, tol):
    """Adaptive quadrature with the absolute tolerance scaled by a
    single-rule magnitude estimate (doubles cannot reach 1e-10 absolute
    on integrals of magnitude ~1e4)."""
    if b <= a:
        return 0.0
    rough, _ = integrate(f, a, b, tol=np.inf)
    value, _ = integrate(f, a, b, tol=tol * (1.0 + abs(rough)))
    return value


def ball_volume_element(n, r):
    """Radial volume density omega_n sin(r)^n on geodesic balls of S^(n+1)."""
    n = _check_dim(n)
    r = np.asarray(r, dtype=float)
    if (r < 0).any() or (r >= math.pi).any():
        raise ValueError("polar radius must lie in [0, pi)")
    return sphere_volume(n) * np.sin(r) ** n


def radial_harmonic_derivative(n, r):
    """v'(r) = 1 / sin(r)^n: derivative of the radial harmonic on annuli.

    v'' + n cot r v' = 0 by construction, so any primitive v is harmonic
    away from the poles.
    """
    return np.sin(r) ** (-float(n))


# 7-point central finite-difference stencils, order h^6
_D1 = np.array([-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0]) / 60.0
_D2 = np.array([2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0]) / 180.0


def _fd_derivatives(func, x, h):
    """(f', f'') on grid x by 7-point central differences with step h."""
    offsets = np.arange(-3, 4)
    table = func(x[:, None] + h * offsets[None, :])
    d1 = (table @ _D1) / h
    d2 = (table @ _D2) / h ** 2
    return d1, d2


def verify_bochner_radial(n, r0, r1, grid_points=10**4, fd_step=2e-3):
    """Max pointwise residual of the harmonic-gradient identity
    Delta |grad v|^2 = 2 |Hess v|^2 + 2 n |grad v|^2 on an annulus.

    v is the radial harmonic (v' = sin^-n).  The left side is evaluated
    by finite differences of g = v'^2; the right side in closed form, so
    agreement cross-checks the radial reduction formulas.
    """
    n = _check_dim(n)
    if not (0.0 < r0 < r1 < math.pi):
        raise ValueError("need 0 < r0 < r1 < pi")
    pad = 4.0 * fd_step
    if r0 - pad <= 0 or r1 + pad >= math.pi:
        raise ValueError("annulus too close to the poles for the FD stencil")
    r = np.linspace(r0, r1, grid_points)

    def g(x):
        return radial_harmonic_derivative(n, x) ** 2

    g1, g2 = _fd_derivatives(g, r, fd_step)
    lhs = g2 + n * (np.cos(r) / np.sin(r)) * g1
    vp = radial_harmonic_derivative(n, r)
    vpp = -n * (np.cos(r) / np.sin(r)) * vp
    hess2 = vpp ** 2 + n * (vp * np.cos(r) / np.sin(r)) ** 2
    rhs = 2.0 * hess2 + 2.0 * n * vp ** 2
    return float(np.max(np.abs(lhs - rhs)))


def verify_reilly_radial(n, radius, profile, tol=1e-10):
    """Both sides of the integral Bochner (Reilly) identity on a geodesic
    ball of the given radius, for a radial profile with f'(0) = 0.

    LHS: integral of (Delta f)^2 - |Hess f|^2.
    RHS: Ricci term n * integral of f'^2, plus the boundary term
    n cot(radius) f'(radius)^2 * Area(boundary sphere).  (The boundary
    mean curvature enters through the divergence-form convention
    H = -Delta(distance), under which the ball boundary has H = +n cot R
    toward the center; the sign is fixed by the identity itself.)

    Returns an IdentityReport; pass tolerance 1e-8 * (1 + |LHS|).
    """
    n = _check_dim(n)
    if not (0.0 < radius < math.pi / 2.0):
        raise ValueError("ball radius must lie in (0, pi/2)")
    if abs(float(profile.fp(1e-8))) > 1e-6:
        raise ValueError(f"profile {profile.name} has f'(0) != 0")
    omega = sphere_volume(n)

    def lhs_integrand(r):
        s, c = np.sin(r), np.cos(r)
        fp, fpp = profile.fp(r), profile.fpp(r)
        lap = fpp + n * (c / s) * fp
        hess2 = fpp ** 2 + n * (fp * c / s) ** 2
        return (lap ** 2 - hess2) * omega * s ** n

    def ricci_integrand(r):
        return n * profile.fp(r) ** 2 * omega * np.sin(r) ** n

    lhs = _quad(lhs_integrand, 0.0, radius, tol)
    ricci = _quad(ricci_integrand, 0.0, radius, tol)
    area = omega * math.sin(radius) ** n
    boundary = n * (math.cos(radius) / math.sin(radius)) \
        * float(profile.fp(radius)) ** 2 * area
    rhs = ricci + boundary
    gap = abs(lhs - rhs)
    tol_eff = 1e-8 * (1.0 + abs(lhs))
    return IdentityReport(
        name=f"reilly[{profile.name},n={n},R={radius:g}]",
        lhs=lhs, rhs=rhs, gap=gap, tol=tol_eff, passed=gap <= tol_eff,
        extras={"ricci": ricci, "boundary": boundary})


def verify_interior_gradient_radial(n, r0, r1, t, tol=1e-10):
    """Interior gradient bound for the radial harmonic on an annulus:

        int_{shrunk annulus} |grad v|^2
            <= t^-2/(n-1) * int_{annulus} |Hess v|^2

    where the shrunk annulus retreats 2t from both boundary spheres.
    Requires 2t < (r1 - r0)/2.
    """
    n = _check_dim(n)
    if not (0.0 < r0 < r1 < math.pi):
        raise ValueError("need 0 < r0 < r1 < pi")
    if not (0.0 < 2.0 * t < (r1 - r0) / 2.0):
        raise ValueError("need 0 < 2t < (r1 - r0)/2")
    omega = sphere_volume(n)

    def grad_integrand(r):
        return radial_harmonic_derivative(n, r) ** 2 * omega * np.sin(r) ** n

    def hess_integrand(r):
        s, c = np.sin(r), np.cos(r)
        vp = radial_harmonic_derivative(n, r)
        vpp = -n * (c / s) * vp
        return (vpp ** 2 + n * (vp * c / s) ** 2) * omega * s ** n

    lhs = _quad(grad_integrand, r0 + 2.0 * t, r1 - 2.0 * t, tol)
    hess = _quad(hess_integrand, r0, r1, tol)
    rhs = hess / ((n - 1) * t ** 2)
    slack = rhs - lhs
    tol_eff = 1e-10 * (1.0 + abs(rhs))
    return InequalityReport(
        name=f"interior-gradient[n={n},({r0:g},{r1:g}),t={t:g}]",
        lhs=lhs, rhs=rhs, slack=slack, tol=tol_eff,
        passed=slack >= -tol_eff,
        extras={"ratio": lhs / rhs if rhs > 0 else math.inf})


# ---------------------------------------------------------------------------
# hemisphere: harmonic extension of a degree-1 equatorial eigenfunction

@dataclass
class HemisphereExtension:
    """Radial factor of the harmonic extension, normalized to F(pi/2) = 1.

    F solves F'' + n cot(t) F' - (n / sin^2 t) F = 0 on (0, pi/2] with the
    regular behavior F ~ c t at the pole (indicial exponents 1 and -n).
    Internally the even regular factor G = F / sin(t) is used
    (G'' + (n+2) cot(t) G' - (n+1) G = 0, G(0) finite): near the pole G
    is evaluated from its Frobenius series, away from it from the ODE
    integration started on series data.  This keeps evaluation errors
    near the pole from being amplified by the 1/sin^2 coefficient of the
    F equation.  Callables accept arrays.
    """
    n: int
    theta0: float
    _sol: object        # dense solution for (G, G') on [theta0, pi/2 + eps]
    _scale: float
    _coeffs: np.ndarray  # series G = sum c_m z^m, z = sin^2(theta/2)

    def _series_pair(self, theta):
        """(G, dG/dtheta) from the regular series in z = sin^2(theta/2)."""
        z = np.sin(0.5 * theta) ** 2
        powers = z[..., None] ** np.arange(len(self._coeffs))
        g = powers @ self._coeffs
        dg_dz = powers[..., :-1] @ (self._coeffs[1:]
                                    * np.arange(1, len(self._coeffs)))
        return g, dg_dz * 0.5 * np.sin(theta)

    def _g_pair(self, theta):
        theta = np.asarray(theta, dtype=float)
        g = np.empty_like(theta)
        gp = np.empty_like(theta)
        small = theta < self.theta0
        if small.any():
            g[small], gp[small] = self._series_pair(theta[small])
        if (~small).any():
            vals = self._sol(theta[~small])
            g[~small] = vals[0]
            gp[~small] = vals[1]
        return g, gp

    def f(self, theta):
        theta = np.asarray(theta, dtype=float)
        g, _ = self._g_pair(theta)
        out = self._scale * np.sin(theta) * g
        return out if out.ndim else float(out)

    def fp(self, theta):
        theta = np.asarray(theta, dtype=float)
        g, gp = self._g_pair(theta)
        out = self._scale * (np.cos(theta) * g + np.sin(theta) * gp)
        return out if out.ndim else float(out)

    def fpp(self, theta):
        """F'' = -sin G + 2 cos G' + sin G'' with G'' from the G equation."""
        theta = np.asarray(theta, dtype=float)
        g, gp = self._g_pair(theta)
        s, c = np.sin(theta), np.cos(theta)
        gpp = (self.n + 1.0) * g - (self.n + 2.0) * (c / s) * gp
        out = self._scale * (-s * g + 2.0 * c * gp + s * gpp)
        return out if out.ndim else float(out)

    @property
    def boundary_derivative(self):
        """Outward normal derivative F'(pi/2) at the equator (positive)."""
        return float(self.fp(math.pi / 2.0))

    def residual(self, theta_grid, fd_step=4e-3):
        """Plug-back ODE residual with F'' from finite differences of F.

        The integration domain extends a little past pi/2 so the stencil
        stays inside it on the whole grid [0.01, pi/2].
        """
        th = np.asarray(theta_grid, dtype=float)
        _, d2 = _fd_derivatives(self.f, th, fd_step)
        s, c = np.sin(th), np.cos(th)
        return np.abs(d2 + self.n * (c / s) * self.fp(th)
                      - (self.n / s ** 2) * self.f(th))


def _regular_series_coeffs(n, terms=40):
    """Coefficients of the regular branch G = sum c_m z^m, z = sin^2(t/2).

    Substituting z into the G equation turns it into a hypergeometric-type
    recurrence c_{m+1} = c_m (m + n + 1) / (m + (n + 3)/2), c_0 = 1.
    For z <= sin^2(0.1) the truncation at 40 terms is far below 1e-16.
    """
    c = np.empty(terms)
    c[0] = 1.0
    for m in range(terms - 1):
        c[m + 1] = c[m] * (m + n + 1.0) / (m + (n + 3.0) / 2.0)
    return c


def solve_hemisphere_extension(n, theta0=0.05, rtol=1e-12, atol=1e-14,
                               method="DOP853"):
    """Radial factor of the hemisphere harmonic extension, F(pi/2) = 1.

    The regular branch (F ~ t at the pole) is pinned by its convergent
    series up to theta0; from there the ODE is integrated with adaptive
    high-order stepping.  The series region is what keeps the plug-back
    residual below 1e-8 even at theta = 0.01, where the equation's
    1/sin^2 coefficient amplifies any evaluation error ~2e4 times.
    """
    n = _check_dim(n)
    coeffs = _regular_series_coeffs(n)

    def rhs(t, y):
        g, gp = y
        return [gp, (n + 1.0) * g - (n + 2.0) * (math.cos(t) / math.sin(t)) * gp]

    ext = HemisphereExtension(n=n, theta0=theta0, _sol=None, _scale=1.0,
                              _coeffs=coeffs)
    y0 = list(ext._series_pair(np.asarray(theta0)))
    # integrate a touch past pi/2 so residual stencils stay in-domain
    sol = solve_ivp(rhs, (theta0, math.pi / 2.0 + 0.02), y0, method=method,
                    rtol=rtol, atol=atol, max_step=0.02, dense_output=True)
    if not sol.success:
        raise RuntimeError(f"hemisphere ODE integration failed: {sol.message}")
    ext._sol = sol.sol
    ext._scale = 1.0 / float(sol.sol(math.pi / 2.0)[0])
    return ext


@dataclass(frozen=True)
class ChainReport:
    """All hemisphere-instance quantities of the boundary-flux chain.

    With the equator as the separating surface, the first eigenvalue is
    exactly n and the extension is u = F(theta) Y for a unit-norm
    degree-1 eigenfunction Y, so every volumetric integral reduces to 1D.
    """
    n: int
    lambda1: float
    grad_energy: float        # int_{hemisphere} |grad u|^2
    boundary_flux: float      # int_{equator} u_nu u
    hess_energy: float        # int_{hemisphere} |Hess u|^2
    surface_gradient: float   # int_{equator} |grad u|^2 (ambient gradient)
    flux_identity: IdentityReport       # flux == grad_energy
    reilly_inequality: InequalityReport  # -hess >= n grad - 2 lam1 flux
    gap_inequality: InequalityReport     # 2(lam1 - n/2) grad >= hess
    trace_inequality: InequalityReport   # surface grad >= sqrt(2n) grad
    sharp_trace_gap: float    # surface_gradient - (lambda1 + grad_energy^2)

    @property
    def all_passed(self):
        return (self.flux_identity.passed and self.reilly_inequality.passed
                and self.gap_inequality.passed and self.trace_inequality.passed)


def verify_choiwang_chain_hemisphere(n, tol=1e-8, quad_tol=1e-10):
    """Evaluate the whole boundary-flux chain on the hemisphere instance.

    The flux identity must hold to ~quadrature accuracy; the three
    inequalities must hold with slack >= -tol * scale.  On this instance
    the Hessian energy equals n times the gradient energy exactly, so
    the first two inequalities are tight (slack ~ 0) and the Hessian
    energy itself is the strictly positive dropped term.
    """
    n = _check_dim(n)
    ext = solve_hemisphere_extension(n)
    lam1 = float(n)

    def grad_integrand(th):
        s = np.sin(th)
        return (ext.fp(th) ** 2 + n * ext.f(th) ** 2 / s ** 2) * s ** n

    def hess_integrand(th):
        s, c = np.sin(th), np.cos(th)
        f, fp, fpp = ext.f(th), ext.fp(th), ext.fpp(th)
        mixed = (2.0 * n / s ** 2) * (fp - (c / s) * f) ** 2
        fiber = n * ((f - c * s * fp) / s ** 2) ** 2
        return (fpp ** 2 + mixed + fiber) * s ** n

    grad_energy = _quad(grad_integrand, 0.0, math.pi / 2.0, quad_tol)
    hess_energy = _quad(hess_integrand, 0.0, math.pi / 2.0, quad_tol)
    flux = ext.boundary_derivative * 1.0   # F(pi/2) = 1, ||Y||_2 = 1
    surface_gradient = ext.boundary_derivative ** 2 + n

    gap2 = abs(flux - grad_energy)
    tol2 = tol * (1.0 + abs(flux))
    flux_identity = IdentityReport(
        name=f"flux-identity[n={n}]", lhs=flux, rhs=grad_energy,
        gap=gap2, tol=tol2, passed=gap2 <= tol2)

    lhs3 = n * grad_energy - 2.0 * lam1 * flux
    rhs3 = -hess_energy
    slack3 = rhs3 - lhs3
    tol3 = tol * (1.0 + abs(rhs3))
    reilly_ineq = InequalityReport(
        name=f"reilly-boundary[n={n}]", lhs=lhs3, rhs=rhs3, slack=slack3,
        tol=tol3, passed=slack3 >= -tol3)

    lhs4 = hess_energy
    rhs4 = 2.0 * (lam1 - n / 2.0) * grad_energy
    slack4 = rhs4 - lhs4
    tol4 = tol * (1.0 + abs(rhs4))
    gap_ineq = InequalityReport(
        name=f"eigen-gap[n={n}]", lhs=lhs4, rhs=rhs4, slack=slack4,
        tol=tol4, passed=slack4 >= -tol4 and hess_energy > 0.0,
        extras={"dropped_term": hess_energy})

    lhs20 = math.sqrt(2.0 * n) * grad_energy
    slack20 = surface_gradient - lhs20
    tol20 = tol * (1.0 + abs(surface_gradient))
    trace_ineq = InequalityReport(
        name=f"boundary-trace[n={n}]", lhs=lhs20, rhs=surface_gradient,
        slack=slack20, tol=tol20, passed=slack20 >= -tol20,
        extras={"sharp_rhs": lam1 + grad_energy ** 2})

    return ChainReport(
        n=n, lambda1=lam1, grad_energy=grad_energy, boundary_flux=flux,
        hess_energy=hess_energy, surface_gradient=surface_gradient,
        flux_identity=flux_identity, reilly_inequality=reilly_ineq,
        gap_inequality=gap_ineq, trace_inequality=trace_ineq,
        sharp_trace_gap=surface_gradient - (lam1 + grad_energy ** 2))


def verify_collar_trace_hemisphere(n, t, beta, profile, tol=1e-10):
    """Boundary-gradient collar inequality on the hemisphere:

        int_{equator} |grad v|^2  <=  int_{offset sphere} |grad v|^2
            + (H_max + beta) int_collar |grad v|^2
            + (1/beta) int_collar |Hess v|^2

    for a polar-radial C^2 profile v.  The collar is the band of width t
    inside the equator, and H_max = n tan(t) is the exact maximal mean
    curvature of the offset spheres over the collar (the equator is
    totally geodesic, so the generic curvature-chain bound degenerates
    and the exact value is used instead).
    """
    n = _check_dim(n)
    if not (0.0 < t < math.pi / 2.0):
        raise ValueError("need 0 < t < pi/2")
    if beta <= 0:
        raise ValueError("beta must be positive")
    omega = sphere_volume(n)
    half_pi = math.pi / 2.0
    lhs = omega * float(profile.fp(half_pi)) ** 2
    offset_term = omega * math.cos(t) ** n \
        * float(profile.fp(half_pi - t)) ** 2

    def grad_integrand(th):
        return profile.fp(th) ** 2 * np.sin(th) ** n

    def hess_integrand(th):
        s, c = np.sin(th), np.cos(th)
        fp, fpp = profile.fp(th), profile.fpp(th)
        return (fpp ** 2 + n * (fp * c / s) ** 2) * s ** n

    collar_grad = _quad(grad_integrand, half_pi - t, half_pi, tol)
    collar_hess = _quad(hess_integrand, half_pi - t, half_pi, tol)
    h_max = n * math.tan(t)
    rhs = offset_term + (h_max + beta) * omega * collar_grad \
        + omega * collar_hess / beta
    slack = rhs - lhs
    tol_eff = 1e-10 * (1.0 + abs(rhs))
    return InequalityReport(
        name=f"collar-trace[{profile.name},n={n},t={t:g},beta={beta:g}]",
        lhs=lhs, rhs=rhs, slack=slack, tol=tol_eff, passed=slack >= -tol_eff,
        extras={"offset_term": offset_term, "h_max": h_max,
                "collar_grad": omega * collar_grad,
                "collar_hess": omega * collar_hess})
