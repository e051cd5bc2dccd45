"""Pointwise geometry of parallel (offset) hypersurfaces in round spheres.

Conventions used throughout the package:

* points of S^(n+1) are unit vectors in R^(n+2);
* a surface normal X at p is a unit vector tangent to the sphere
  (X . p = 0) and normal to the surface;
* principal curvatures are taken with respect to the shape operator
  S(V) = -D_V X, so a geodesic sphere of radius r carries kappa = cot(r)
  with respect to its center-pointing normal.  Each mesh generator
  documents its normal choice.

Offsetting by a signed distance t moves p to cos(t) p + sin(t) X and
transports curvatures by the tangent-addition rule
kappa -> (kappa + tan t) / (1 - kappa tan t).
"""

import math

import numpy as np

from .quadrature import integrate

__all__ = [
    "HorizonError",
    "norm_A", "mean_curvature", "kappa_max", "is_minimal", "is_mean_convex",
    "normal_geodesic_point", "curvature_transport", "embeddedness_horizon",
    "offset_mean_curvature", "offset_mean_curvature_bound", "tube_volume",
]

_ORTHO_TOL = 1e-12


class HorizonError(ValueError):
    """Offset distance at or beyond the curvature singularity.

    `critical_t` is the signed distance at which the first principal
    curvature blows up.
    """

    def __init__(self, message, critical_t):
        super().__init__(message)
        self.critical_t = critical_t


# ---------------------------------------------------------------------------
# principal-curvature helpers (kappas are plain 1D float arrays)

def norm_A(kappas):
    """Length of the second fundamental form, sqrt(sum kappa_i^2)."""
    return float(np.linalg.norm(np.asarray(kappas, dtype=float)))


def mean_curvature(kappas):
    """Mean curvature H = sum of principal curvatures."""
    return float(np.sum(np.asarray(kappas, dtype=float)))


def kappa_max(kappas):
    """Largest absolute principal curvature."""
    return float(np.max(np.abs(np.asarray(kappas, dtype=float))))


def is_minimal(kappas, tol=1e-12):
    return abs(mean_curvature(kappas)) <= tol


def is_mean_convex(kappas, tol=1e-12):
    return mean_curvature(kappas) >= -tol


# ---------------------------------------------------------------------------

def normal_geodesic_point(p, x, t):
    """Point at signed geodesic distance t from p along the unit normal x.

    Closed form on the round sphere: cos(t) p + sin(t) x.  Requires p, x
    to be an orthonormal pair.
    """
    p = np.asarray(p, dtype=float)
    x = np.asarray(x, dtype=float)
    if abs(np.dot(p, p) - 1.0) > _ORTHO_TOL:
        raise ValueError("base point is not a unit vector")
    if abs(np.dot(x, x) - 1.0) > _ORTHO_TOL:
        raise ValueError("normal is not a unit vector")
    if abs(np.dot(p, x)) > _ORTHO_TOL:
        raise ValueError("normal is not orthogonal to the base point")
    return math.cos(t) * p + math.sin(t) * x


def _critical_t(kappa):
    """Offset distance at which a single curvature kappa becomes singular."""
    if kappa > 0:
        return math.atan(1.0 / kappa)
    if kappa < 0:
        return math.atan(1.0 / kappa)   # negative: singularity on the t<0 side
    return math.inf


def curvature_transport(kappa, t):
    """Principal curvature of the offset surface at signed distance t.

    (kappa + tan t) / (1 - kappa tan t), i.e. tan(arctan(kappa) + t).
    Raises HorizonError at or beyond the singular distance arctan(1/kappa).
    """
    if abs(t) >= math.pi / 2.0:
        raise HorizonError("offset distance must satisfy |t| < pi/2",
                           critical_t=math.copysign(math.pi / 2.0, t))
    tc = _critical_t(kappa)
    if kappa > 0 and t >= tc:
        raise HorizonError(
            f"offset t={t} at or beyond curvature singularity t={tc}",
            critical_t=tc)
    if kappa < 0 and t <= tc:
        raise HorizonError(
            f"offset t={t} at or beyond curvature singularity t={tc}",
            critical_t=tc)
    tt = math.tan(t)
    return (kappa + tt) / (1.0 - kappa * tt)


def embeddedness_horizon(kappas):
    """arctan(1 / max_i |kappa_i|): guaranteed smooth-offset range.

    Returns +inf for a totally geodesic curvature set (all kappas zero).
    """
    km = kappa_max(kappas)
    if km == 0.0:
        return math.inf
    return math.atan(1.0 / km)


def offset_mean_curvature(kappas, t):
    """Mean curvature of the offset at distance t: sum of transported kappas.

    Requires |t| below the embeddedness horizon of the curvature set.
    For a minimal set this equals sum (1 + kappa^2) tan t / (1 - kappa tan t).
    """
    kappas = np.asarray(kappas, dtype=float)
    hz = embeddedness_horizon(kappas)
    if abs(t) >= hz:
        raise HorizonError(
            f"|t|={abs(t)} is not below the embeddedness horizon {hz}",
            critical_t=math.copysign(hz, t))
    return float(sum(curvature_transport(float(k), t) for k in kappas))


def offset_mean_curvature_bound(n, lam, eps):
    """Upper bound lam*eps/(lam-eps) * (n/lam^2 + 1) for the offset mean
    curvature of any minimal curvature set with ||A|| <= lam, valid for
    offsets up to d_eps = arctan(eps/lam^2).  Requires 0 < eps <= lam/2.
    """
    if not float(n).is_integer() or n < 2:
        raise ValueError("n must be an integer >= 2")
    if lam <= 0:
        raise ValueError("lam must be positive")
    if not (0 < eps <= lam / 2.0):
        raise ValueError(f"need 0 < eps <= lam/2, got eps={eps}, lam={lam}")
    return lam * eps / (lam - eps) * (n / lam ** 2 + 1.0)


def tube_volume(entries, r, side=+1, tol=1e-10):
    """Volume swept by offsets out to distance r on one side of a surface.

    `entries` is a sequence of (weight, kappas) pairs: quadrature weights
    (areas) with the principal curvatures at the sample.  side=+1 sweeps
    along the stored normal direction (factors 1 - kappa tan t), side=-1
    the opposite side (factors 1 + kappa tan t).  r must not exceed the
    embeddedness horizon of any entry.

    The per-entry inner integral is cos(t)^n * prod(1 -/+ kappa_i tan t);
    identical curvature rows are integrated once.  Summation order is
    fixed and compensated, so the result is evaluation-order independent.
    """
    if side not in (+1, -1):
        raise ValueError("side must be +1 or -1")
    if r < 0:
        raise ValueError("sweep distance r must be nonnegative")
    if r == 0 or not entries:
        return 0.0
    weights = []
    kap_rows = []
    for w, kap in entries:
        if w < 0:
            raise ValueError("weights must be nonnegative")
        weights.append(float(w))
        kap_rows.append(np.asarray(kap, dtype=float))
    horizon = min(embeddedness_horizon(kap) for kap in kap_rows)
    if r > horizon * (1.0 + 1e-14):
        raise ValueError(
            f"sweep distance r={r} exceeds the embeddedness horizon {horizon}")

    n = len(kap_rows[0])
    cache = {}
    per_entry = []
    for kap in kap_rows:
        key = tuple(np.round(kap, 14))
        if key not in cache:
            signed = -float(side) * kap

            def integrand(t, signed=signed):
                t = np.asarray(t, dtype=float)
                ct, st = np.cos(t), np.sin(t)
                prod = np.ones_like(t)
                for s in signed:
                    prod = prod * (ct + s * st)
                return ct ** (n - len(signed)) * prod

            # cos^n * prod(1 + s tan t) written as cos^(n-k) prod(cos + s sin)
            cache[key], _ = integrate(integrand, 0.0, r, tol=tol)
        per_entry.append(cache[key])
    return math.fsum(w * v for w, v in zip(weights, per_entry))
