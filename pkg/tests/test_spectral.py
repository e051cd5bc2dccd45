import math

import numpy as np
import pytest
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from sphere_spectra.generators import (
    gen_clifford_torus, gen_flat_torus, gen_geodesic_sphere,
)
from sphere_spectra.mesh import LaplacePair, assemble_laplacian
from sphere_spectra.spectral import (
    ConvergenceError, rayleigh_quotient, smallest_nonzero_eig,
)


@pytest.fixture(scope="module")
def clifford_pair():
    return assemble_laplacian(gen_clifford_torus(64, 64))


def test_clifford_lambda1(clifford_pair):
    res = smallest_nonzero_eig(clifford_pair, tol=1e-8)
    assert res.lambda1 == pytest.approx(2.0, rel=0.01)
    assert res.residual <= 1e-8
    assert res.multiplicity == 4            # cos/sin in both circle factors
    # eigenvector is mass-orthogonal to constants
    mass = clifford_pair.mass
    const = np.ones(len(mass)) / math.sqrt(mass.sum())
    assert abs((mass * const) @ res.eigenvector) <= 1e-10


def test_equator_lambda1_multiplicity():
    pair = assemble_laplacian(gen_geodesic_sphere(math.pi / 2.0, 4))
    res = smallest_nonzero_eig(pair, tol=1e-8)
    assert res.lambda1 == pytest.approx(2.0, rel=0.01)
    assert res.multiplicity == 3            # restricted linear coordinates


def test_flat_torus_lambda1():
    pair = assemble_laplacian(gen_flat_torus(0.5, 64, 64))
    res = smallest_nonzero_eig(pair, tol=1e-8)
    assert res.lambda1 == pytest.approx(4.0 / 3.0, rel=0.015)
    assert res.multiplicity == 2


def test_cross_check_against_arpack(clifford_pair):
    res = smallest_nonzero_eig(clifford_pair, tol=1e-10)
    mass_mat = sp.diags(clifford_pair.mass).tocsc()
    vals = spla.eigsh(clifford_pair.stiffness.tocsc(), k=6, M=mass_mat,
                      sigma=-1e-2, which="LM",
                      v0=np.ones(clifford_pair.size))[0]
    smallest_nonzero = np.sort(vals)[1]     # vals[0] ~ 0 (constants)
    assert res.lambda1 == pytest.approx(smallest_nonzero, rel=1e-7)


def test_rayleigh_quotient_properties(clifford_pair):
    mesh = gen_clifford_torus(64, 64)
    theta = np.arctan2(mesh.vertices[:, 1], mesh.vertices[:, 0])
    assert rayleigh_quotient(np.cos(theta), clifford_pair) \
        == pytest.approx(2.0, rel=0.02)
    with pytest.raises(ValueError):
        rayleigh_quotient(np.ones(clifford_pair.size), clifford_pair)


def test_rayleigh_upper_bound_property(clifford_pair):
    res = smallest_nonzero_eig(clifford_pair, tol=1e-8)
    rng = np.random.default_rng(4)
    for _ in range(10):
        x = rng.standard_normal(clifford_pair.size)
        rq = rayleigh_quotient(x, clifford_pair)
        assert res.lambda1 <= rq * (1.0 + 1e-9) + res.residual


def test_eigenvector_satisfies_equation(clifford_pair):
    res = smallest_nonzero_eig(clifford_pair, tol=1e-9)
    x = res.eigenvector
    r = clifford_pair.stiffness @ x - res.lambda1 * (clifford_pair.mass * x)
    rel = math.sqrt(float((r ** 2 / clifford_pair.mass).sum())) / res.lambda1
    assert rel <= 1e-9


def test_scale_equivariance(clifford_pair):
    res = smallest_nonzero_eig(clifford_pair, tol=1e-10)
    scaled = LaplacePair(stiffness=clifford_pair.stiffness * 3.0,
                         mass=clifford_pair.mass * 3.0)
    res_scaled = smallest_nonzero_eig(scaled, tol=1e-10)
    assert res_scaled.lambda1 == pytest.approx(res.lambda1, rel=1e-12)
    mass_only = LaplacePair(stiffness=clifford_pair.stiffness,
                            mass=clifford_pair.mass * 2.0)
    res_mass = smallest_nonzero_eig(mass_only, tol=1e-10)
    assert res_mass.lambda1 == pytest.approx(res.lambda1 / 2.0, rel=1e-9)


def test_determinism_bitwise():
    pair = assemble_laplacian(gen_clifford_torus(24, 24))
    a = smallest_nonzero_eig(pair, tol=1e-9, seed=123)
    b = smallest_nonzero_eig(pair, tol=1e-9, seed=123)
    assert a.lambda1 == b.lambda1           # bitwise
    assert a.iterations == b.iterations
    assert np.array_equal(a.eigenvector, b.eigenvector)


def test_nonconvergence_carries_best_iterate():
    pair = assemble_laplacian(gen_clifford_torus(16, 16))
    with pytest.raises(ConvergenceError) as info:
        smallest_nonzero_eig(pair, tol=1e-11, max_iter=1)
    err = info.value
    assert err.best_vector is not None
    assert err.iterations == 1
    assert err.best_value == pytest.approx(2.0, rel=0.5)


def test_tol_floor_rejected():
    pair = assemble_laplacian(gen_clifford_torus(16, 16))
    with pytest.raises(ValueError):
        smallest_nonzero_eig(pair, tol=1e-13)


def test_thin_offset_torus_spectrum():
    # offset at t=0.7 has ~12:1 anisotropic triangles; the product-torus
    # spectrum min(1/a^2, 1/b^2) is still hit to solver accuracy
    from sphere_spectra.generators import gen_clifford_torus
    from sphere_spectra.mesh import offset_mesh

    mesh = offset_mesh(gen_clifford_torus(48, 48), 0.7)
    pair = assemble_laplacian(mesh)
    res = smallest_nonzero_eig(pair, tol=1e-8)
    a = math.cos(math.pi / 4.0 + 0.7)
    b = math.sin(math.pi / 4.0 + 0.7)
    assert res.lambda1 == pytest.approx(min(a ** -2, b ** -2), rel=1e-6)
