"""Closed-form transfer-matrix results against frozen values and numerics."""

import cmath

import numpy as np
import pytest

from ptssh.eigen import eigendecompose
from ptssh.lattice import ModelParams, build_real_space
from ptssh.transfer import (
    bound_cubics_c2,
    bound_energies_c1,
    edge_energies_c1,
    edge_energies_case_b,
    transfer_coefficients,
    zero_mode_profile,
)


def c1(**kw):
    return ModelParams(variant="ssh_c", n=1, alpha_prime="a", delta=0.5, **kw)


def c2(**kw):
    return ModelParams(variant="ssh_c", n=1, alpha_prime="b", delta=0.5, **kw)


def close_sets(got, want, tol=1e-9):
    got, want = list(got), list(want)
    assert len(got) == len(want)
    for z in got:
        i = min(range(len(want)), key=lambda j: abs(want[j] - z))
        assert abs(want[i] - z) < tol, f"{z} not among expected"
        want.pop(i)


# -- coefficients --------------------------------------------------------


def test_coefficients_at_zero_energy():
    co = transfer_coefficients(0.0, c1(N=10, theta=0.0, gamma=0.5))
    # (0 - 0.25 - 2.25) / 0.75 = -10/3
    assert co.mu == pytest.approx(-10.0 / 3.0)
    assert co.lambda_minus == pytest.approx(-3.0)
    assert co.lambda_plus == pytest.approx(-1.0 / 3.0)


@pytest.mark.parametrize("energy", [0.3, 1.7 + 0.4j, -0.9j, 2.5])
def test_transfer_eigenvalues_unit_determinant(energy):
    co = transfer_coefficients(energy, c1(N=10, theta=0.3, gamma=0.8))
    assert co.lambda_minus * co.lambda_plus == pytest.approx(1.0)
    assert abs(co.lambda_minus) >= abs(co.lambda_plus)
    assert co.lambda_minus + co.lambda_plus == pytest.approx(co.mu)


def test_coefficient_guards():
    with pytest.raises(ValueError):
        transfer_coefficients(0.5j, c1(N=10, theta=0.0, gamma=0.5))  # pole at +i*gamma
    with pytest.raises(ValueError):
        transfer_coefficients(-0.5j, c1(N=10, theta=0.0, gamma=0.5))  # pole at -i*gamma


# -- staggered gain/loss edge pair ---------------------------------------


def test_case_b_edge_pair():
    p = ModelParams(variant="ssh_b", N=40, delta=0.5, theta=0.0, gamma=0.7)
    modes = edge_energies_case_b(p)
    assert modes.edge_energies == (0.7j, -0.7j)
    trivial = ModelParams(variant="ssh_b", N=40, delta=0.5, theta=3.0, gamma=0.7)
    assert edge_energies_case_b(trivial).edge_energies == ()
    with pytest.raises(ValueError):
        edge_energies_case_b(c1(N=10, theta=0.0, gamma=0.7))


def test_case_b_matches_numerics():
    for N, bound in ((10, 1e-8), (20, 1e-12), (40, 1e-12)):
        p = ModelParams(variant="ssh_b", N=N, delta=0.5, theta=0.0, gamma=0.7)
        vals = eigendecompose(build_real_space(p)).eigenvalues
        for target in (0.7j, -0.7j):
            assert min(abs(vals - target)) < bound


# -- defect pair on A: edge quadratic ------------------------------------


def test_c1_edge_frozen_values():
    modes = edge_energies_c1(c1(N=100, theta=0.0, gamma=0.5))
    close_sets(modes.edge_energies, [0.4494897427831781j, -0.4494897427831781j], tol=1e-15)
    modes = edge_energies_c1(c1(N=100, theta=0.4 * np.pi, gamma=0.5))
    close_sets(modes.edge_energies, [0.2552747160127403j, -0.2552747160127403j], tol=1e-15)


def test_c1_edge_small_gamma_scaling():
    # leading order |E| = gamma * (J+^2 - J-^2) / J+^2 = (8/9) gamma
    for g, want in ((1e-2, 8.8889327831e-3), (1e-3, 8.8888893278e-4), (1e-4, 8.8888888933e-5)):
        modes = edge_energies_c1(c1(N=100, theta=0.0, gamma=g))
        assert abs(modes.edge_energies[0]) == pytest.approx(want, rel=1e-9)
    assert abs(modes.edge_energies[0]) / 1e-4 == pytest.approx(8.0 / 9.0, rel=1e-7)


def test_c1_edge_hermitian_limit_and_guards():
    modes = edge_energies_c1(c1(N=20, theta=0.0, gamma=0.0))
    assert modes.edge_energies == (0j, 0j)
    trivial = edge_energies_c1(c1(N=20, theta=3.0, gamma=0.0))
    assert trivial.edge_energies == ()
    with pytest.raises(ValueError):
        edge_energies_c1(c2(N=20, theta=0.0, gamma=0.5))
    with pytest.raises(ValueError):
        edge_energies_c1(
            ModelParams(variant="ssh_c", n=2, alpha_prime="a", delta=0.5, N=20, theta=0.0, gamma=0.5)
        )


def test_c1_edge_matches_numerics():
    for N, bound in ((10, 1e-9), (20, 1e-12), (40, 1e-12)):
        p = c1(N=N, theta=0.0, gamma=0.5)
        vals = eigendecompose(build_real_space(p)).eigenvalues
        for target in edge_energies_c1(p).edge_energies:
            assert min(abs(vals - target)) < bound


def test_c1_edge_purely_imaginary_all_gamma():
    for g in (0.05, 0.3, 1.0, 2.5, 5.0):
        for e in edge_energies_c1(c1(N=50, theta=0.2, gamma=g)).edge_energies:
            assert abs(e.real) < 1e-12


# -- defect pair on A: bound quartic -------------------------------------


def test_c1_bound_frozen_values():
    modes = bound_energies_c1(c1(N=100, theta=2.0 * np.pi / 3.0, gamma=3.0))
    close_sets(
        modes.bound_energies,
        [2.39495575j, -2.39495575j, 0.41754425j, -0.41754425j],
        tol=1e-7,
    )
    # all four roots land on the chain: compare with dense numerics
    p = c1(N=60, theta=2.0 * np.pi / 3.0, gamma=3.0)
    vals = eigendecompose(build_real_space(p)).eigenvalues
    for target in modes.bound_energies:
        assert min(abs(vals - target)) < 1e-10


def test_c1_bound_small_gamma_keeps_only_edge_pair():
    modes = bound_energies_c1(c1(N=100, theta=0.0, gamma=0.1))
    edge = edge_energies_c1(c1(N=100, theta=0.0, gamma=0.1)).edge_energies
    close_sets(modes.bound_energies, edge, tol=1e-12)
    rejected = [c for c in modes.bound_candidates if not c.admitted]
    assert len(rejected) == 2
    for cand in rejected:
        assert "abs_lambda_minus" in cand.checks
    with pytest.raises(ValueError):
        bound_energies_c1(c1(N=100, theta=0.0, gamma=0.0))


# -- defect pair on B: cubics --------------------------------------------


def test_c2_cubics_frozen_values():
    modes = bound_cubics_c2(c2(N=100, theta=0.0, gamma=3.0))
    want = [
        0.36138899 + 1.45847646j,
        -0.36138899 + 1.45847646j,
        0.36138899 - 1.45847646j,
        -0.36138899 - 1.45847646j,
    ]
    close_sets(modes.bound_energies, want, tol=1e-7)
    rejected = [c.energy for c in modes.bound_candidates if not c.admitted]
    close_sets(rejected, [0.08304708j, -0.08304708j], tol=1e-7)


def test_c2_roots_mirror_and_satisfy_cubic():
    p = c2(N=50, theta=0.3, gamma=2.0)
    modes = bound_cubics_c2(p)
    left = sorted((c.energy for c in modes.bound_candidates if c.side == "left"),
                  key=lambda z: (z.real, z.imag))
    right = sorted((-c.energy for c in modes.bound_candidates if c.side == "right"),
                   key=lambda z: (z.real, z.imag))
    assert np.allclose(left, right, atol=1e-12)
    jm, jp, ig = p.j_minus, p.j_plus, 1j * p.gamma
    for e in left:
        res = e**3 + ig * e**2 - (jm**2 + jp**2) * e + jm**2 * jp**2 / ig
        assert abs(res) < 1e-12


def test_c2_admitted_match_numerics():
    p = c2(N=60, theta=0.0, gamma=3.0)
    vals = eigendecompose(build_real_space(p)).eigenvalues
    for target in bound_cubics_c2(p).bound_energies:
        assert min(abs(vals - target)) < 1e-10
    with pytest.raises(ValueError):
        bound_cubics_c2(c2(N=60, theta=0.0, gamma=0.0))
    with pytest.raises(ValueError):
        bound_cubics_c2(c1(N=60, theta=0.0, gamma=3.0))


# -- zero modes -----------------------------------------------------------


def test_zero_mode_shape_and_ratio():
    p = ModelParams(variant="ssh_a", N=12, delta=0.5, theta=0.0)
    prof = zero_mode_profile(p, "left", 12)
    amp = prof.amplitudes
    assert not prof.delocalized
    assert np.linalg.norm(amp) == pytest.approx(1.0)
    assert np.allclose(amp[1::2], 0.0)  # B sublattice empty
    # successive A amplitudes fall by -xi = -1/3
    assert amp[2] / amp[0] == pytest.approx(-1.0 / 3.0)
    assert amp[4] / amp[2] == pytest.approx(-1.0 / 3.0)


def test_zero_mode_right_is_mirror():
    p = ModelParams(variant="ssh_a", N=8, delta=0.5, theta=0.0)
    left = zero_mode_profile(p, "left", 8).amplitudes
    right = zero_mode_profile(p, "right", 8).amplitudes
    # swap sublattices and reverse cells
    flipped = left.reshape(8, 2)[::-1, ::-1].ravel()
    assert np.allclose(right, flipped)


def test_zero_mode_spans_numerical_kernel():
    p = ModelParams(variant="ssh_a", N=30, delta=0.5, theta=0.0)
    spec = eigendecompose(build_real_space(p))
    near = np.argsort(np.abs(spec.eigenvalues))[:2]
    basis = spec.eigenvectors[:, near]  # hybridized +-E pair spans the mode space
    for side in ("left", "right"):
        amp = zero_mode_profile(p, side, 30).amplitudes
        proj = basis @ (basis.conj().T @ amp)
        assert np.linalg.norm(proj - amp) < 1e-5


def test_zero_mode_delocalized_flag_and_guards():
    p = ModelParams(variant="ssh_a", N=4, delta=0.5, theta=3.0)
    prof = zero_mode_profile(p, "left", 4)
    assert prof.delocalized
    # unnormalized amplitudes: norm^2 is the geometric sum of xi^(2(j-1))
    xi = p.xi
    want = np.sqrt(sum(xi ** (2 * j) for j in range(4)))
    assert np.linalg.norm(prof.amplitudes) == pytest.approx(want)
    with pytest.raises(ValueError):
        zero_mode_profile(p, "middle", 4)
    with pytest.raises(ValueError):
        zero_mode_profile(p, "left", 0)
    with pytest.raises(ValueError):
        zero_mode_profile(
            ModelParams(variant="soc", N=4, delta=0.5, kappa=0.2), "left", 4
        )


def test_zero_mode_profile_gamma_independent():
    a = zero_mode_profile(c1(N=10, theta=0.0, gamma=0.0), "left", 10).amplitudes
    b = zero_mode_profile(c1(N=10, theta=0.0, gamma=2.0), "left", 10).amplitudes
    assert np.allclose(a, b)
