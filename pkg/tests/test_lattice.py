"""Hamiltonian construction: shapes, hoppings, defects, parameter guards."""

import numpy as np
import pytest

from ptssh.lattice import (
    ModelParams,
    SiteIndex,
    bloch_offdiagonal,
    build_bloch,
    build_real_space,
    build_soc,
    site_of_flat,
    soc_blocks,
)


def test_site_index_flat_convention():
    # (j, A) -> 2(j-1)+1 and (j, B) -> 2j, 1-based
    assert SiteIndex(3, "a").flat == 5
    assert SiteIndex(3, "b").flat == 6
    assert SiteIndex(1, "a").flat == 1
    assert SiteIndex(2, "a", spin="down").flat == 6
    assert SiteIndex(2, "b", spin="up").flat == 7


def test_site_of_flat_round_trip():
    for flat in range(1, 13):
        assert site_of_flat(flat).flat == flat
        assert site_of_flat(flat, spinful=True).flat == flat


def test_hoppings_alternate():
    p = ModelParams(variant="ssh_a", N=4, delta=0.5, theta=0.0)
    h = build_real_space(p)
    assert h.shape == (8, 8)
    # J_minus = 1 - 0.5 = 0.5 inside the cell, J_plus = 1.5 between cells
    assert h[0, 1] == pytest.approx(0.5)
    assert h[1, 2] == pytest.approx(1.5)
    assert h[2, 3] == pytest.approx(0.5)
    assert np.allclose(h, h.conj().T)


def test_theta_moves_dimerization():
    trivial = build_real_space(ModelParams(variant="ssh_a", N=4, delta=0.5, theta=3.0))
    # cos(3.0) < 0 flips J_minus above J_plus
    assert trivial[0, 1].real > trivial[1, 2].real


def test_case_b_alternating_potential():
    p = ModelParams(variant="ssh_b", N=3, delta=0.5, theta=0.0, gamma=0.4)
    h = build_real_space(p)
    diag = np.diag(h)
    assert np.allclose(diag[0::2], 0.4j)
    assert np.allclose(diag[1::2], -0.4j)


def test_defect_pair_placement_and_mirror():
    p = ModelParams(variant="ssh_c", N=10, delta=0.5, theta=0.0, gamma=0.7, n=3, alpha_prime="a")
    h = build_real_space(p)
    diag = np.diag(h)
    # i*gamma on (3, A); mirror partner (8, B) carries the conjugate
    assert diag[SiteIndex(3, "a").flat - 1] == pytest.approx(0.7j)
    assert diag[SiteIndex(8, "b").flat - 1] == pytest.approx(-0.7j)
    assert np.count_nonzero(diag) == 2


def test_defect_sublattice_b_flips_signs():
    p = ModelParams(variant="ssh_c", N=10, delta=0.5, theta=0.0, gamma=0.7, n=1, alpha_prime="b")
    diag = np.diag(build_real_space(p))
    assert diag[SiteIndex(1, "b").flat - 1] == pytest.approx(-0.7j)
    assert diag[SiteIndex(10, "a").flat - 1] == pytest.approx(0.7j)


def test_pbc_adds_wraparound_bond():
    obc = build_real_space(ModelParams(variant="ssh_a", N=5, delta=0.5, theta=0.0))
    pbc = build_real_space(ModelParams(variant="ssh_a", N=5, delta=0.5, theta=0.0, boundary="pbc"))
    assert obc[-1, 0] == 0.0
    assert pbc[-1, 0] == pytest.approx(1.5)


def test_soc_blocks_match_definition():
    p = ModelParams(variant="soc", N=2, delta=0.5, theta=0.0, kappa=0.5)
    r1, r2 = soc_blocks(p)
    sz = np.array([[1.0, 0.0], [0.0, -1.0]])
    sy = np.array([[0.0, -1.0j], [1.0j, 0.0]])
    assert np.allclose(r1, 1j * (0.5 * sz + 0.5 * sy))
    assert np.allclose(r2, 1.5 * np.eye(2) + 0.5j * sy)


def test_soc_hermitian_without_potential():
    h = build_soc(ModelParams(variant="soc", N=6, delta=0.5, theta=0.3, kappa=0.7))
    assert h.shape == (24, 24)
    assert np.allclose(h, h.conj().T)


@pytest.mark.parametrize(
    "pt,expected",
    [
        ("a", {0: 1j, 19: -1j}),
        ("b", {1: 1j, 18: -1j}),
        ("c", {0: 1j, 1: 1j, 18: -1j, 19: -1j}),
    ],
)
def test_soc_end_potentials(pt, expected):
    p = ModelParams(variant="soc", N=5, delta=0.5, theta=0.0, kappa=0.5, gamma=1.0, soc_pt=pt)
    diag = np.diag(build_soc(p))
    nz = {i: diag[i] for i in range(20) if diag[i] != 0}
    assert set(nz) == set(expected)
    for i, v in expected.items():
        assert nz[i] == pytest.approx(v)


def test_bloch_matches_offdiagonal():
    p = ModelParams(variant="ssh_a", N=1, delta=0.5, theta=0.2)
    hk = build_bloch(p, k=0.9)
    assert hk.shape == (2, 2)
    q = bloch_offdiagonal(p, k=0.9)
    assert q.shape == (1, 1)
    assert hk[0, 1] == pytest.approx(q[0, 0])
    assert hk[1, 0] == pytest.approx(np.conj(q[0, 0]))
    assert hk[0, 0] == 0.0


def test_bloch_pbc_consistency():
    # PBC spectrum is the union of Bloch eigenvalues over the discrete k grid
    N = 8
    p = ModelParams(variant="ssh_a", N=N, delta=0.5, theta=0.4, boundary="pbc")
    dense = np.sort(np.linalg.eigvalsh(build_real_space(p)))
    cell = ModelParams(variant="ssh_a", N=1, delta=0.5, theta=0.4)
    bands = sorted(
        float(e)
        for m in range(N)
        for e in np.linalg.eigvalsh(build_bloch(cell, k=2.0 * np.pi * m / N))
    )
    assert np.allclose(dense, bands, atol=1e-12)


def test_bloch_soc_blocks():
    p = ModelParams(variant="soc", N=1, delta=0.5, theta=0.1, kappa=0.3)
    hk = build_bloch(p, k=0.7)
    assert hk.shape == (4, 4)
    assert np.allclose(hk, hk.conj().T)
    with pytest.raises(ValueError):
        build_bloch(
            ModelParams(variant="soc", N=1, delta=0.5, kappa=0.3, gamma=0.5, soc_pt="a"),
            k=0.0,
        )
    with pytest.raises(ValueError):
        build_bloch(
            ModelParams(variant="ssh_c", N=4, delta=0.5, gamma=0.5, n=1, alpha_prime="a"),
            k=0.0,
        )


def test_params_validation():
    with pytest.raises(ValueError):
        ModelParams(variant="nope", N=4)
    with pytest.raises(ValueError):
        ModelParams(variant="ssh_a", N=0)
    with pytest.raises(ValueError):
        ModelParams(variant="ssh_a", N=4, delta=1.0)
    with pytest.raises(ValueError):
        ModelParams(variant="ssh_a", N=4, theta=4.0)
    with pytest.raises(ValueError):
        ModelParams(variant="ssh_a", N=4, gamma=-0.1)
    with pytest.raises(ValueError):
        ModelParams(variant="ssh_c", N=4, gamma=0.5)  # needs n and alpha_prime
    with pytest.raises(ValueError):
        ModelParams(variant="ssh_c", N=10, gamma=0.5, n=6, alpha_prime="a")  # n > N/2
    with pytest.raises(ValueError):
        ModelParams(variant="ssh_a", N=4, kappa=0.5)  # kappa is soc-only
    with pytest.raises(ValueError):
        ModelParams(variant="soc", N=4)  # soc requires kappa


def test_round_trip_dict():
    p = ModelParams(variant="ssh_c", N=12, delta=0.5, theta=0.1, gamma=0.9, n=2, alpha_prime="b")
    q = ModelParams.from_dict(p.to_dict())
    assert q == p
    with pytest.raises(ValueError):
        ModelParams.from_dict({"variant": "ssh_a", "N": 4, "bogus": 1})
    with pytest.raises(ValueError):
        ModelParams.from_dict({"N": 4})


def test_derived_couplings():
    p = ModelParams(variant="ssh_a", N=4, delta=0.5, theta=0.0)
    assert p.j_minus == pytest.approx(0.5)
    assert p.j_plus == pytest.approx(1.5)
    assert p.xi == pytest.approx(1.0 / 3.0)
    assert p.dim == 8
    assert not p.spinful
    assert ModelParams(variant="soc", N=4, delta=0.5, kappa=0.1).dim == 16
