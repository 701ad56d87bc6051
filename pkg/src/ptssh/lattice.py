"""Finite and Bloch Hamiltonians for SSH chains with balanced gain/loss.

The chain has N unit cells, each holding sublattice sites A and B.  Hopping
alternates between J_minus = J*(1 - delta*cos(theta)) inside a cell and
J_plus = J*(1 + delta*cos(theta)) between cells.  Non-Hermitian variants add
purely imaginary on-site potentials of strength gamma:

* ``ssh_a``  -- no potential (Hermitian reference chain)
* ``ssh_b``  -- +i*gamma on every A site, -i*gamma on every B site
* ``ssh_c``  -- a conjugate pair of imaginary defects at (n, alpha') and the
  mirror cell (N+1-n, conjugate sublattice)
* ``soc``    -- spin-orbit-coupled chain (4 states per cell) with optional
  end-cell potentials ``soc_pt`` in {a, b, c}

Matrices are dense complex numpy arrays; flat state order is
(cell 1 A, cell 1 B, cell 2 A, ...) and, with spin,
(A up, A down, B up, B down) inside each cell.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Optional

import numpy as np

VARIANTS = ("ssh_a", "ssh_b", "ssh_c", "soc")
SUBLATTICES = ("a", "b")
SOC_PT_TERMS = ("none", "a", "b", "c")
BOUNDARIES = ("obc", "pbc")

_PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
_PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)


@dataclass(frozen=True)
class SiteIndex:
    """One lattice site: 1-based cell j, sublattice 'a'/'b', optional spin."""

    j: int
    alpha: str
    spin: Optional[str] = None  # "up" / "down" for the spin-orbit chain

    @property
    def flat(self) -> int:
        """1-based flat position: 2(j-1)+1 for A, 2(j-1)+2 for B; with spin
        the cell block is (A up, A down, B up, B down) at base 4(j-1)+1."""
        a = SUBLATTICES.index(self.alpha)
        if self.spin is None:
            return 2 * (self.j - 1) + a + 1
        s = 0 if self.spin == "up" else 1
        return 4 * (self.j - 1) + 2 * a + s + 1


def site_of_flat(flat: int, spinful: bool = False) -> SiteIndex:
    """Inverse of ``SiteIndex.flat`` (flat is 1-based)."""
    i = flat - 1
    if not spinful:
        return SiteIndex(j=i // 2 + 1, alpha=SUBLATTICES[i % 2])
    j, r = divmod(i, 4)
    return SiteIndex(j=j + 1, alpha=SUBLATTICES[r // 2],
                     spin="up" if r % 2 == 0 else "down")


@dataclass(frozen=True)
class ModelParams:
    """Validated parameter set for one chain.

    Required: ``variant`` and ``N``.  ``n``/``alpha_prime`` apply only to
    ssh_c; ``kappa``/``soc_pt`` only to soc.  ``J`` defaults to 1 (energy
    unit), angles are in radians with -pi <= theta <= pi, 0 <= delta < 1.
    """

    variant: str
    N: int
    J: float = 1.0
    delta: float = 0.0
    theta: float = 0.0
    gamma: float = 0.0
    n: Optional[int] = None
    alpha_prime: Optional[str] = None
    kappa: Optional[float] = None
    soc_pt: Optional[str] = None
    boundary: str = "obc"

    def __post_init__(self) -> None:
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}; expected one of {VARIANTS}")
        if self.boundary not in BOUNDARIES:
            raise ValueError(f"unknown boundary {self.boundary!r}; expected one of {BOUNDARIES}")
        if not isinstance(self.N, int) or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")
        if not self.J > 0:
            raise ValueError(f"J must be positive, got {self.J!r}")
        if not 0.0 <= self.delta < 1.0:
            raise ValueError(f"delta must satisfy 0 <= delta < 1, got {self.delta!r}")
        if not -np.pi <= self.theta <= np.pi:
            raise ValueError(f"theta must lie in [-pi, pi], got {self.theta!r}")
        if self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma!r}")
        if self.variant == "ssh_c":
            if self.n is None or self.alpha_prime is None:
                raise ValueError("variant ssh_c requires both n and alpha_prime")
            if self.alpha_prime not in SUBLATTICES:
                raise ValueError(f"alpha_prime must be 'a' or 'b', got {self.alpha_prime!r}")
            # defect cell must sit in the left half: 1 <= n <= N/2
            if not isinstance(self.n, int) or not 1 <= self.n <= self.N // 2:
                raise ValueError(f"n must satisfy 1 <= n <= N/2 = {self.N / 2}, got {self.n!r}")
        elif self.n is not None or self.alpha_prime is not None:
            raise ValueError(f"n/alpha_prime are only valid for ssh_c, not {self.variant}")
        if self.variant == "soc":
            if self.kappa is None:
                raise ValueError("variant soc requires kappa")
            pt = self.soc_pt if self.soc_pt is not None else "none"
            if pt not in SOC_PT_TERMS:
                raise ValueError(f"soc_pt must be one of {SOC_PT_TERMS}, got {self.soc_pt!r}")
            object.__setattr__(self, "soc_pt", pt)
        elif self.kappa is not None or self.soc_pt is not None:
            raise ValueError(f"kappa/soc_pt are only valid for soc, not {self.variant}")

    # -- derived couplings -------------------------------------------------
    @property
    def j_minus(self) -> float:
        """Intracell hopping J*(1 - delta*cos(theta))."""
        return self.J * (1.0 - self.delta * np.cos(self.theta))

    @property
    def j_plus(self) -> float:
        """Intercell hopping J*(1 + delta*cos(theta))."""
        return self.J * (1.0 + self.delta * np.cos(self.theta))

    @property
    def xi(self) -> float:
        """Edge-mode decay ratio J_minus / J_plus."""
        return self.j_minus / self.j_plus

    @property
    def dim(self) -> int:
        return 4 * self.N if self.variant == "soc" else 2 * self.N

    @property
    def spinful(self) -> bool:
        return self.variant == "soc"

    # -- serialization -----------------------------------------------------
    def to_dict(self) -> dict:
        """Flat JSON-ready dict; only fields that apply to the variant."""
        d = {"variant": self.variant, "N": self.N, "J": self.J,
             "delta": self.delta, "theta": self.theta, "gamma": self.gamma,
             "boundary": self.boundary}
        if self.variant == "ssh_c":
            d["n"] = self.n
            d["alpha_prime"] = self.alpha_prime
        if self.variant == "soc":
            d["kappa"] = self.kappa
            d["soc_pt"] = self.soc_pt
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "ModelParams":
        """Build from a flat dict, rejecting unknown keys."""
        if not isinstance(data, dict):
            raise ValueError(f"model parameters must be a JSON object, got {type(data).__name__}")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ValueError(f"unknown model key(s): {', '.join(unknown)}")
        if "variant" not in data:
            raise ValueError("missing required key: variant")
        if "N" not in data:
            raise ValueError("missing required key: N")
        return cls(**data)


def _defect_entries(params: ModelParams) -> list[tuple[int, complex]]:
    """(0-based flat index, value) pairs for the ssh_c imaginary defect pair.

    The defect at (n, alpha') carries i*gamma on A or -i*gamma on B; the
    mirror site (N+1-n, conjugate sublattice) carries the opposite sign.
    """
    n, ap = params.n, params.alpha_prime
    sign = 1.0 if ap == "a" else -1.0
    a_idx = 2 * (n - 1) + SUBLATTICES.index(ap)
    bar = "b" if ap == "a" else "a"
    b_idx = 2 * (params.N - n) + SUBLATTICES.index(bar)
    g = params.gamma
    return [(a_idx, sign * 1j * g), (b_idx, -sign * 1j * g)]


def build_real_space(params: ModelParams) -> np.ndarray:
    """Dense Hamiltonian of the finite chain (any variant).

    Returns a (dim, dim) complex array; dim = 2N spinless, 4N with spin.
    """
    if params.variant == "soc":
        return build_soc(params)
    N, jm, jp = params.N, params.j_minus, params.j_plus
    dim = 2 * N
    h = np.zeros((dim, dim), dtype=complex)
    for j in range(N):
        a, b = 2 * j, 2 * j + 1
        h[a, b] = jm
        h[b, a] = jm
        if j + 1 < N:
            h[b, b + 1] = jp
            h[b + 1, b] = jp
    if params.boundary == "pbc":
        h[dim - 1, 0] = jp
        h[0, dim - 1] = jp
    if params.variant == "ssh_b" and params.gamma != 0.0:
        for j in range(N):
            h[2 * j, 2 * j] = 1j * params.gamma
            h[2 * j + 1, 2 * j + 1] = -1j * params.gamma
    elif params.variant == "ssh_c" and params.gamma != 0.0:
        for idx, val in _defect_entries(params):
            h[idx, idx] = val
    return h


def soc_blocks(params: ModelParams) -> tuple[np.ndarray, np.ndarray]:
    """Forward hopping blocks (R1 intracell A->B, R2 intercell B->A_next)."""
    jm, jp = params.j_minus, params.j_plus
    k = params.kappa
    r1 = 1j * (jm * _PAULI_Z + k * _PAULI_Y)
    r2 = jp * np.eye(2, dtype=complex) + 1j * k * _PAULI_Y
    return r1, r2


def _soc_potential_entries(params: ModelParams) -> list[tuple[int, complex]]:
    """(0-based flat index, value) for the end-cell gain/loss pattern."""
    g = params.gamma
    N = params.N
    up_l, dn_l = 0, 1                      # (1, A, up), (1, A, down)
    up_r, dn_r = 4 * (N - 1) + 2, 4 * (N - 1) + 3  # (N, B, up/down)
    if params.soc_pt == "a":
        return [(up_l, 1j * g), (dn_r, -1j * g)]
    if params.soc_pt == "b":
        return [(dn_l, 1j * g), (up_r, -1j * g)]
    if params.soc_pt == "c":
        # gain on both spin channels of (1, A), loss on both of (N, B):
        # the superposition of patterns a and b, so every member of the
        # edge quartet sits on a pumped site and its real part collapses
        return [(up_l, 1j * g), (dn_l, 1j * g), (up_r, -1j * g), (dn_r, -1j * g)]
    return []


def build_soc(params: ModelParams) -> np.ndarray:
    """Dense 4N x 4N Hamiltonian of the spin-orbit-coupled chain."""
    if params.variant != "soc":
        raise ValueError(f"build_soc requires variant 'soc', got {params.variant!r}")
    N = params.N
    r1, r2 = soc_blocks(params)
    dim = 4 * N
    h = np.zeros((dim, dim), dtype=complex)
    for j in range(N):
        a, b = 4 * j, 4 * j + 2
        h[a:a + 2, b:b + 2] = r1
        h[b:b + 2, a:a + 2] = r1.conj().T
        if j + 1 < N:
            a2 = 4 * (j + 1)
            h[b:b + 2, a2:a2 + 2] = r2
            h[a2:a2 + 2, b:b + 2] = r2.conj().T
    if params.boundary == "pbc":
        b_last = 4 * (N - 1) + 2
        h[b_last:b_last + 2, 0:2] = r2
        h[0:2, b_last:b_last + 2] = r2.conj().T
    if params.gamma != 0.0:
        for idx, val in _soc_potential_entries(params):
            h[idx, idx] = val
    return h


def build_bloch(params: ModelParams, k: float) -> np.ndarray:
    """Bloch matrix at crystal momentum k for a translation-invariant variant.

    Valid for ssh_a, ssh_b, and soc with soc_pt='none'; the defect variant
    ssh_c has no Bloch form.
    """
    jm, jp = params.j_minus, params.j_plus
    phase = np.exp(-1j * k)
    if params.variant in ("ssh_a", "ssh_b"):
        q = jm + jp * phase
        d = 1j * params.gamma if params.variant == "ssh_b" else 0.0
        return np.array([[d, q], [jm + jp * np.exp(1j * k), -d]], dtype=complex)
    if params.variant == "soc":
        if params.soc_pt != "none":
            raise ValueError(f"no Bloch form with end-cell potentials (soc_pt={params.soc_pt!r})")
        r1, r2 = soc_blocks(params)
        q = r1 + phase * r2.conj().T
        h = np.zeros((4, 4), dtype=complex)
        h[0:2, 2:4] = q
        h[2:4, 0:2] = q.conj().T
        return h
    raise ValueError(f"variant {params.variant!r} is not translation invariant")


def bloch_offdiagonal(params: ModelParams, k: float) -> np.ndarray:
    """The A->B block of the Bloch matrix (1x1 spinless, 2x2 with spin)."""
    h = build_bloch(params, k)
    half = h.shape[0] // 2
    return h[:half, half:]
