"""Closed-form transfer-matrix results for the defect-pair chain.

The open-boundary eigenproblem of the chain reduces, sublattice by
sublattice, to three-term recursions whose transfer matrices share the
trace ``mu`` and carry boundary-row replacements ``nu``, ``xi`` and
``chi``.  Demanding normalizable (exponentially decaying) solutions
turns the recursions into scalar admission conditions on the decaying
transfer eigenvalue ``lambda_plus``.  This module evaluates those
coefficients, the resulting closed-form edge and bound-state energies
for a single defect pair in the outermost cells, and the analytic
zero-mode profiles of the Hermitian limit.

Every candidate energy is returned together with the residuals of the
conditions that admit or reject it, so callers can audit the selection
instead of trusting a bare list.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from .lattice import ModelParams

# Absolute tolerance for the scalar admission conditions.  Well above
# machine epsilon, well below any physical scale of the model.
CONDITION_TOL = 1e-8


@dataclass(frozen=True)
class TransferCoefficients:
    """Scalar data of the transfer recursion at one trial energy.

    ``mu`` is the bulk trace, ``nu1``/``nu2`` the left/right boundary
    rows, ``xi1``..``xi4`` the defect rows, ``chi1``/``chi2`` the rows
    of the complementary sublattice.  ``lambda_minus`` and
    ``lambda_plus`` are the transfer eigenvalues ordered so that
    ``|lambda_minus| >= |lambda_plus|``; their product is 1 because the
    transfer matrix has unit determinant.
    """

    mu: complex
    nu1: complex
    nu2: complex
    xi1: complex
    xi2: complex
    xi3: complex
    xi4: complex
    chi1: complex
    chi2: complex
    lambda_minus: complex
    lambda_plus: complex


@dataclass(frozen=True)
class ModeCandidate:
    """One closed-form energy candidate with its admission audit.

    ``checks`` maps condition names to nonnegative residuals (or to the
    modulus of the growing transfer eigenvalue for the localization
    test).  ``admitted`` is True when every condition passed.
    """

    energy: complex
    side: str
    admitted: bool
    checks: Dict[str, float] = field(default_factory=dict)
    note: str = ""


@dataclass(frozen=True)
class AnalyticModes:
    """Closed-form mode energies, split into edge and bound families.

    The ``*_energies`` properties expose only admitted candidates; the
    full candidate tuples keep the rejected ones with their residuals.
    """

    edge_candidates: Tuple[ModeCandidate, ...] = ()
    bound_candidates: Tuple[ModeCandidate, ...] = ()

    @property
    def edge_energies(self) -> Tuple[complex, ...]:
        return tuple(c.energy for c in self.edge_candidates if c.admitted)

    @property
    def bound_energies(self) -> Tuple[complex, ...]:
        return tuple(c.energy for c in self.bound_candidates if c.admitted)


def transfer_coefficients(energy: complex, params: ModelParams) -> TransferCoefficients:
    """Evaluate all transfer-recursion scalars at a trial energy.

    Raises ValueError when the couplings degenerate (``J- J+ = 0``, the
    gap closes) or when ``energy`` sits on a pole ``+-i gamma`` of the
    defect rows.
    """
    jm = params.j_minus
    jp = params.j_plus
    denom = jm * jp
    if denom == 0.0:
        raise ValueError("transfer coefficients need J- * J+ != 0; the gap closes at |theta| = pi/2")
    e = complex(energy)
    ig = 1j * params.gamma
    if e - ig == 0 or e + ig == 0:
        raise ValueError("trial energy sits on a pole at +-i*gamma of the defect rows")

    e2 = e * e
    mu = (e2 - jm * jm - jp * jp) / denom
    nu1 = (e2 - ig * e - jm * jm) / denom
    nu2 = (e2 + ig * e - jm * jm) / denom
    xi1 = (e2 - (e / (e - ig)) * jm * jm - jp * jp) / denom
    xi2 = (e2 - (e / (e + ig)) * jm * jm - jp * jp) / denom
    xi3 = (e2 - jm * jm - (e / (e + ig)) * jp * jp) / denom
    xi4 = (e2 - jm * jm - (e / (e - ig)) * jp * jp) / denom

    chi1 = (e2 + ig * e - jm * jm - jp * jp) / denom
    chi2 = (e2 - ig * e - jm * jm - jp * jp) / denom

    root = cmath.sqrt(mu * mu - 4.0)
    lam_a = (mu + root) / 2.0
    lam_b = (mu - root) / 2.0
    if abs(lam_a) >= abs(lam_b):
        lam_minus, lam_plus = lam_a, lam_b
    else:
        lam_minus, lam_plus = lam_b, lam_a

    return TransferCoefficients(
        mu=mu,
        nu1=nu1,
        nu2=nu2,
        xi1=xi1,
        xi2=xi2,
        xi3=xi3,
        xi4=xi4,
        chi1=chi1,
        chi2=chi2,
        lambda_minus=lam_minus,
        lambda_plus=lam_plus,
    )


def _require_c1(params: ModelParams, alpha_prime: str) -> None:
    if params.variant != "ssh_c":
        raise ValueError("closed forms for the defect pair require variant 'ssh_c'")
    if params.n != 1 or params.alpha_prime != alpha_prime:
        raise ValueError(
            f"closed forms exist only for n=1, alpha_prime={alpha_prime!r}; "
            f"got n={params.n}, alpha_prime={params.alpha_prime!r}"
        )


def _edge_candidate(energy: complex, side: str, params: ModelParams, note: str = "") -> ModeCandidate:
    """Audit one trial energy against the edge admission conditions.

    Left modes must satisfy |lambda_-| > 1, lambda_+ = nu1 and
    lambda_+ = xi1; right modes the mirrored relations with nu2, xi2.
    """
    try:
        co = transfer_coefficients(energy, params)
    except ValueError as exc:
        return ModeCandidate(energy=energy, side=side, admitted=False, checks={}, note=str(exc))
    nu = co.nu1 if side == "left" else co.nu2
    xi = co.xi1 if side == "left" else co.xi2
    checks = {
        "abs_lambda_minus": abs(co.lambda_minus),
        "nu_residual": abs(co.lambda_plus - nu),
        "xi_residual": abs(co.lambda_plus - xi),
    }
    admitted = (
        checks["abs_lambda_minus"] > 1.0
        and checks["nu_residual"] <= CONDITION_TOL
        and checks["xi_residual"] <= CONDITION_TOL
    )
    return ModeCandidate(energy=energy, side=side, admitted=admitted, checks=checks, note=note)


def edge_energies_case_b(params: ModelParams) -> AnalyticModes:
    """Edge-mode energies +-i*gamma of the staggered gain/loss chain.

    The pair exists exactly in the regime J- < J+; outside it both
    candidates are reported as rejected and ``edge_energies`` is empty.
    """
    if params.variant != "ssh_b":
        raise ValueError("edge_energies_case_b requires variant 'ssh_b'")
    margin = params.j_plus - params.j_minus
    admitted = margin > 0.0
    note = "" if admitted else "trivial regime J- >= J+: no edge pair"
    checks = {"j_plus_minus_j_minus": margin}
    left = ModeCandidate(energy=1j * params.gamma, side="left", admitted=admitted, checks=dict(checks), note=note)
    right = ModeCandidate(energy=-1j * params.gamma, side="right", admitted=admitted, checks=dict(checks), note=note)
    return AnalyticModes(edge_candidates=(left, right))


def _c1_quadratic(params: ModelParams) -> Tuple[complex, complex]:
    """Left-side candidate energies ((a + r)/2, (a - r)/2).

    The left admission conditions collapse to the quadratic
    E^2 - a E - (J-^2 - J+^2) = 0 with a = i*gamma + J+^2/(i*gamma);
    right-side candidates are the negatives.  The root on the
    cancelling branch is recovered from the root product (the small
    root is O(gamma) while a is O(1/gamma), so the textbook formula
    loses it to round-off at small gamma).
    """
    jm = params.j_minus
    jp = params.j_plus
    ig = 1j * params.gamma
    a = ig + jp * jp / ig
    r = cmath.sqrt(a * a + 4.0 * (jm * jm - jp * jp))
    product = jp * jp - jm * jm
    if abs(a + r) >= abs(a - r):
        e_plus = (a + r) / 2.0
        e_minus = product / e_plus if e_plus != 0 else (a - r) / 2.0
    else:
        e_minus = (a - r) / 2.0
        e_plus = product / e_minus if e_minus != 0 else (a + r) / 2.0
    return e_plus, e_minus


def edge_energies_c1(params: ModelParams) -> AnalyticModes:
    """Closed-form edge pair for the defect pair on the A sublattice.

    Evaluates E = +-[(i*gamma + J+^2/(i*gamma)) + sqrt(...)]/2 with the
    principal square root and audits each sign against the left or
    right admission conditions.  At gamma = 0 the formula has a pole;
    the Hermitian limit E = 0 is returned flagged instead.
    """
    _require_c1(params, "a")
    if params.gamma == 0.0:
        admitted = params.j_minus < params.j_plus
        note = "gamma -> 0 limit of the closed form; Hermitian zero mode"
        if not admitted:
            note += "; trivial regime J- >= J+"
        pair = tuple(
            ModeCandidate(energy=0j, side=side, admitted=admitted, checks={}, note=note)
            for side in ("left", "right")
        )
        return AnalyticModes(edge_candidates=pair)

    e_plus, _ = _c1_quadratic(params)
    left = _edge_candidate(e_plus, "left", params)
    right = _edge_candidate(-e_plus, "right", params)
    return AnalyticModes(edge_candidates=(left, right))


def bound_energies_c1(params: ModelParams) -> AnalyticModes:
    """All four closed-form bound-state candidates of the A-defect pair.

    The candidates are +-[(i*gamma + J+^2/(i*gamma)) +- sqrt(...)]/2;
    each is audited against the full admission conditions of its side.
    Below the breaking threshold every candidate fails and
    ``bound_energies`` is empty.  gamma = 0 is a pole of the formula.
    """
    _require_c1(params, "a")
    if params.gamma == 0.0:
        raise ValueError("bound-state closed form has a pole at gamma = 0")
    left_roots = _c1_quadratic(params)
    candidates = []
    for e in left_roots:
        candidates.append(_edge_candidate(e, "left", params))
    for e in left_roots:
        candidates.append(_edge_candidate(-e, "right", params))
    return AnalyticModes(bound_candidates=tuple(candidates))


def _cubic_roots(c2: complex, c1: complex, c0: complex) -> Tuple[complex, complex, complex]:
    """Roots of E^3 + c2 E^2 + c1 E + c0 by Cardano plus one Newton step."""
    # Depressed cubic t^3 + p t + q with E = t - c2/3.
    shift = c2 / 3.0
    p = c1 - c2 * c2 / 3.0
    q = 2.0 * c2 ** 3 / 27.0 - c2 * c1 / 3.0 + c0
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    u3 = -q / 2.0 + cmath.sqrt(disc)
    if u3 == 0:
        u3 = -q / 2.0 - cmath.sqrt(disc)
    if u3 == 0:
        # Triple root of the depressed cubic.
        ts = (0j, 0j, 0j)
    else:
        u = u3 ** (1.0 / 3.0)
        omega = cmath.exp(2j * cmath.pi / 3.0)
        ts = tuple(u * omega ** k - p / (3.0 * u * omega ** k) for k in range(3))
    roots = []
    for t in ts:
        e = t - shift
        # One Newton polish; Cardano in floating point can lose a few digits.
        fval = ((e + c2) * e + c1) * e + c0
        fder = (3.0 * e + 2.0 * c2) * e + c1
        if fder != 0:
            e = e - fval / fder
        roots.append(e)
    return tuple(roots)


def _cubic_candidate(energy: complex, side: str, params: ModelParams, residual: float) -> ModeCandidate:
    """Audit one cubic root against the three B-defect conditions.

    Left: |lambda_-| > 1, lambda_+ = chi1 and
    lambda_+ * nu2 = xi3 * nu2 - E/(E + i*gamma); right mirrored with
    chi2, nu1, xi4 and E/(E - i*gamma).  The nu index follows from
    eliminating the boundary rows of the difference equations; the
    defect at (1, B) carries -i*gamma, so the first A row reads
    phi_2A = nu2 * phi_1A.
    """
    try:
        co = transfer_coefficients(energy, params)
    except ValueError as exc:
        return ModeCandidate(energy=energy, side=side, admitted=False, checks={}, note=str(exc))
    ig = 1j * params.gamma
    if side == "left":
        chi, nu, xi = co.chi1, co.nu2, co.xi3
        tail = energy / (energy + ig)
    else:
        chi, nu, xi = co.chi2, co.nu1, co.xi4
        tail = energy / (energy - ig)
    checks = {
        "abs_lambda_minus": abs(co.lambda_minus),
        "chi_residual": abs(co.lambda_plus - chi),
        "row_residual": abs(co.lambda_plus * nu - (xi * nu - tail)),
        "cubic_residual": residual,
    }
    admitted = (
        checks["abs_lambda_minus"] > 1.0
        and checks["chi_residual"] <= CONDITION_TOL
        and checks["row_residual"] <= CONDITION_TOL
    )
    return ModeCandidate(energy=energy, side=side, admitted=admitted, checks=checks)


def bound_cubics_c2(params: ModelParams) -> AnalyticModes:
    """Bound-state energies for the defect pair on the B sublattice.

    Solves the left cubic E^3 + i g E^2 - (J-^2 + J+^2) E
    + J-^2 J+^2 / (i g) = 0 and its right mirror in closed form, then
    keeps each root only if it passes the three admission conditions of
    its side.  gamma = 0 is a pole of the constant term.
    """
    _require_c1(params, "b")
    if params.gamma == 0.0:
        raise ValueError("bound-state cubics have a pole at gamma = 0")
    jm = params.j_minus
    jp = params.j_plus
    ig = 1j * params.gamma
    s = jm * jm + jp * jp
    prod = jm * jm * jp * jp
    candidates = []
    for side, c2, c0 in (("left", ig, prod / ig), ("right", -ig, -prod / ig)):
        for root in _cubic_roots(c2, -s, c0):
            residual = abs(((root + c2) * root - s) * root + c0)
            candidates.append(_cubic_candidate(root, side, params, residual))
    return AnalyticModes(bound_candidates=tuple(candidates))


@dataclass(frozen=True)
class ZeroModeProfile:
    """Analytic zero-mode amplitudes on the flattened (cell, sublattice) order.

    ``delocalized`` is True when xi >= 1, in which case the amplitudes
    are returned unnormalized because the profile is not summable.
    """

    amplitudes: np.ndarray
    delocalized: bool


def zero_mode_profile(params: ModelParams, side: str, length: int) -> ZeroModeProfile:
    """Analytic zero-mode profile over the first ``length`` unit cells.

    Left mode: (-xi)^(j-1) on (j, A) and zero on every B site; right
    mode mirrored on the B sublattice with (-xi)^(N-j), N = length.
    The shape is gamma independent.  For xi < 1 the vector is
    normalized to unit 2-norm.
    """
    if params.spinful:
        raise ValueError("zero-mode profile is defined for the spinless chain")
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    if not isinstance(length, (int, np.integer)) or length < 1:
        raise ValueError("length must be a positive integer number of unit cells")

    xi = params.xi
    powers = (-xi) ** np.arange(length, dtype=float)
    amplitudes = np.zeros(2 * length, dtype=complex)
    if side == "left":
        amplitudes[0::2] = powers
    else:
        amplitudes[1::2] = powers[::-1]

    delocalized = xi >= 1.0
    if not delocalized:
        amplitudes /= np.linalg.norm(amplitudes)
    return ZeroModeProfile(amplitudes=amplitudes, delocalized=delocalized)
