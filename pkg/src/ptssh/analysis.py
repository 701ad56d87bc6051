"""Mode classification, phase labeling, recovery maps and decay fits.

Bridges the raw spectra to the physics: sorts every eigenmode into
edge / bound / bulk families, labels PT phases I..VI on the
(theta, gamma) plane, maps the recovery of exact-zero edge modes over
system size and gain/loss strength, fits the exponential collapse of
the edge-mode line width against the defect depth, and locates the
PT-breaking thresholds by bisection.

Classification is matching-first: an in-gap mode is compared against
the admitted closed-form energies (module ``transfer``) before any
localization heuristic runs, which keeps the defect-at-the-boundary
case unambiguous (there edge and bound modes coexist at the same
cells).  Localization fallbacks handle the defect depths with no
closed form.
"""

from __future__ import annotations

import itertools
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Dict, Sequence, Tuple

import numpy as np

from .eigen import Spectrum, eigendecompose
from .lattice import ModelParams, build_real_space, build_soc
from . import transfer

# A mode counts as PT-broken when its imaginary part exceeds this.
IM_TOL = 1e-8
# Matching tolerance against admitted closed-form energies.
MATCH_TOL = 1e-3
# Fraction of the bulk gap inside which a real energy counts as in-gap.
GAP_MARGIN = 0.9

MODE_CLASSES = ("edge", "bound", "bulk", "unclassified")
PHASE_LABELS = ("I", "II", "III", "IV", "V", "VI")


class GaplessError(ValueError):
    """Raised when classification is requested at a closed bulk gap."""


class ModeCountError(RuntimeError):
    """Raised when the expected number of boundary modes is not found.

    Carries the candidate records so the caller can inspect what was
    found instead.
    """

    def __init__(self, message: str, candidates: Tuple["ModeRecord", ...] = ()):
        super().__init__(message)
        self.candidates = candidates


@dataclass(frozen=True)
class ModeRecord:
    """One eigenmode with its localization diagnostics.

    ``peak_site`` is the 1-based flat site index of the density
    maximum; ``boundary_weight`` is the probability mass in the
    outermost unit cell at each end; ``profile`` is the unit-sum
    density |phi|^2 over flat sites.
    """

    energy: complex
    ipr: float
    peak_site: int
    boundary_weight: float
    mode_class: str
    profile: np.ndarray


@dataclass(frozen=True)
class PhasePoint:
    """PT-phase label of one (theta, gamma) point, with its evidence."""

    theta: float
    gamma: float
    label: str
    n_complex: int
    has_edge_pair: bool
    edge_pair_real: bool


@dataclass(frozen=True)
class RecoveryCell:
    """Edge-pair splitting at one (N, gamma) grid cell.

    ``re_split`` and ``im_split`` are |Re(E_A - E_B)| and
    |Im(E_A - E_B)| of the two edge modes; both are nan when the cell
    failed (no unambiguous edge pair, or invalid parameters).
    """

    N: int
    gamma: float
    re_split: float
    im_split: float

    @property
    def valid(self) -> bool:
        return not (math.isnan(self.re_split) or math.isnan(self.im_split))


@dataclass(frozen=True)
class DecayFit:
    """Exponential fit im_split(n) = amplitude * exp(-n / decay_length)."""

    amplitude: float
    decay_length: float
    r_squared: float


def bulk_gap(params: ModelParams) -> float:
    """Half-splitting 2 J Delta |cos theta| of the Hermitian bulk bands."""
    return 2.0 * params.J * params.delta * abs(math.cos(params.theta))


def _analytic_energy_sets(params: ModelParams) -> Tuple[Tuple[complex, ...], Tuple[complex, ...]]:
    """Admitted closed-form (edge, bound) energies for these parameters.

    Variants and defect depths without a closed form return empty sets;
    the classifier then relies on its localization fallbacks.
    """
    nontrivial = params.j_minus < params.j_plus
    if params.variant == "ssh_a":
        return ((0j,) if nontrivial else (), ())
    if params.variant == "ssh_b":
        return (transfer.edge_energies_case_b(params).edge_energies, ())
    if params.variant == "soc":
        return ((0j,) if nontrivial else (), ())
    # ssh_c: closed forms exist for the outermost defect pair only;
    # deeper defects keep the generic zero-mode anchor.
    if params.alpha_prime == "a":
        if params.n == 1:
            edge = transfer.edge_energies_c1(params).edge_energies
            bound = transfer.bound_energies_c1(params).bound_energies if params.gamma > 0 else ()
            return (edge, bound)
        return ((0j,) if nontrivial else (), ())
    edge = (0j,) if nontrivial else ()
    bound = transfer.bound_cubics_c2(params).bound_energies if (params.n == 1 and params.gamma > 0) else ()
    return (edge, bound)


def mode_metrics(spectrum: Spectrum, params: ModelParams) -> Tuple[Tuple[float, int, float, np.ndarray], ...]:
    """Localization diagnostics (ipr, peak_site, boundary_weight, density) per mode.

    peak_site is the 1-based flat index of the density maximum;
    boundary_weight sums the density over the first and last unit cell.
    Defined for any spectrum, gapped or not.
    """
    if spectrum.dim != params.dim:
        raise ValueError(f"spectrum dimension {spectrum.dim} does not match params dimension {params.dim}")
    width = 4 if params.spinful else 2
    out = []
    for i in range(spectrum.dim):
        density = np.abs(spectrum.eigenvectors[:, i]) ** 2
        ipr = float(np.sum(density * density))
        peak_site = int(np.argmax(density)) + 1
        boundary_weight = float(np.sum(density[:width]) + np.sum(density[-width:]))
        out.append((ipr, peak_site, boundary_weight, density))
    return tuple(out)


def classify_modes(spectrum: Spectrum, params: ModelParams) -> Tuple[ModeRecord, ...]:
    """Sort every mode of a spectrum into edge / bound / bulk / unclassified.

    A mode is in-gap when |Re E| < 0.9 * gap or |Im E| > 1e-8.  In-gap
    modes are matched against the admitted closed-form edge energies,
    then the bound energies (tolerance 1e-3); unmatched ones fall back
    to boundary weight > 0.5 (edge) or a density peak within one unit
    cell of a defect (bound).  Everything else is bulk.  Refuses at a
    closed gap, where no mode family is distinguishable.
    """
    metrics = mode_metrics(spectrum, params)
    gap = bulk_gap(params)
    if gap <= 1e-12:
        raise GaplessError("bulk gap closes here (theta = +-pi/2 or delta = 0); classification refused")

    edge_set, bound_set = _analytic_energy_sets(params)
    width = 4 if params.spinful else 2
    defect_cells: Tuple[int, ...] = ()
    if params.variant == "ssh_c":
        defect_cells = (params.n, params.N + 1 - params.n)

    records = []
    for i in range(spectrum.dim):
        e = spectrum.eigenvalues[i]
        ipr, peak_site, boundary_weight, density = metrics[i]

        in_gap = abs(e.real) < GAP_MARGIN * gap or abs(e.imag) > IM_TOL
        if not in_gap:
            mode_class = "bulk"
        elif any(abs(e - a) <= MATCH_TOL for a in edge_set):
            mode_class = "edge"
        elif any(abs(e - a) <= MATCH_TOL for a in bound_set):
            mode_class = "bound"
        elif boundary_weight > 0.5:
            mode_class = "edge"
        else:
            peak_cell = (peak_site - 1) // width + 1
            if defect_cells and min(abs(peak_cell - d) for d in defect_cells) <= 1:
                mode_class = "bound"
            else:
                mode_class = "unclassified"

        records.append(
            ModeRecord(
                energy=complex(e),
                ipr=ipr,
                peak_site=peak_site,
                boundary_weight=boundary_weight,
                mode_class=mode_class,
                profile=density,
            )
        )
    return tuple(records)


def _pair_key(e: complex) -> Tuple[float, float]:
    # quantize Re so eigensolver round-off cannot reorder a conjugate
    # pair whose real parts agree to machine precision
    return (round(e.real * 1e9), e.imag)


def edge_pair(spectrum: Spectrum, params: ModelParams) -> Tuple[complex, complex]:
    """The two edge-mode energies, ordered by (Re, Im) ascending.

    Defined for the spinless chain, whose nontrivial phase carries
    exactly one pair.  Nominally the pair is the two modes classified
    edge.  Short chains under strong gain/loss push the numerical
    energies outside the matching window of the semi-infinite forms
    and the classifier loses them; the pair is then recovered as the
    two in-gap modes nearest the admitted closed-form edge set.
    Raises ModeCountError (with the candidates) when no pair can be
    identified this way either.
    """
    if params.spinful:
        raise ValueError("edge_pair is defined for the spinless chain; the spin-orbit chain carries a quartet")
    records = classify_modes(spectrum, params)
    edges = tuple(r for r in records if r.mode_class == "edge")
    if len(edges) != 2:
        edge_set, _ = _analytic_energy_sets(params)
        gap = bulk_gap(params)
        pool = [
            r for r in records
            if abs(r.energy.real) < GAP_MARGIN * gap or abs(r.energy.imag) > IM_TOL
        ]
        if not edge_set or len(pool) < 2:
            raise ModeCountError(
                f"expected exactly 2 edge modes, found {len(edges)}: {[r.energy for r in edges]}",
                candidates=edges if edges else tuple(pool),
            )
        pool.sort(key=lambda r: min(abs(r.energy - a) for a in edge_set))
        edges = tuple(pool[:2])
    ordered = sorted(edges, key=lambda r: _pair_key(r.energy))
    return (ordered[0].energy, ordered[1].energy)


def _splits(params: ModelParams) -> Tuple[float, float]:
    """(re_split, im_split) of the edge pair after a fresh build."""
    h = build_soc(params) if params.spinful else build_real_space(params)
    e_a, e_b = edge_pair(eigendecompose(h), params)
    d = e_a - e_b
    return (abs(d.real), abs(d.imag))


def recovery_map(
    params_base: ModelParams,
    n_range: Sequence[int],
    gamma_range: Sequence[float],
    max_workers: int | None = None,
) -> Tuple[Tuple[RecoveryCell, ...], ...]:
    """Edge-pair splittings over an (N, gamma) grid, row-major in N.

    Cells where the edge pair cannot be extracted (merge with bound
    states, invalid sizes) are kept as nan entries; the run continues.
    Results land in a pre-sized grid indexed by coordinates, so the
    output is identical for any worker count.
    """
    n_values = [int(v) for v in n_range]
    gamma_values = [float(g) for g in gamma_range]

    def cell(nv: int, gv: float) -> RecoveryCell:
        try:
            p = replace(params_base, N=nv, gamma=gv)
            re_split, im_split = _splits(p)
        except (ValueError, RuntimeError):
            return RecoveryCell(N=nv, gamma=gv, re_split=float("nan"), im_split=float("nan"))
        return RecoveryCell(N=nv, gamma=gv, re_split=re_split, im_split=im_split)

    grid: list[list[RecoveryCell | None]] = [[None] * len(gamma_values) for _ in n_values]
    if max_workers is not None and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            futures = {}
            for i, nv in enumerate(n_values):
                for j, gv in enumerate(gamma_values):
                    futures[pool.submit(cell, nv, gv)] = (i, j)
            for fut, (i, j) in futures.items():
                grid[i][j] = fut.result()
    else:
        for i, nv in enumerate(n_values):
            for j, gv in enumerate(gamma_values):
                grid[i][j] = cell(nv, gv)
    return tuple(tuple(row) for row in grid)


def merge_boundary(params_base: ModelParams, gamma: float) -> float:
    """Largest theta below which the edge pair merges to exact-zero real parts.

    Bisects theta in (0, pi/2) with resolution 1e-3 * pi on the
    predicate re_split <= 1e-8 at the given gamma.  When even theta = 0
    does not merge (e.g. the Hermitian case) the function warns and
    returns 0.0.
    """
    if params_base.variant != "ssh_c" or params_base.n != 1 or params_base.alpha_prime != "a":
        raise ValueError("merge_boundary is defined for the boundary defect pair on sublattice A (n=1)")

    def merged(theta: float) -> bool:
        try:
            p = replace(params_base, theta=theta, gamma=gamma)
            re_split, _ = _splits(p)
        except (ValueError, RuntimeError):
            return False
        return re_split <= 1e-8

    if not merged(0.0):
        warnings.warn("no merge region found; returning theta* = 0", stacklevel=2)
        return 0.0
    lo, hi = 0.0, math.pi / 2.0
    while hi - lo > 1e-3 * math.pi:
        mid = 0.5 * (lo + hi)
        if merged(mid):
            lo = mid
        else:
            hi = mid
    return lo


def fit_exponential(n_values: Sequence[float], splits: Sequence[float]) -> DecayFit:
    """Least-squares fit of ln(split) vs n, excluding entries <= 1e-12.

    Requires at least three usable points; returns the amplitude at
    n = 0, the 1/e decay length in units of the defect depth n, and
    the coefficient of determination of the line fit.
    """
    xs, ys = [], []
    for nv, sv in zip(n_values, splits):
        if sv > 1e-12:
            xs.append(float(nv))
            ys.append(math.log(float(sv)))
    if len(xs) < 3:
        raise ValueError(f"fewer than 3 usable points for the decay fit (got {len(xs)}); nothing to fit")
    x = np.asarray(xs)
    y = np.asarray(ys)
    slope, intercept = np.polyfit(x, y, 1)
    residuals = y - (slope * x + intercept)
    ss_res = float(np.sum(residuals**2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        r_squared = 1.0 if ss_res < 1e-30 else 0.0
    else:
        r_squared = 1.0 - ss_res / ss_tot
    return DecayFit(
        amplitude=float(np.exp(intercept)),
        decay_length=float(-1.0 / slope),
        r_squared=r_squared,
    )


def decay_fit(params_base: ModelParams, n_values: Sequence[int]) -> DecayFit:
    """Exponential decay of the edge-pair imaginary splitting vs defect depth.

    Sweeps the defect depth n at fixed (N, gamma, theta), collects
    |Im(E_A - E_B)| from the classified edge pair, and fits
    ln(im_split) against n.  Depths whose splitting is at the round-off
    floor (<= 1e-12) are excluded; fewer than three usable depths is an
    error (that is the expected outcome for the B-sublattice defect,
    whose edge modes stay exactly real).
    """
    if params_base.variant != "ssh_c":
        raise ValueError("decay_fit sweeps the defect depth of variant 'ssh_c'")
    im_splits = []
    for nv in n_values:
        p = replace(params_base, n=int(nv))
        _, im_split = _splits(p)
        im_splits.append(im_split)
    return fit_exponential([int(v) for v in n_values], im_splits)


def pt_phase_classify(params: ModelParams, spectrum: Spectrum) -> PhasePoint:
    """Label one (theta, gamma) point with its PT phase I..VI.

    Nontrivial regime (|theta| < pi/2) with a detected edge pair:
    phase I (real bulk, non-real edge pair), IV (real bulk, real edge
    pair), V (broken bulk, real edge pair), VI (broken bulk and broken
    edge pair).  Trivial regime: II when every mode is real at 1e-8,
    III otherwise.  A nontrivial point where no edge pair is detected
    falls back to the II/III distinction with has_edge_pair False.
    """
    if params.spinful:
        raise ValueError("PT phases I..VI are defined for the spinless chain")
    records = classify_modes(spectrum, params)
    edges = tuple(r for r in records if r.mode_class == "edge")
    n_complex = int(sum(1 for r in records if abs(r.energy.imag) > IM_TOL))
    has_pair = len(edges) == 2
    edge_real = bool(has_pair and all(abs(r.energy.imag) <= IM_TOL for r in edges))
    bulk_real = all(abs(r.energy.imag) <= IM_TOL for r in records if r.mode_class != "edge")
    nontrivial = params.j_minus < params.j_plus

    if nontrivial and has_pair:
        if bulk_real:
            label = "IV" if edge_real else "I"
        else:
            label = "V" if edge_real else "VI"
    else:
        label = "II" if n_complex == 0 else "III"

    return PhasePoint(
        theta=params.theta,
        gamma=params.gamma,
        label=label,
        n_complex=n_complex,
        has_edge_pair=has_pair,
        edge_pair_real=edge_real,
    )


def soc_edge_quartet(spectrum: Spectrum, params: ModelParams) -> Dict[str, ModeRecord]:
    """The four boundary modes of the spin-orbit chain, labeled A1,A2,B1,B2.

    A1/A2 sit at the left end with dominant spin up/down on site (1,A);
    B1/B2 at the right end with dominant spin up/down on site (N,B).
    The labels are assigned by the permutation of the four most
    localized in-gap modes that maximizes the total density on those
    four spin-resolved boundary sites, which is deterministic and
    robust to the strong left-right hybridization at small N.
    """
    if params.variant != "soc":
        raise ValueError("soc_edge_quartet requires variant 'soc'")
    records = classify_modes(spectrum, params)
    quartet = tuple(r for r in records if r.mode_class == "edge")
    if len(quartet) != 4:
        raise ModeCountError(
            f"expected exactly 4 boundary modes, found {len(quartet)}: {[r.energy for r in quartet]}",
            candidates=quartet,
        )
    # Flat 0-based positions of (1,A,up), (1,A,down), (N,B,up), (N,B,down).
    targets = (0, 1, 4 * (params.N - 1) + 2, 4 * (params.N - 1) + 3)
    labels = ("A1", "A2", "B1", "B2")
    best_perm = None
    best_score = -1.0
    for perm in itertools.permutations(range(4)):
        score = sum(quartet[perm[t]].profile[targets[t]] for t in range(4))
        if score > best_score:
            best_score = score
            best_perm = perm
    return {labels[t]: quartet[best_perm[t]] for t in range(4)}


def bisect_gamma(
    predicate: Callable[[float], bool],
    gamma_lo: float,
    gamma_hi: float,
    resolution: float = 0.005,
) -> float:
    """Smallest gamma (to the given resolution) where a predicate turns true.

    Assumes the predicate is monotone over [gamma_lo, gamma_hi]: false
    at the lower end, true at the upper end.
    """
    if predicate(gamma_lo):
        return gamma_lo
    if not predicate(gamma_hi):
        raise ValueError(f"predicate is false on the whole interval [{gamma_lo}, {gamma_hi}]")
    lo, hi = gamma_lo, gamma_hi
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        if predicate(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _n_complex(params: ModelParams) -> int:
    h = build_soc(params) if params.spinful else build_real_space(params)
    ev = eigendecompose(h).eigenvalues
    return int(np.sum(np.abs(ev.imag) > IM_TOL))


def gamma_complex_onset(
    params_base: ModelParams,
    theta: float = math.pi,
    gamma_hi: float = 1.0,
    resolution: float = 0.005,
) -> float:
    """First gamma with any complex energy at a fixed theta."""

    def broken(gamma: float) -> bool:
        return _n_complex(replace(params_base, theta=theta, gamma=gamma)) > 0

    return bisect_gamma(broken, 0.0, gamma_hi, resolution)


def gamma_full_breaking(
    params_base: ModelParams,
    n_theta: int = 21,
    gamma_hi: float = 1.5,
    resolution: float = 0.005,
) -> float:
    """First gamma with complex energies at every theta of a [0, pi] grid."""
    thetas = np.linspace(0.0, math.pi, n_theta)

    def broken_everywhere(gamma: float) -> bool:
        return all(_n_complex(replace(params_base, theta=float(t), gamma=gamma)) > 0 for t in thetas)

    return bisect_gamma(broken_everywhere, 0.0, gamma_hi, resolution)


def gamma_gap_entry(
    params_base: ModelParams,
    theta: float = 0.0,
    gamma_hi: float = 3.0,
    resolution: float = 0.005,
) -> float:
    """First gamma where a complex mode enters the bulk gap at a fixed theta.

    The predicate compares |Re E| of the complex modes against the full
    gap half-width; the classifier's tighter 0.9 margin is a labeling
    convention, not the physical band edge.
    """

    def enters(gamma: float) -> bool:
        p = replace(params_base, theta=theta, gamma=gamma)
        h = build_soc(p) if p.spinful else build_real_space(p)
        ev = eigendecompose(h).eigenvalues
        cplx = ev[np.abs(ev.imag) > IM_TOL]
        if cplx.size == 0:
            return False
        return bool(np.min(np.abs(cplx.real)) < bulk_gap(p))

    return bisect_gamma(enters, 0.0, gamma_hi, resolution)


def gamma_all_imaginary(
    params_base: ModelParams,
    n_theta: int = 21,
    gamma_hi: float = 4.0,
    resolution: float = 0.005,
) -> float:
    """First gamma where every complex energy is purely imaginary at all theta."""
    thetas = np.linspace(0.0, math.pi, n_theta)

    def all_imaginary(gamma: float) -> bool:
        saw_complex = False
        for t in thetas:
            p = replace(params_base, theta=float(t), gamma=gamma)
            h = build_soc(p) if p.spinful else build_real_space(p)
            ev = eigendecompose(h).eigenvalues
            cplx = ev[np.abs(ev.imag) > IM_TOL]
            if cplx.size:
                saw_complex = True
                if np.max(np.abs(cplx.real)) > 1e-6:
                    return False
        return saw_complex

    return bisect_gamma(all_imaginary, 0.0, gamma_hi, resolution)
