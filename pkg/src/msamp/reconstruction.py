"""Recovery of multiscale signals from multicoset samples.

Each band carrier frequency m/epsilon splits against the coset lattice as

    m/epsilon = L_m/delta_X + alpha_m,   L_m integer, alpha_m in [0, 1/delta_X),

so undersampling folds band m down to the offset alpha_m while tagging it
with a coset-dependent phase w_m^k, w_m = exp(2*pi*i*L_m*delta_x/delta_X).
Collecting the P+1 = 2M+1 coset interpolants at a point x yields a square
Vandermonde system in the nodes w_m whose solution separates the bands;
re-attaching the lattice carriers exp(2*pi*i*L_m*x/delta_X) reassembles
the signal exactly (up to series truncation).

One subtlety the plain floor split misses: the interpolation kernel's
passband is centered, [-1/(2dX), 1/(2dX)], so the alias offset that
actually survives lowpass filtering is the centered remainder
beta_m in [-1/(2dX), 1/(2dX)), not alpha_m. Reconstruction therefore uses
the branch-corrected split (L_m+1, alpha_m - 1/dX) whenever
alpha_m > 1/(2dX). Configurations where a folded band crosses the
passband edge (|beta_m| > 1/(2dX) - N) cannot be represented by any
single branch and are rejected.
"""

from __future__ import annotations

import cmath
import csv
import math
from collections import namedtuple
from dataclasses import dataclass

import numpy as np

from .errors import ConstraintError, SingularSystemError
from .sampling_grid import PeriodicSamplingGrid, validate_against
from .sampling_operator import SampleSet, apply_coset_operator
from .signal_model import MultiscaleSignalSpec

__all__ = [
    "FrequencySplit",
    "VandermondeSystem",
    "ReconstructedSignal",
    "SpecParams",
    "decompose_frequency",
    "alias_branch",
    "build_vandermonde",
    "solve_coset_system",
    "reconstruct",
    "reconstruct_two_band",
    "reconstruction_to_csv",
]

# Snap window for near-integer lattice ratios, so lattice-aligned
# configurations (delta_X/epsilon integer) land on the exact branch.
_LATTICE_SNAP = 1e-9

SpecParams = namedtuple("SpecParams", ["N", "M", "epsilon"])


@dataclass(frozen=True)
class FrequencySplit:
    """Floor decomposition m/epsilon = L/delta_X + alpha, alpha in [0, 1/delta_X)."""

    m: int
    L: int
    alpha: float


def decompose_frequency(m: int, epsilon: float, delta_X: float) -> FrequencySplit:
    """Split the band carrier m/epsilon against the coset lattice 1/delta_X.

    L = floor((m/epsilon) * delta_X) with a 1e-9 snap toward the next
    integer, so exactly lattice-aligned carriers resolve to alpha = 0
    despite rounding in the inputs.
    """
    if epsilon <= 0 or delta_X <= 0:
        raise ConstraintError("epsilon and delta_X must be positive")
    t = m * delta_X / epsilon
    L = int(math.floor(t + _LATTICE_SNAP))
    alpha = m / epsilon - L / delta_X
    if alpha < 0:
        # only reachable through the snap; the true remainder is zero
        alpha = 0.0
    return FrequencySplit(m=int(m), L=L, alpha=alpha)


def alias_branch(split: FrequencySplit, delta_X: float) -> tuple[int, float]:
    """Centered alias branch (L_eff, beta) with beta in [-1/(2dX), 1/(2dX)).

    Identical to the floor split while alpha <= 1/(2dX); beyond the half
    cell the surviving alias is the one folded from above.
    """
    if split.alpha * delta_X > 0.5 + _LATTICE_SNAP:
        return split.L + 1, split.alpha - 1.0 / delta_X
    return split.L, split.alpha


@dataclass(frozen=True, eq=False)
class VandermondeSystem:
    """Coset-coupling system for bands on the unit circle.

    nodes[i] = exp(2*pi*i*L_eff/delta_X * delta_x) for band band_indices[i];
    matrix[k, i] = nodes[i]**k couples coset k to band i. lattice_shifts
    and carrier_offsets hold the branch-corrected split (L_eff, beta) used
    for reconstruction; splits holds the floor decomposition.
    """

    M: int
    delta_X: float
    delta_x: float
    band_indices: tuple
    splits: tuple
    lattice_shifts: tuple
    carrier_offsets: tuple
    nodes: np.ndarray
    matrix: np.ndarray
    straddling_bands: tuple

    @property
    def size(self) -> int:
        return len(self.band_indices)

    def min_node_gap(self) -> float:
        """Smallest pairwise distance between nodes."""
        w = self.nodes
        if len(w) < 2:
            return math.inf
        d = np.abs(w[:, None] - w[None, :])
        return float(np.min(d[~np.eye(len(w), dtype=bool)]))


def _as_params(spec) -> SpecParams:
    if isinstance(spec, MultiscaleSignalSpec):
        return SpecParams(spec.N, spec.M, spec.epsilon)
    N, M, eps = spec
    return SpecParams(float(N), int(M), float(eps))


def _build_system(
    band_indices,
    N: float,
    epsilon: float,
    grid: PeriodicSamplingGrid,
    enforce_half_plane: bool = False,
) -> VandermondeSystem:
    band_indices = tuple(int(m) for m in band_indices)
    splits = tuple(decompose_frequency(m, epsilon, grid.delta_X) for m in band_indices)
    eff = [alias_branch(s, grid.delta_X) for s in splits]
    shifts = tuple(L for L, _ in eff)
    offsets = tuple(b for _, b in eff)

    nodes = np.array(
        [cmath.exp(2j * np.pi * L * grid.delta_x / grid.delta_X) for L in shifts]
    )
    n = len(nodes)

    # node collisions make the system singular; report the first pair
    for a in range(n):
        for b in range(a + 1, n):
            if abs(nodes[a] - nodes[b]) < 1e-12:
                raise SingularSystemError(
                    f"coincident Vandermonde nodes for bands "
                    f"{band_indices[a]} and {band_indices[b]}: "
                    f"lattice shifts {shifts[a]}, {shifts[b]} collide on the "
                    f"unit circle (delta_x/delta_X resonance)"
                )

    # for the symmetric band set, positive bands must sit on the upper
    # half circle and negative bands on the lower one; holds whenever the
    # grid constraints do
    if enforce_half_plane:
        for m, L in zip(band_indices, shifts):
            if m == 0:
                continue
            frac = (L * grid.delta_x / grid.delta_X) % 1.0
            upper = 0.0 < frac < 0.5
            if (m > 0 and not upper) or (m < 0 and not (0.5 < frac < 1.0)):
                raise ConstraintError(
                    f"node for band {m} left its half plane (angle fraction "
                    f"{frac:.6g}); grid constraints are violated"
                )

    edge = 1.0 / (2 * grid.delta_X) - N
    straddling = tuple(
        m
        for m, b in zip(band_indices, offsets)
        if abs(b) > edge + 1e-12 / grid.delta_X
    )

    k = np.arange(n)
    matrix = nodes[None, :] ** k[:, None]
    return VandermondeSystem(
        M=max(abs(m) for m in band_indices) if band_indices else 0,
        delta_X=grid.delta_X,
        delta_x=grid.delta_x,
        band_indices=band_indices,
        splits=splits,
        lattice_shifts=shifts,
        carrier_offsets=offsets,
        nodes=nodes,
        matrix=matrix,
        straddling_bands=straddling,
    )


def build_vandermonde(spec, grid: PeriodicSamplingGrid) -> VandermondeSystem:
    """System for the symmetric band set -M..M of `spec` on `grid`.

    `spec` may be a MultiscaleSignalSpec or an (N, M, epsilon) tuple.
    Verifies node distinctness (SingularSystemError names the colliding
    bands) and the half-plane split of positive/negative bands. Bands
    whose folded spectrum crosses the kernel passband edge are recorded in
    straddling_bands; reconstruction refuses to run on those.
    """
    p = _as_params(spec)
    return _build_system(
        range(-p.M, p.M + 1), p.N, p.epsilon, grid, enforce_half_plane=True
    )


def _solve_dual_vandermonde(nodes: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    # Bjorck-Pereyra specialized O(n^2) solve of sum_i u_i w_i^k = b_k
    # (power-row Vandermonde); rhs may be a matrix of stacked columns.
    w = np.asarray(nodes)
    b = np.array(rhs, dtype=complex)
    n = len(w)
    for k in range(n - 1):
        for i in range(n - 1, k, -1):
            b[i] = b[i] - w[k] * b[i - 1]
    for k in range(n - 2, -1, -1):
        for i in range(k + 1, n):
            b[i] = b[i] / (w[i] - w[i - k - 1])
        for i in range(k, n - 1):
            b[i] = b[i] - b[i + 1]
    return b


def solve_coset_system(V: VandermondeSystem, coset_values) -> np.ndarray:
    """Solve sum_i u_i * w_i^k = coset_values[k] for the band coefficients u.

    coset_values has length 2M+1 (one interpolant value per coset) or
    shape (2M+1, nx) to solve many evaluation points at once. Uses a
    dense LU solve for small systems and the specialized O(n^2)
    Bjorck-Pereyra recurrence once the band count reaches 17 (M >= 8).
    """
    b = np.asarray(coset_values, dtype=complex)
    n = V.size
    if b.shape[0] != n:
        raise ConstraintError(f"expected {n} coset values, got {b.shape[0]}")
    if V.size >= 17:
        return _solve_dual_vandermonde(V.nodes, b)
    try:
        return np.linalg.solve(V.matrix, b)
    except np.linalg.LinAlgError as exc:  # unreachable after build checks
        raise SingularSystemError(f"coset system is singular: {exc}") from exc


@dataclass(frozen=True, eq=False)
class ReconstructedSignal:
    """Per-band coefficients and the assembled signal at the evaluation points.

    coefficients[i, :] holds the carrier-stripped band solution
    u_i(x) = c_m(x) * exp(2*pi*i*beta_m*x); band_component(m) re-attaches
    the lattice carrier, approximating the multiscale component
    c_m(x) * exp(2*pi*i*m*x/epsilon). assembled is their sum.
    """

    eval_points: np.ndarray
    band_indices: tuple
    lattice_shifts: tuple
    delta_X: float
    coefficients: np.ndarray
    assembled: np.ndarray

    def band_component(self, m: int) -> np.ndarray:
        try:
            i = self.band_indices.index(int(m))
        except ValueError:
            raise ConstraintError(f"band {m} not part of this reconstruction")
        carrier = np.exp(
            2j * np.pi * (self.lattice_shifts[i] / self.delta_X) * self.eval_points
        )
        return self.coefficients[i] * carrier


def _assemble(system: VandermondeSystem, xs: np.ndarray, U: np.ndarray) -> np.ndarray:
    out = np.zeros(len(xs), dtype=complex)
    for i, L in enumerate(system.lattice_shifts):
        out += U[i] * np.exp(2j * np.pi * (L / system.delta_X) * xs)
    return out


def reconstruct(
    samples: SampleSet, spec_params, eval_points
) -> ReconstructedSignal:
    """Recover the signal from multicoset samples at the given points.

    spec_params is (N, M, epsilon) or a full MultiscaleSignalSpec; the
    sample grid must satisfy the reconstruction constraints (P = 2M,
    delta_x <= epsilon/(2M+1), epsilon < delta_X <= 1/(2N)) and no folded
    band may straddle the kernel passband edge.
    """
    p = _as_params(spec_params)
    grid = samples.grid
    report = validate_against(grid, p)
    if not report.ok:
        names = "; ".join(f"{c.name} ({c.detail})" for c in report.failures)
        raise ConstraintError(f"grid fails reconstruction constraints: {names}")

    system = build_vandermonde(p, grid)
    if system.straddling_bands:
        raise ConstraintError(
            f"folded bands {list(system.straddling_bands)} straddle the "
            f"kernel passband edge at 1/(2*delta_X); no single alias branch "
            f"represents them. Adjust delta_X."
        )

    xs = np.atleast_1d(np.asarray(eval_points, dtype=float))
    B = np.stack([apply_coset_operator(samples, k, xs) for k in range(grid.P + 1)])
    U = solve_coset_system(system, B)
    return ReconstructedSignal(
        eval_points=xs,
        band_indices=system.band_indices,
        lattice_shifts=system.lattice_shifts,
        delta_X=system.delta_X,
        coefficients=U,
        assembled=_assemble(system, xs, U),
    )


def reconstruct_two_band(
    samples: SampleSet, spec_params, eval_points
) -> ReconstructedSignal:
    """Closed-form fast path for signals occupying only bands {0, 1}.

    Requires two cosets (P = 1) and a lattice-aligned scale,
    delta_X/epsilon integer, so band 1 folds exactly onto band 0 and the
    2x2 system has the explicit inverse [[w1, -1], [-1, 1]]/(w1 - 1) with
    w1 = exp(2*pi*i*delta_x/epsilon). spec_params is (N, epsilon).
    """
    N, epsilon = (
        (spec_params.N, spec_params.epsilon)
        if isinstance(spec_params, MultiscaleSignalSpec)
        else (float(spec_params[0]), float(spec_params[-1]))
    )
    grid = samples.grid
    if grid.P != 1:
        raise ConstraintError(f"two-band path needs exactly two cosets, got P={grid.P}")
    ratio = grid.delta_X / epsilon
    L1 = round(ratio)
    if not math.isclose(ratio, L1, rel_tol=0, abs_tol=_LATTICE_SNAP * max(1.0, ratio)):
        raise ConstraintError(
            f"two-band path needs delta_X/epsilon integer, got {ratio!r}"
        )
    if L1 < 1:
        raise ConstraintError("two-band path needs delta_X > epsilon")
    if grid.delta_X > 1 / (2 * N):
        raise ConstraintError("delta_X exceeds 1/(2N); band envelopes would clip")

    w1 = cmath.exp(2j * np.pi * grid.delta_x / epsilon)
    if abs(w1 - 1) < 1e-12:
        raise SingularSystemError(
            "degenerate two-band nodes: delta_x/epsilon is an integer, w1 = 1"
        )

    xs = np.atleast_1d(np.asarray(eval_points, dtype=float))
    S0 = apply_coset_operator(samples, 0, xs)
    S1 = apply_coset_operator(samples, 1, xs)
    u0 = (w1 * S0 - S1) / (w1 - 1)
    u1 = (S1 - S0) / (w1 - 1)
    coeffs = np.stack([u0, u1])
    shifts = (0, L1)
    assembled = u0 + u1 * np.exp(2j * np.pi * (L1 / grid.delta_X) * xs)
    return ReconstructedSignal(
        eval_points=xs,
        band_indices=(0, 1),
        lattice_shifts=shifts,
        delta_X=grid.delta_X,
        coefficients=coeffs,
        assembled=assembled,
    )


def reconstruction_to_csv(
    rec: ReconstructedSignal, path, truth=None, include_bands: bool = False
) -> None:
    """Write (x, re_fhat, im_fhat [, re_err, im_err] [, band columns]) rows."""
    header = ["x", "re_fhat", "im_fhat"]
    err = None
    if truth is not None:
        truth = np.asarray(truth, dtype=complex)
        err = rec.assembled - truth
        header += ["re_err", "im_err"]
    comps = []
    if include_bands:
        for m in rec.band_indices:
            header += [f"re_band_{m}", f"im_band_{m}"]
            comps.append(rec.band_component(m))
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(header)
        for ix, x in enumerate(rec.eval_points):
            row = [f"{x:.17g}", f"{rec.assembled[ix].real:.17g}", f"{rec.assembled[ix].imag:.17g}"]
            if err is not None:
                row += [f"{err[ix].real:.17g}", f"{err[ix].imag:.17g}"]
            for comp in comps:
                row += [f"{comp[ix].real:.17g}", f"{comp[ix].imag:.17g}"]
            w.writerow(row)
