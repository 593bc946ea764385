"""Shannon-type interpolation operator for individual sampling cosets.

For samples v_j = g(j*delta_X + k*delta_x) taken on coset k, the operator

    S_k g(x) = sum_{|j|<=J} v_j * phi_s(x - j*delta_X - k*delta_x)

uses the ideal lowpass kernel phi_s(z) = sinc(z/delta_X), whose passband
is [-1/(2*delta_X), 1/(2*delta_X)]. The kernel vanishes at every other
point of the same coset, so the interpolant reproduces its own samples
exactly regardless of truncation.
"""

from __future__ import annotations

import csv

import numpy as np

from .errors import ConstraintError
from .sampling_grid import PeriodicSamplingGrid
from .signal_model import MultiscaleSignalSpec, evaluate, sinc

__all__ = [
    "SampleSet",
    "CosetInterpolant",
    "kernel_phi_s",
    "sample_signal",
    "apply_coset_operator",
    "coset_parseval_check",
    "samples_to_csv",
    "samples_from_csv",
]


class SampleSet:
    """Sample values on a truncated multicoset grid.

    values[k, j + J] holds the sample at j*delta_X + k*delta_x, complex,
    for 0 <= k <= P and -J <= j <= J.
    """

    def __init__(self, grid: PeriodicSamplingGrid, values: np.ndarray):
        values = np.asarray(values, dtype=complex)
        expected = (grid.P + 1, 2 * grid.J + 1)
        if values.shape != expected:
            raise ConstraintError(
                f"values shape {values.shape} != (P+1, 2J+1) = {expected}"
            )
        if not np.all(np.isfinite(values.real) & np.isfinite(values.imag)):
            raise ConstraintError("sample values must be finite")
        self.grid = grid
        self.values = values

    def value(self, k: int, j: int) -> complex:
        self.grid.point(k, j)  # bounds check
        return complex(self.values[k, j + self.grid.J])

    def coset_row(self, k: int) -> np.ndarray:
        if not 0 <= k <= self.grid.P:
            raise ConstraintError(f"coset index {k} outside 0..{self.grid.P}")
        return self.values[k]

    def total_sample_energy(self) -> float:
        """sum over all grid points of |value|^2."""
        return float(np.sum(np.abs(self.values) ** 2))


class CosetInterpolant:
    """Callable truncated interpolant S_k for one coset of a SampleSet."""

    def __init__(self, samples: SampleSet, k: int):
        if not 0 <= k <= samples.grid.P:
            raise ConstraintError(f"coset index {k} outside 0..{samples.grid.P}")
        self.k = k
        self.delta_X = samples.grid.delta_X
        self.delta_x = samples.grid.delta_x
        self._offsets = samples.grid.coset_points(k)
        self._values = samples.coset_row(k)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        ker = sinc((x[:, None] - self._offsets[None, :]) / self.delta_X)
        out = ker.astype(complex) @ self._values
        return complex(out[0]) if scalar else out


def kernel_phi_s(z, delta_X: float):
    """Lowpass interpolation kernel sinc(z/delta_X).

    Exactly 1 at z = 0 and exactly 0 at z = n*delta_X for n != 0.
    """
    if delta_X <= 0:
        raise ConstraintError("delta_X must be positive")
    return sinc(np.asarray(z, dtype=float) / delta_X)


def sample_signal(
    spec: MultiscaleSignalSpec, grid: PeriodicSamplingGrid, check: bool = True
) -> SampleSet:
    """Evaluate the signal on every grid point.

    With check=True the grid must satisfy the reconstruction constraints
    for `spec`; pass check=False for free-form sampling (e.g. uniform
    full-rate grids for the classical oracle).
    """
    if check:
        from .sampling_grid import validate_against

        report = validate_against(grid, spec)
        if not report.ok:
            names = ", ".join(c.name for c in report.failures)
            raise ConstraintError(f"grid fails constraints: {names}")
    rows = [evaluate(spec, grid.coset_points(k)) for k in range(grid.P + 1)]
    return SampleSet(grid, np.stack(rows))


def apply_coset_operator(samples: SampleSet, k: int, x):
    """Truncated coset interpolant S_k evaluated at x (scalar or array)."""
    return CosetInterpolant(samples, k)(x)


def _trapezoid_sq_norm(fn, lo: float, hi: float, step: float) -> float:
    # composite trapezoid of |fn|^2; step is a cap, actual spacing divides
    # the window evenly
    n = max(int(np.ceil((hi - lo) / step)), 8)
    x = np.linspace(lo, hi, n + 1)
    y = np.abs(fn(x)) ** 2
    h = (hi - lo) / n
    return float(h * (np.sum(y) - 0.5 * (y[0] + y[-1])))


def coset_parseval_check(
    samples: SampleSet, k: int, window_margin: float | None = None
) -> tuple[float, float]:
    """Compare the L2 norm of S_k against its closed sample form.

    Returns (lhs, rhs) where lhs is a quadrature estimate of ||S_k||^2
    over [-J*dX - margin, J*dX + margin] and rhs = delta_X * sum_j |v_j|^2.
    Equality is exact on the whole line; the gap measures the energy of
    the kernel tails beyond the quadrature window.
    """
    grid = samples.grid
    interp = CosetInterpolant(samples, k)
    if window_margin is None:
        window_margin = grid.J * grid.delta_X
    lo = -grid.J * grid.delta_X - window_margin
    hi = grid.J * grid.delta_X + k * grid.delta_x + window_margin
    # S_k is bandlimited to 1/(2 delta_X); delta_x refines further when
    # cosets exist
    if grid.P > 0:
        step = min(grid.delta_x, grid.delta_X / 4) / 8
    else:
        step = grid.delta_X / 32
    npts = (hi - lo) / step
    if npts > 2_000_000:
        step = (hi - lo) / 2_000_000
    lhs = _trapezoid_sq_norm(interp, lo, hi, step)
    rhs = grid.delta_X * float(np.sum(np.abs(samples.coset_row(k)) ** 2))
    return lhs, rhs


# -- CSV wire format: header k,j,x,re,im; floats at 17 significant digits


def samples_to_csv(samples: SampleSet, path) -> None:
    grid = samples.grid
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["k", "j", "x", "re", "im"])
        for k in range(grid.P + 1):
            for j in range(-grid.J, grid.J + 1):
                v = samples.values[k, j + grid.J]
                w.writerow(
                    [k, j, f"{grid.point(k, j):.17g}", f"{v.real:.17g}", f"{v.imag:.17g}"]
                )


def samples_from_csv(path) -> SampleSet:
    """Rebuild a SampleSet (grid included) from its CSV export."""
    rows = []
    with open(path, newline="", encoding="utf-8") as f:
        r = csv.reader(f)
        header = next(r)
        if [h.strip() for h in header] != ["k", "j", "x", "re", "im"]:
            raise ConstraintError(f"unexpected sample CSV header: {header}")
        for rec in r:
            if not rec:
                continue
            rows.append(
                (int(rec[0]), int(rec[1]), float(rec[2]), float(rec[3]), float(rec[4]))
            )
    if not rows:
        raise ConstraintError("sample CSV contains no rows")
    P = max(k for k, *_ in rows)
    J = max(j for _, j, *_ in rows)
    by_kj = {(k, j): (x, re, im) for k, j, x, re, im in rows}
    if len(by_kj) != (P + 1) * (2 * J + 1):
        raise ConstraintError("sample CSV is not a complete (P+1) x (2J+1) grid")
    x00 = by_kj[(0, 0)][0]
    delta_X = by_kj[(0, 1)][0] - x00 if J >= 1 else 0.0
    delta_x = by_kj[(1, 0)][0] - x00 if P >= 1 else 0.0
    grid = PeriodicSamplingGrid(delta_X=delta_X, delta_x=delta_x, P=P, J=J)
    values = np.zeros((P + 1, 2 * J + 1), dtype=complex)
    for (k, j), (_, re, im) in by_kj.items():
        values[k, j + J] = complex(re, im)
    return SampleSet(grid, values)
