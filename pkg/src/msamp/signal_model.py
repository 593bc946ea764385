"""Multiscale bandlimited test signals with an exact finite representation.

A signal here is a sum of frequency bands

    f(x) = sum_{m=-M..M} c_m(x) * exp(2*pi*i*m*x/epsilon),

where each slow envelope c_m is a finite combination of sinc atoms on the
Nyquist grid j/(2N) and is therefore exactly bandlimited to [-N, N]. The
band carriers push copies of that interval to m/epsilon, producing a
multiband spectrum with gaps of order 1/epsilon. Because the
representation is closed-form, sampling and reconstruction can be tested
against exact values instead of approximations.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConstraintError

__all__ = [
    "SincAtom",
    "MultiscaleSignalSpec",
    "SpectralSupport",
    "sinc",
    "evaluate_coefficient",
    "evaluate",
    "spectral_support",
    "random_signal",
    "total_energy",
    "spec_to_dict",
    "spec_from_dict",
    "save_spec",
    "load_spec",
]

# |u| below this is treated with the series branch of sinc.
_SINC_TAYLOR_TOL = 1e-8
# Distance from a nonzero integer below which sinc is exactly zero. Keeps
# the cardinal-interpolation identity exact under floating-point grids;
# see kernel usage in sampling_operator.
_SINC_SNAP_TOL = 1e-9


def sinc(u):
    """Normalized sinc, sin(pi*u)/(pi*u), exact at integers.

    Returns exactly 1 at u == 0 (via the series 1 - (pi*u)^2/6 for
    |u| < 1e-8) and exactly 0 at nonzero integers (snap window 1e-9, wide
    enough to absorb roundoff in grid arithmetic, narrow enough not to
    disturb any tested tolerance).
    """
    u = np.asarray(u, dtype=float)
    scalar = u.ndim == 0
    u = np.atleast_1d(u)
    out = np.empty_like(u)

    r = np.rint(u)
    near_int = np.abs(u - r) < _SINC_SNAP_TOL
    near_zero = np.abs(u) < _SINC_TAYLOR_TOL

    plain = ~(near_int | near_zero)
    up = u[plain]
    out[plain] = np.sin(np.pi * up) / (np.pi * up)

    uz = u[near_zero]
    out[near_zero] = 1.0 - (np.pi * uz) ** 2 / 6.0
    out[near_int & ~near_zero] = 0.0

    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class SincAtom:
    """One sinc atom of a band envelope: amplitude * sinc(2N*x - center_index).

    The atom is centered at x = center_index/(2N), i.e. on the Nyquist grid
    of the envelope bandwidth.
    """

    center_index: int
    amplitude: complex

    def __post_init__(self):
        a = complex(self.amplitude)
        if not (math.isfinite(a.real) and math.isfinite(a.imag)):
            raise ConstraintError(f"atom amplitude must be finite, got {a!r}")
        object.__setattr__(self, "amplitude", a)
        object.__setattr__(self, "center_index", int(self.center_index))


@dataclass(frozen=True)
class MultiscaleSignalSpec:
    """Exact description of a multiscale bandlimited signal.

    Fields
    ------
    epsilon : scale ratio, 0 < epsilon << 1
    N       : half-bandwidth of each band envelope (cycles per unit)
    M       : number of fast harmonics per side; band indices run -M..M
    bands   : mapping band index -> tuple of SincAtom (may omit empty bands)

    Requires 0 < 2N < 1/epsilon so the bands cannot overlap, and at least
    one atom with a nonzero amplitude.
    """

    epsilon: float
    N: float
    M: int
    bands: dict = field(default_factory=dict)
    dimension: int = 1

    def __post_init__(self):
        eps = float(self.epsilon)
        N = float(self.N)
        M = int(self.M)
        if self.dimension != 1:
            raise ConstraintError("only dimension=1 is supported")
        if not (eps > 0 and N > 0 and M >= 0):
            raise ConstraintError("need epsilon > 0, N > 0, M >= 0")
        if not 2 * N < 1 / eps:
            raise ConstraintError(
                f"band overlap: need 2N < 1/epsilon, got 2N={2 * N} >= {1 / eps}"
            )
        clean = {}
        for m, atoms in self.bands.items():
            m = int(m)
            if abs(m) > M:
                raise ConstraintError(f"band index {m} outside [-{M}, {M}]")
            clean[m] = tuple(
                a if isinstance(a, SincAtom) else SincAtom(*a) for a in atoms
            )
        if not any(a.amplitude != 0 for atoms in clean.values() for a in atoms):
            raise ConstraintError("degenerate signal: all atom amplitudes are zero")
        object.__setattr__(self, "epsilon", eps)
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "bands", clean)

    def band(self, m: int) -> tuple:
        """Atoms of band m (empty tuple if the band carries nothing)."""
        if abs(m) > self.M:
            raise ConstraintError(f"band index {m} outside [-{self.M}, {self.M}]")
        return self.bands.get(int(m), ())

    def band_indices(self) -> list[int]:
        return list(range(-self.M, self.M + 1))


@dataclass(frozen=True)
class SpectralSupport:
    """Sorted, pairwise-disjoint frequency intervals carrying all signal energy."""

    intervals: tuple

    def total_measure(self) -> float:
        return float(sum(hi - lo for lo, hi in self.intervals))

    def contains(self, freq: float) -> bool:
        return any(lo <= freq <= hi for lo, hi in self.intervals)


def evaluate_coefficient(spec: MultiscaleSignalSpec, m: int, x):
    """Evaluate the band-m envelope c_m at x (scalar or array).

    c_m(x) = sum_j a_j * sinc(2N*x - j); exactly bandlimited to [-N, N].
    """
    if abs(int(m)) > spec.M:
        raise ConstraintError(f"band index {m} outside [-{spec.M}, {spec.M}]")
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.zeros(x.shape, dtype=complex)
    for atom in spec.band(m):
        out += atom.amplitude * sinc(2 * spec.N * x - atom.center_index)
    return complex(out[0]) if scalar else out


def evaluate(spec: MultiscaleSignalSpec, x):
    """Evaluate the full signal sum_m c_m(x) exp(2*pi*i*m*x/epsilon)."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.zeros(x.shape, dtype=complex)
    for m, atoms in spec.bands.items():
        cm = np.zeros(x.shape, dtype=complex)
        for atom in atoms:
            cm += atom.amplitude * sinc(2 * spec.N * x - atom.center_index)
        out += cm * np.exp(2j * np.pi * m * x / spec.epsilon)
    return complex(out[0]) if scalar else out


def spectral_support(spec: MultiscaleSignalSpec) -> SpectralSupport:
    """The 2M+1 intervals [-N + m/eps, N + m/eps], sorted and disjoint."""
    if not 2 * spec.N < 1 / spec.epsilon:
        raise ConstraintError("band overlap: 2N < 1/epsilon violated")
    intervals = tuple(
        (-spec.N + m / spec.epsilon, spec.N + m / spec.epsilon)
        for m in range(-spec.M, spec.M + 1)
    )
    for (_, hi), (lo, _) in zip(intervals, intervals[1:]):
        if hi >= lo:
            raise ConstraintError("spectral intervals overlap")
    return SpectralSupport(intervals)


def random_signal(
    seed: int,
    N: float,
    M: int,
    epsilon: float,
    atoms_per_band: int,
    amplitude_bound: float = 1.0,
) -> MultiscaleSignalSpec:
    """Deterministic random test signal.

    Every band -M..M receives `atoms_per_band` atoms with center indices
    drawn from {-atoms_per_band, ..., atoms_per_band} and amplitudes drawn
    uniformly from the complex disk of radius `amplitude_bound` (magnitude
    bounded away from zero so the signal cannot degenerate).
    """
    if atoms_per_band < 1:
        raise ConstraintError("atoms_per_band must be >= 1")
    if amplitude_bound <= 0:
        raise ConstraintError("amplitude_bound must be positive")
    rng = np.random.default_rng(seed)
    bands = {}
    for m in range(-M, M + 1):
        atoms = []
        for _ in range(atoms_per_band):
            j = int(rng.integers(-atoms_per_band, atoms_per_band + 1))
            mag = amplitude_bound * math.sqrt(rng.uniform(0.04, 1.0))
            phase = rng.uniform(0.0, 2 * np.pi)
            atoms.append(SincAtom(j, mag * cmath.exp(1j * phase)))
        bands[m] = tuple(atoms)
    return MultiscaleSignalSpec(epsilon=epsilon, N=N, M=M, bands=bands)


def total_energy(spec: MultiscaleSignalSpec) -> float:
    """Exact squared L2 norm over the whole line.

    Bands live on disjoint spectral intervals and sinc translates on the
    Nyquist grid are orthogonal with norm^2 = 1/(2N), so the energy is
    (1/2N) * sum_m sum_j |a_{m,j}|^2 after merging atoms that share a
    center.
    """
    total = 0.0
    for atoms in spec.bands.values():
        merged: dict[int, complex] = {}
        for a in atoms:
            merged[a.center_index] = merged.get(a.center_index, 0j) + a.amplitude
        total += sum(abs(v) ** 2 for v in merged.values())
    return total / (2 * spec.N)


# -- JSON wire format ---------------------------------------------------
#
# {"epsilon": r, "N": r, "M": n,
#  "bands": [{"m": n, "atoms": [{"j": n, "re": r, "im": r}]}]}


def spec_to_dict(spec: MultiscaleSignalSpec) -> dict:
    return {
        "epsilon": spec.epsilon,
        "N": spec.N,
        "M": spec.M,
        "bands": [
            {
                "m": m,
                "atoms": [
                    {"j": a.center_index, "re": a.amplitude.real, "im": a.amplitude.imag}
                    for a in atoms
                ],
            }
            for m, atoms in sorted(spec.bands.items())
        ],
    }


def spec_from_dict(d: dict) -> MultiscaleSignalSpec:
    bands = {
        int(b["m"]): tuple(
            SincAtom(int(a["j"]), complex(a["re"], a["im"])) for a in b["atoms"]
        )
        for b in d["bands"]
    }
    return MultiscaleSignalSpec(
        epsilon=float(d["epsilon"]), N=float(d["N"]), M=int(d["M"]), bands=bands
    )


def save_spec(spec: MultiscaleSignalSpec, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(spec_to_dict(spec), f, indent=2)
        f.write("\n")


def load_spec(path) -> MultiscaleSignalSpec:
    with open(path, encoding="utf-8") as f:
        return spec_from_dict(json.load(f))
