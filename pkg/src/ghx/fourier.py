"""
Vector-valued Fourier analysis on T^r at desk scale: coefficient fields, the discrete
transforms with frequencies in [-N/2, N/2), Plancherel, Sobolev norms, decay classification
of coefficient profiles and the check of the quantization formula for multiplier systems.

Coefficient fields are group agnostic so that SU(2) counterexample witnesses use the same
type; the function space transforms exist only on the torus.
"""

import itertools
import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from .block import SystemSymbol, apply
from .groups import GroupId, RepIndex, check_rep, rep_meta
from .symbols import hs_norm
from .util import NotSupportedError, NumericalError


@dataclass(frozen=True)
class GridFunction:
    """
    Samples of f: T^r -> C^n at the points x = 2 pi j / N of the uniform grid.

    Attributes:
        values: complex array of shape (N,) * r + (n,)
    """
    values: np.ndarray

    def __post_init__(self):
        values = self.values
        if values.ndim < 2:
            raise ValueError("grid values need at least one axis and the component axis")
        size = values.shape[0]
        if size < 2 or size % 2 or any(dim != size for dim in values.shape[:-1]):
            raise ValueError(f"grid must have the same even size >= 2 on every axis, "
                             f"got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise NumericalError("grid function has non-finite values")

    @property
    def r(self) -> int:
        """dimension of the torus"""
        return self.values.ndim - 1

    @property
    def grid_size(self) -> int:
        """points N per axis"""
        return self.values.shape[0]

    @property
    def n(self) -> int:
        """number of components"""
        return self.values.shape[-1]


@dataclass(frozen=True)
class CoefficientField:
    """
    Finitely supported Fourier coefficients of a C^n valued function or distribution: a map
    from xi to the n x 1 block column of d_xi x d_xi matrices.
    """
    group: GroupId
    n: int
    entries: Mapping[RepIndex, tuple[np.ndarray, ...]]

    def __post_init__(self):
        for xi, blocks in self.entries.items():
            check_rep(self.group, xi)
            dim = rep_meta(self.group, xi).dim
            if len(blocks) != self.n or any(b.shape != (dim, dim) for b in blocks):
                raise ValueError(f"coefficient at {xi} must be {self.n} blocks of size "
                                 f"{dim}x{dim}")

    @staticmethod
    def of(group: GroupId, n: int,
           entries: Mapping[RepIndex, Sequence[np.ndarray]]) -> "CoefficientField":
        """build a field converting every block to a complex array"""
        return CoefficientField(group, n, {tuple(xi): tuple(np.asarray(b, dtype=np.complex128)
                                                            for b in blocks)
                                           for xi, blocks in entries.items()})

    def norm(self, xi: RepIndex) -> float:
        """(sum_i ||u_i(xi)||_HS^2)^(1/2), zero outside the support"""
        if (blocks := self.entries.get(tuple(xi))) is None:
            return 0.0
        return math.sqrt(sum(hs_norm(block) ** 2 for block in blocks))

    def profile(self) -> list[tuple[RepIndex, float, float]]:
        """(xi, <xi>, norm) for every point of the support sorted by <xi> and index"""
        points = [(xi, rep_meta(self.group, xi).bracket, self.norm(xi)) for xi in self.entries]
        points.sort(key=lambda p: (p[1], p[0]))
        return points


@dataclass(frozen=True)
class TrigPolynomial:
    """
    A C^n valued trigonometric polynomial sum_xi a_xi e^(i x.xi) on T^r given by its
    coefficient vectors.
    """
    r: int
    n: int
    terms: Mapping[RepIndex, np.ndarray]

    @property
    def degree(self) -> int:
        """largest |xi_k| among the terms"""
        return max((max(abs(x) for x in xi) for xi in self.terms), default=0)

    def differentiate(self, alpha: Sequence[int]) -> "TrigPolynomial":
        """the derivative d^alpha computed term by term: a_xi (i xi)^alpha"""
        return TrigPolynomial(self.r, self.n, {
            xi: a * np.prod([(1j * x) ** p for x, p in zip(xi, alpha)]) for xi, a in
            self.terms.items()})

    def sample(self, grid_size: int) -> GridFunction:
        """evaluate on the uniform grid summing the exponentials explicitly"""
        half = grid_size // 2
        if any(not -half <= x < half for xi in self.terms for x in xi):
            raise ValueError(f"degree {self.degree} exceeds the band of grid size {grid_size}")
        axes = np.meshgrid(*([2.0 * np.pi * np.arange(grid_size) / grid_size] * self.r),
                           indexing="ij")
        values = np.zeros((grid_size,) * self.r + (self.n,), dtype=np.complex128)
        for xi, coeff in self.terms.items():
            phase = np.exp(1j * sum(x * axis for x, axis in zip(xi, axes)))
            values += phase[..., np.newaxis] * np.asarray(coeff)
        return GridFunction(values)

    @staticmethod
    def random(rng: np.random.Generator, r: int, n: int, degree: int) -> "TrigPolynomial":
        """a trigonometric polynomial with standard complex normal coefficients"""
        span = range(-degree, degree + 1)
        return TrigPolynomial(r, n, {
            xi: rng.standard_normal(n) + 1j * rng.standard_normal(n)
            for xi in itertools.product(span, repeat=r)})


def _frequencies(grid_size: int) -> np.ndarray:
    # integer DFT bins mapped to [-N/2, N/2)
    return np.fft.fftfreq(grid_size, 1.0 / grid_size).astype(int)


def forward(f: GridFunction) -> CoefficientField:
    """
    Fourier coefficients u(xi) = (2 pi)^-r int f(x) e^(-i x.xi) dx of every component by
    the DFT normalized with 1/N^r, exact for trigonometric polynomials of degree < N/2.

    :param f: the grid function
    :return: the `CoefficientField` on the frequencies [-N/2, N/2)^r
    """
    size = f.grid_size
    coeffs = np.fft.fftn(f.values, axes=tuple(range(f.r))) / size ** f.r
    freqs = _frequencies(size)
    entries = {}
    for index in itertools.product(range(size), repeat=f.r):
        xi = tuple(int(freqs[k]) for k in index)
        entries[xi] = tuple(np.array([[c]]) for c in coeffs[index])
    return CoefficientField(GroupId.torus(f.r), f.n, entries)


def inverse(c: CoefficientField, grid_size: int) -> GridFunction:
    """
    Fourier inversion f(x) = sum_xi u(xi) e^(i x.xi) sampled on the grid.

    :param c: coefficients on a torus supported in [-N/2, N/2)^r
    :param grid_size: the even grid size N
    :return: the `GridFunction`
    """
    if not c.group.is_torus:
        raise NotSupportedError(f"function space transforms are only available on the torus, "
                                f"not on {c.group}")
    if grid_size < 2 or grid_size % 2:
        raise ValueError(f"grid size must be even and at least 2 but got {grid_size}")
    half = grid_size // 2
    r = c.group.rank
    spectrum = np.zeros((grid_size,) * r + (c.n,), dtype=np.complex128)
    for xi, blocks in c.entries.items():
        if any(not -half <= x < half for x in xi):
            raise ValueError(f"support at {xi} exceeds the band of grid size {grid_size}")
        spectrum[tuple(x % grid_size for x in xi)] = [block[0, 0] for block in blocks]
    return GridFunction(np.fft.ifftn(spectrum, axes=tuple(range(r))) * grid_size ** r)


def plancherel_check(f: GridFunction) -> tuple[float, float, float]:
    """
    Compare the grid average of |f|^2 with sum_xi d_xi sum_i ||u_i(xi)||_HS^2.

    :return: tuple of (lhs, rhs, relative error)
    """
    lhs = float(np.mean(np.sum(np.abs(f.values) ** 2, axis=-1)))
    rhs = sobolev_norm(forward(f), 0.0) ** 2
    scale = max(lhs, rhs)
    return lhs, rhs, 0.0 if scale == 0.0 else abs(lhs - rhs) / scale


def sobolev_norm(c: CoefficientField, s: float) -> float:
    """
    The H^s norm (sum_xi d_xi <xi>^(2s) sum_i ||u_i(xi)||_HS^2)^(1/2) of a coefficient field.
    """
    total = 0.0
    for xi in c.entries:
        meta = rep_meta(c.group, xi)
        total += meta.dim * meta.bracket ** (2.0 * s) * c.norm(xi) ** 2
    return math.sqrt(total)


@dataclass(frozen=True)
class MembershipReport:
    """
    Partial sums of the H^s norm over growing cutoffs and whether they settle.
    """
    s: float
    cutoffs: tuple[float, ...]
    partial_norms: tuple[float, ...]
    stabilizes: bool


def sobolev_membership(c: CoefficientField, s_values: Sequence[float], steps: int = 4,
                       rel_tol: float = 1e-2) -> list[MembershipReport]:
    """
    For each s the H^s norm restricted to <xi> <= Lambda_k for `steps` equally spaced
    cutoffs up to the largest <xi> of the support. The norm "stabilizes" when the last step
    adds less than `rel_tol` relative to the total, which is finite resolution evidence of
    membership in H^s (smoothness being membership for every s).
    """
    points = c.profile()
    if not points:
        raise NumericalError("zero function has no Sobolev profile")
    top = points[-1][1]
    cutoffs = tuple(top * (k + 1) / steps for k in range(steps))
    reports = []
    for s in s_values:
        partial = []
        for cutoff in cutoffs:
            total = sum(rep_meta(c.group, xi).dim * bracket ** (2.0 * s) * norm ** 2
                        for xi, bracket, norm in points if bracket <= cutoff)
            partial.append(math.sqrt(total))
        last, previous = partial[-1], partial[-2] if steps > 1 else 0.0
        stable = last == 0.0 or (last - previous) / last < rel_tol
        reports.append(MembershipReport(float(s), cutoffs, tuple(partial), stable))
    return reports


@dataclass(frozen=True)
class DecayReport:
    """
    Log-log fit of a coefficient norm profile: `rapid_decay` when the fitted exponent is
    beyond -max_power (evidence of smoothness), else `distribution_order` is the exponent.
    """
    exponent: float
    rapid_decay: bool
    distribution_order: Optional[float]
    sample_count: int


def decay_classify_profile(points: Sequence[tuple[float, float]], max_power: int = 10,
                           tail_fraction: float = 0.5) -> DecayReport:
    """
    Classify (<xi>, norm) pairs by the slope of log norm against log <xi> over the top
    `tail_fraction` of the nonzero points.

    :param points: pairs of <xi> and the coefficient norm there
    :param max_power: largest power N tested for rapid decay
    :param tail_fraction: fraction of the nonzero points (by <xi>) used in the fit
    :return: the `DecayReport`
    """
    nonzero = sorted((b, v) for b, v in points if v > 0.0)
    if not nonzero:
        raise NumericalError("zero function: every coefficient vanishes")
    tail = nonzero[len(nonzero) - max(2, math.ceil(tail_fraction * len(nonzero))):]
    log_b = np.log([b for b, _ in tail])
    log_v = np.log([v for _, v in tail])
    exponent = 0.0 if np.ptp(log_b) == 0.0 else float(np.polyfit(log_b, log_v, 1)[0])
    rapid = exponent < -max_power
    return DecayReport(exponent, rapid, None if rapid else exponent, len(tail))


def decay_classify(c: CoefficientField, cutoff: Optional[float] = None,
                   max_power: int = 10) -> DecayReport:
    """
    `decay_classify_profile` of the coefficient norms with <xi> <= cutoff (all if None).
    """
    return decay_classify_profile([(b, v) for _, b, v in c.profile()
                                   if cutoff is None or b <= cutoff], max_power)


def apply_field(sys: SystemSymbol, c: CoefficientField) -> CoefficientField:
    """the coefficients of P u: sigma_P(xi) u(xi) at every point of the support"""
    if c.n != sys.n:
        raise ValueError(f"system expects {sys.n} components but the field has {c.n}")
    return CoefficientField(sys.group, sys.m, {xi: tuple(apply(sys, xi, blocks))
                                                for xi, blocks in c.entries.items()})


def quantization_check(sys: SystemSymbol, poly: TrigPolynomial, grid_size: int) -> float:
    """
    Compare P f computed through the quantization formula, inverse(sigma_P forward(f)),
    against P applied term by term to the trigonometric polynomial f.

    :param sys: a system of torus polynomial multipliers
    :param poly: the band-limited f
    :param grid_size: even grid size N with degree(f) < N/2
    :return: maximum pointwise error over the grid and the components
    """
    if not sys.group.is_torus or sys.group.rank != poly.r:
        raise NotSupportedError(f"quantization check needs a system on torus:{poly.r}")
    if sys.n != poly.n:
        raise ValueError(f"system expects {sys.n} components but f has {poly.n}")
    for row in sys.grid:
        for entry in row:
            if entry.polynomial is None:
                raise NotSupportedError(f"entry '{entry.name}' is not a polynomial multiplier")
    through_symbol = inverse(apply_field(sys, forward(poly.sample(grid_size))), grid_size)
    direct = np.zeros((grid_size,) * poly.r + (sys.m,), dtype=np.complex128)
    for j, row in enumerate(sys.grid):
        for i, entry in enumerate(row):
            component = TrigPolynomial(poly.r, 1, {xi: a[i:i + 1] for xi, a in poly.terms.items()})
            for alpha, coeff in entry.polynomial or ():
                direct[..., j] += coeff * component.differentiate(alpha).sample(grid_size) \
                    .values[..., 0]
    return float(np.max(np.abs(through_symbol.values - direct)))
