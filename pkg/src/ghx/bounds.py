"""
Lower bounds on the smallest singular value of block symbols: the determinant bound and its
chained version through the Hilbert-Schmidt norms of the entries, the lower bounds for that
Hilbert-Schmidt factor from the symbol class, block diagonal dominance and the Varah bound.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.linalg
from scipy.optimize import minimize_scalar

from .block import BlockEvaluation, SystemSymbol, smallest_singular_value
from .groups import RepIndex
from .symbols import hs_norm, max_norm, op_norm

# min over x > 0 of x^(x/2), attained at x = 1/e
HALFPOWER_CONSTANT = math.exp(-1.0 / (2.0 * math.e))

BlockGrid = Sequence[Sequence[np.ndarray]]


@dataclass(frozen=True)
class DominanceResult:
    """
    Outcome of the block diagonal dominance test.

    Attributes:
        dominant: whether the grid is dominant by both rows and columns
        alpha: minimum over rows of ||A_ll^-1||^-1 - sum_(i != l) ||A_li||
        beta: minimum over columns of ||A_ll^-1||^-1 - sum_(j != l) ||A_jl||
        reason: why the grid is not dominant (empty when dominant)
        marginal: dominant but with a slack below the marginal tolerance
    """
    dominant: bool
    alpha: float
    beta: float
    reason: str = ""
    marginal: bool = False


@dataclass(frozen=True)
class BoundReport:
    """
    All lower bounds at one representation next to the exact smallest singular value.
    A bound is None where it does not apply.
    """
    xi: RepIndex
    lambda_min: float
    det_hs: Optional[float]
    det_chain: Optional[float]
    varah: Optional[float]
    varah_relaxed: Optional[float]
    dominant_maxnorm: bool
    dominant_opnorm: bool
    marginal: bool
    hs_factor: Optional[float]
    hs_factor_weyl: Optional[float] = None
    hs_factor_bounded_dim: Optional[float] = None

    def present_bounds(self) -> dict[str, float]:
        """the lower bounds on lambda_min that are present in this report"""
        bounds = {"det_hs": self.det_hs, "det_chain": self.det_chain, "varah": self.varah,
                  "varah_relaxed": self.varah_relaxed}
        return {key: value for key, value in bounds.items() if value is not None}


@dataclass(frozen=True)
class SymbolClass:
    """
    Sample constants of the symbol class estimate ||sigma_P_ji(xi)||_op <= C_P <xi>^tau_P and
    the Weyl bound d_xi <= C_G <xi>^(dim/2), plus the uniform dimension bound K if any.
    """
    c_p: float
    tau_p: float
    c_g: float
    group_dim: int
    dim_bound: Optional[int]


def _abs_det(matrix: np.ndarray) -> tuple[float, float]:
    # (|det|, log|det|) using the LU factorization of slogdet
    sign, logdet = np.linalg.slogdet(matrix)
    if sign == 0:
        return 0.0, -math.inf
    return math.exp(logdet), float(logdet)


def det_hs_lower(matrix: np.ndarray) -> float:
    """
    Determinant lower bound |det A| ((l-1)/||A||_HS^2)^((l-1)/2) on the smallest singular
    value of a square l x l matrix with l >= 2.

    :param matrix: the square matrix
    :return: the bound which is 0 for singular matrices
    """
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"determinant bound needs a square matrix, got shape {matrix.shape}")
    size = matrix.shape[0]
    if size < 2:
        raise ValueError("determinant bound is undefined for 1x1 matrices, use |det| instead")
    _, log_det = _abs_det(matrix)
    hs = float(np.linalg.norm(matrix))
    if hs == 0.0 or log_det == -math.inf:
        return 0.0
    return math.exp(log_det + 0.5 * (size - 1) * (math.log(size - 1) - 2.0 * math.log(hs)))


def _chain_value(blocks: BlockGrid, log_det: float, size: int) -> float:
    hs_sq = sum(hs_norm(block) ** 2 for row in blocks for block in row)
    if hs_sq == 0.0 or log_det == -math.inf:
        return 0.0
    return HALFPOWER_CONSTANT * math.exp(log_det - 0.5 * (size - 1) * math.log(hs_sq))


def det_chain_lower_blocks(blocks: BlockGrid) -> float:
    """
    The chained determinant bound
    e^(-1/(2e)) |det sigma| (sum_(i,j) ||sigma_ji||_HS^2)^(-(m d - 1)/2) from the blocks
    of a square system.

    :param blocks: m x m grid of d x d blocks with m d >= 2
    :return: the bound which is 0 for a singular assembled matrix
    """
    matrix = np.block([list(row) for row in blocks])
    if matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"determinant bound needs a square system, got shape {matrix.shape}")
    if matrix.shape[0] < 2:
        raise ValueError("chained determinant bound needs m * d_xi >= 2")
    return _chain_value(blocks, _abs_det(matrix)[1], matrix.shape[0])


def det_chain_lower(sys: SystemSymbol, xi: RepIndex) -> float:
    """`det_chain_lower_blocks` for the blocks of a square system at xi"""
    if not sys.is_square:
        raise ValueError(f"determinant bound needs a square system, got {sys.m}x{sys.n}")
    return det_chain_lower_blocks(sys.blocks(xi))


def halfpower(x: float) -> float:
    """the function x^(x/2) whose minimum is the chain constant"""
    return x ** (x / 2.0)


def min_halfpower_constant() -> float:
    """
    Minimize x^(x/2) over x > 0 numerically; the result is e^(-1/(2e)) ~ 0.832040.
    """
    result = minimize_scalar(lambda x: 0.5 * x * math.log(x), bounds=(1e-9, 1.0),
                             method="bounded", options={"xatol": 1e-12})
    return math.exp(float(result.fun))


def _split(matrix: np.ndarray, rows: int, cols: int, dim: int) -> list[list[np.ndarray]]:
    return [[matrix[j * dim:(j + 1) * dim, i * dim:(i + 1) * dim] for i in range(cols)]
            for j in range(rows)]


def block_dominance(blocks: BlockGrid, norm: str = "max",
                    marginal_tolerance: float = 1e-12) -> DominanceResult:
    """
    Test block diagonal dominance by rows and by columns:
    ||A_ll^-1||^-1 > sum_(i != l) ||A_li|| and ||A_ll^-1||^-1 > sum_(j != l) ||A_jl||.

    In "max" mode the norm is the entrywise maximum modulus and the diagonal blocks are
    inverted explicitly; in "op" mode ||A_ll^-1||_op^-1 is the smallest singular value of A_ll.
    The strict inequalities are tested with no tolerance. A diagonal block counts as singular,
    and the grid as not dominant, when its smallest singular value is at most
    1e-14 max(1, ||A_ll||_HS), so numerically singular blocks are never inverted.

    :param blocks: square grid of square blocks
    :param norm: one of "max" or "op"
    :param marginal_tolerance: dominant grids with a slack below this are flagged as marginal
    :return: the `DominanceResult`
    """
    if norm not in ("max", "op"):
        raise ValueError(f"norm must be one of 'max' or 'op' but got '{norm}'")
    size = len(blocks)
    if any(len(row) != size for row in blocks):
        raise ValueError("block dominance needs a square grid of blocks")
    norm_fn = max_norm if norm == "max" else op_norm
    inv_norms = []
    for ell in range(size):
        diag = np.asarray(blocks[ell][ell])
        if diag.ndim != 2 or diag.shape[0] != diag.shape[1]:
            raise ValueError(f"diagonal block {ell} is not square")
        lam = smallest_singular_value(diag)
        if lam <= 1e-14 * max(1.0, hs_norm(diag)):
            return DominanceResult(False, -math.inf, -math.inf,
                                   f"singular diagonal block {ell + 1}")
        inv_norms.append(lam if norm == "op" else 1.0 / max_norm(scipy.linalg.inv(diag)))
    off_norms = [[0.0 if i == j else norm_fn(np.asarray(blocks[j][i])) for i in range(size)]
                 for j in range(size)]
    alpha = min(inv_norms[ell] - sum(off_norms[ell]) for ell in range(size))
    beta = min(inv_norms[ell] - sum(off_norms[j][ell] for j in range(size))
               for ell in range(size))
    if alpha <= 0.0:
        return DominanceResult(False, alpha, beta, "not dominant by rows")
    if beta <= 0.0:
        return DominanceResult(False, alpha, beta, "not dominant by columns")
    return DominanceResult(True, alpha, beta, marginal=min(alpha, beta) < marginal_tolerance)


def varah_lower(blocks: BlockGrid, mode: str = "max") -> Optional[float]:
    """
    Varah lower bound sqrt(alpha beta) for block diagonally dominant grids.

    Mode "max" uses the entrywise maximum norm slacks and is a bound only for scalar blocks:
    for d x d blocks with d > 1 it is not computed since sqrt(alpha beta) can exceed lambda_min
    ([[1, 1], [1, -1]] gives 2 against sqrt(2)). Mode "relaxed" uses the slacks alpha*, beta*
    with the smallest singular value on the diagonal and operator norms off it, and holds for
    any block dimension.

    :param blocks: square grid of square blocks
    :param mode: one of "max" or "relaxed"
    :return: the bound, or None when the grid is not dominant or the mode does not apply
    """
    if mode not in ("max", "relaxed"):
        raise ValueError(f"mode must be one of 'max' or 'relaxed' but got '{mode}'")
    result = block_dominance(blocks, "max" if mode == "max" else "op")
    if not result.dominant:
        return None
    if mode == "max" and np.asarray(blocks[0][0]).shape[0] > 1:
        return None
    return math.sqrt(result.alpha * result.beta)


def hs_factor(blocks: BlockGrid) -> Optional[float]:
    """
    The factor (sum_(i,j) ||sigma_ji||_HS^2)^(-(m d - 1)/2) of the chained determinant bound,
    or None if all blocks vanish.
    """
    size = sum(np.asarray(row[0]).shape[0] for row in blocks)
    hs_sq = sum(hs_norm(block) ** 2 for row in blocks for block in row)
    if hs_sq == 0.0:
        return None
    return math.exp(-0.5 * (size - 1) * math.log(hs_sq))


def hs_factor_weyl_lower(m: int, dim: int, bracket: float, c_g: float, c_p: float,
                         tau_p: float, group_dim: int) -> float:
    """
    Lower bound (C_G <xi>^(dim G/2) m^2 C_P^2 <xi>^(2 tau_P))^(-(m d_xi - 1)/2) of the
    Hilbert-Schmidt factor, valid when d_xi <= C_G <xi>^(dim G/2) and every entry satisfies
    ||sigma_ji(xi)||_op <= C_P <xi>^tau_P. It is at least 1 for large <xi> when tau_P < -dim G/4.
    """
    base = c_g * bracket ** (group_dim / 2.0) * m * m * c_p * c_p * bracket ** (2.0 * tau_p)
    return base ** (-(m * dim - 1) / 2.0)


def hs_factor_bounded_dim_lower(m: int, dim_bound: int, bracket: float, c_p: float,
                                tau_p: float) -> float:
    """
    Lower bound min{1, (K m^2 C_P^2)^(-(m K - 1)/2) <xi>^(-tau_P (m K - 1))} of the
    Hilbert-Schmidt factor when d_xi <= K on the whole dual.
    """
    exponent = -(m * dim_bound - 1) / 2.0
    value = (dim_bound * m * m * c_p * c_p) ** exponent * bracket ** (-tau_p * (m * dim_bound - 1))
    return min(1.0, value)


def bound_report(sys: SystemSymbol, evaluation: BlockEvaluation,
                 symbol_class: Optional[SymbolClass] = None,
                 marginal_tolerance: float = 1e-12) -> BoundReport:
    """
    Compute every applicable lower bound at one representation.

    The determinant bounds need a square system; for a 1x1 assembled matrix the determinant
    bound is |det| itself. The maximum norm Varah bound is reported only for scalar blocks
    where it is a valid bound; the relaxed one is reported for every dominant grid.

    :param sys: the system
    :param evaluation: its `BlockEvaluation` at xi
    :param symbol_class: sample symbol class constants for the factor bounds, if known
    :param marginal_tolerance: flag dominance slacks below this as marginal
    :return: the `BoundReport`
    """
    if not sys.is_square:
        return BoundReport(evaluation.xi, evaluation.lambda_min, None, None, None, None,
                           False, False, False, None)
    dim = evaluation.dim
    size = sys.m * dim
    blocks = _split(evaluation.matrix, sys.m, sys.n, dim)
    abs_det, log_det = _abs_det(evaluation.matrix)
    det_hs = abs_det if size == 1 else det_hs_lower(evaluation.matrix)
    det_chain = _chain_value(blocks, log_det, size)
    dom_max = block_dominance(blocks, "max", marginal_tolerance)
    dom_op = block_dominance(blocks, "op", marginal_tolerance)
    varah = math.sqrt(dom_max.alpha * dom_max.beta) if dom_max.dominant and dim == 1 else None
    varah_relaxed = math.sqrt(dom_op.alpha * dom_op.beta) if dom_op.dominant else None
    factor_weyl = factor_bounded = None
    if symbol_class is not None:
        factor_weyl = hs_factor_weyl_lower(sys.m, dim, evaluation.bracket, symbol_class.c_g,
                                           symbol_class.c_p, symbol_class.tau_p,
                                           symbol_class.group_dim)
        if symbol_class.dim_bound is not None:
            factor_bounded = hs_factor_bounded_dim_lower(sys.m, symbol_class.dim_bound,
                                                         evaluation.bracket, symbol_class.c_p,
                                                         symbol_class.tau_p)
    return BoundReport(evaluation.xi, evaluation.lambda_min, det_hs, det_chain, varah,
                       varah_relaxed, dom_max.dominant, dom_op.dominant,
                       dom_max.marginal or dom_op.marginal, hs_factor(blocks), factor_weyl,
                       factor_bounded)


def check_report(report: BoundReport, slack: float = 1e-10) -> list[str]:
    """
    Names of the bounds in a report exceeding lambda_min + slack * max(1, lambda_min).
    """
    limit = report.lambda_min + slack * max(1.0, report.lambda_min)
    return [key for key, value in report.present_bounds().items() if value > limit]


def check_hs_factors(report: BoundReport, slack: float = 1e-10) -> list[str]:
    """
    Names of the symbol class factor bounds exceeding the exact Hilbert-Schmidt factor.
    """
    if report.hs_factor is None:
        return []
    limit = report.hs_factor * (1.0 + slack)
    failures = []
    if report.hs_factor_weyl is not None and report.hs_factor_weyl > limit:
        failures.append("hs_factor_weyl")
    if report.hs_factor_bounded_dim is not None and report.hs_factor_bounded_dim > limit:
        failures.append("hs_factor_bounded_dim")
    return failures


def hs_op_inequality(block: np.ndarray, slack: float = 1e-10) -> bool:
    """whether ||A||_HS^2 <= N ||A||_op^2 holds (up to relative slack) for an N x N block"""
    size = np.asarray(block).shape[0]
    return hs_norm(block) ** 2 <= size * op_norm(block) ** 2 * (1.0 + slack)
