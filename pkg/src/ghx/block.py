"""
Block symbol of an m x n system: assembly of sigma_P(xi), its smallest singular value, norms,
determinant and the action on stacked coefficient blocks.
"""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

from .groups import GroupId, RepIndex, rep_meta
from .symbols import ScalarSymbol, scale
from .util import NumericalError


@dataclass(frozen=True)
class SystemSymbol:
    """
    An m x n system of left-invariant operators given by the grid of their scalar symbols.

    Attributes:
        group: the group of every entry
        grid: rows of `ScalarSymbol`s, `grid[j][i]` acting on the i-th unknown in the j-th equation
        name: display name for reports
    """
    group: GroupId
    grid: tuple[tuple[ScalarSymbol, ...], ...]
    name: str = ""

    def __post_init__(self):
        if not self.grid or not self.grid[0]:
            raise ValueError("a system needs at least one row and one column")
        if any(len(row) != len(self.grid[0]) for row in self.grid):
            raise ValueError("all rows of the system grid must have the same length")
        if any(entry.group != self.group for row in self.grid for entry in row):
            raise ValueError(f"all entries of the system must be symbols on {self.group}")

    @staticmethod
    def of(group: GroupId, grid: Sequence[Sequence[ScalarSymbol]],
           name: str = "") -> "SystemSymbol":
        """build a `SystemSymbol` from any nested sequence of symbols"""
        return SystemSymbol(group, tuple(tuple(row) for row in grid), name)

    @property
    def m(self) -> int:
        """number of equations (block rows)"""
        return len(self.grid)

    @property
    def n(self) -> int:
        """number of unknowns (block columns)"""
        return len(self.grid[0])

    @property
    def is_square(self) -> bool:
        """whether m = n"""
        return self.m == self.n

    @property
    def is_diagonal(self) -> bool:
        """whether the system is square with identically vanishing off-diagonal entries"""
        return self.is_square and all(
            self.grid[j][i].is_zero for j in range(self.m) for i in range(self.n) if i != j)

    def entry(self, j: int, i: int) -> ScalarSymbol:
        """the symbol in row j and column i"""
        return self.grid[j][i]

    def blocks(self, xi: RepIndex) -> list[list[np.ndarray]]:
        """the evaluated d_xi x d_xi blocks of every entry at xi"""
        return [[entry(xi) for entry in row] for row in self.grid]

    def scaled(self, coeff: complex) -> "SystemSymbol":
        """the system with every entry multiplied by `coeff`"""
        return SystemSymbol.of(self.group, [[scale(coeff, entry) for entry in row]
                                            for row in self.grid], f"{coeff}*({self.name})")


@dataclass(frozen=True)
class BlockEvaluation:
    """
    Evaluation of a system at one representation.

    Attributes:
        xi: index of the representation
        bracket: <xi>
        dim: d_xi
        matrix: the assembled (m d_xi) x (n d_xi) matrix
        lambda_min: smallest singular value, exactly 0.0 when it is a numerical zero
        hs_norm: Hilbert-Schmidt norm of the matrix
        op_norm: operator norm of the matrix
        det: determinant for square matrices else None
        numerical_zero: whether lambda_min was below the zero tolerance
    """
    xi: RepIndex
    bracket: float
    dim: int
    matrix: np.ndarray
    lambda_min: float
    hs_norm: float
    op_norm: float
    det: Optional[complex]
    numerical_zero: bool


def assemble(sys: SystemSymbol, xi: RepIndex) -> np.ndarray:
    """
    Assemble the block matrix sigma_P(xi) with block (j, i) = grid[j][i](xi).

    :param sys: the system
    :param xi: index of the representation
    :return: complex matrix of shape (m d_xi, n d_xi)
    """
    return np.block(sys.blocks(xi))


def singular_values(matrix: np.ndarray) -> np.ndarray:
    """
    All singular values of a matrix in descending order using a full dense SVD.

    :param matrix: the matrix which must have finite entries
    :return: the min(rows, cols) singular values
    """
    matrix = np.asarray(matrix)
    if not np.all(np.isfinite(matrix)):
        raise NumericalError("matrix has non-finite entries")
    if matrix.size == 0:
        return np.zeros(0)
    try:
        return scipy.linalg.svd(matrix, compute_uv=False, check_finite=False)
    except np.linalg.LinAlgError:
        # divide-and-conquer can fail to converge where the QR iteration driver does not
        try:
            return scipy.linalg.svd(matrix, compute_uv=False, check_finite=False,
                                    lapack_driver="gesvd")
        except np.linalg.LinAlgError as ex:
            raise NumericalError(f"SVD did not converge: {ex}") from ex


def smallest_singular_value(matrix: np.ndarray) -> float:
    """
    Smallest singular value min ||A v||_2 over unit vectors v. A matrix with more columns
    than rows has a kernel, so the result is 0 in that case.
    """
    matrix = np.asarray(matrix)
    values = singular_values(matrix)
    if matrix.ndim != 2 or matrix.shape[0] < matrix.shape[1] or values.size == 0:
        return 0.0
    return float(values[-1])


def evaluate(sys: SystemSymbol, xi: RepIndex, zero_tolerance: float = 1e-12) -> BlockEvaluation:
    """
    Evaluate a system at given representation.

    :param sys: the system
    :param xi: index of the representation
    :param zero_tolerance: smallest singular values below `zero_tolerance * max(1, hs_norm)`
                           are reported as exact zeros with the numerical zero flag
    :return: the `BlockEvaluation`
    """
    meta = rep_meta(sys.group, xi)
    matrix = assemble(sys, xi)
    values = singular_values(matrix)
    rows, cols = matrix.shape
    op = float(values[0]) if values.size else 0.0
    lambda_min = float(values[-1]) if rows >= cols else 0.0
    hs = float(np.linalg.norm(matrix))
    numerical_zero = lambda_min < zero_tolerance * max(1.0, hs)
    if numerical_zero:
        lambda_min = 0.0
    det = complex(scipy.linalg.det(matrix, check_finite=False)) if rows == cols else None
    matrix.setflags(write=False)
    return BlockEvaluation(tuple(xi), meta.bracket, meta.dim, matrix, lambda_min, hs, op, det,
                           numerical_zero)


def apply(sys: SystemSymbol, xi: RepIndex, u_blocks: Sequence[np.ndarray]) -> list[np.ndarray]:
    """
    Apply the system to the n x 1 block column u(xi): block j of the result is
    sum_i grid[j][i](xi) u_i.

    :param sys: the system
    :param xi: index of the representation
    :param u_blocks: the n blocks of size d_xi x d_xi
    :return: the m result blocks
    """
    dim = rep_meta(sys.group, xi).dim
    if len(u_blocks) != sys.n:
        raise ValueError(f"expected {sys.n} coefficient blocks but got {len(u_blocks)}")
    u_arrays = [np.asarray(u, dtype=np.complex128) for u in u_blocks]
    for u in u_arrays:
        if u.shape != (dim, dim):
            raise ValueError(f"coefficient block of shape {u.shape} does not match "
                             f"d_xi={dim}")
    blocks = sys.blocks(xi)
    return [sum((blocks[j][i] @ u_arrays[i] for i in range(sys.n)),
                np.zeros((dim, dim), dtype=np.complex128)) for j in range(sys.m)]
