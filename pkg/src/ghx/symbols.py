"""
Scalar symbols: matrix-valued evaluators xi -> sigma_D(xi) of d_xi x d_xi blocks carrying the
declared order of the operator, the built-in symbols of the standard left-invariant operators
on T^r and SU(2), and the order estimate from sampled operator norms.
"""

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Sequence

import numpy as np

from .groups import GroupId, RepIndex, enumerate_reps, format_rep, rep_meta
from .util import EvaluationError, NotSupportedError

Evaluator = Callable[[RepIndex], np.ndarray]
# (multi-index alpha, coefficient c_alpha) of a constant coefficient differential operator
Monomial = tuple[tuple[int, ...], complex]


@dataclass(frozen=True)
class ScalarSymbol:
    """
    Symbol of a single left-invariant operator.

    Attributes:
        name: a display name for reports
        group: the group the symbol lives on
        evaluator: pure function giving the d_xi x d_xi block at xi
        order: declared order tau, or None when unknown
        polynomial: the exact coefficient list when the symbol is a torus polynomial
        is_zero: whether the symbol vanishes identically
        flags: free-form markers shown in reports (e.g. "empty-coefficients")
    """
    name: str
    group: GroupId
    evaluator: Evaluator
    order: Optional[float]
    polynomial: Optional[tuple[Monomial, ...]] = None
    is_zero: bool = False
    flags: tuple[str, ...] = ()

    def __call__(self, xi: RepIndex) -> np.ndarray:
        """
        Evaluate the symbol at given representation checking the block shape and finiteness.

        :param xi: index of the representation
        :return: the complex d_xi x d_xi block
        """
        try:
            dim = rep_meta(self.group, xi).dim
        except ValueError as ex:
            raise EvaluationError(str(ex), str(xi)) from ex
        block = np.asarray(self.evaluator(xi), dtype=np.complex128)
        if block.shape != (dim, dim):
            raise EvaluationError(f"symbol '{self.name}' returned a block of shape "
                                  f"{block.shape} instead of {(dim, dim)}",
                                  format_rep(self.group, xi))
        if not np.all(np.isfinite(block)):
            raise EvaluationError(f"symbol '{self.name}' has non-finite entries",
                                  format_rep(self.group, xi))
        return block


@dataclass(frozen=True)
class SymbolOrderEstimate:
    """
    Fitted order of a symbol: ||sigma(xi)||_op <= c_hat * <xi>^tau_hat on every sample.
    """
    tau_hat: float
    c_hat: float
    sample_count: int


def op_norm(block: np.ndarray) -> float:
    """operator (spectral) norm of a block"""
    return float(np.linalg.norm(block, 2)) if block.size else 0.0


def hs_norm(block: np.ndarray) -> float:
    """Hilbert-Schmidt (Frobenius) norm of a block"""
    return float(np.linalg.norm(block)) if block.size else 0.0


def max_norm(block: np.ndarray) -> float:
    """entrywise maximum modulus of a block"""
    return float(np.max(np.abs(block))) if block.size else 0.0


def _check_torus(group: GroupId, what: str) -> None:
    if not group.is_torus:
        raise NotSupportedError(f"{what} is only defined on the torus, not on {group}")


def _check_su2(group: GroupId, what: str) -> None:
    if group.is_torus:
        raise NotSupportedError(f"{what} is only defined on su2, not on {group}")


def zero_symbol(group: GroupId, name: str = "0") -> ScalarSymbol:
    """the identically vanishing symbol with order -inf"""
    return ScalarSymbol(name, group,
                        lambda xi: np.zeros((rep_meta(group, xi).dim,) * 2, dtype=np.complex128),
                        -math.inf, polynomial=() if group.is_torus else None, is_zero=True)


def poly_value(coeffs: Sequence[Monomial], xi: RepIndex) -> complex:
    """value of sum_alpha c_alpha (i xi)^alpha at a torus frequency"""
    total = 0j
    for alpha, coeff in coeffs:
        term = complex(coeff)
        for x, power in zip(xi, alpha):
            term *= (1j * x) ** power
        total += term
    return total


def _normalize_poly(coeffs: Sequence[Monomial]) -> tuple[Monomial, ...]:
    # merge equal multi-indices and drop vanishing terms, sorted for reproducible output
    merged: dict[tuple[int, ...], complex] = {}
    for alpha, coeff in coeffs:
        merged[tuple(alpha)] = merged.get(tuple(alpha), 0j) + complex(coeff)
    return tuple(sorted((alpha, c) for alpha, c in merged.items() if c != 0))


def torus_poly_symbol(group: GroupId, coeffs: Sequence[Monomial],
                      name: Optional[str] = None) -> ScalarSymbol:
    """
    Symbol of the constant coefficient operator sum_alpha c_alpha d^alpha on T^r which is
    the multiplier sum_alpha c_alpha (i xi_1)^alpha_1 ... (i xi_r)^alpha_r.

    An empty coefficient list gives the zero symbol with declared order 0 and the
    "empty-coefficients" flag.

    :param group: the torus
    :param coeffs: list of (multi-index, coefficient)
    :param name: display name, defaults to a rendering of the coefficients
    :return: the `ScalarSymbol`
    """
    _check_torus(group, "torus_poly")
    for alpha, _ in coeffs:
        if len(alpha) != group.rank:
            raise ValueError(f"multi-index {tuple(alpha)} does not match {group}")
        if any(a < 0 for a in alpha):
            raise ValueError(f"multi-index {tuple(alpha)} has negative entries")
    if not coeffs:
        return ScalarSymbol(name or "0", group, zero_symbol(group).evaluator, 0.0,
                            polynomial=(), is_zero=True, flags=("empty-coefficients",))
    poly = _normalize_poly(coeffs)
    if not poly:
        return zero_symbol(group, name or "0")
    order = float(max(sum(alpha) for alpha, _ in poly))
    return ScalarSymbol(name or _poly_name(poly), group,
                        lambda xi: np.array([[poly_value(poly, xi)]], dtype=np.complex128),
                        order, polynomial=poly)


def coeff_str(coeff: complex) -> str:
    """short rendering of a coefficient, dropping a vanishing imaginary part"""
    coeff = complex(coeff)
    return f"{coeff.real:g}" if coeff.imag == 0 else f"{coeff:g}"


def _poly_name(poly: Sequence[Monomial]) -> str:
    parts = []
    for alpha, coeff in poly:
        derivs = "".join(f"d{j + 1}" + (f"^{a}" if a > 1 else "")
                         for j, a in enumerate(alpha) if a)
        parts.append(f"{coeff_str(coeff)}{'*' + derivs if derivs else ''}")
    return " + ".join(parts)


def bessel_symbol(group: GroupId, s: float) -> ScalarSymbol:
    """symbol <xi>^s * I of the Bessel potential (I + L_G)^(s/2) having order s"""

    def evaluate(xi: RepIndex) -> np.ndarray:
        meta = rep_meta(group, xi)
        return meta.bracket ** s * np.eye(meta.dim, dtype=np.complex128)

    return ScalarSymbol(f"bessel({s:g})", group, evaluate, float(s))


def su2_ladder(twice_spin: int) -> np.ndarray:
    """
    Raising operator J+ at spin l = twice_spin/2 in the basis m = l, l-1, ..., -l.

    :param twice_spin: the twice-spin 2l
    :return: real matrix with (J+)[k-1, k] = sqrt((l - m_k)(l + m_k + 1))
    """
    spin = twice_spin / 2.0
    m = spin - np.arange(twice_spin + 1)
    return np.diag(np.sqrt(spin * (spin + 1.0) - (m[1:] + 1.0) * m[1:]), 1)


def su2_angular_momentum(twice_spin: int, axis: int) -> np.ndarray:
    """
    Hermitian angular momentum matrix J_axis at spin twice_spin/2 with J1 = (J+ + J-)/2,
    J2 = i(J+ - J-)/2 and J3 = diag(l, ..., -l), so that the fields i*J_axis satisfy
    [iJ1, iJ2] = iJ3 cyclically.
    """
    if axis == 3:
        spin = twice_spin / 2.0
        return np.diag(spin - np.arange(twice_spin + 1)).astype(np.complex128)
    j_plus = su2_ladder(twice_spin).astype(np.complex128)
    j_minus = j_plus.conj().T
    if axis == 1:
        return 0.5 * (j_plus + j_minus)
    if axis == 2:
        return 0.5j * (j_plus - j_minus)
    raise ValueError(f"axis must be one of 1, 2, 3 but got {axis}")


def su2_field_symbol(group: GroupId, axis: int) -> ScalarSymbol:
    """
    Symbol i*J_axis(l) of the left-invariant vector field along the given axis of su(2).

    :param group: must be su2
    :param axis: one of 1, 2, 3
    :return: the `ScalarSymbol` of order 1
    """
    _check_su2(group, "su2_field")
    if axis not in (1, 2, 3):
        raise ValueError(f"axis must be one of 1, 2, 3 but got {axis}")
    return ScalarSymbol(f"D{axis}", group, lambda xi: 1j * su2_angular_momentum(xi[0], axis),
                        1.0)


def su2_casimir_symbol(group: GroupId) -> ScalarSymbol:
    """symbol -(D1^2 + D2^2 + D3^2) of the Laplacian which is l(l+1) * I"""
    _check_su2(group, "su2_casimir")

    def evaluate(xi: RepIndex) -> np.ndarray:
        meta = rep_meta(group, xi)
        return meta.casimir * np.eye(meta.dim, dtype=np.complex128)

    return ScalarSymbol("casimir", group, evaluate, 2.0)


def su2_sublaplacian_symbol(group: GroupId, axis: int = 3) -> ScalarSymbol:
    """
    Symbol l(l+1) I - J_axis^2 of the sub-Laplacian formed by the two fields other than `axis`.
    """
    _check_su2(group, "su2_sublaplacian")
    if axis not in (1, 2, 3):
        raise ValueError(f"axis must be one of 1, 2, 3 but got {axis}")

    def evaluate(xi: RepIndex) -> np.ndarray:
        meta = rep_meta(group, xi)
        j_axis = su2_angular_momentum(xi[0], axis)
        return meta.casimir * np.eye(meta.dim, dtype=np.complex128) - j_axis @ j_axis

    return ScalarSymbol(f"sublaplacian({axis})", group, evaluate, 2.0)


def table_symbol(name: str, group: GroupId, entries: Mapping[RepIndex, np.ndarray],
                 order: Optional[float]) -> ScalarSymbol:
    """
    Symbol given by a finite table of blocks; evaluation outside the table is an error.

    :param name: display name (usually the table file)
    :param group: the group
    :param entries: map from index to its d_xi x d_xi block
    :param order: declared order, or None if unknown
    :return: the `ScalarSymbol`
    """
    table: dict[RepIndex, np.ndarray] = {}
    for xi, block in entries.items():
        block = np.asarray(block, dtype=np.complex128)
        dim = rep_meta(group, xi).dim
        if block.shape != (dim, dim):
            raise EvaluationError(f"wrong block size {block.shape} in table '{name}', "
                                  f"expected {(dim, dim)}", format_rep(group, xi))
        block.setflags(write=False)
        table[tuple(xi)] = block

    def evaluate(xi: RepIndex) -> np.ndarray:
        if (block := table.get(tuple(xi))) is None:
            raise EvaluationError(f"missing representation in table '{name}'",
                                  format_rep(group, xi))
        return block

    return ScalarSymbol(name, group, evaluate, order)


def scale(coeff: complex, symbol: ScalarSymbol) -> ScalarSymbol:
    """the symbol coeff * sigma"""
    if coeff == 0 or symbol.is_zero:
        return zero_symbol(symbol.group)
    poly = None if symbol.polynomial is None else \
        tuple((alpha, coeff * c) for alpha, c in symbol.polynomial)
    return ScalarSymbol(f"{coeff_str(coeff)}*({symbol.name})", symbol.group,
                        lambda xi: coeff * symbol.evaluator(xi), symbol.order, polynomial=poly,
                        flags=symbol.flags)


def add(*symbols: ScalarSymbol) -> ScalarSymbol:
    """sum of symbols on the same group; order is the maximum of the orders"""
    if not symbols:
        raise ValueError("at least one symbol is required for a sum")
    group = symbols[0].group
    if any(sym.group != group for sym in symbols):
        raise ValueError("all terms of a sum must be on the same group")
    terms = [sym for sym in symbols if not sym.is_zero]
    if not terms:
        return zero_symbol(group)
    orders = [sym.order for sym in terms]
    order = None if any(o is None for o in orders) else max(orders)  # type: ignore
    poly = None
    if all(sym.polynomial is not None for sym in terms):
        poly = _normalize_poly([mono for sym in terms for mono in sym.polynomial])  # type: ignore
        if not poly:
            return zero_symbol(group)
        # cancellation can lower the true order
        order = float(max(sum(alpha) for alpha, _ in poly))
    return ScalarSymbol(" + ".join(f"({sym.name})" for sym in terms), group,
                        lambda xi: sum(sym.evaluator(xi) for sym in terms), order,
                        polynomial=poly)


def compose(*symbols: ScalarSymbol) -> ScalarSymbol:
    """
    Symbol of the composition of the operators, which is the blockwise matrix product
    (left-most operator applied last); order is the sum of the orders.
    """
    if not symbols:
        raise ValueError("at least one symbol is required for a product")
    group = symbols[0].group
    if any(sym.group != group for sym in symbols):
        raise ValueError("all factors of a product must be on the same group")
    if any(sym.is_zero for sym in symbols):
        return zero_symbol(group)
    orders = [sym.order for sym in symbols]
    order = None if any(o is None for o in orders) else float(sum(orders))  # type: ignore
    poly = None
    if all(sym.polynomial is not None for sym in symbols):
        product: list[Monomial] = [((0,) * group.rank, 1 + 0j)]
        for sym in symbols:
            product = [(tuple(a + b for a, b in zip(alpha, beta)), c * d)
                       for alpha, c in product for beta, d in sym.polynomial]  # type: ignore
        poly = _normalize_poly(product)

    def evaluate(xi: RepIndex) -> np.ndarray:
        result = symbols[0].evaluator(xi)
        for sym in symbols[1:]:
            result = result @ sym.evaluator(xi)
        return result

    return ScalarSymbol(" * ".join(f"({sym.name})" for sym in symbols), group, evaluate, order,
                        polynomial=poly)


def estimate_order(symbol: ScalarSymbol, cutoff: float) -> SymbolOrderEstimate:
    """
    Estimate the order of a symbol by a least-squares fit of log ||sigma(xi)||_op against
    log <xi> over the enumeration up to the cutoff, skipping points where the symbol vanishes.
    The constant `c_hat` is then the largest ratio ||sigma(xi)||_op / <xi>^tau_hat, so the
    bound holds on every sampled point.

    :param symbol: the symbol
    :param cutoff: the cutoff on <xi>
    :return: the `SymbolOrderEstimate`, with tau_hat = -inf if the symbol vanishes on the sample
    """
    brackets = []
    norms = []
    for xi in enumerate_reps(symbol.group, cutoff):
        if (norm := op_norm(symbol(xi))) > 0.0:
            brackets.append(rep_meta(symbol.group, xi).bracket)
            norms.append(norm)
    if not norms:
        return SymbolOrderEstimate(-math.inf, 1.0, 0)
    log_b = np.log(np.array(brackets))
    log_n = np.log(np.array(norms))
    if np.ptp(log_b) == 0.0:
        tau = 0.0
    else:
        tau = float(np.polyfit(log_b, log_n, 1)[0])
    c_hat = float(np.max(log_n - tau * log_b))
    # inflate by a few ulps so the bound survives the rounding of exp/pow
    return SymbolOrderEstimate(tau, math.exp(c_hat) * (1.0 + 1e-12), len(norms))
