"""
Counterexample synthesis for systems failing the growth condition: a sequence of distinct
representations xi_l with lambda_min[sigma_P(xi_l)] < <xi_l>^-l and the coefficients of a
non-smooth u whose image P u has rapidly decaying coefficients.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg

from .block import SystemSymbol, apply, assemble
from .fourier import CoefficientField, apply_field
from .groups import GroupId, RepIndex, enumerate_reps, format_rep, rep_meta
from .util import NumericalError

# singular vector entries below this are rounding noise of exact zeros
_CLEAN_TOLERANCE = 1e-15


@dataclass(frozen=True)
class WitnessTerm:
    """
    One element of the violating sequence.

    Attributes:
        ell: the decay exponent l the term beats
        xi: the representation xi_l
        v: unit vector of size n d_xi, the blocks v(i, xi_l) stacked
        image_norm: ||sigma_P(xi_l) v||_2, equal to ||sigma_P(xi_l) u(xi_l)||_HS
    """
    ell: int
    xi: RepIndex
    v: np.ndarray
    image_norm: float


@dataclass(frozen=True)
class CounterexampleWitness:
    """
    The violating sequence of a system with the coefficient field it defines.
    """
    group: GroupId
    n: int
    terms: tuple[WitnessTerm, ...]

    @property
    def sequence(self) -> list[tuple[int, RepIndex]]:
        """the (l, xi_l) pairs"""
        return [(term.ell, term.xi) for term in self.terms]

    @property
    def image_norms(self) -> list[float]:
        """||sigma_P(xi_l) u(xi_l)||_HS for every term"""
        return [term.image_norm for term in self.terms]

    @property
    def u_coefficients(self) -> CoefficientField:
        """
        u_i(xi_l) has v(i, xi_l) as its first column and zeros elsewhere; u vanishes at
        every other representation.
        """
        entries = {}
        for term in self.terms:
            dim = rep_meta(self.group, term.xi).dim
            blocks = []
            for i in range(self.n):
                block = np.zeros((dim, dim), dtype=np.complex128)
                block[:, 0] = term.v[i * dim:(i + 1) * dim]
                blocks.append(block)
            entries[term.xi] = tuple(blocks)
        return CoefficientField(self.group, self.n, entries)


@dataclass
class WitnessCheck:
    """result of `verify_witness` with the failure reasons"""
    passed: bool
    failures: list[str] = field(default_factory=list)


def minimizing_vector(matrix: np.ndarray) -> tuple[np.ndarray, float]:
    """
    Unit right singular vector for the smallest singular value with entries below 1e-15
    cleared and the phase fixed so that the first nonzero component is real positive.

    :param matrix: the finite matrix sigma_P(xi)
    :return: tuple of the vector and its image norm ||matrix v||_2
    """
    if not np.all(np.isfinite(matrix)):
        raise NumericalError("matrix has non-finite entries")
    try:
        _, _, vh = scipy.linalg.svd(matrix, full_matrices=True, check_finite=False)
    except np.linalg.LinAlgError as ex:
        raise NumericalError(f"SVD did not converge: {ex}") from ex
    # rows of vh are v^H, and with full matrices the last row also spans any kernel
    v = vh[-1].conj()
    v[np.abs(v) < _CLEAN_TOLERANCE] = 0.0
    v = v / np.linalg.norm(v)
    lead = v[np.flatnonzero(v)[0]]
    v = v * (abs(lead) / lead)
    v[np.flatnonzero(v)[0]] = abs(lead)
    return v, float(np.linalg.norm(matrix @ v))


def find_violations(sys: SystemSymbol, max_cutoff: float,
                    max_length: int = 64) -> list[tuple[int, RepIndex]]:
    """
    Greedy selection, for l = 1, 2, ..., of the first unused representation in enumeration
    order whose minimizing vector has image norm below <xi>^-l. The image norm of that
    vector is the smallest singular value, so this is the condition
    lambda_min[sigma_P(xi)] < <xi>^-l with the vector `build_witness` will use.

    :param sys: the system
    :param max_cutoff: cutoff on <xi> of the search
    :param max_length: longest sequence returned
    :return: list of (l, xi_l), empty if no violation exists up to the cutoff
    """
    candidates = []
    for xi in enumerate_reps(sys.group, max_cutoff):
        _, image_norm = minimizing_vector(assemble(sys, xi))
        candidates.append((xi, rep_meta(sys.group, xi).bracket, image_norm))
    used: set[RepIndex] = set()
    sequence: list[tuple[int, RepIndex]] = []
    for ell in range(1, max_length + 1):
        pick: Optional[RepIndex] = None
        for xi, bracket, image_norm in candidates:
            if xi not in used and image_norm < bracket ** -ell:
                pick = xi
                break
        if pick is None:
            break
        used.add(pick)
        sequence.append((ell, pick))
    return sequence


def build_witness(sys: SystemSymbol,
                  violations: list[tuple[int, RepIndex]]) -> CounterexampleWitness:
    """
    Coefficients of the counterexample u along a violating sequence.

    :param sys: the system
    :param violations: the (l, xi_l) from `find_violations`
    :return: the `CounterexampleWitness`
    """
    if not violations:
        raise ValueError("a witness needs at least one violating representation")
    terms = []
    for ell, xi in violations:
        v, image_norm = minimizing_vector(assemble(sys, xi))
        v.setflags(write=False)
        terms.append(WitnessTerm(ell, tuple(xi), v, image_norm))
    return CounterexampleWitness(sys.group, sys.n, tuple(terms))


def verify_witness(sys: SystemSymbol, witness: CounterexampleWitness,
                   tolerance: float = 1e-12) -> WitnessCheck:
    """
    Check that every ||u(xi_l)||_HS is 1 (so the coefficients of u do not decay and u is not
    smooth), that both the recorded and the recomputed image norms are below <xi_l>^-l (so
    P u is smooth) and that the representations are distinct.

    :param sys: the system
    :param witness: the witness to check
    :param tolerance: allowed deviation of the unit norms
    :return: the `WitnessCheck`
    """
    check = WitnessCheck(True)
    coefficients = witness.u_coefficients
    seen: set[RepIndex] = set()
    for term in witness.terms:
        label = f"l={term.ell} xi={format_rep(witness.group, term.xi)}"
        if term.xi in seen:
            check.failures.append(f"repeated representation at {label}")
        seen.add(term.xi)
        norm = coefficients.norm(term.xi)
        if abs(norm - 1.0) > tolerance:
            check.failures.append(f"unit norm violated at {label}: ||u||_HS = {norm:.17g}")
        limit = rep_meta(witness.group, term.xi).bracket ** -term.ell
        if not term.image_norm < limit:
            check.failures.append(f"decay violated at {label}: recorded image norm "
                                  f"{term.image_norm:.17g} >= {limit:.17g}")
        image = apply(sys, term.xi, list(coefficients.entries[term.xi]))
        recomputed = float(np.sqrt(sum(np.linalg.norm(block) ** 2 for block in image)))
        if not recomputed < limit:
            check.failures.append(f"decay violated at {label}: image norm {recomputed:.17g} "
                                  f">= {limit:.17g}")
    check.passed = not check.failures
    return check


def witness_field_profile(witness: CounterexampleWitness,
                          sys: Optional[SystemSymbol] = None) -> list[tuple[float, float]]:
    """
    The (<xi>, ||u(xi)||_HS) profile of the witness coefficients for `decay_classify_profile`,
    or of the coefficients of P u when the system is given.
    """
    coefficients = witness.u_coefficients
    if sys is not None:
        coefficients = apply_field(sys, coefficients)
    return [(bracket, norm) for _, bracket, norm in coefficients.profile()]
