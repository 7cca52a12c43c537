"""
Unitary dual of the supported compact groups (the torus T^r and SU(2)): enumeration up to a
cutoff on <xi>, per-representation metadata and the canonical index strings.

Representation indices are plain integer tuples: the frequency vector for T^r and the
one-element tuple (2l,) holding the twice-spin for SU(2), so half-integer spins stay exact.
"""

import itertools
import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional

RepIndex = tuple[int, ...]

_TORUS_RE = re.compile(r"^torus:([1-9][0-9]*)$")
_SPIN_RE = re.compile(r"^l=([0-9]+)(?:/2)?$")


class GroupKind(str, Enum):
    """
    Compact groups supported by `ghx`.
    """
    TORUS = "torus"
    SU2 = "su2"


@dataclass(frozen=True)
class GroupId:
    """
    A supported compact group.

    Attributes:
        kind: the variant of the group
        rank: the torus dimension r (always 1 for SU(2) where it is unused)
    """
    kind: GroupKind
    rank: int = 1

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError(f"torus rank must be positive but got {self.rank}")

    @staticmethod
    def torus(rank: int) -> "GroupId":
        """the torus T^r"""
        return GroupId(GroupKind.TORUS, rank)

    @staticmethod
    def su2() -> "GroupId":
        """the group SU(2)"""
        return GroupId(GroupKind.SU2)

    @property
    def is_torus(self) -> bool:
        """whether this is a torus"""
        return self.kind == GroupKind.TORUS

    @property
    def dim(self) -> int:
        """dimension of the group as a manifold"""
        return self.rank if self.is_torus else 3

    def __str__(self) -> str:
        return f"torus:{self.rank}" if self.is_torus else "su2"


@dataclass(frozen=True)
class RepMeta:
    """
    Metadata of a representation.

    Attributes:
        dim: the dimension d_xi
        casimir: eigenvalue nu_xi of the Laplace-Beltrami operator
        bracket: <xi> = (1 + nu_xi)^(1/2)
    """
    dim: int
    casimir: float
    bracket: float


def parse_group(text: str) -> GroupId:
    """
    Parse a group given as "torus:r" or "su2" (exact strings).

    :param text: the group string
    :return: the `GroupId`
    """
    if text == "su2":
        return GroupId.su2()
    if match := _TORUS_RE.match(text):
        return GroupId.torus(int(match.group(1)))
    raise ValueError(f"unknown group '{text}', expected 'torus:<r>' or 'su2'")


def check_rep(group: GroupId, xi: RepIndex) -> None:
    """raise `ValueError` if the index is not valid for the group"""
    if group.is_torus:
        if len(xi) != group.rank:
            raise ValueError(f"dimension mismatch: index {xi} for {group}")
    elif len(xi) != 1 or xi[0] < 0:
        raise ValueError(f"invalid SU(2) twice-spin index {xi}")


def _norm_sq(xi: RepIndex) -> int:
    return sum(x * x for x in xi)


def _su2_casimir(twice_spin: int) -> float:
    # l(l+1) with l = t/2
    return twice_spin * (twice_spin + 2) / 4.0


def _bracket(casimir: float) -> float:
    return math.sqrt(1.0 + casimir)


def rep_meta(group: GroupId, xi: RepIndex) -> RepMeta:
    """
    Dimension, Laplacian eigenvalue and <xi> of a representation.

    :param group: the group
    :param xi: index of the representation
    :return: the `RepMeta`
    """
    check_rep(group, xi)
    if group.is_torus:
        casimir = float(_norm_sq(xi))
        return RepMeta(1, casimir, _bracket(casimir))
    casimir = _su2_casimir(xi[0])
    return RepMeta(xi[0] + 1, casimir, _bracket(casimir))


def bracket(group: GroupId, xi: RepIndex) -> float:
    """shortcut for `rep_meta(group, xi).bracket`"""
    return rep_meta(group, xi).bracket


def enumerate_reps(group: GroupId, cutoff: float) -> list[RepIndex]:
    """
    All representations with <xi> <= cutoff (inclusive), sorted ascending by <xi> and then
    lexicographically by index.

    :param group: the group
    :param cutoff: the cutoff on <xi> which should be finite and at least 1
    :return: ordered list of indices
    """
    if not math.isfinite(cutoff):
        raise ValueError(f"cutoff must be finite but got {cutoff}")
    if cutoff < 1.0:
        raise ValueError(f"cutoff must be at least 1 but got {cutoff}")
    # the test uses the same expression as `rep_meta` so that <xi> == cutoff is included
    if group.is_torus:
        radius = math.isqrt(int(math.floor(cutoff * cutoff - 1.0))) + 1
        span = range(-radius, radius + 1)
        reps = [xi for xi in itertools.product(span, repeat=group.rank)
                if _bracket(_norm_sq(xi)) <= cutoff]
        reps.sort(key=lambda xi: (_norm_sq(xi), xi))
        return reps
    reps = []
    twice_spin = 0
    while _bracket(_su2_casimir(twice_spin)) <= cutoff:
        reps.append((twice_spin,))
        twice_spin += 1
    return reps


def weyl_constant_check(group: GroupId, cutoff: float) -> float:
    """
    Smallest C_G with d_xi <= C_G <xi>^(dim/2) over the enumeration up to the cutoff.

    :param group: the group
    :param cutoff: the cutoff on <xi>
    :return: max of d_xi / <xi>^(dim/2)
    """
    best = 0.0
    for xi in enumerate_reps(group, cutoff):
        meta = rep_meta(group, xi)
        best = max(best, meta.dim / meta.bracket ** (group.dim / 2.0))
    return best


def dimension_bound(group: GroupId) -> Optional[int]:
    """uniform bound K on d_xi over the whole dual, or None when unbounded"""
    return 1 if group.is_torus else None


def format_rep(group: GroupId, xi: RepIndex) -> str:
    """
    Canonical string of an index: "3,4" on the torus and "l=3/2" or "l=1" on SU(2).
    """
    if group.is_torus:
        return ",".join(str(x) for x in xi)
    spin = Fraction(xi[0], 2)
    return f"l={spin.numerator}/2" if spin.denominator == 2 else f"l={spin.numerator}"


def parse_rep(group: GroupId, text: str) -> RepIndex:
    """
    Parse the canonical index string written by `format_rep`.

    :param group: the group
    :param text: the index string
    :return: the `RepIndex`
    """
    text = text.strip()
    if group.is_torus:
        try:
            xi = tuple(int(part) for part in text.split(","))
        except ValueError as ex:
            raise ValueError(f"invalid torus index '{text}'") from ex
    else:
        if not (match := _SPIN_RE.match(text)):
            raise ValueError(f"invalid SU(2) index '{text}', expected 'l=<k>' or 'l=<k>/2'")
        value = int(match.group(1))
        if text.endswith("/2"):
            if value % 2 == 0:
                raise ValueError(f"non-canonical SU(2) index '{text}'")
            xi = (value,)
        else:
            xi = (2 * value,)
    check_rep(group, xi)
    return xi
