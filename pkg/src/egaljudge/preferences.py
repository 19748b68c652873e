"""Hamming preferences over judgments and their extensions to tie-sets.

An agent with truthful judgment t weakly prefers a to b when
hamming(t, a) <= hamming(t, b).  Rules return tie-sets, so strategic
reasoning needs a lifting of this order to sets; three are provided:

* ``pessimistic``: X beats Y when some judgment in Y is strictly worse than
  everything in X (the worst of X beats the worst of Y).
* ``optimistic``: X beats Y when some judgment in X is strictly better than
  everything in Y.
* ``decisive``: X beats Y exactly when some pair J in X, J' in Y has J
  strictly better and the pair is not contained in the intersection.  This
  relation need not be asymmetric.
"""

from __future__ import annotations

from typing import Iterable

from .core import Judgment, hamming
from .errors import ValidationError

PESSIMISTIC = "pessimistic"
OPTIMISTIC = "optimistic"
DECISIVE = "decisive"
EXTENSION_KINDS = (PESSIMISTIC, OPTIMISTIC, DECISIVE)

STRICTLY_BETTER = "strictly-better"
INDIFFERENT = "indifferent"
STRICTLY_WORSE = "strictly-worse"


def prefers(truth: Judgment, a: Judgment, b: Judgment) -> str:
    """Compare two judgments from the point of view of ``truth``."""
    da = hamming(truth, a)
    db = hamming(truth, b)
    if da < db:
        return STRICTLY_BETTER
    if da > db:
        return STRICTLY_WORSE
    return INDIFFERENT


def _strict(truth: Judgment, a: Judgment, b: Judgment) -> bool:
    return hamming(truth, a) < hamming(truth, b)


def set_prefers(kind: str, truth: Judgment, x: Iterable[Judgment], y: Iterable[Judgment]) -> bool:
    """Whether tie-set ``x`` is strictly preferred to ``y`` under ``kind``."""
    xs = tuple(x)
    ys = tuple(y)
    if not xs or not ys:
        raise ValidationError("tie-sets must be nonempty")
    if kind == PESSIMISTIC:
        return any(all(_strict(truth, a, b) for a in xs) for b in ys)
    if kind == OPTIMISTIC:
        return any(all(_strict(truth, a, b) for b in ys) for a in xs)
    if kind == DECISIVE:
        common = set(xs) & set(ys)
        return any(
            _strict(truth, a, b) and not {a, b} <= common
            for a in xs
            for b in ys
        )
    raise ValidationError(f"unknown extension kind {kind!r}")


def decisive_witness(
    truth: Judgment, x: Iterable[Judgment], y: Iterable[Judgment]
) -> tuple[Judgment, Judgment] | None:
    """First (canonical) pair certifying x over y under the decisive extension."""
    xs = sorted(set(x))
    ys = sorted(set(y))
    common = set(xs) & set(ys)
    for a in xs:
        for b in ys:
            if _strict(truth, a, b) and not {a, b} <= common:
                return a, b
    return None


def extension_contract_holds(
    kind: str, truth: Judgment, x: Iterable[Judgment], y: Iterable[Judgment]
) -> bool:
    """Check, on this instance, the two consistency requirements every
    extension must satisfy: singleton comparisons collapse to the judgment
    order, and a strict set preference is always witnessed by a pair outside
    the intersection."""
    xs = tuple(dict.fromkeys(x))
    ys = tuple(dict.fromkeys(y))
    strict_sets = set_prefers(kind, truth, xs, ys)
    if len(xs) == 1 and len(ys) == 1:
        singleton_ok = strict_sets == _strict(truth, xs[0], ys[0])
        if not singleton_ok:
            return False
    if strict_sets:
        return decisive_witness(truth, xs, ys) is not None
    return True
