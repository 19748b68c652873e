"""Outcome determination: MaxHam, MaxEq, their lexicographic refinement, and
user-supplied table rules.

All rules return the full set of tied winners in canonical (ascending
bitstring) order; ties are never broken.  Objectives are evaluated by exact
enumeration of the domain, which is the point of this engine: desk-scale
instances, exact answers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

import numpy as np

from . import kernels
from .core import Domain, Judgment, Outcome, Profile, hamming
from .errors import DimensionError, MissingTableEntryError, ValidationError

MAXHAM = "maxham"
MAXEQ = "maxeq"
MAXEQ_LEX = "maxeq-lex"
TABLE = "table"
RULE_KINDS = (MAXHAM, MAXEQ, MAXEQ_LEX, TABLE)

TableKey = tuple[Judgment, ...]


def table_key(judgments: Iterable[Judgment]) -> TableKey:
    """Canonical anonymous key for a profile: its sorted judgment multiset."""
    return tuple(sorted(judgments))


@dataclass(frozen=True)
class RuleSpec:
    """Which rule to run; table rules carry their finite anonymous map."""

    kind: str
    table: Optional[Mapping[TableKey, Outcome]] = None

    def __post_init__(self):
        if self.kind not in RULE_KINDS:
            raise ValidationError(f"unknown rule kind {self.kind!r}")
        if (self.kind == TABLE) != (self.table is not None):
            raise ValidationError("table rules and only table rules carry a table")

    def __str__(self) -> str:
        return self.kind


MAXHAM_RULE = RuleSpec(MAXHAM)
MAXEQ_RULE = RuleSpec(MAXEQ)
MAXEQ_LEX_RULE = RuleSpec(MAXEQ_LEX)


def table_rule(entries: Mapping[Iterable[Judgment], Iterable[Judgment]]) -> RuleSpec:
    """Build a table rule from {multiset-of-judgments: winners} pairs."""
    table = {table_key(k): Outcome(tuple(v)) for k, v in entries.items()}
    return RuleSpec(TABLE, table)


def quantity_insensitive_table(
    set_map: Mapping[frozenset[Judgment], Iterable[Judgment]], max_agents: int
) -> RuleSpec:
    """Expand a {set-of-distinct-judgments: winners} map to all multisets.

    Encodes rules that are only sensitive to which judgments are submitted,
    not to their counts, for every profile size up to ``max_agents``.
    """
    from itertools import combinations_with_replacement

    universe = sorted({j for key in set_map for j in key})
    entries: dict[TableKey, Outcome] = {}
    for n in range(1, max_agents + 1):
        for combo in combinations_with_replacement(universe, n):
            distinct = frozenset(combo)
            if distinct in set_map:
                entries[table_key(combo)] = Outcome(tuple(set_map[distinct]))
    return RuleSpec(TABLE, entries)


@dataclass(frozen=True)
class ScoreBreakdown:
    """Per-candidate distances against a profile plus the two objectives."""

    judgment: Judgment
    distances: tuple[int, ...]
    maxdist: int
    mindist: int

    @property
    def inequity(self) -> int:
        return self.maxdist - self.mindist


def maxdist(p: Profile, j: Judgment) -> int:
    """Maximum Hamming distance from ``j`` to any profile member."""
    return max(hamming(a, j) for a in p)


def inequity(p: Profile, j: Judgment) -> int:
    """Gap between the worst-off and best-off agents' distances to ``j``."""
    distances = [hamming(a, j) for a in p]
    return max(distances) - min(distances)


def _check_compat(d: Domain, p: Profile) -> None:
    if d.m != p.m:
        raise DimensionError(f"domain m={d.m} vs profile m={p.m}")


def _winners(d: Domain, mask: np.ndarray) -> Outcome:
    idx = np.nonzero(mask)[0]
    return Outcome(tuple(Judgment.from_word(int(d.words[i]), d.m) for i in idx))


def _objectives(d: Domain, p: Profile) -> tuple[np.ndarray, np.ndarray]:
    _check_compat(d, p)
    return kernels.extremes_against(d.words, p.words)


def max_ham(d: Domain, p: Profile) -> Outcome:
    """All domain judgments minimizing the distance of the worst-off agent."""
    mx, _ = _objectives(d, p)
    return _winners(d, mx == mx.min())


def max_eq(d: Domain, p: Profile) -> Outcome:
    """All domain judgments minimizing the inequity (maxdist - mindist)."""
    mx, mn = _objectives(d, p)
    ineq = mx - mn
    return _winners(d, ineq == ineq.min())


def max_eq_lex(d: Domain, p: Profile) -> Outcome:
    """Among the inequity minimizers, those that also minimize maxdist."""
    mx, mn = _objectives(d, p)
    ineq = mx - mn
    tied = ineq == ineq.min()
    best_max = mx[tied].min()
    return _winners(d, tied & (mx == best_max))


def exists_equidistant(d: Domain, p: Profile) -> bool:
    """Whether some domain judgment is equidistant to every profile member."""
    mx, mn = _objectives(d, p)
    return bool(((mx - mn) == 0).any())


def score_breakdown(d: Domain, p: Profile) -> tuple[ScoreBreakdown, ...]:
    """Distances and objectives for every domain candidate, canonical order."""
    _check_compat(d, p)
    dist = kernels.distance_matrix(d.words, p.words)
    rows = []
    for i, j in enumerate(d.judgments):
        ds = tuple(int(x) for x in dist[i])
        rows.append(ScoreBreakdown(j, ds, max(ds), min(ds)))
    return tuple(rows)


def apply_rule(rule: RuleSpec, d: Domain, p: Profile) -> Outcome:
    """Dispatch to the named rule (or the stored table entry)."""
    if rule.kind == MAXHAM:
        return max_ham(d, p)
    if rule.kind == MAXEQ:
        return max_eq(d, p)
    if rule.kind == MAXEQ_LEX:
        return max_eq_lex(d, p)
    key = table_key(p.judgments)
    try:
        outcome = rule.table[key]
    except KeyError:
        raise MissingTableEntryError(
            f"table rule has no entry for profile {[str(j) for j in key]}"
        ) from None
    bad = [j for j in outcome if j not in d]
    if bad:
        raise ValidationError(f"table outcome leaves the domain: {[str(j) for j in bad]}")
    return outcome


class IndexedDomain:
    """Pairwise distances of one domain, for scans that query many profiles.

    Profiles are tuples of member indices; outcomes come back as sorted index
    tuples.  Results agree with the Domain/Profile API (tested), this path
    just avoids rebuilding arrays inside exhaustive searches.
    """

    def __init__(self, domain: Domain):
        self.domain = domain
        self.dist = kernels.distance_matrix(domain.words, domain.words)

    def distance(self, i: int, j: int) -> int:
        return int(self.dist[i, j])

    def judgment(self, i: int) -> Judgment:
        return self.domain.judgments[i]

    def profile(self, prof_idx: tuple[int, ...]) -> Profile:
        return Profile(self.domain.judgments[i] for i in prof_idx)

    def _cols(self, prof_idx: tuple[int, ...]) -> np.ndarray:
        return self.dist[:, list(prof_idx)]

    def maxham_idx(self, prof_idx: tuple[int, ...]) -> tuple[int, ...]:
        mx = self._cols(prof_idx).max(axis=1)
        return tuple(int(i) for i in np.nonzero(mx == mx.min())[0])

    def maxeq_idx(self, prof_idx: tuple[int, ...]) -> tuple[int, ...]:
        cols = self._cols(prof_idx)
        ineq = cols.max(axis=1) - cols.min(axis=1)
        return tuple(int(i) for i in np.nonzero(ineq == ineq.min())[0])

    def maxeq_lex_idx(self, prof_idx: tuple[int, ...]) -> tuple[int, ...]:
        cols = self._cols(prof_idx)
        mx = cols.max(axis=1)
        ineq = mx - cols.min(axis=1)
        tied = ineq == ineq.min()
        best_max = mx[tied].min()
        return tuple(int(i) for i in np.nonzero(tied & (mx == best_max))[0])


class IndexedRule:
    """A rule bound to an IndexedDomain, memoized over anonymous profiles."""

    def __init__(self, rule: RuleSpec, idom: IndexedDomain):
        self.rule = rule
        self.idom = idom
        self._memo: dict[tuple[int, ...], tuple[int, ...]] = {}
        if rule.kind == TABLE:
            dom = idom.domain
            self._table_idx = {
                tuple(sorted(dom.index_of(j) for j in key)): tuple(
                    sorted(dom.index_of(j) for j in out)
                )
                for key, out in rule.table.items()
            }

    def outcome(self, prof_idx: tuple[int, ...]) -> tuple[int, ...]:
        key = tuple(sorted(prof_idx))
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if self.rule.kind == MAXHAM:
            result = self.idom.maxham_idx(key)
        elif self.rule.kind == MAXEQ:
            result = self.idom.maxeq_idx(key)
        elif self.rule.kind == MAXEQ_LEX:
            result = self.idom.maxeq_lex_idx(key)
        else:
            try:
                result = self._table_idx[key]
            except KeyError:
                names = [str(self.idom.judgment(i)) for i in key]
                raise MissingTableEntryError(
                    f"table rule has no entry for profile {names}"
                ) from None
        self._memo[key] = result
        return result
