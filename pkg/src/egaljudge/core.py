"""Foundational types for judgment aggregation over binary agendas.

A judgment on an agenda of m issues is a 0/1 vector; its canonical text form
is a bitstring whose leftmost character is the first issue.  All types are
immutable after construction and all operations are pure, so everything here
can be shared freely between threads or workers.

Agent indices are 1-based throughout.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

import numpy as np

from . import kernels
from .errors import CapacityError, DimensionError, ValidationError

DEFAULT_ENUM_CAP = 20
ENUM_CAP_ENV = "EGAL_ENUM_CAP"


def enumeration_cap(explicit: Optional[int] = None) -> int:
    """The active cap on 2^m enumerations (argument > env EGAL_ENUM_CAP > 20)."""
    if explicit is not None:
        return explicit
    env = os.environ.get(ENUM_CAP_ENV)
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise ValidationError(f"{ENUM_CAP_ENV} must be an integer, got {env!r}") from exc
    return DEFAULT_ENUM_CAP


@dataclass(frozen=True, order=True)
class Judgment:
    """A complete 0/1 position on every issue of an agenda.

    Ordering is lexicographic on the bit vector, i.e. ascending bitstring
    order; this is the canonical order used for all outputs.
    """

    bits: tuple[int, ...]

    def __post_init__(self):
        if not self.bits:
            raise ValidationError("judgment must cover at least one issue")
        if any(b not in (0, 1) for b in self.bits):
            raise ValidationError(f"judgment bits must be 0/1, got {self.bits!r}")

    @classmethod
    def from_string(cls, text: str) -> "Judgment":
        if not text or set(text) - {"0", "1"}:
            raise ValidationError(f"not a bitstring: {text!r}")
        return cls(tuple(int(c) for c in text))

    @classmethod
    def from_word(cls, word: int, m: int) -> "Judgment":
        return cls(tuple((word >> (m - 1 - k)) & 1 for k in range(m)))

    @property
    def word(self) -> int:
        """The bitstring read as an integer, first issue most significant."""
        w = 0
        for b in self.bits:
            w = (w << 1) | b
        return w

    def __len__(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)


def hamming(a: Judgment, b: Judgment) -> int:
    """Number of issues on which two judgments disagree."""
    if len(a) != len(b):
        raise DimensionError(f"length mismatch: {len(a)} vs {len(b)}")
    return (a.word ^ b.word).bit_count()


def antipodal(a: Judgment) -> Judgment:
    """The judgment that flips every position; an involution."""
    m = len(a)
    return Judgment.from_word(a.word ^ ((1 << m) - 1), m)


@dataclass(frozen=True)
class Agenda:
    """Ordered issue labels, optionally tied together by a constraint formula."""

    issues: tuple[str, ...]
    constraint: Optional[object] = None  # a constraints.Formula when present

    def __post_init__(self):
        if not self.issues:
            raise ValidationError("agenda needs at least one issue")
        if len(set(self.issues)) != len(self.issues):
            raise ValidationError("agenda labels must be unique")
        if self.constraint is not None:
            extra = self.constraint.variables() - set(self.issues)
            if extra:
                raise ValidationError(
                    f"constraint mentions undeclared labels: {sorted(extra)}"
                )

    @property
    def m(self) -> int:
        return len(self.issues)


class Domain:
    """The nonempty set of admissible judgments, canonically ordered.

    Stored as packed uint64 words so rule evaluation can hand whole domains
    to the distance kernels; `Judgment` objects are materialized lazily.
    """

    __slots__ = ("m", "words", "_judgments", "_index")

    def __init__(self, m: int, words: Iterable[int]):
        arr = np.unique(np.asarray(list(words), dtype=np.uint64))
        if arr.size == 0:
            raise ValidationError("domain must be nonempty")
        if m < 1:
            raise ValidationError("domain needs m >= 1")
        if int(arr[-1]) >> m:
            raise ValidationError("domain word exceeds issue count")
        self.m = m
        self.words = arr
        self._judgments: Optional[tuple[Judgment, ...]] = None
        self._index: Optional[dict[int, int]] = None

    @classmethod
    def from_judgments(cls, judgments: Iterable[Judgment]) -> "Domain":
        js = list(judgments)
        if not js:
            raise ValidationError("domain must be nonempty")
        m = len(js[0])
        if any(len(j) != m for j in js):
            raise DimensionError("domain members must share one length")
        return cls(m, (j.word for j in js))

    @classmethod
    def from_bitstrings(cls, strings: Iterable[str]) -> "Domain":
        return cls.from_judgments(Judgment.from_string(s) for s in strings)

    @classmethod
    def free(cls, m: int, cap: Optional[int] = None) -> "Domain":
        """All 2^m judgments; refuses m above the enumeration cap."""
        limit = enumeration_cap(cap)
        if m > limit:
            raise CapacityError(f"free domain on m={m} exceeds enumeration cap {limit}")
        return cls(m, np.arange(1 << m, dtype=np.uint64))

    @property
    def judgments(self) -> tuple[Judgment, ...]:
        if self._judgments is None:
            self._judgments = tuple(Judgment.from_word(int(w), self.m) for w in self.words)
        return self._judgments

    def index_of(self, j: Judgment) -> int:
        if self._index is None:
            self._index = {int(w): i for i, w in enumerate(self.words)}
        try:
            return self._index[j.word]
        except KeyError:
            raise KeyError(f"{j} is not in the domain") from None

    def __contains__(self, j: Judgment) -> bool:
        if len(j) != self.m:
            return False
        pos = int(np.searchsorted(self.words, np.uint64(j.word)))
        return pos < len(self.words) and int(self.words[pos]) == j.word

    def __len__(self) -> int:
        return int(self.words.size)

    def __iter__(self) -> Iterator[Judgment]:
        return iter(self.judgments)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Domain)
            and self.m == other.m
            and np.array_equal(self.words, other.words)
        )

    def __repr__(self) -> str:
        if len(self) <= 8:
            body = ", ".join(str(j) for j in self.judgments)
        else:
            body = f"{len(self)} judgments"
        return f"Domain(m={self.m}, {{{body}}})"


class Profile:
    """An ordered list of agents' judgments (agent i = position i, 1-based).

    n = 1 is representable because removing an agent from a two-agent
    profile must stay well-formed; fresh scenarios normally use n >= 2.
    """

    __slots__ = ("m", "judgments", "words")

    def __init__(self, judgments: Iterable[Judgment]):
        js = tuple(judgments)
        if not js:
            raise ValidationError("profile needs at least one agent")
        m = len(js[0])
        if any(len(j) != m for j in js):
            raise DimensionError("profile members must share one length")
        self.m = m
        self.judgments = js
        self.words = np.array([j.word for j in js], dtype=np.uint64)

    @classmethod
    def from_bitstrings(cls, strings: Iterable[str]) -> "Profile":
        return cls(Judgment.from_string(s) for s in strings)

    @property
    def n(self) -> int:
        return len(self.judgments)

    def agent(self, i: int) -> Judgment:
        self._check_index(i)
        return self.judgments[i - 1]

    def replace(self, i: int, j: Judgment) -> "Profile":
        self._check_index(i)
        if len(j) != self.m:
            raise DimensionError("replacement judgment has wrong length")
        js = list(self.judgments)
        js[i - 1] = j
        return Profile(js)

    def _check_index(self, i: int) -> None:
        if not 1 <= i <= self.n:
            raise ValidationError(f"agent index {i} out of range 1..{self.n}")

    def __len__(self) -> int:
        return self.n

    def __iter__(self) -> Iterator[Judgment]:
        return iter(self.judgments)

    def __eq__(self, other) -> bool:
        return isinstance(other, Profile) and self.judgments == other.judgments

    def __hash__(self) -> int:
        return hash(self.judgments)

    def __repr__(self) -> str:
        return "Profile(" + ", ".join(str(j) for j in self.judgments) + ")"


def remove_agent(p: Profile, i: int) -> Profile:
    """The profile with agent i's judgment deleted, order preserved."""
    p._check_index(i)
    if p.n == 1:
        raise ValidationError("cannot remove the only agent")
    return Profile(p.judgments[: i - 1] + p.judgments[i:])


def majority_judgment(p: Profile) -> Judgment:
    """Issue-wise strict majority; ties reject.  May lie outside the domain."""
    bits = kernels.words_to_bits(p.words, p.m)
    counts = bits.sum(axis=0)
    return Judgment(tuple(int(2 * c > p.n) for c in counts))


def _canonical_winners(judgments: Iterable[Judgment]) -> tuple[Judgment, ...]:
    return tuple(sorted(set(judgments)))


@dataclass(frozen=True)
class Outcome:
    """A nonempty tie-set of collective judgments, ascending bitstring order."""

    winners: tuple[Judgment, ...]

    def __post_init__(self):
        canon = _canonical_winners(self.winners)
        if not canon:
            raise ValidationError("outcome must be nonempty")
        object.__setattr__(self, "winners", canon)

    def as_set(self) -> frozenset[Judgment]:
        return frozenset(self.winners)

    def __contains__(self, j: Judgment) -> bool:
        return j in self.winners

    def __iter__(self) -> Iterator[Judgment]:
        return iter(self.winners)

    def __len__(self) -> int:
        return len(self.winners)

    def __str__(self) -> str:
        return "{" + ", ".join(str(j) for j in self.winners) + "}"
