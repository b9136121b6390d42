"""
Group Ring Words - Elements of free Z[G]-modules in canonical form

A word is a sum of terms c * g_e * f_i: generator i (1-based), group element
index e and a nonzero integer coefficient c.  The external pair form
[[i, e], ...] writes -i for a coefficient of -1 and repeats pairs for larger
coefficients; the triple form [[i, e, c], ...] is exact.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import PreconditionError
from .settings_manager import get_settings

logger = logging.getLogger(__name__)

Term = Tuple[int, int, int]


def _canonical(acc: Dict[Tuple[int, int], int]) -> Tuple[Term, ...]:
    return tuple((gen, elt, c) for (gen, elt), c in sorted(acc.items()) if c)


@dataclass(frozen=True)
class GroupRingWord:
    """Element of the free Z[G]-module of rank `rank`"""
    rank: int
    terms: Tuple[Term, ...] = ()

    @classmethod
    def from_terms(cls, rank: int, terms: Iterable[Term]) -> "GroupRingWord":
        """Canonical word from (gen, elt, coeff) terms; gen may be negative"""
        acc: Dict[Tuple[int, int], int] = {}
        for gen, elt, c in terms:
            if gen == 0 or abs(gen) > rank:
                raise PreconditionError(f"Generator {gen} outside 1..{rank}")
            if elt < 1:
                raise PreconditionError(f"Element index {elt} must be at least 1")
            key = (abs(gen), elt)
            acc[key] = acc.get(key, 0) + (c if gen > 0 else -c)
        return cls(rank, _canonical(acc))

    @classmethod
    def zero(cls, rank: int) -> "GroupRingWord":
        return cls(rank)

    @classmethod
    def unit(cls, rank: int, j: int, elt: int = 1) -> "GroupRingWord":
        """The free generator f_j, optionally multiplied by an element"""
        return cls.from_terms(rank, [(j, elt, 1)])

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __add__(self, other: "GroupRingWord") -> "GroupRingWord":
        if self.rank != other.rank:
            raise PreconditionError(f"Rank mismatch: {self.rank} vs {other.rank}")
        acc = {(g, e): c for g, e, c in self.terms}
        for g, e, c in other.terms:
            acc[(g, e)] = acc.get((g, e), 0) + c
        return GroupRingWord(self.rank, _canonical(acc))

    def __neg__(self) -> "GroupRingWord":
        return GroupRingWord(self.rank, tuple((g, e, -c) for g, e, c in self.terms))

    def __sub__(self, other: "GroupRingWord") -> "GroupRingWord":
        return self + (-other)

    def scale(self, c: int) -> "GroupRingWord":
        if not c:
            return GroupRingWord(self.rank)
        return GroupRingWord(self.rank, tuple((g, e, c * x) for g, e, x in self.terms))

    def augmentation(self) -> int:
        """Image under f_i -> 1, g -> 1"""
        return sum(c for _, _, c in self.terms)

    def coefficient_vector(self) -> List[int]:
        """Coefficients per generator after erasing group elements"""
        vec = [0] * self.rank
        for i, c in self.coefficient_dict().items():
            vec[i] = c
        return vec

    def coefficient_dict(self) -> Dict[int, int]:
        """Sparse coefficient_vector: {generator - 1: coefficient}, zeros dropped"""
        out: Dict[int, int] = {}
        for g, _, c in self.terms:
            out[g - 1] = out.get(g - 1, 0) + c
        return {i: c for i, c in out.items() if c}

    def generator_part(self, j: int) -> Dict[int, int]:
        """{element: coefficient} of the f_j component"""
        return {e: c for g, e, c in self.terms if g == j}

    def to_triples(self) -> List[List[int]]:
        return [[g, e, c] for g, e, c in self.terms]

    def to_pairs(self, expand_limit: Optional[int] = None) -> List[List[int]]:
        """Signed pair list; coefficients are expanded into repeated pairs"""
        limit = get_settings().get_pair_expand_limit() if expand_limit is None else expand_limit
        pairs = []
        for g, e, c in self.terms:
            if abs(c) > limit:
                raise PreconditionError(
                    f"Coefficient {c} on ({g}, {e}) exceeds the pair expansion limit {limit}; use triples")
            pairs.extend([[g if c > 0 else -g, e]] * abs(c))
        return pairs

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for g, e, c in self.terms:
            coeff = "" if c == 1 else "-" if c == -1 else f"{c}*"
            parts.append(f"{coeff}g{e}.f{g}")
        return " + ".join(parts).replace("+ -", "- ")


def from_pairs(pairs: Sequence[Sequence[int]], rank: int) -> GroupRingWord:
    """Word from the signed pair list [[i, e], ...]"""
    terms = []
    for pair in pairs:
        if len(pair) != 2:
            raise PreconditionError(f"Expected a pair [i, e], got {list(pair)}")
        terms.append((int(pair[0]), int(pair[1]), 1))
    return GroupRingWord.from_terms(rank, terms)


def from_triples(triples: Sequence[Sequence[int]], rank: int) -> GroupRingWord:
    terms = []
    for triple in triples:
        if len(triple) != 3:
            raise PreconditionError(f"Expected a triple [i, e, c], got {list(triple)}")
        terms.append((int(triple[0]), int(triple[1]), int(triple[2])))
    return GroupRingWord.from_terms(rank, terms)


def from_json(data: Sequence[Sequence[int]], rank: int) -> GroupRingWord:
    """Accept either serialization form"""
    if data and len(data[0]) == 3:
        return from_triples(data, rank)
    return from_pairs(data, rank)


def add(w1: GroupRingWord, w2: GroupRingWord) -> GroupRingWord:
    return w1 + w2


def scale(w: GroupRingWord, c: int) -> GroupRingWord:
    return w.scale(c)


def act(group, g: int, w: GroupRingWord) -> GroupRingWord:
    """Left multiplication of every term by the element g"""
    if not 1 <= g <= group.order:
        raise PreconditionError(f"Element index {g} outside the group")
    if g == 1:
        return w
    acc = {}
    for gen, e, c in w.terms:
        acc[(gen, group.mul(g, e))] = c
    return GroupRingWord(w.rank, _canonical(acc))


def substitute(group, w: GroupRingWord, images: Sequence[GroupRingWord],
               transport: Optional[Callable[[int], int]] = None) -> GroupRingWord:
    """Z[G]-linear extension of f_i -> images[i-1] applied to w.

    `transport` maps w's element indices into `group` (a homomorphism's
    element table); by default they already live there.
    """
    if len(images) != w.rank:
        raise PreconditionError(f"Need {w.rank} images, got {len(images)}")
    if not images:
        return GroupRingWord(0)
    target_rank = images[0].rank
    acc: Dict[Tuple[int, int], int] = {}
    for gen, e, c in w.terms:
        image = images[gen - 1]
        if image.rank != target_rank:
            raise PreconditionError("Image words have different ranks")
        g = transport(e) if transport else e
        for ig, ie, ic in image.terms:
            key = (ig, group.mul(g, ie) if g != 1 else ie)
            acc[key] = acc.get(key, 0) + c * ic
    return GroupRingWord(target_rank, _canonical(acc))
