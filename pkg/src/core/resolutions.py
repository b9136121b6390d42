"""
Resolutions - Explicit free Z[G]-resolutions of the trivial module Z

Four constructions are provided (bar, normalized bar, homogeneous and the
periodic resolution of a cyclic group) plus explicit resolutions loaded from
JSON.  Boundaries are computed per generator on demand and memoized.
"""

import json
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import PreconditionError, SizeLimitError, UnsupportedResolutionError
from .groups import FiniteGroup, Permutation, enumerate_group
from .intlinalg import AbelianInvariants, IntMatrix, homology_of_pair
from .settings_manager import get_settings
from .zgwords import GroupRingWord, from_json, substitute

logger = logging.getLogger(__name__)

KINDS = ("bar", "normalized_bar", "homogeneous", "cyclic")
KIND_ALIASES = {
    "bar": "bar",
    "nbar": "normalized_bar",
    "normalized_bar": "normalized_bar",
    "homog": "homogeneous",
    "homogeneous": "homogeneous",
    "cyclic": "cyclic",
    "auto": "auto",
}


class Resolution:
    """Free resolution X_0 <- X_1 <- ... <- X_K over Z[G].

    Degree 0 always has the single generator [.] with augmentation
    g[.] -> 1.  Subclasses provide `rank` and `_compute_boundary`.
    """

    kind = "explicit"

    def __init__(self, group: FiniteGroup, max_degree: int):
        if max_degree < 0:
            raise PreconditionError(f"Resolution depth must be nonnegative, got {max_degree}")
        self.group = group
        self.max_degree = max_degree
        self._boundaries: Dict[Tuple[int, int], GroupRingWord] = {}

    def rank(self, k: int) -> int:
        raise NotImplementedError

    def _compute_boundary(self, k: int, j: int) -> GroupRingWord:
        raise NotImplementedError

    def _check_size(self):
        cap = get_settings().get_max_resolution_rank()
        for k in range(self.max_degree + 1):
            if self.rank(k) > cap:
                raise SizeLimitError(
                    f"{self.kind} resolution of {self.group.label()} needs rank {self.rank(k)} "
                    f"in degree {k}, above the limit of {cap}", degree=k, rank=self.rank(k))

    def boundary(self, k: int, j: int) -> GroupRingWord:
        """Boundary of generator j of X_k as a word in X_{k-1}"""
        if not 1 <= k <= self.max_degree:
            raise PreconditionError(f"Boundary degree {k} outside 1..{self.max_degree}")
        if not 1 <= j <= self.rank(k):
            raise PreconditionError(f"Generator {j} outside 1..{self.rank(k)} in degree {k}")
        word = self._boundaries.get((k, j))
        if word is None:
            # concurrent fills store equal values
            word = self._compute_boundary(k, j)
            self._boundaries[(k, j)] = word
        return word

    def integer_column(self, k: int, j: int) -> Dict[int, int]:
        """Column j of d_k ⊗ Z as {row: coefficient}; misses are not memoized"""
        word = self._boundaries.get((k, j))
        if word is None:
            word = self._compute_boundary(k, j)
        return word.coefficient_dict()

    def boundaries(self, k: int) -> List[GroupRingWord]:
        return [self.boundary(k, j) for j in range(1, self.rank(k) + 1)]

    def boundary_length_bound(self, k: int) -> int:
        """Upper bound on the number of terms in a degree-k boundary"""
        return k + 1

    @property
    def has_homotopy(self) -> bool:
        return False

    def contracting_homotopy(self, k: int, w: Union[int, GroupRingWord]) -> GroupRingWord:
        raise UnsupportedResolutionError(f"{self.kind} resolution has no contracting homotopy")

    def truncated(self, max_degree: int) -> "Resolution":
        """Same resolution viewed to a smaller depth (shares the memo cache)"""
        if max_degree > self.max_degree:
            raise PreconditionError(f"Cannot extend depth {self.max_degree} to {max_degree}")
        clone = object.__new__(type(self))
        clone.__dict__.update(self.__dict__)
        clone.max_degree = max_degree
        return clone

    def __repr__(self) -> str:
        ranks = [self.rank(k) for k in range(min(self.max_degree, 4) + 1)]
        return f"{type(self).__name__}({self.group.label()}, depth {self.max_degree}, ranks {ranks}...)"


class _TupleCells:
    """Lexicographic numbering of tuples over an alphabet of element indices"""

    def __init__(self, alphabet: Sequence[int]):
        self.alphabet = tuple(alphabet)
        self.base = len(self.alphabet)
        self._position = {e: k for k, e in enumerate(self.alphabet)}

    def count(self, n: int) -> int:
        return self.base ** n

    def index(self, cell: Sequence[int]) -> Optional[int]:
        """1-based number of the cell, or None if it uses a letter outside the alphabet"""
        k = 0
        for e in cell:
            pos = self._position.get(e)
            if pos is None:
                return None
            k = k * self.base + pos
        return k + 1

    def cell(self, n: int, j: int) -> Tuple[int, ...]:
        k = j - 1
        out = []
        for _ in range(n):
            k, pos = divmod(k, self.base)
            out.append(self.alphabet[pos])
        return tuple(reversed(out))


class BarResolution(Resolution):
    """Cells [g_1,...,g_n] with the alternating boundary"""

    kind = "bar"

    def __init__(self, group: FiniteGroup, max_degree: int):
        super().__init__(group, max_degree)
        self.cells = _TupleCells(self._alphabet())
        self._check_size()
        logger.info(f"Built {self.kind} resolution of {group.label()} to degree {max_degree}")

    def _alphabet(self) -> List[int]:
        return list(self.group.indices())

    def rank(self, k: int) -> int:
        return self.cells.count(k)

    def cell(self, k: int, j: int) -> Tuple[int, ...]:
        return self.cells.cell(k, j)

    def cell_index(self, cell: Sequence[int]) -> Optional[int]:
        return self.cells.index(cell)

    def _faces(self, cell: Tuple[int, ...]):
        """(element, face cell, sign) for each term of the bar boundary"""
        n = len(cell)
        G = self.group
        yield cell[0], cell[1:], 1
        for i in range(n - 1):
            merged = G.mul(cell[i], cell[i + 1])
            yield 1, cell[:i] + (merged,) + cell[i + 2:], -1 if i % 2 == 0 else 1
        yield 1, cell[:-1], -1 if n % 2 else 1

    def _compute_boundary(self, k: int, j: int) -> GroupRingWord:
        cell = self.cell(k, j)
        terms = []
        for elt, face, sign in self._faces(cell):
            idx = self.cell_index(face)
            if idx is not None:
                terms.append((idx, elt, sign))
        return GroupRingWord.from_terms(self.rank(k - 1), terms)

    def integer_column(self, k: int, j: int) -> Dict[int, int]:
        column: Dict[int, int] = {}
        for _, face, sign in self._faces(self.cell(k, j)):
            idx = self.cell_index(face)
            if idx is not None:
                column[idx - 1] = column.get(idx - 1, 0) + sign
        return {i: v for i, v in column.items() if v}

    @property
    def has_homotopy(self) -> bool:
        return True

    def contracting_homotopy(self, k: int, w: Union[int, GroupRingWord]) -> GroupRingWord:
        """Z-linear D_k(g[g_1,...,g_k]) = [g,g_1,...,g_k]; D_{-1}(1) = [.]"""
        if k + 1 > self.max_degree:
            raise PreconditionError(f"Homotopy out of degree {k} needs depth {k + 1}")
        if k == -1:
            return GroupRingWord.from_terms(1, [(1, 1, int(w))] if w else [])
        if not isinstance(w, GroupRingWord) or w.rank != self.rank(k):
            raise PreconditionError(f"Homotopy input must be a word in degree {k}")
        terms = []
        for gen, e, c in w.terms:
            idx = self.cell_index((e,) + self.cell(k, gen))
            if idx is not None:
                terms.append((idx, 1, c))
        return GroupRingWord.from_terms(self.rank(k + 1), terms)


class NormalizedBarResolution(BarResolution):
    """Bar resolution with every cell containing the identity set to zero"""

    kind = "normalized_bar"

    def _alphabet(self) -> List[int]:
        return list(self.group.indices())[1:]


class HomogeneousResolution(Resolution):
    """Generators (1, g_1, ..., g_n) with the full alternating face sum.

    A face (h_0, h_1, ...) is rewritten as h_0 * (1, h_0^-1 h_1, ...).
    """

    kind = "homogeneous"

    def __init__(self, group: FiniteGroup, max_degree: int):
        super().__init__(group, max_degree)
        self.cells = _TupleCells(list(group.indices()))
        self._check_size()
        logger.info(f"Built {self.kind} resolution of {group.label()} to degree {max_degree}")

    def rank(self, k: int) -> int:
        return self.cells.count(k)

    def cell(self, k: int, j: int) -> Tuple[int, ...]:
        """The full homogeneous tuple (1, g_1, ..., g_k)"""
        return (1,) + self.cells.cell(k, j)

    def _compute_boundary(self, k: int, j: int) -> GroupRingWord:
        G = self.group
        full = self.cell(k, j)
        terms = []
        for i in range(k + 1):
            face = full[:i] + full[i + 1:]
            h0 = face[0]
            h0_inv = G.inv(h0)
            rest = tuple(G.mul(h0_inv, h) for h in face[1:])
            terms.append((self.cells.index(rest), h0, -1 if i % 2 else 1))
        return GroupRingWord.from_terms(self.rank(k - 1), terms)


class CyclicResolution(Resolution):
    """Rank-one periodic resolution: odd boundaries g - 1, even ones the norm"""

    kind = "cyclic"

    def __init__(self, group: FiniteGroup, max_degree: int):
        super().__init__(group, max_degree)
        generator = group.cyclic_generator()
        if generator is None:
            raise PreconditionError(f"{group.label()} is not cyclic")
        self.generator = generator
        self._norm = GroupRingWord.from_terms(1, [(1, group.power(generator, i), 1) for i in range(group.order)])
        self._difference = GroupRingWord.from_terms(1, [(1, generator, 1), (1, 1, -1)])
        logger.info(f"Built cyclic resolution of {group.label()} to degree {max_degree}")

    def rank(self, k: int) -> int:
        return 1

    def boundary_length_bound(self, k: int) -> int:
        return 2 if k % 2 else self.group.order

    def _compute_boundary(self, k: int, j: int) -> GroupRingWord:
        return self._difference if k % 2 else self._norm


class ExplicitResolution(Resolution):
    """Resolution given by ranks and boundary words, e.g. read back from JSON"""

    def __init__(self, group: FiniteGroup, ranks: Sequence[int], boundaries: Dict[int, Sequence[GroupRingWord]],
                 kind: str = "explicit"):
        super().__init__(group, len(ranks) - 1)
        self.kind = kind
        self._ranks = list(ranks)
        for k in range(1, len(ranks)):
            words = list(boundaries.get(k, ()))
            if len(words) != self._ranks[k]:
                raise PreconditionError(f"Degree {k} needs {self._ranks[k]} boundary words, got {len(words)}")
            for j, word in enumerate(words, start=1):
                if word.rank != self._ranks[k - 1]:
                    raise PreconditionError(f"Boundary ({k}, {j}) lives in rank {word.rank}, "
                                            f"expected {self._ranks[k - 1]}")
                self._boundaries[(k, j)] = word

    def rank(self, k: int) -> int:
        return self._ranks[k]

    def boundary_length_bound(self, k: int) -> int:
        return max((len(w) for w in self.boundaries(k)), default=0)

    def _compute_boundary(self, k: int, j: int) -> GroupRingWord:
        return self._boundaries[(k, j)]


def bar_resolution(G: FiniteGroup, K: int) -> BarResolution:
    return BarResolution(G, K)


def normalized_bar_resolution(G: FiniteGroup, K: int) -> NormalizedBarResolution:
    return NormalizedBarResolution(G, K)


def homogeneous_resolution(G: FiniteGroup, K: int) -> HomogeneousResolution:
    return HomogeneousResolution(G, K)


def cyclic_resolution(G: FiniteGroup, K: int) -> CyclicResolution:
    return CyclicResolution(G, K)


def explicit_resolution(G: FiniteGroup, ranks: Sequence[int],
                        boundaries: Dict[int, Sequence[GroupRingWord]]) -> ExplicitResolution:
    return ExplicitResolution(G, ranks, boundaries)


def resolve_kind(kind: Optional[str], G: FiniteGroup) -> str:
    """Canonical kind name with `auto` decided for G"""
    if kind is None:
        kind = get_settings().get_default_resolution()
    canonical = KIND_ALIASES.get(kind)
    if canonical is None:
        raise PreconditionError(f"Unknown resolution kind {kind!r}; expected one of {sorted(KIND_ALIASES)}")
    if canonical == "auto":
        canonical = "cyclic" if G.is_cyclic() else "normalized_bar"
    return canonical


_BUILDERS = {
    "bar": BarResolution,
    "normalized_bar": NormalizedBarResolution,
    "homogeneous": HomogeneousResolution,
    "cyclic": CyclicResolution,
}


def make_resolution(kind: Optional[str], G: FiniteGroup, K: int) -> Resolution:
    return _BUILDERS[resolve_kind(kind, G)](G, K)


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------

@dataclass
class VerificationReport:
    """Outcome of the structural checks on a resolution"""
    kind: str
    group: str
    max_degree: int
    d_squared: Dict[int, bool] = field(default_factory=dict)
    homology: Dict[int, AbelianInvariants] = field(default_factory=dict)
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "group": self.group,
            "max_degree": self.max_degree,
            "d_squared": {str(k): ok for k, ok in self.d_squared.items()},
            "homology": {str(k): inv.to_dict() for k, inv in self.homology.items()},
            "failures": list(self.failures),
            "passed": self.passed,
        }


def underlying_boundary(R: Resolution, k: int) -> IntMatrix:
    """d_k as a matrix over Z with basis g*f_j at index (j-1)*|G| + (g-1)"""
    G = R.group
    n = G.order
    if k == 0:
        return IntMatrix.zero(0, n * R.rank(0))
    triplets = []
    for j in range(1, R.rank(k) + 1):
        word = R.boundary(k, j)
        for g in G.indices():
            col = (j - 1) * n + (g - 1)
            for gen, e, c in word.terms:
                triplets.append(((gen - 1) * n + G.mul(g, e) - 1, col, c))
    return IntMatrix.from_triplets(n * R.rank(k - 1), n * R.rank(k), triplets)


def check_d_squared(R: Resolution, k: int) -> bool:
    if k < 2:
        return True
    images = R.boundaries(k - 1)
    return all(substitute(R.group, R.boundary(k, j), images).is_zero for j in range(1, R.rank(k) + 1))


def verify_resolution(R: Resolution, acyclic_through: Optional[int] = None) -> VerificationReport:
    """Check d^2 = 0 in every degree and exactness of the underlying Z-complex.

    Exactness is checked in degrees 0..acyclic_through (default K - 1); the
    underlying complex has |G| times the Z[G]-rank, so callers may limit it.
    """
    report = VerificationReport(R.kind, R.group.label(), R.max_degree)
    K = R.max_degree
    for k in range(2, K + 1):
        ok = check_d_squared(R, k)
        report.d_squared[k] = ok
        if not ok:
            report.failures.append(f"d^2 != 0 in degree {k}")
    top = K - 1 if acyclic_through is None else min(acyclic_through, K - 1)
    if any(not ok for ok in report.d_squared.values()):
        logger.warning(f"Skipping exactness check for {R.kind}: boundaries do not square to zero")
        return report
    matrices = {}
    for k in range(0, top + 2):
        matrices[k] = underlying_boundary(R, k)
    for k in range(0, top + 1):
        inv = homology_of_pair(matrices[k], matrices[k + 1])
        report.homology[k] = inv
        expected = AbelianInvariants(1) if k == 0 else AbelianInvariants()
        if inv != expected:
            report.failures.append(f"Underlying homology in degree {k} is {inv}, expected {expected}")
    logger.info(f"Verified {R.kind} resolution of {R.group.label()}: "
                f"{'passed' if report.passed else '; '.join(report.failures)}")
    return report


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def _word_json(word: GroupRingWord, triples: bool) -> List[List[int]]:
    if not triples:
        try:
            return word.to_pairs()
        except PreconditionError:
            pass
    return word.to_triples()


def dump_resolution(R: Resolution, K: Optional[int] = None, triples: bool = False) -> dict:
    """JSON-ready prefix of R through degree K"""
    K = R.max_degree if K is None else min(K, R.max_degree)
    G = R.group
    return {
        "kind": R.kind,
        "group": {
            "name": G.name,
            "degree": G.degree,
            "generators": [str(g) for g in G.generators],
            "elements": [str(p) for p in G.elements],
        },
        "max_degree": K,
        "ranks": [R.rank(k) for k in range(K + 1)],
        "boundaries": {str(k): [_word_json(w, triples) for w in R.boundaries(k)] for k in range(1, K + 1)},
    }


def dumps_resolution(R: Resolution, K: Optional[int] = None, triples: bool = False) -> str:
    return json.dumps(dump_resolution(R, K, triples))


def load_resolution(data: Union[str, dict], group: Optional[FiniteGroup] = None) -> ExplicitResolution:
    """Rebuild a dumped prefix as an explicit resolution"""
    if isinstance(data, str):
        data = json.loads(data)
    try:
        info = data["group"]
        if group is None:
            degree = info["degree"]
            gens = [Permutation.from_cycles(text, degree) for text in info["generators"]]
            group = enumerate_group(gens, info.get("name"))
        if [str(p) for p in group.elements] != list(info["elements"]):
            raise PreconditionError("Element ordering in the dump does not match the group")
        ranks = [int(r) for r in data["ranks"]]
        boundaries = {int(k): [from_json(w, ranks[int(k) - 1]) for w in words]
                      for k, words in data["boundaries"].items()}
    except (KeyError, TypeError) as e:
        raise PreconditionError(f"Malformed resolution dump: {e}") from e
    return ExplicitResolution(group, ranks, boundaries, kind=data.get("kind", "explicit"))
