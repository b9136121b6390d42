"""
Groups - Finite permutation groups, homomorphisms, subgroups and quotients

Element indices are 1-based everywhere: index 1 is the identity, matching the
element numbering used in group-ring words.  Products are read left to right
(p * q applies p first, then q).
"""

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from sympy import factorint, isprime

from .errors import HomomorphismError, NotNormalError, ParseError, PreconditionError, SizeLimitError
from .intlinalg import AbelianInvariants, IntMatrix, elementary_divisors
from .settings_manager import get_settings

logger = logging.getLogger(__name__)

# Tables up to this order are precomputed; beyond it products are looked up.
_TABLE_LIMIT = 512


@dataclass(frozen=True)
class Permutation:
    """Bijection of {1..degree} given by its 1-based images"""
    images: Tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(x) for x in self.images)
        object.__setattr__(self, "images", images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise PreconditionError(f"Not a permutation of 1..{len(images)}: {images}")

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(tuple(range(1, degree + 1)))

    @classmethod
    def from_cycles(cls, text: str, degree: Optional[int] = None) -> "Permutation":
        cycles = parse_cycles(text)
        largest = max((p for cycle in cycles for p in cycle), default=1)
        if degree is None:
            degree = largest
        elif largest > degree:
            raise PreconditionError(f"Point {largest} exceeds degree {degree}")
        images = list(range(1, degree + 1))
        for cycle in cycles:
            for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                images[a - 1] = b
        return cls(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if self.degree != other.degree:
            raise PreconditionError(f"Degree mismatch: {self.degree} vs {other.degree}")
        return Permutation(tuple(other.images[x - 1] for x in self.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, x in enumerate(self.images, start=1):
            inv[x - 1] = i
        return Permutation(tuple(inv))

    def __pow__(self, k: int) -> "Permutation":
        base = self if k >= 0 else self.inverse()
        result = Permutation.identity(self.degree)
        for _ in range(abs(k)):
            result = result * base
        return result

    def is_identity(self) -> bool:
        return all(x == i for i, x in enumerate(self.images, start=1))

    def extended(self, degree: int) -> "Permutation":
        """Same permutation acting on a larger point set"""
        return Permutation(self.images + tuple(range(self.degree + 1, degree + 1)))

    def cycles(self) -> List[Tuple[int, ...]]:
        seen = set()
        out = []
        for start in range(1, self.degree + 1):
            if start in seen or self(start) == start:
                continue
            cycle = [start]
            seen.add(start)
            x = self(start)
            while x != start:
                cycle.append(x)
                seen.add(x)
                x = self(x)
            out.append(tuple(cycle))
        return out

    def order(self) -> int:
        from math import lcm
        return lcm(*(len(c) for c in self.cycles())) if self.cycles() else 1

    def __str__(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + ",".join(str(p) for p in c) + ")" for c in cycles)


def parse_cycles(text: str) -> List[List[int]]:
    """Parse cycle notation such as "(1,2,3)(4,5)"; "()" is the identity"""
    cycles = []
    pos = 0
    n = len(text)

    def skip_space(k):
        while k < n and text[k].isspace():
            k += 1
        return k

    pos = skip_space(pos)
    if pos == n:
        raise ParseError("Empty cycle notation", text, pos)
    while pos < n:
        if text[pos] != "(":
            raise ParseError("Expected '('", text, pos)
        pos = skip_space(pos + 1)
        cycle = []
        if pos < n and text[pos] == ")":
            cycles.append(cycle)
            pos = skip_space(pos + 1)
            continue
        while True:
            start = pos
            while pos < n and text[pos].isdigit():
                pos += 1
            if start == pos:
                raise ParseError("Expected a point number", text, pos)
            point = int(text[start:pos])
            if point < 1:
                raise ParseError("Points are numbered from 1", text, start)
            if point in cycle or any(point in c for c in cycles):
                raise ParseError(f"Point {point} repeated", text, start)
            cycle.append(point)
            pos = skip_space(pos)
            if pos < n and text[pos] == ",":
                pos = skip_space(pos + 1)
                continue
            if pos < n and text[pos] == ")":
                pos = skip_space(pos + 1)
                break
            raise ParseError("Expected ',' or ')'", text, pos)
        cycles.append(cycle)
    return [c for c in cycles if c]


class FiniteGroup:
    """Enumerated permutation group with indexed elements.

    Immutable after construction.  `parent(k)` gives the breadth-first tree
    edge (parent index, generator position) with element k = parent * gen.
    """

    def __init__(self, generators: Sequence[Permutation], elements: Sequence[Permutation],
                 parents: Sequence[Tuple[int, int]], name: Optional[str] = None):
        self.generators: Tuple[Permutation, ...] = tuple(generators)
        self.elements: Tuple[Permutation, ...] = tuple(elements)
        self.name = name
        self._parents = tuple(parents)
        self._index: Dict[Permutation, int] = {p: k for k, p in enumerate(self.elements, start=1)}
        self.generator_indices: Tuple[int, ...] = tuple(self._index[g] for g in self.generators)
        self._inv = [0] + [self._index[p.inverse()] for p in self.elements]
        self._table = None
        if len(self.elements) <= _TABLE_LIMIT:
            self._table = [[0] * (len(self.elements) + 1)]
            for p in self.elements:
                self._table.append([0] + [self._index[p * q] for q in self.elements])

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def degree(self) -> int:
        return self.elements[0].degree

    @property
    def identity(self) -> int:
        return 1

    def element(self, i: int) -> Permutation:
        return self.elements[i - 1]

    def index(self, perm: Permutation) -> int:
        try:
            return self._index[perm]
        except KeyError:
            raise PreconditionError(f"{perm} is not an element of {self.label()}") from None

    def __contains__(self, perm: Permutation) -> bool:
        return perm in self._index

    def indices(self) -> range:
        return range(1, len(self.elements) + 1)

    def mul(self, i: int, j: int) -> int:
        if self._table is not None:
            return self._table[i][j]
        return self._index[self.elements[i - 1] * self.elements[j - 1]]

    def inv(self, i: int) -> int:
        return self._inv[i]

    def power(self, i: int, k: int) -> int:
        base = i if k >= 0 else self.inv(i)
        result = 1
        for _ in range(abs(k)):
            result = self.mul(result, base)
        return result

    def element_order(self, i: int) -> int:
        k, x = 1, i
        while x != 1:
            x = self.mul(x, i)
            k += 1
        return k

    def conjugate(self, g: int, x: int) -> int:
        """g x g^-1"""
        return self.mul(self.mul(g, x), self.inv(g))

    def parent(self, k: int) -> Tuple[int, int]:
        return self._parents[k - 1]

    def closure(self, indices: Iterable[int]) -> FrozenSet[int]:
        """Subgroup generated by the given element indices"""
        gens = sorted(set(indices))
        seen = {1}
        frontier = [1]
        while frontier:
            nxt = []
            for x in frontier:
                for s in gens:
                    y = self.mul(x, s)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def is_abelian(self) -> bool:
        gens = self.generator_indices
        return all(self.mul(a, b) == self.mul(b, a) for a in gens for b in gens)

    def cyclic_generator(self) -> Optional[int]:
        """Smallest index generating the whole group, or None"""
        n = self.order
        for i in self.indices():
            if self.element_order(i) == n:
                return i
        return None

    def is_cyclic(self) -> bool:
        return self.cyclic_generator() is not None

    def label(self) -> str:
        return self.name or f"Group of order {self.order}"

    def __repr__(self) -> str:
        gens = ", ".join(str(g) for g in self.generators)
        return f"FiniteGroup({self.label()}; [{gens}])"


def enumerate_group(generators: Sequence[Permutation], name: Optional[str] = None) -> FiniteGroup:
    """Full closure of the generators in breadth-first, lexicographic order"""
    generators = list(generators)
    if not generators:
        raise PreconditionError("enumerate needs at least one generator")
    degree = generators[0].degree
    for g in generators:
        if g.degree != degree:
            raise PreconditionError(f"Generator degrees differ: {degree} vs {g.degree}")
    cap = get_settings().get_group_size_cap()
    identity = Permutation.identity(degree)
    elements = [identity]
    parents = [(0, -1)]
    where = {identity: 1}
    layer = [1]
    while layer:
        found: Dict[Permutation, Tuple[int, int]] = {}
        for k in layer:
            x = elements[k - 1]
            for pos, s in enumerate(generators):
                y = x * s
                if y not in where and y not in found:
                    found[y] = (k, pos)
        layer = []
        for y in sorted(found, key=lambda p: p.images):
            elements.append(y)
            parents.append(found[y])
            where[y] = len(elements)
            layer.append(len(elements))
        if len(elements) > cap:
            raise SizeLimitError(f"Group closure exceeds the element cap of {cap}")
    group = FiniteGroup(generators, elements, parents, name)
    logger.info(f"Enumerated {group.label()} with {group.order} elements")
    return group


# `enumerate` would shadow the builtin inside this module.
enumerate_ = enumerate_group


class GroupHom:
    """Homomorphism given by generator images, with the full element table"""

    def __init__(self, source: FiniteGroup, target: FiniteGroup, gen_images: Sequence[int]):
        self.source = source
        self.target = target
        self.gen_images: Tuple[int, ...] = tuple(gen_images)
        images = [0, 1]
        for k in range(2, source.order + 1):
            p, pos = source.parent(k)
            images.append(target.mul(images[p], self.gen_images[pos]))
        self._images = images

    def image(self, i: int) -> int:
        return self._images[i]

    @property
    def elt_images(self) -> Tuple[int, ...]:
        return tuple(self._images[1:])

    def check(self):
        """Raise HomomorphismError unless the table respects every product"""
        src, tgt = self.source, self.target
        for a in src.indices():
            for pos, s in enumerate(src.generator_indices):
                lhs = self._images[src.mul(a, s)]
                rhs = tgt.mul(self._images[a], self.gen_images[pos])
                if lhs != rhs:
                    raise HomomorphismError(
                        f"Images do not define a homomorphism: f({src.element(a)} * {src.element(s)}) = "
                        f"{tgt.element(lhs)} but f({src.element(a)}) * f({src.element(s)}) = {tgt.element(rhs)}")

    def verify_exhaustive(self) -> bool:
        src, tgt = self.source, self.target
        return all(self._images[src.mul(a, b)] == tgt.mul(self._images[a], self._images[b])
                   for a in src.indices() for b in src.indices())

    def compose(self, after: "GroupHom") -> "GroupHom":
        """after ∘ self"""
        if after.source is not self.target:
            raise PreconditionError("Homomorphisms do not compose")
        return GroupHom(self.source, after.target,
                        [after.image(self.image(s)) for s in self.source.generator_indices])

    def kernel_indices(self) -> FrozenSet[int]:
        return frozenset(i for i in self.source.indices() if self._images[i] == 1)

    def is_injective(self) -> bool:
        return len(set(self._images[1:])) == self.source.order

    def __repr__(self) -> str:
        return f"GroupHom({self.source.label()} -> {self.target.label()})"


def homomorphism(src: FiniteGroup, tgt: FiniteGroup,
                 gen_images: Sequence[Union[int, Permutation]]) -> GroupHom:
    """Validated homomorphism from images of the source generators"""
    if len(gen_images) != len(src.generators):
        raise PreconditionError(f"Need {len(src.generators)} generator images, got {len(gen_images)}")
    indices = [tgt.index(g) if isinstance(g, Permutation) else int(g) for g in gen_images]
    for i in indices:
        if not 1 <= i <= tgt.order:
            raise PreconditionError(f"Element index {i} outside {tgt.label()}")
    hom = GroupHom(src, tgt, indices)
    hom.check()
    return hom


def subgroup(G: FiniteGroup, generators: Iterable[Union[int, Permutation]],
             name: Optional[str] = None) -> Tuple[FiniteGroup, GroupHom]:
    """Subgroup generated inside G, with its inclusion"""
    indices = sorted({G.index(g) if isinstance(g, Permutation) else int(g) for g in generators})
    if not indices:
        indices = [1]
    H = enumerate_group([G.element(i) for i in indices], name)
    return H, GroupHom(H, G, indices)


def inclusion(H: FiniteGroup, G: FiniteGroup) -> GroupHom:
    """Inclusion of a group whose elements all lie in G"""
    for p in H.elements:
        if p not in G:
            raise PreconditionError(f"{p} lies outside {G.label()}; not a subgroup")
    return GroupHom(H, G, [G.index(g) for g in H.generators])


def commutator_subgroup(G: FiniteGroup) -> Tuple[FiniteGroup, GroupHom]:
    commutators = set()
    for g in G.indices():
        for h in G.indices():
            commutators.add(G.mul(G.mul(g, h), G.mul(G.inv(g), G.inv(h))))
    H, inc = subgroup(G, commutators - {1} or {1}, name=f"[{G.label()},{G.label()}]")
    return H, inc


def subgroup_indices(G: FiniteGroup, N) -> FrozenSet[int]:
    if isinstance(N, GroupHom):
        if N.target is not G:
            raise PreconditionError("Inclusion does not land in the group")
        return frozenset(N.elt_images)
    if isinstance(N, FiniteGroup):
        inclusion(N, G)
        return frozenset(G.index(p) for p in N.elements)
    indices = frozenset(int(i) for i in N)
    if G.closure(indices) != indices:
        raise PreconditionError("Index set is not a subgroup")
    return indices


def coset_representatives(G: FiniteGroup, N) -> List[int]:
    """Minimal element index of every coset gN, in increasing order"""
    members = subgroup_indices(G, N)
    reps = set()
    for g in G.indices():
        reps.add(min(G.mul(g, n) for n in members))
    return sorted(reps)


def quotient_group(G: FiniteGroup, N) -> Tuple[FiniteGroup, GroupHom]:
    """G/N acting on its cosets, with the projection G -> G/N"""
    members = subgroup_indices(G, N)
    for g in G.indices():
        for n in members:
            c = G.conjugate(g, n)
            if c not in members:
                raise NotNormalError(
                    f"Subgroup is not normal: {G.element(g)} * {G.element(n)} * {G.element(g)}^-1 "
                    f"= {G.element(c)} leaves it")
    rep_of = {g: min(G.mul(g, n) for n in members) for g in G.indices()}
    reps_sorted = sorted(set(rep_of.values()))
    point = {rep: k for k, rep in enumerate(reps_sorted, start=1)}
    coset_point = {g: point[rep] for g, rep in rep_of.items()}
    quotient_gens = []
    for s in G.generator_indices:
        quotient_gens.append(Permutation(tuple(coset_point[G.mul(rep, s)] for rep in reps_sorted)))
    name = f"{G.label()}/N" if G.name else None
    Q = enumerate_group(quotient_gens, name)
    projection = GroupHom(G, Q, [Q.index(q) for q in quotient_gens])
    return Q, projection


def abelianization_invariants(G: FiniteGroup) -> AbelianInvariants:
    """Invariants of G/[G,G] from a relation matrix of the abelian quotient"""
    _, inc = commutator_subgroup(G)
    Q, _ = quotient_group(G, inc)
    r = len(Q.generators)
    vectors = {1: [0] * r}
    for k in range(2, Q.order + 1):
        p, pos = Q.parent(k)
        vec = list(vectors[p])
        vec[pos] += 1
        vectors[k] = vec
    relations = set()
    for k in Q.indices():
        for pos, s in enumerate(Q.generator_indices):
            target = vectors[Q.mul(k, s)]
            rel = tuple(a + (1 if i == pos else 0) - b for i, (a, b) in enumerate(zip(vectors[k], target)))
            if any(rel):
                relations.add(rel)
    M = IntMatrix.from_columns(r, sorted(relations))
    divisors = elementary_divisors(M)
    free = r - len(divisors)
    return AbelianInvariants.from_diagonal([d for d in divisors if d > 1], free)


def sylow_subgroup(G: FiniteGroup, p: int) -> Tuple[FiniteGroup, GroupHom]:
    """A Sylow p-subgroup grown through normalizers"""
    if not isprime(p):
        raise PreconditionError(f"sylow_subgroup needs a prime, got {p}")
    target = p ** factorint(G.order).get(p, 0)
    members = frozenset([1])
    chosen: List[int] = []
    while len(members) < target:
        normalizer = [g for g in G.indices()
                      if all(G.conjugate(g, x) in members for x in members)]
        step = None
        for g in normalizer:
            if g not in members and G.power(g, p) in members:
                step = g
                break
        if step is None:
            raise PreconditionError(f"No p-element extends the subgroup of order {len(members)}")
        chosen.append(step)
        members = G.closure(chosen)
        logger.debug(f"Sylow {p}-search grew to order {len(members)}")
    return subgroup(G, chosen or [1], name=f"Syl{p}({G.label()})")


# ---------------------------------------------------------------------------
# Standard constructors
# ---------------------------------------------------------------------------

def cyclic(m: int) -> FiniteGroup:
    if m < 1:
        raise PreconditionError("cyclic(m) needs m >= 1")
    if m == 1:
        return enumerate_group([Permutation.identity(1)], "C1")
    return enumerate_group([Permutation(tuple(list(range(2, m + 1)) + [1]))], f"C{m}")


def symmetric(n: int) -> FiniteGroup:
    if n < 1:
        raise PreconditionError("symmetric(n) needs n >= 1")
    if n == 1:
        return enumerate_group([Permutation.identity(1)], "S1")
    cycle = Permutation(tuple(list(range(2, n + 1)) + [1]))
    transposition = Permutation.from_cycles("(1,2)", n)
    return enumerate_group([cycle, transposition] if n > 2 else [transposition], f"S{n}")


def alternating(n: int) -> FiniteGroup:
    if n < 1:
        raise PreconditionError("alternating(n) needs n >= 1")
    if n < 3:
        return enumerate_group([Permutation.identity(n)], f"A{n}")
    gens = [Permutation.from_cycles(f"(1,2,{k})", n) for k in range(3, n + 1)]
    return enumerate_group(gens, f"A{n}")


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the regular n-gon, order 2n"""
    if n < 1:
        raise PreconditionError("dihedral(n) needs n >= 1")
    if n == 1:
        G = cyclic(2)
        G.name = "D1"
        return G
    if n == 2:
        return klein_four("D2")
    rotation = Permutation(tuple(list(range(2, n + 1)) + [1]))
    reflection = Permutation(tuple(n + 1 - i for i in range(1, n + 1)))
    return enumerate_group([rotation, reflection], f"D{n}")


def klein_four(name: str = "C2xC2") -> FiniteGroup:
    return enumerate_group([Permutation.from_cycles("(1,2)(3,4)"), Permutation.from_cycles("(1,3)(2,4)")], name)


def quaternion() -> FiniteGroup:
    """Q8 in its regular representation"""
    i = Permutation.from_cycles("(1,2,3,4)(5,6,7,8)")
    j = Permutation.from_cycles("(1,5,3,7)(2,8,4,6)")
    return enumerate_group([i, j], "Q8")


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    """G x H acting on disjoint point sets"""
    dg, dh = G.degree, H.degree
    gens = [Permutation(g.images + tuple(range(dg + 1, dg + dh + 1))) for g in G.generators]
    gens += [Permutation(tuple(range(1, dg + 1)) + tuple(x + dg for x in h.images)) for h in H.generators]
    name = f"{G.name}x{H.name}" if G.name and H.name else None
    return enumerate_group(gens, name)


def from_cycles(text: str, degree: Optional[int] = None) -> Permutation:
    return Permutation.from_cycles(text, degree)


def from_multiplication_table(table: Sequence[Sequence[int]], name: Optional[str] = None) -> FiniteGroup:
    """Right regular representation of a 1-based multiplication table"""
    n = len(table)
    if any(len(row) != n for row in table):
        raise PreconditionError("Multiplication table must be square")
    perms = []
    for s in range(1, n + 1):
        try:
            perms.append(Permutation(tuple(table[x - 1][s - 1] for x in range(1, n + 1))))
        except PreconditionError:
            raise PreconditionError(f"Column {s} of the table is not a permutation") from None
    G = enumerate_group(perms, name)
    if G.order != n:
        raise PreconditionError(f"Table does not describe a group (closure has {G.order} elements)")
    return G
