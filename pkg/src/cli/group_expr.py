"""
Group Expressions - The small LL(1) language naming groups and coefficients

    expr    := factor ('x' factor)*
    factor  := ('C' | 'S' | 'A' | 'D') INT | 'Q8' | 'V4' | 'perm:' '[' cycles (',' cycles)* ']'
    coeff   := 'Z' | 'Z/' INT ('^' INT)?
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

from core import groups
from core.errors import ParseError
from core.functors import GModule
from core.groups import FiniteGroup

logger = logging.getLogger(__name__)

FAMILIES = {
    "C": groups.cyclic,
    "S": groups.symmetric,
    "A": groups.alternating,
    "D": groups.dihedral,
}


@dataclass(frozen=True)
class GroupExpr:
    """Parsed group expression; str() gives back its canonical text"""
    family: str
    parameter: Optional[int] = None
    generators: Tuple[str, ...] = ()
    factors: Tuple["GroupExpr", ...] = ()

    def __str__(self) -> str:
        if self.family == "product":
            return "x".join(str(f) for f in self.factors)
        if self.family == "perm":
            return "perm:[" + ",".join(self.generators) + "]"
        return f"{self.family}{self.parameter}"

    def build(self) -> FiniteGroup:
        if self.family == "product":
            result = self.factors[0].build()
            for factor in self.factors[1:]:
                result = groups.direct_product(result, factor.build())
            result.name = str(self)
            return result
        if self.family == "perm":
            perms = [groups.Permutation.from_cycles(text) for text in self.generators]
            degree = max(p.degree for p in perms)
            return groups.enumerate_group([p.extended(degree) for p in perms], str(self))
        if self.family == "Q":
            return groups.quaternion()
        if self.family == "V":
            return groups.klein_four("V4")
        return FAMILIES[self.family](self.parameter)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def skip_space(self):
        while self.peek().isspace():
            self.pos += 1

    def expect(self, token: str):
        if not self.text.startswith(token, self.pos):
            raise ParseError(f"Expected {token!r}", self.text, self.pos)
        self.pos += len(token)

    def integer(self) -> int:
        start = self.pos
        while self.peek().isdigit():
            self.pos += 1
        if start == self.pos:
            raise ParseError("Expected a number", self.text, start)
        return int(self.text[start:self.pos])

    def expr(self) -> GroupExpr:
        self.skip_space()
        factors = [self.factor()]
        self.skip_space()
        while self.peek() == "x":
            self.pos += 1
            self.skip_space()
            factors.append(self.factor())
            self.skip_space()
        if self.pos != len(self.text):
            raise ParseError("Unexpected trailing text", self.text, self.pos)
        if len(factors) == 1:
            return factors[0]
        return GroupExpr("product", factors=tuple(factors))

    def factor(self) -> GroupExpr:
        c = self.peek()
        if self.text.startswith("perm:", self.pos):
            self.pos += len("perm:")
            return self.permutations()
        if c in FAMILIES:
            self.pos += 1
            start = self.pos
            n = self.integer()
            if n < 1:
                raise ParseError("Group parameter must be at least 1", self.text, start)
            return GroupExpr(c, n)
        if c == "Q":
            self.pos += 1
            self.expect("8")
            return GroupExpr("Q", 8)
        if c == "V":
            self.pos += 1
            self.expect("4")
            return GroupExpr("V", 4)
        raise ParseError("Expected a group name (C, S, A, D, Q8, V4 or perm:[...])", self.text, self.pos)

    def permutations(self) -> GroupExpr:
        self.skip_space()
        self.expect("[")
        gens = []
        while True:
            self.skip_space()
            start = self.pos
            if self.peek() != "(":
                raise ParseError("Expected '('", self.text, self.pos)
            depth = 0
            while self.pos < len(self.text):
                ch = self.peek()
                if ch == "(":
                    depth += 1
                elif ch == ")":
                    depth -= 1
                elif depth == 0 and ch in ",]":
                    break
                self.pos += 1
            chunk = self.text[start:self.pos].strip()
            try:
                groups.parse_cycles(chunk)
            except ParseError as e:
                raise ParseError("Malformed cycle notation", self.text, start + e.position) from None
            gens.append("".join(chunk.split()))
            if self.peek() == ",":
                self.pos += 1
                continue
            self.expect("]")
            return GroupExpr("perm", generators=tuple(gens))


def parse_group(text: str) -> GroupExpr:
    return _Parser(text.strip()).expr()


def build_group(text: str) -> FiniteGroup:
    expr = parse_group(text)
    group = expr.build()
    logger.debug(f"Parsed {text!r} as {expr} of order {group.order}")
    return group


@dataclass(frozen=True)
class CoefficientSpec:
    """Z (modulus 0) or (Z/m)^rank with trivial action"""
    modulus: int = 0
    rank: int = 1

    def __str__(self) -> str:
        base = "Z" if self.modulus == 0 else f"Z/{self.modulus}"
        return base if self.rank == 1 else f"{base}^{self.rank}"

    def module(self, group: FiniteGroup) -> GModule:
        if self.modulus == 0 and self.rank == 1:
            return GModule.integers(group)
        return GModule.cyclic_trivial(group, self.modulus, self.rank)


def parse_coefficients(text: str) -> CoefficientSpec:
    p = _Parser(text.strip())
    p.expect("Z")
    if not p.peek():
        return CoefficientSpec()
    p.expect("/")
    start = p.pos
    m = p.integer()
    if m < 2:
        raise ParseError("Modulus must be at least 2", p.text, start)
    rank = 1
    if p.peek() == "^":
        p.pos += 1
        start = p.pos
        rank = p.integer()
        if rank < 1:
            raise ParseError("Rank must be at least 1", p.text, start)
    if p.pos != len(p.text):
        raise ParseError("Unexpected trailing text", p.text, p.pos)
    return CoefficientSpec(m, rank)
