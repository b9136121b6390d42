"""
Cocycles - H^1 and H^2 from explicit cocycle and coboundary systems

Cochains are stacked coordinate vectors: the value of f at g (or at (g, h))
occupies a block of rank(A) coordinates.  Cocycles are the integer solutions
of the cocycle identities modulo the relations of A, coboundaries are the
images of lower cochains, and the quotient is read off with a Subquotient.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .errors import FeasibilityError
from .functors import GModule
from .groups import FiniteGroup
from .intlinalg import AbelianInvariants, IntMatrix, Subquotient, kernel_modulo
from .settings_manager import get_settings

logger = logging.getLogger(__name__)


@dataclass
class CocycleSystem:
    """Linear data for one degree: relation matrix, moduli and coboundaries"""
    degree: int
    variables: int
    relations: IntMatrix
    moduli: List[int]
    coboundaries: List[Dict[int, int]]
    value_relations: List[Dict[int, int]]

    def cocycle_basis(self) -> List[List[int]]:
        return kernel_modulo(self.relations, self.moduli)

    def coboundaries_are_cocycles(self) -> bool:
        for vec in self.coboundaries:
            image = self.relations.apply(vec)
            if any(v % m if m else v for v, m in zip(image, self.moduli)):
                return False
        return True

    def quotient(self) -> Subquotient:
        cycles = self.cocycle_basis()
        return Subquotient(self.variables, list(cycles) + self.value_relations,
                           self.coboundaries + self.value_relations)


class _Layout:
    """Coordinates of cochain values; normalized layouts skip identity arguments"""

    def __init__(self, G: FiniteGroup, arity: int, rank: int, normalized: bool):
        self.rank = rank
        self.normalized = normalized
        letters = list(G.indices())[1:] if normalized else list(G.indices())
        self._offset: Dict[Tuple[int, ...], int] = {}
        keys = [()]
        for _ in range(arity):
            keys = [key + (g,) for key in keys for g in letters]
        for k, key in enumerate(keys):
            self._offset[key] = k * rank
        self.size = len(keys) * rank

    def offset(self, key: Tuple[int, ...]) -> Optional[int]:
        """Start of the value block, or None when the value is forced to zero"""
        return self._offset.get(key)

    def add_value(self, row: Dict[int, int], key: Tuple[int, ...], coeff_matrix: Optional[IntMatrix],
                  sign: int, component: int):
        """row += sign * (M f(key))_component, M the identity when None"""
        base = self.offset(key)
        if base is None:
            return
        if coeff_matrix is None:
            col = base + component
            row[col] = row.get(col, 0) + sign
            return
        for j in range(self.rank):
            v = coeff_matrix.entry(component, j)
            if v:
                row[base + j] = row.get(base + j, 0) + sign * v


def _value_relations(layout: _Layout, A: GModule) -> List[Dict[int, int]]:
    out = []
    for base in sorted(set(layout._offset.values())):
        for i, m in enumerate(A.relation_diag):
            if m:
                out.append({base + i: m})
    return out


def _build_matrix(rows: List[Dict[int, int]], cols: int) -> IntMatrix:
    triplets = [(r, c, v) for r, row in enumerate(rows) for c, v in row.items() if v]
    return IntMatrix.from_triplets(len(rows), cols, triplets)


def cocycle_system_h1(G: FiniteGroup, A: GModule, normalized: bool = False) -> CocycleSystem:
    """f(gh) = f(g) + g f(h) for all g, h"""
    r = A.rank
    layout = _Layout(G, 1, r, normalized)
    rows, moduli = [], []
    for g in G.indices():
        for h in G.indices():
            gh = G.mul(g, h)
            for i in range(r):
                row: Dict[int, int] = {}
                layout.add_value(row, (gh,), None, 1, i)
                layout.add_value(row, (g,), None, -1, i)
                layout.add_value(row, (h,), A.action(g), -1, i)
                rows.append(row)
                moduli.append(A.relation_diag[i])
    coboundaries = []
    for k in range(r):
        vec: Dict[int, int] = {}
        for g in G.indices():
            base = layout.offset((g,))
            if base is None:
                continue
            column = A.action(g).column(k)
            for i in range(r):
                v = column.get(i, 0) - (1 if i == k else 0)
                if v:
                    vec[base + i] = v
        coboundaries.append(vec)
    return CocycleSystem(1, layout.size, _build_matrix(rows, layout.size), moduli, coboundaries,
                         _value_relations(layout, A))


def cocycle_system_h2(G: FiniteGroup, A: GModule, normalized: bool = False) -> CocycleSystem:
    """g f(h,k) - f(gh,k) + f(g,hk) - f(g,h) = 0 for all g, h, k"""
    r = A.rank
    layout = _Layout(G, 2, r, normalized)
    lower = _Layout(G, 1, r, normalized)
    rows, moduli = [], []
    for g in G.indices():
        for h in G.indices():
            gh = G.mul(g, h)
            for k in G.indices():
                hk = G.mul(h, k)
                for i in range(r):
                    row: Dict[int, int] = {}
                    layout.add_value(row, (h, k), A.action(g), 1, i)
                    layout.add_value(row, (gh, k), None, -1, i)
                    layout.add_value(row, (g, hk), None, 1, i)
                    layout.add_value(row, (g, h), None, -1, i)
                    if row:
                        rows.append(row)
                        moduli.append(A.relation_diag[i])
    coboundaries = []
    # (delta u)(g, h) = g u(h) - u(gh) + u(g) for each basis 1-cochain u
    for x in G.indices():
        if lower.offset((x,)) is None:
            continue
        for a in range(r):
            vec: Dict[int, int] = {}
            for g in G.indices():
                for h in G.indices():
                    base = layout.offset((g, h))
                    if base is None:
                        continue
                    value = [0] * r
                    if h == x:
                        for i, v in A.action(g).column(a).items():
                            value[i] += v
                    if G.mul(g, h) == x:
                        value[a] -= 1
                    if g == x:
                        value[a] += 1
                    for i, v in enumerate(value):
                        if v:
                            vec[base + i] = v
            coboundaries.append(vec)
    return CocycleSystem(2, layout.size, _build_matrix(rows, layout.size), moduli, coboundaries,
                         _value_relations(layout, A))


def _check_h1_budget(G: FiniteGroup, A: GModule):
    cap = get_settings().get_cocycle_variable_cap()
    size = G.order * A.rank
    if size > cap:
        raise FeasibilityError(f"H^1 cocycle system for {G.label()} needs {size} variables, over the cap of {cap}",
                               degree=1, rank=size)


def _check_h2_budget(G: FiniteGroup):
    cap = get_settings().get_cocycle_group_cap()
    if G.order > cap:
        raise FeasibilityError(f"H^2 cocycle system for {G.label()} needs |G| <= {cap}, got {G.order}",
                               degree=2, rank=G.order ** 2)


def h1_via_cocycles(G: FiniteGroup, A: GModule, normalized: bool = False) -> AbelianInvariants:
    _check_h1_budget(G, A)
    result = cocycle_system_h1(G, A, normalized).quotient().invariants
    logger.info(f"H^1({G.label()}, {A.label()}) = {result} via cocycles")
    return result


def h2_via_cocycles(G: FiniteGroup, A: GModule, normalized: bool = False) -> AbelianInvariants:
    _check_h2_budget(G)
    system = cocycle_system_h2(G, A, normalized)
    logger.debug(f"H^2 cocycle system: {system.relations.rows} relations on {system.variables} variables")
    result = system.quotient().invariants
    logger.info(f"H^2({G.label()}, {A.label()}) = {result} via cocycles")
    return result
