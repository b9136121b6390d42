"""
Chain Maps - Equivariant chain maps and the maps they induce on (co)homology

A chain map over phi: H -> G sends generator j of X_k (a resolution over H)
to a word in X'_k (a resolution over G).  Homology maps are covariant in the
resolution, cohomology maps contravariant; restriction and inflation are
the two cohomology maps built on top.
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import PreconditionError, UnsupportedResolutionError
from .functors import GModule, check_feasible, hom_with_module, tensor_with_module
from .groups import FiniteGroup, GroupHom, inclusion, quotient_group, subgroup_indices
from .intlinalg import AbelianInvariants, IntMatrix, Lattice, Subquotient, kernel_modulo
from .resolutions import BarResolution, HomogeneousResolution, Resolution, make_resolution
from .zgwords import GroupRingWord, substitute

logger = logging.getLogger(__name__)


class EquivariantChainMap:
    """Family A_k: X_k -> X'_k with d' A_k = A_{k-1} d and augmentation kept.

    Images are produced on demand by `_compute_image` and memoized.
    """

    def __init__(self, phi: GroupHom, source: Resolution, target: Resolution, max_degree: Optional[int] = None):
        if source.group is not phi.source or target.group is not phi.target:
            raise PreconditionError("Resolutions do not match the homomorphism's groups")
        self.phi = phi
        self.source = source
        self.target = target
        top = min(source.max_degree, target.max_degree)
        self.max_degree = top if max_degree is None else max_degree
        if self.max_degree > top:
            raise PreconditionError(f"Chain map depth {self.max_degree} exceeds resolution depth {top}")
        self._images: Dict[Tuple[int, int], GroupRingWord] = {}

    def _compute_image(self, k: int, j: int) -> GroupRingWord:
        raise NotImplementedError

    def image(self, k: int, j: int) -> GroupRingWord:
        """A_k applied to generator j of X_k"""
        if not 0 <= k <= self.max_degree:
            raise PreconditionError(f"Degree {k} outside 0..{self.max_degree}")
        word = self._images.get((k, j))
        if word is None:
            word = self._compute_image(k, j)
            self._images[(k, j)] = word
        return word

    def images(self, k: int) -> List[GroupRingWord]:
        return [self.image(k, j) for j in range(1, self.source.rank(k) + 1)]

    def apply(self, k: int, w: GroupRingWord) -> GroupRingWord:
        """A_k on any word of X_k, moving group elements through phi"""
        return substitute(self.target.group, w, self.images(k), self.phi.image)

    def failures(self, max_degree: Optional[int] = None) -> List[str]:
        """Generators where intertwining or augmentation fails"""
        top = self.max_degree if max_degree is None else max_degree
        out = []
        for j in range(1, self.source.rank(0) + 1):
            if self.image(0, j).augmentation() != 1:
                out.append(f"augmentation of A_0 on generator {j}")
        for k in range(1, top + 1):
            lower = self.images(k - 1)
            for j in range(1, self.source.rank(k) + 1):
                left = substitute(self.target.group, self.image(k, j), self.target.boundaries(k - 1))
                right = substitute(self.target.group, self.source.boundary(k, j), lower, self.phi.image)
                if left != right:
                    out.append(f"intertwining fails in degree {k} on generator {j}")
        return out

    def verify(self, max_degree: Optional[int] = None) -> bool:
        return not self.failures(max_degree)

    # -- matrices ------------------------------------------------------------

    def tensor_matrix(self, k: int, source_module: GModule, target_module: GModule,
                      module_map: Optional[IntMatrix] = None) -> IntMatrix:
        """X_k ⊗ A -> X'_k ⊗ B, with psi: A -> B given by module_map"""
        check_feasible(self.source, k, target_module)
        r_a, r_b = source_module.rank, target_module.rank
        psi = module_map if module_map is not None else IntMatrix.identity(r_a)
        blocks: Dict[int, IntMatrix] = {}
        triplets = []
        for j in range(1, self.source.rank(k) + 1):
            for i, e, c in self.image(k, j).terms:
                block = blocks.get(e)
                if block is None:
                    block = blocks[e] = target_module.inverse_action(e) @ psi
                for col in range(block.cols):
                    for row, v in block.column(col).items():
                        triplets.append(((i - 1) * r_b + row, (j - 1) * r_a + col, c * v))
        return IntMatrix.from_triplets(self.target.rank(k) * r_b, self.source.rank(k) * r_a, triplets)

    def cochain_matrix(self, k: int, source_module: GModule, target_module: GModule,
                       module_map: Optional[IntMatrix] = None) -> IntMatrix:
        """Hom_G(X'_k, B) -> Hom_H(X_k, A): f -> iota f A_k"""
        check_feasible(self.source, k, target_module)
        r_a, r_b = source_module.rank, target_module.rank
        iota = module_map if module_map is not None else IntMatrix.identity(r_b)
        blocks: Dict[int, IntMatrix] = {}
        triplets = []
        for j in range(1, self.source.rank(k) + 1):
            for i, e, c in self.image(k, j).terms:
                block = blocks.get(e)
                if block is None:
                    block = blocks[e] = iota @ target_module.action(e)
                for col in range(block.cols):
                    for row, v in block.column(col).items():
                        triplets.append(((j - 1) * r_a + row, (i - 1) * r_b + col, c * v))
        return IntMatrix.from_triplets(self.source.rank(k) * r_a, self.target.rank(k) * r_b, triplets)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.phi!r}, depth {self.max_degree})"


class LiftedChainMap(EquivariantChainMap):
    """A_0([.]) = [.] and A_k(f) = D'(A_{k-1}(d f)) through the target homotopy"""

    def __init__(self, phi: GroupHom, source: Resolution, target: Resolution, max_degree: Optional[int] = None):
        if not target.has_homotopy:
            raise UnsupportedResolutionError(
                f"Lifting needs a contracting homotopy on the target; {target.kind} has none")
        super().__init__(phi, source, target, max_degree)

    def _compute_image(self, k: int, j: int) -> GroupRingWord:
        if k == 0:
            return self.target.contracting_homotopy(-1, 1)
        lower = self.apply(k - 1, self.source.boundary(k, j))
        return self.target.contracting_homotopy(k - 1, lower)


class CellChainMap(EquivariantChainMap):
    """[g_1,...,g_n] -> [phi g_1,...,phi g_n] between resolutions of one kind"""

    def __init__(self, phi: GroupHom, source: Resolution, target: Resolution, max_degree: Optional[int] = None):
        if source.kind != target.kind or not isinstance(source, (BarResolution, HomogeneousResolution)):
            raise UnsupportedResolutionError(
                f"Cell maps need two bar-type resolutions of the same kind, got {source.kind} and {target.kind}")
        super().__init__(phi, source, target, max_degree)

    def _compute_image(self, k: int, j: int) -> GroupRingWord:
        cell = self.source.cell(k, j)
        if isinstance(self.source, HomogeneousResolution):
            cell = cell[1:]
        mapped = tuple(self.phi.image(g) for g in cell)
        idx = self.target.cells.index(mapped)
        terms = [(idx, 1, 1)] if idx is not None else []
        return GroupRingWord.from_terms(self.target.rank(k), terms)


def chain_map_lift(source: Resolution, target: Resolution, phi: GroupHom,
                   max_degree: Optional[int] = None, verify: bool = True) -> LiftedChainMap:
    """Chain map over phi by homotopy lifting, re-verified on every generator"""
    cm = LiftedChainMap(phi, source, target, max_degree)
    if verify:
        problems = cm.failures()
        if problems:
            raise PreconditionError(f"Lifted chain map is not a chain map: {problems[0]}")
    logger.info(f"Lifted chain map {phi.source.label()} -> {phi.target.label()} to degree {cm.max_degree}")
    return cm


def bar_cell_map(source: Resolution, target: Resolution, phi: GroupHom,
                 max_degree: Optional[int] = None) -> CellChainMap:
    return CellChainMap(phi, source, target, max_degree)


# ---------------------------------------------------------------------------
# Induced maps
# ---------------------------------------------------------------------------

class InducedMap:
    """Homomorphism between two presented (co)homology groups.

    `matrix` has one column per domain generator, holding its image in the
    codomain's canonical coordinates (reduced modulo the codomain orders).
    """

    def __init__(self, degree: int, domain: Subquotient, codomain: Subquotient, matrix: IntMatrix,
                 variance: str = "homology"):
        self.degree = degree
        self.domain = domain
        self.codomain = codomain
        self.variance = variance
        orders = codomain.orders
        columns = {j: {i: (v % orders[i] if orders[i] else v) for i, v in matrix.column(j).items()}
                   for j in range(matrix.cols)}
        self.matrix = IntMatrix(matrix.rows, matrix.cols, columns)
        self._check_well_defined()

    @classmethod
    def from_chain_matrix(cls, degree: int, domain: Subquotient, codomain: Subquotient,
                          chain_matrix: IntMatrix, variance: str = "homology") -> "InducedMap":
        columns = [codomain.coordinates(chain_matrix.apply(gen)) for gen in domain.generators]
        matrix = IntMatrix.from_columns(len(codomain.orders), columns) if columns \
            else IntMatrix.zero(len(codomain.orders), 0)
        return cls(degree, domain, codomain, matrix, variance)

    def _check_well_defined(self):
        orders = self.codomain.orders
        for j, a in enumerate(self.domain.orders):
            if not a:
                continue
            for i, v in self.matrix.column(j).items():
                if (v * a) % orders[i] if orders[i] else v * a:
                    raise PreconditionError(f"Map is not well defined on domain generator {j}")

    @property
    def domain_invariants(self) -> AbelianInvariants:
        return self.domain.invariants

    @property
    def codomain_invariants(self) -> AbelianInvariants:
        return self.codomain.invariants

    def _relations(self, orders: Sequence[int]) -> List[Dict[int, int]]:
        return [{i: d} for i, d in enumerate(orders) if d]

    def image_lattice(self) -> Lattice:
        """Preimage in codomain coordinates of the image subgroup"""
        t = len(self.codomain.orders)
        vectors = [self.matrix.column(j) for j in range(self.matrix.cols)]
        return Lattice(t, vectors + self._relations(self.codomain.orders))

    def kernel_lattice(self) -> Lattice:
        """Preimage in domain coordinates of the kernel"""
        s = len(self.domain.orders)
        vectors = kernel_modulo(self.matrix, self.codomain.orders) if s else []
        return Lattice(s, list(vectors) + self._relations(self.domain.orders))

    def image_invariants(self) -> AbelianInvariants:
        rel = self._relations(self.codomain.orders)
        t = len(self.codomain.orders)
        vectors = [self.matrix.column(j) for j in range(self.matrix.cols)]
        return Subquotient(t, vectors + rel, rel).invariants

    def kernel_invariants(self) -> AbelianInvariants:
        rel = self._relations(self.domain.orders)
        s = len(self.domain.orders)
        return Subquotient(s, self.kernel_lattice().basis(), rel).invariants

    def is_injective(self) -> bool:
        return self.kernel_invariants().is_trivial()

    def is_surjective(self) -> bool:
        t = len(self.codomain.orders)
        lattice = self.image_lattice()
        return all([1 if i == k else 0 for i in range(t)] in lattice for k in range(t))

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def compose(self, first: "InducedMap") -> "InducedMap":
        """self after first"""
        if first.codomain.orders != self.domain.orders:
            raise PreconditionError("Induced maps do not compose")
        return InducedMap(self.degree, first.domain, self.codomain, self.matrix @ first.matrix, self.variance)

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "variance": self.variance,
            "domain": self.domain_invariants.to_dict(),
            "codomain": self.codomain_invariants.to_dict(),
            "matrix": self.matrix.to_dense(),
            "image": self.image_invariants().to_dict(),
            "image_primary": self.image_invariants().primary(),
        }

    def __repr__(self) -> str:
        return f"InducedMap(degree {self.degree}: {self.domain_invariants} -> {self.codomain_invariants})"


def induced_homology_map(cm: EquivariantChainMap, n: int, A: Optional[GModule] = None) -> InducedMap:
    """H_n(H, res A) -> H_n(G, A) from a chain map over phi: H -> G"""
    if n + 1 > cm.max_degree:
        raise PreconditionError(f"Degree {n} needs the chain map to degree {n + 1}")
    A = A or GModule.integers(cm.target.group)
    A_src = A.restrict(cm.phi)
    domain = tensor_with_module(cm.source, A_src, n + 1).presentation(n)
    codomain = tensor_with_module(cm.target, A, n + 1).presentation(n)
    M = cm.tensor_matrix(n, A_src, A)
    result = InducedMap.from_chain_matrix(n, domain, codomain, M, "homology")
    logger.info(f"Induced map on H_{n}: {result.domain_invariants} -> {result.codomain_invariants}")
    return result


def _cochain_map(cm: EquivariantChainMap, n: int, source_module: GModule, target_module: GModule,
                 module_map: Optional[IntMatrix]) -> InducedMap:
    """H^n(G', B) -> H^n(H, A) induced by cm over phi: H -> G'"""
    if n + 1 > cm.max_degree:
        raise PreconditionError(f"Degree {n} needs the chain map to degree {n + 1}")
    domain = hom_with_module(cm.target, target_module, n + 1).presentation(n)
    codomain = hom_with_module(cm.source, source_module, n + 1).presentation(n)
    M = cm.cochain_matrix(n, source_module, target_module, module_map)
    return InducedMap.from_chain_matrix(n, domain, codomain, M, "cohomology")


def _chain_map(phi: GroupHom, n: int, method: str, kind: str) -> EquivariantChainMap:
    if method == "cell":
        source = make_resolution(kind, phi.source, n + 1)
        target = make_resolution(kind, phi.target, n + 1)
        return bar_cell_map(source, target, phi)
    if method == "lift":
        source = make_resolution("auto", phi.source, n + 1)
        target = make_resolution(kind, phi.target, n + 1)
        return chain_map_lift(source, target, phi, n + 1)
    raise PreconditionError(f"Unknown chain map method {method!r}; expected 'cell' or 'lift'")


def restriction_map(G: FiniteGroup, H: Union[FiniteGroup, GroupHom], A: Optional[GModule], n: int,
                    method: str = "cell", kind: str = "normalized_bar") -> InducedMap:
    """Res: H^n(G, A) -> H^n(H, A)"""
    phi = H if isinstance(H, GroupHom) else inclusion(H, G)
    if phi.target is not G:
        raise PreconditionError("Inclusion does not land in G")
    if not phi.is_injective():
        raise PreconditionError(f"{phi.source.label()} is not a subgroup of {G.label()}")
    A = A or GModule.integers(G)
    cm = _chain_map(phi, n, method, kind)
    result = _cochain_map(cm, n, A.restrict(phi), A, None)
    logger.info(f"Res on H^{n}: {result.domain_invariants} -> {result.codomain_invariants}")
    return result


def inflation_map(G: FiniteGroup, N, A: Optional[GModule], n: int,
                  method: str = "cell", kind: str = "normalized_bar") -> InducedMap:
    """Inf: H^n(G/N, A^N) -> H^n(G, A)"""
    A = A or GModule.integers(G)
    members = subgroup_indices(G, N)
    Q, projection = quotient_group(G, members)
    fixed, iota = A.fixed_submodule(members)
    fixed_q = fixed.over_quotient(projection)
    cm = _chain_map(projection, n, method, kind)
    result = _cochain_map(cm, n, A, fixed_q, iota)
    logger.info(f"Inf on H^{n}: {result.domain_invariants} -> {result.codomain_invariants}")
    return result
