"""
Functors - Coefficient modules, tensor and Hom complexes, group (co)homology

A G-module A is presented as Z^r modulo diagonal relations m_i * e_i
(m_i = 0 for a free factor) with one action matrix per group generator.
Applying X ⊗_{Z[G]} A or Hom_G(X, A) to a resolution X gives a chain
complex of such presented groups whose (co)homology is computed exactly.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import sympy
from sympy.parsing.sympy_parser import parse_expr

from .errors import FeasibilityError, ParseError, PreconditionError, SizeLimitError
from .groups import FiniteGroup, GroupHom
from .intlinalg import (AbelianInvariants, IntMatrix, Subquotient, homology_of_pair,
                        homology_presentation, kernel_modulo, rank_mod_p_columns)
from .resolutions import Resolution, make_resolution
from .settings_manager import get_settings

logger = logging.getLogger(__name__)


def _reduce(value: int, modulus: int) -> int:
    return value % modulus if modulus else value


class GModule:
    """Finitely generated abelian group with a left G-action"""

    def __init__(self, group: FiniteGroup, relation_diag: Sequence[int], gen_actions: Sequence[IntMatrix],
                 name: Optional[str] = None):
        self.group = group
        self.relation_diag: Tuple[int, ...] = tuple(abs(int(m)) for m in relation_diag)
        self.name = name
        r = len(self.relation_diag)
        if len(gen_actions) != len(group.generators):
            raise PreconditionError(f"Need {len(group.generators)} action matrices, got {len(gen_actions)}")
        for M in gen_actions:
            if M.rows != r or M.cols != r:
                raise PreconditionError(f"Action matrices must be {r}x{r}, got {M.rows}x{M.cols}")
        self.gen_actions = tuple(self._reduced(M) for M in gen_actions)
        for pos, M in enumerate(self.gen_actions):
            for j, m in enumerate(self.relation_diag):
                if m and any(_reduce(v * m, self.relation_diag[i]) for i, v in M.column(j).items()):
                    raise PreconditionError(f"Action of generator {pos + 1} does not respect the relations")
        self._actions = self._action_table()
        self._check_action()
        self._inverse_actions = [None] + [self._actions[group.inv(g)] for g in group.indices()]

    @property
    def rank(self) -> int:
        return len(self.relation_diag)

    def _reduced(self, M: IntMatrix) -> IntMatrix:
        columns = {j: {i: _reduce(v, self.relation_diag[i]) for i, v in M.column(j).items()}
                   for j in range(M.cols)}
        return IntMatrix(M.rows, M.cols, columns)

    def _action_table(self) -> List[Optional[IntMatrix]]:
        G = self.group
        table: List[Optional[IntMatrix]] = [None, IntMatrix.identity(self.rank)]
        for k in range(2, G.order + 1):
            p, pos = G.parent(k)
            table.append(self._reduced(table[p] @ self.gen_actions[pos]))
        return table

    def _check_action(self):
        G = self.group
        for a in G.indices():
            for pos, s in enumerate(G.generator_indices):
                if self._actions[G.mul(a, s)] != self._reduced(self._actions[a] @ self.gen_actions[pos]):
                    raise PreconditionError(
                        f"Action is not a homomorphism: rho({G.element(a)} * {G.element(s)}) differs "
                        f"from the product of the actions")

    def action(self, g: int) -> IntMatrix:
        return self._actions[g]

    def inverse_action(self, g: int) -> IntMatrix:
        return self._inverse_actions[g]

    def max_action_nonzeros(self) -> int:
        return max((M.nonzero_count() for M in self._actions[1:]), default=0)

    def is_trivial_action(self) -> bool:
        identity = IntMatrix.identity(self.rank)
        return all(M == identity for M in self.gen_actions)

    def is_free_trivial(self) -> bool:
        """Z^r with trivial action"""
        return not any(self.relation_diag) and self.is_trivial_action()

    def invariants(self) -> AbelianInvariants:
        return AbelianInvariants.from_diagonal(self.relation_diag)

    def label(self) -> str:
        if self.name:
            return self.name
        return str(self.invariants()) + ("" if self.is_trivial_action() else " (twisted)")

    # -- constructors -------------------------------------------------------

    @classmethod
    def trivial(cls, group: FiniteGroup, relation_diag: Sequence[int] = (0,),
                name: Optional[str] = None) -> "GModule":
        r = len(relation_diag)
        return cls(group, relation_diag, [IntMatrix.identity(r)] * len(group.generators), name)

    @classmethod
    def integers(cls, group: FiniteGroup) -> "GModule":
        return cls.trivial(group, (0,), "Z")

    @classmethod
    def cyclic_trivial(cls, group: FiniteGroup, m: int, r: int = 1) -> "GModule":
        """(Z/m)^r with trivial action"""
        if m < 0 or r < 0:
            raise PreconditionError("Modulus and rank must be nonnegative")
        name = "Z" if m == 0 else f"Z/{m}"
        if r != 1:
            name = f"{name}^{r}"
        return cls.trivial(group, (m,) * r, name)

    @classmethod
    def zero_module(cls, group: FiniteGroup) -> "GModule":
        return cls.trivial(group, (), "0")

    def direct_sum(self, other: "GModule") -> "GModule":
        if other.group is not self.group:
            raise PreconditionError("Direct sum needs modules over the same group")
        r, s = self.rank, other.rank
        actions = []
        for M, N in zip(self.gen_actions, other.gen_actions):
            columns = {j: M.column(j) for j in range(r)}
            for j in range(s):
                columns[r + j] = {r + i: v for i, v in N.column(j).items()}
            actions.append(IntMatrix(r + s, r + s, columns))
        return GModule(self.group, self.relation_diag + other.relation_diag, actions,
                       f"{self.label()} + {other.label()}")

    def restrict(self, phi: GroupHom) -> "GModule":
        """The module pulled back along phi: H -> G"""
        if phi.target is not self.group:
            raise PreconditionError("Homomorphism does not land in the module's group")
        return GModule(phi.source, self.relation_diag,
                       [self._actions[g] for g in phi.gen_images], self.name)

    def fixed_submodule(self, subgroup_indices) -> Tuple["GModule", IntMatrix]:
        """A^N as a G-module (N normal) with its inclusion matrix into A"""
        members = sorted(set(subgroup_indices))
        G = self.group
        r = self.rank
        identity = IntMatrix.identity(r)
        blocks = []
        moduli = []
        for n in members:
            if n == 1:
                continue
            M = self._actions[n]
            for i in range(r):
                row = {j: M.entry(i, j) - identity.entry(i, j) for j in range(r)}
                blocks.append(row)
                moduli.append(self.relation_diag[i])
        relations = [{i: m} for i, m in enumerate(self.relation_diag) if m]
        if blocks:
            triplets = [(i, j, v) for i, row in enumerate(blocks) for j, v in row.items() if v]
            stacked = IntMatrix.from_triplets(len(blocks), r, triplets)
            fixed = kernel_modulo(stacked, moduli)
        else:
            fixed = [[1 if i == j else 0 for i in range(r)] for j in range(r)]
        sub = Subquotient(r, list(fixed) + relations, relations)
        t = len(sub.generators)
        inclusion = IntMatrix.from_columns(r, sub.generators) if t else IntMatrix.zero(r, 0)
        actions = []
        for s in G.generator_indices:
            M = self._actions[s]
            try:
                cols = [sub.coordinates(M.apply(vec)) for vec in sub.generators]
            except PreconditionError:
                raise PreconditionError("Fixed points are not G-stable; the subgroup is not normal") from None
            actions.append(IntMatrix.from_columns(t, cols) if t else IntMatrix.zero(0, 0))
        module = GModule(G, sub.orders, actions, f"{self.label()}^N")
        return module, inclusion

    def over_quotient(self, projection: GroupHom) -> "GModule":
        """Same module viewed over G/N when N acts trivially"""
        Q = projection.target
        if projection.source is not self.group:
            raise PreconditionError("Projection does not start at the module's group")
        for k in projection.kernel_indices():
            if self._actions[k] != IntMatrix.identity(self.rank):
                raise PreconditionError("The kernel of the projection acts nontrivially")
        actions = []
        for q in Q.generator_indices:
            g = next(i for i in self.group.indices() if projection.image(i) == q)
            actions.append(self._actions[g])
        return GModule(Q, self.relation_diag, actions, self.name)

    def __repr__(self) -> str:
        return f"GModule({self.label()} over {self.group.label()})"


def _block_triplets(block: IntMatrix, c: int, row0: int, col0: int, out: list):
    for j in range(block.cols):
        for i, v in block.column(j).items():
            out.append((row0 + i, col0 + j, c * v))


class ChainComplexZ:
    """Complex of presented abelian groups C_k = Z^{rank}/relations.

    `grading` is -1 for chain complexes (maps lower the degree) and +1 for
    cochain complexes.  Maps are built lazily by `builder(k)`, which returns
    the map entering degree k from above (chains) or below (cochains).
    An optional `columns(k)` streams the sparse columns of the same map so
    ranks mod p never materialize it.
    """

    def __init__(self, ranks: Dict[int, int], relations: Dict[int, Tuple[int, ...]],
                 builder: Callable[[int], IntMatrix], grading: int, top: int, label: str = "",
                 columns: Optional[Callable[[int], Iterable[Dict[int, int]]]] = None):
        self.ranks = dict(ranks)
        self.relations = dict(relations)
        self.grading = grading
        self.top = top
        self.label = label
        self._builder = builder
        self._columns = columns
        self._maps: Dict[int, IntMatrix] = {}
        self._ranks_mod_p: Dict[Tuple[int, int], int] = {}

    def rank(self, k: int) -> int:
        return self.ranks.get(k, 0)

    def relation_diag(self, k: int) -> Tuple[int, ...]:
        return self.relations.get(k, (0,) * self.rank(k))

    def _map(self, k: int) -> IntMatrix:
        """Chains: d_k: C_k -> C_{k-1}; cochains: d^k: C^{k-1} -> C^k"""
        if k not in self._maps:
            if self.grading < 0:
                if k <= 0:
                    return IntMatrix.zero(0, self.rank(0))
                self._maps[k] = self._builder(k)
            else:
                if k <= 0:
                    return IntMatrix.zero(self.rank(0), 0)
                self._maps[k] = self._builder(k)
            M = self._maps[k]
            logger.debug(f"{self.label} map {k}: {M.rows}x{M.cols}, {M.nonzero_count()} nonzeros")
        return self._maps[k]

    def outgoing(self, k: int) -> IntMatrix:
        return self._map(k) if self.grading < 0 else self._map(k + 1)

    def incoming(self, k: int) -> IntMatrix:
        return self._map(k + 1) if self.grading < 0 else self._map(k)

    def _target_of_outgoing(self, k: int) -> Tuple[int, ...]:
        return self.relation_diag(k + self.grading)

    def check(self, k: int) -> bool:
        """Consecutive maps around degree k compose to zero modulo relations"""
        product = self.outgoing(k) @ self.incoming(k)
        rel = self._target_of_outgoing(k)
        return all(not _reduce(v, rel[i]) for j in range(product.cols) for i, v in product.column(j).items())

    def _require(self, k: int):
        if k < 0 or k > self.top:
            raise PreconditionError(f"Degree {k} outside 0..{self.top} for {self.label}")

    def presentation(self, k: int) -> Subquotient:
        """(Co)homology in degree k with canonical generators"""
        self._require(k)
        return homology_presentation(self.outgoing(k), self.incoming(k),
                                     self._target_of_outgoing(k), self.relation_diag(k))

    def homology(self, k: int) -> AbelianInvariants:
        self._require(k)
        if not any(self.relation_diag(k)) and not any(self._target_of_outgoing(k)):
            return homology_of_pair(self.outgoing(k), self.incoming(k))
        return self.presentation(k).invariants

    def map_rank_mod_p(self, k: int, p: int) -> int:
        """Rank mod p of map k, each map eliminated once per prime"""
        if k <= 0:
            return 0
        key = (k, p)
        if key not in self._ranks_mod_p:
            limit = None
            if not any(any(rel) for rel in self.relations.values()):
                # consecutive maps compose to zero, so map k lands in the kernel of map k-1
                limit = self.rank(k - 1) - self.map_rank_mod_p(k - 1, p)
            if k in self._maps or self._columns is None:
                M = self._map(k)
                columns = (M.column(j) for j in range(M.cols))
            else:
                columns = self._columns(k)
            self._ranks_mod_p[key] = rank_mod_p_columns(columns, p, limit)
            logger.debug(f"{self.label} map {k}: rank {self._ranks_mod_p[key]} mod {p}")
        return self._ranks_mod_p[key]

    def rank_mod_p(self, k: int, p: int) -> int:
        """Dimension of the degree-k (co)homology after reducing everything mod p"""
        self._require(k)
        out_map, in_map = (k, k + 1) if self.grading < 0 else (k + 1, k)
        return self.rank(k) - self.map_rank_mod_p(out_map, p) - self.map_rank_mod_p(in_map, p)


# ---------------------------------------------------------------------------
# Feasibility
# ---------------------------------------------------------------------------

def estimate_nonzeros(R: Resolution, k: int, A: Optional[GModule] = None) -> int:
    """Upper estimate of the nonzeros in the tensored or Hom map of degree k"""
    if k < 1 or k > R.max_degree:
        return 0
    block = A.max_action_nonzeros() if A is not None else 1
    return R.rank(k) * R.boundary_length_bound(k) * max(1, block)


def check_feasible(R: Resolution, k: int, A: Optional[GModule] = None):
    budget = get_settings().get_nonzero_budget()
    estimate = estimate_nonzeros(R, k, A)
    if estimate > budget:
        logger.warning(f"Refusing degree {k} of the {R.kind} resolution of {R.group.label()}: "
                       f"rank {R.rank(k)}, about {estimate} nonzeros over budget {budget}")
        raise FeasibilityError(
            f"Degree {k} of the {R.kind} resolution of {R.group.label()} has rank {R.rank(k)}; "
            f"its matrix needs about {estimate} nonzeros, over the budget of {budget}",
            degree=k, rank=R.rank(k), estimate=estimate)


# ---------------------------------------------------------------------------
# The two functors
# ---------------------------------------------------------------------------

def _check_depth(R: Resolution, K: int):
    if K > R.max_degree:
        raise PreconditionError(f"Requested degree {K} exceeds resolution depth {R.max_degree}")


def tensor_with_integers(R: Resolution, K: Optional[int] = None) -> ChainComplexZ:
    """X ⊗ Z: group elements erased, boundary words become integer columns"""
    K = R.max_degree if K is None else K
    _check_depth(R, K)

    def columns(k: int) -> Iterator[Dict[int, int]]:
        check_feasible(R, k)
        for j in range(1, R.rank(k) + 1):
            yield R.integer_column(k, j)

    def build(k: int) -> IntMatrix:
        return IntMatrix(R.rank(k - 1), R.rank(k), dict(enumerate(columns(k))))

    ranks = {k: R.rank(k) for k in range(K + 1)}
    return ChainComplexZ(ranks, {}, build, -1, K - 1, f"{R.kind} ⊗ Z", columns=columns)


def _check_group(R: Resolution, A: GModule):
    if A.group is not R.group:
        raise PreconditionError(f"Module over {A.group.label()} used with a resolution of {R.group.label()}")


def tensor_with_module(R: Resolution, A: GModule, K: Optional[int] = None) -> ChainComplexZ:
    """X ⊗_{Z[G]} A with x*g ⊗ a = x ⊗ g*a, so g_e f_i ⊗ a = f_i ⊗ g_e^-1 a"""
    _check_group(R, A)
    K = R.max_degree if K is None else K
    _check_depth(R, K)
    r = A.rank

    def build(k: int) -> IntMatrix:
        check_feasible(R, k, A)
        triplets = []
        for j in range(1, R.rank(k) + 1):
            for i, e, c in R.boundary(k, j).terms:
                _block_triplets(A.inverse_action(e), c, (i - 1) * r, (j - 1) * r, triplets)
        return IntMatrix.from_triplets(R.rank(k - 1) * r, R.rank(k) * r, triplets)

    ranks = {k: R.rank(k) * r for k in range(K + 1)}
    relations = {k: A.relation_diag * R.rank(k) for k in range(K + 1)}
    return ChainComplexZ(ranks, relations, build, -1, K - 1, f"{R.kind} ⊗ {A.label()}")


def hom_with_module(R: Resolution, A: GModule, K: Optional[int] = None) -> ChainComplexZ:
    """Hom_G(X, A): a cochain is the list of generator images"""
    _check_group(R, A)
    K = R.max_degree if K is None else K
    _check_depth(R, K)
    r = A.rank

    def build(k: int) -> IntMatrix:
        check_feasible(R, k, A)
        triplets = []
        for j in range(1, R.rank(k) + 1):
            for i, e, c in R.boundary(k, j).terms:
                _block_triplets(A.action(e), c, (j - 1) * r, (i - 1) * r, triplets)
        return IntMatrix.from_triplets(R.rank(k) * r, R.rank(k - 1) * r, triplets)

    ranks = {k: R.rank(k) * r for k in range(K + 1)}
    relations = {k: A.relation_diag * R.rank(k) for k in range(K + 1)}
    return ChainComplexZ(ranks, relations, build, +1, K - 1, f"Hom({R.kind}, {A.label()})")


# ---------------------------------------------------------------------------
# Group (co)homology
# ---------------------------------------------------------------------------

def _resolution_for(G: FiniteGroup, n: int, kind: Optional[str], resolution: Optional[Resolution]) -> Resolution:
    if resolution is not None:
        if resolution.group is not G:
            raise PreconditionError("Resolution belongs to a different group")
        _check_depth(resolution, n + 1)
        return resolution
    return make_resolution(kind, G, n + 1)


def group_homology(G: FiniteGroup, n: int, A: Optional[GModule] = None,
                   resolution_kind: Optional[str] = None,
                   resolution: Optional[Resolution] = None) -> AbelianInvariants:
    """H_n(G, A) = Tor_n(Z, A); A defaults to the trivial module Z"""
    if n < 0:
        raise PreconditionError(f"Homology degree must be nonnegative, got {n}")
    R = _resolution_for(G, n, resolution_kind, resolution)
    if A is None or A.is_free_trivial() and A.rank == 1:
        complex_ = tensor_with_integers(R, n + 1)
    else:
        complex_ = tensor_with_module(R, A, n + 1)
    result = complex_.homology(n)
    logger.info(f"H_{n}({G.label()}, {A.label() if A else 'Z'}) = {result} via {R.kind}")
    return result


def group_cohomology(G: FiniteGroup, n: int, A: Optional[GModule] = None,
                     resolution_kind: Optional[str] = None,
                     resolution: Optional[Resolution] = None) -> AbelianInvariants:
    """H^n(G, A) = Ext^n(Z, A)"""
    if n < 0:
        raise PreconditionError(f"Cohomology degree must be nonnegative, got {n}")
    A = A or GModule.integers(G)
    R = _resolution_for(G, n, resolution_kind, resolution)
    result = hom_with_module(R, A, n + 1).homology(n)
    logger.info(f"H^{n}({G.label()}, {A.label()}) = {result} via {R.kind}")
    return result


def schur_multiplier(G: FiniteGroup, resolution_kind: Optional[str] = None) -> AbelianInvariants:
    return group_homology(G, 2, resolution_kind=resolution_kind)


@dataclass
class PoincareSeries:
    """Dimensions of H_k(G, Z/p) for k = 1, 2, ..., possibly truncated"""
    group: str
    prime: int
    dims: List[int] = field(default_factory=list)
    requested: int = 0
    truncated_at: Optional[int] = None
    reason: Optional[str] = None

    @property
    def complete(self) -> bool:
        return self.truncated_at is None

    def matches(self, rational: str) -> bool:
        """Compare the computed prefix with a rational function's expansion"""
        return expand_rational(rational, len(self.dims)) == self.dims

    def to_dict(self) -> dict:
        return {"group": self.group, "prime": self.prime, "dims": list(self.dims),
                "requested": self.requested, "truncated_at": self.truncated_at, "reason": self.reason}


def expand_rational(text: str, N: int, variable: str = "x") -> List[int]:
    """Coefficients of x^1..x^N in the power series of a rational function"""
    x = sympy.Symbol(variable)
    try:
        expr = parse_expr(text.replace("^", "**"), local_dict={variable: x})
    except Exception as e:
        raise ParseError(f"Cannot read rational function ({e})", text, 0) from e
    expansion = sympy.series(expr, x, 0, N + 1).removeO()
    coefficients = []
    for k in range(1, N + 1):
        c = expansion.coeff(x, k)
        if not c.is_integer:
            raise PreconditionError(f"Coefficient of {variable}^{k} is not an integer: {c}")
        coefficients.append(int(c))
    return coefficients


def poincare_dims(G: FiniteGroup, p: int, N: int, resolution_kind: Optional[str] = None) -> PoincareSeries:
    """dim H_k(G, Z/p) for k = 1..N via ranks mod p of the tensored complex"""
    if not sympy.isprime(p):
        raise PreconditionError(f"poincare_dims needs a prime, got {p}")
    series = PoincareSeries(G.label(), p, requested=N)
    if N < 1:
        return series
    depth = N + 1
    try:
        R = make_resolution(resolution_kind, G, depth)
    except SizeLimitError as e:
        if e.degree is None:
            raise
        # degree k needs cells up to k + 1
        depth = e.degree - 1
        series.truncated_at = max(1, depth)
        series.reason = str(e)
        logger.warning(f"Poincare series of {G.label()} truncated at degree {series.truncated_at}")
        if depth < 2:
            return series
        R = make_resolution(resolution_kind, G, depth)
    complex_ = tensor_with_integers(R, depth)
    for k in range(1, depth):
        try:
            series.dims.append(complex_.rank_mod_p(k, p))
        except FeasibilityError as e:
            series.truncated_at = k
            series.reason = str(e)
            logger.warning(f"Poincare series of {G.label()} truncated at degree {k}")
            break
    return series


def result_record(group: str, degree: int, coefficients: str, resolution: str,
                  invariants: AbelianInvariants) -> dict:
    """Schema-stable JSON record of one computed group"""
    return {
        "group": group,
        "degree": degree,
        "coefficients": coefficients,
        "resolution": resolution,
        "invariants": invariants.to_dict(),
        "primary": invariants.primary(),
    }
