"""
Integer Linear Algebra - exact matrices, Smith normal form, lattices and homology

Everything here works on Python integers; there is no floating point anywhere.
Large sparse matrices go through unit-pivot elimination first and only the
remaining core is handed to the dense Smith normal form.
"""

import heapq
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import factorint, isprime

from .errors import PreconditionError
from .settings_manager import get_settings

logger = logging.getLogger(__name__)


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (x, y, g) with x*a + y*b == g == gcd(a, b) >= 0"""
    # Invariants:
    #          x * a +      y * b ==      g
    #     next_x * a + next_y * b == next_g
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------

class IntMatrix:
    """Integer matrix stored column-major as {col: {row: value}}.

    The dense layout is produced on demand; `layout` reports which one the
    algorithms below will use.
    """

    __slots__ = ("rows", "cols", "_columns", "_dense")

    def __init__(self, rows: int, cols: int, columns: Optional[Dict[int, Dict[int, int]]] = None):
        if rows < 0 or cols < 0:
            raise PreconditionError(f"Matrix shape must be nonnegative, got {rows}x{cols}")
        self.rows = rows
        self.cols = cols
        self._columns = {}
        self._dense = None
        for j, col in (columns or {}).items():
            cleaned = {i: v for i, v in col.items() if v}
            if cleaned:
                self._columns[j] = cleaned

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, {j: {j: 1} for j in range(n)})

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        columns: Dict[int, Dict[int, int]] = {}
        for i, row in enumerate(data):
            if len(row) != cols:
                raise PreconditionError(f"Row {i} has length {len(row)}, expected {cols}")
            for j, v in enumerate(row):
                if v:
                    columns.setdefault(j, {})[i] = int(v)
        return cls(rows, cols, columns)

    @classmethod
    def from_triplets(cls, rows: int, cols: int, triplets: Iterable[Tuple[int, int, int]]) -> "IntMatrix":
        """Build from (row, col, value) triplets; repeated positions accumulate"""
        columns: Dict[int, Dict[int, int]] = {}
        for i, j, v in triplets:
            if not (0 <= i < rows and 0 <= j < cols):
                raise PreconditionError(f"Entry ({i}, {j}) outside {rows}x{cols} matrix")
            col = columns.setdefault(j, {})
            col[i] = col.get(i, 0) + int(v)
        return cls(rows, cols, columns)

    @classmethod
    def from_columns(cls, rows: int, vectors: Sequence) -> "IntMatrix":
        """Columns given as dense lists or {row: value} dicts"""
        columns = {}
        for j, vec in enumerate(vectors):
            columns[j] = dict(vec) if isinstance(vec, dict) else {i: v for i, v in enumerate(vec) if v}
        return cls(rows, len(vectors), columns)

    def entry(self, i: int, j: int) -> int:
        return self._columns.get(j, {}).get(i, 0)

    def column(self, j: int) -> Dict[int, int]:
        return dict(self._columns.get(j, {}))

    def column_vector(self, j: int) -> List[int]:
        vec = [0] * self.rows
        for i, v in self._columns.get(j, {}).items():
            vec[i] = v
        return vec

    def nonzero_count(self) -> int:
        return sum(len(col) for col in self._columns.values())

    def density(self) -> float:
        cells = self.rows * self.cols
        return self.nonzero_count() / cells if cells else 0.0

    @property
    def layout(self) -> str:
        settings = get_settings()
        if (self.density() < settings.get_sparse_density_threshold()
                and max(self.rows, self.cols) > settings.get_sparse_min_dimension()):
            return "sparse"
        return "dense"

    def to_dense(self) -> List[List[int]]:
        if self._dense is None:
            dense = [[0] * self.cols for _ in range(self.rows)]
            for j, col in self._columns.items():
                for i, v in col.items():
                    dense[i][j] = v
            self._dense = tuple(tuple(row) for row in dense)
        return [list(row) for row in self._dense]

    def row_dicts(self) -> List[Dict[int, int]]:
        """Row-major sparse copy, one {col: value} per row"""
        rows: List[Dict[int, int]] = [{} for _ in range(self.rows)]
        for j, col in self._columns.items():
            for i, v in col.items():
                rows[i][j] = v
        return rows

    def transpose(self) -> "IntMatrix":
        columns: Dict[int, Dict[int, int]] = {}
        for j, col in self._columns.items():
            for i, v in col.items():
                columns.setdefault(i, {})[j] = v
        return IntMatrix(self.cols, self.rows, columns)

    def apply(self, vector) -> List[int]:
        """Matrix times a dense or {index: value} vector, as a dense list"""
        items = vector.items() if isinstance(vector, dict) else enumerate(vector)
        out = [0] * self.rows
        for j, x in items:
            if x:
                for i, v in self._columns.get(j, {}).items():
                    out[i] += v * x
        return out

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise PreconditionError(f"Cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        columns = {}
        for j, col in other._columns.items():
            acc: Dict[int, int] = {}
            for k, x in col.items():
                for i, v in self._columns.get(k, {}).items():
                    acc[i] = acc.get(i, 0) + v * x
            columns[j] = acc
        return IntMatrix(self.rows, other.cols, columns)

    def is_zero(self) -> bool:
        return not self._columns

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.rows == other.rows and self.cols == other.cols and self._columns == other._columns

    def __repr__(self) -> str:
        return f"IntMatrix({self.rows}x{self.cols}, nnz={self.nonzero_count()})"

    def to_json(self, sparse: Optional[bool] = None) -> dict:
        if sparse is None:
            sparse = self.layout == "sparse"
        if sparse:
            entries = sorted((i, j, v) for j, col in self._columns.items() for i, v in col.items())
            return {"rows": self.rows, "cols": self.cols, "entries": [list(e) for e in entries]}
        return {"rows": self.rows, "cols": self.cols, "dense": self.to_dense()}

    @classmethod
    def from_json(cls, data: dict) -> "IntMatrix":
        if "entries" in data:
            return cls.from_triplets(data["rows"], data["cols"], data["entries"])
        return cls.from_dense(data["dense"], data["cols"])


# ---------------------------------------------------------------------------
# Dense Smith normal form
# ---------------------------------------------------------------------------

def _identity(n: int) -> List[List[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _smith_dense(D: List[List[int]], m: int, n: int, track_rows: bool = False,
                 track_cols: bool = False):
    """Diagonalise D in place with minimal-pivot row/column reduction.

    Returns (diagonal, U, U_inv, V, V_inv) with U*A*V == D; transforms that
    were not requested are None.  The diagonal is a divisibility chain.
    """
    U = _identity(m) if track_rows else None
    Ui = _identity(m) if track_rows else None
    V = _identity(n) if track_cols else None
    Vi = _identity(n) if track_cols else None

    def swap_rows(a, b):
        if a == b:
            return
        D[a], D[b] = D[b], D[a]
        if U is not None:
            U[a], U[b] = U[b], U[a]
            for row in Ui:
                row[a], row[b] = row[b], row[a]

    def swap_cols(a, b):
        if a == b:
            return
        for row in D:
            row[a], row[b] = row[b], row[a]
        if V is not None:
            for row in V:
                row[a], row[b] = row[b], row[a]
            Vi[a], Vi[b] = Vi[b], Vi[a]

    def add_row(dst, src, q, start=0):
        # row_dst += q * row_src
        rd, rs = D[dst], D[src]
        for j in range(start, n):
            if rs[j]:
                rd[j] += q * rs[j]
        if U is not None:
            ud, us = U[dst], U[src]
            for j in range(m):
                if us[j]:
                    ud[j] += q * us[j]
            for row in Ui:
                if row[dst]:
                    row[src] -= q * row[dst]

    def add_col(dst, src, q, start=0):
        # col_dst += q * col_src
        for i in range(start, m):
            row = D[i]
            if row[src]:
                row[dst] += q * row[src]
        if V is not None:
            for row in V:
                if row[src]:
                    row[dst] += q * row[src]
            vd, vs = Vi[dst], Vi[src]
            for j in range(n):
                if vd[j]:
                    vs[j] -= q * vd[j]

    def negate_row(t):
        D[t] = [-v for v in D[t]]
        if U is not None:
            U[t] = [-v for v in U[t]]
            for row in Ui:
                row[t] = -row[t]

    diagonal = []
    t = 0
    while t < min(m, n):
        best = None
        pos = None
        for i in range(t, m):
            row = D[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best):
                    best, pos = abs(v), (i, j)
                    if best == 1:
                        break
            if best == 1:
                break
        if pos is None:
            break
        swap_rows(t, pos[0])
        swap_cols(t, pos[1])
        while True:
            p = D[t][t]
            clean = True
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // p
                    if q:
                        add_row(i, t, -q, t)
                    if D[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // p
                    if q:
                        add_col(j, t, -q, t)
                    if D[t][j]:
                        clean = False
            if not clean:
                best, pos = abs(p), None
                for i in range(t + 1, m):
                    v = D[i][t]
                    if v and abs(v) < best:
                        best, pos = abs(v), ("row", i)
                for j in range(t + 1, n):
                    v = D[t][j]
                    if v and abs(v) < best:
                        best, pos = abs(v), ("col", j)
                if pos[0] == "row":
                    swap_rows(t, pos[1])
                else:
                    swap_cols(t, pos[1])
                continue
            # divisibility fix-up
            bad = None
            if abs(p) != 1:
                for i in range(t + 1, m):
                    row = D[i]
                    for j in range(t + 1, n):
                        if row[j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
            if bad is None:
                break
            add_row(t, bad, 1, t)
        if D[t][t] < 0:
            negate_row(t)
        diagonal.append(D[t][t])
        t += 1
    return diagonal, U, Ui, V, Vi


@dataclass(frozen=True)
class SmithForm:
    """U * A * V == S with S diagonal, d1 | d2 | ... and U, V unimodular"""
    S: IntMatrix
    U: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix
    diagonal: Tuple[int, ...]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def smith_normal_form(A: IntMatrix) -> SmithForm:
    """Exact Smith normal form with both transforms and their inverses"""
    m, n = A.rows, A.cols
    D = A.to_dense()
    diagonal, U, Ui, V, Vi = _smith_dense(D, m, n, track_rows=True, track_cols=True)
    full = list(diagonal) + [0] * (min(m, n) - len(diagonal))
    S = IntMatrix(m, n, {j: {j: d} for j, d in enumerate(full) if d})
    return SmithForm(S, IntMatrix.from_dense(U, m), IntMatrix.from_dense(V, n),
                     IntMatrix.from_dense(Ui, m), IntMatrix.from_dense(Vi, n), tuple(full))


# ---------------------------------------------------------------------------
# Sparse elimination
# ---------------------------------------------------------------------------

class _UnitEliminator:
    """Gaussian elimination on unit pivots over a sparse row dictionary.

    Only entries of absolute value one are pivots, so the surviving rows form
    a core without unit entries.
    """

    def __init__(self, rows: List[Dict[int, int]]):
        self.rows: Dict[int, Dict[int, int]] = {}
        self.col_rows: Dict[int, set] = {}
        self.pivots: List[Tuple[int, Dict[int, int]]] = []
        for r, row in enumerate(rows):
            row = {c: v for c, v in row.items() if v}
            if row:
                self.rows[r] = row
                for c in row:
                    self.col_rows.setdefault(c, set()).add(r)

    @staticmethod
    def _is_unit(v: int) -> bool:
        return v in (1, -1)

    def run(self):
        heap = [(len(row), r) for r, row in self.rows.items()]
        heapq.heapify(heap)
        deferred = set()
        while heap:
            length, r = heapq.heappop(heap)
            row = self.rows.get(r)
            if row is None or len(row) != length:
                continue
            best = None
            for c, v in row.items():
                if self._is_unit(v):
                    cost = len(self.col_rows[c])
                    if best is None or cost < best[0]:
                        best = (cost, c)
            if best is None:
                deferred.add(r)
                continue
            touched = self._pivot(r, best[1])
            for other in touched:
                if other in self.rows:
                    deferred.discard(other)
                    heapq.heappush(heap, (len(self.rows[other]), other))
        logger.debug(f"Unit elimination: {len(self.pivots)} pivots, {len(self.rows)} core rows")
        return self

    def _pivot(self, r: int, c: int) -> List[int]:
        prow = self.rows.pop(r)
        for col in prow:
            self.col_rows[col].discard(r)
        inv = prow[c]
        touched = list(self.col_rows.get(c, ()))
        for other in touched:
            orow = self.rows[other]
            f = orow[c] * inv
            for col, v in prow.items():
                nv = orow.get(col, 0) - f * v
                if nv:
                    if col not in orow:
                        self.col_rows.setdefault(col, set()).add(other)
                    orow[col] = nv
                elif col in orow:
                    del orow[col]
                    self.col_rows[col].discard(other)
            if not orow:
                del self.rows[other]
        self.col_rows.pop(c, None)
        self.pivots.append((c, prow))
        return touched

    def core(self) -> Tuple[List[List[int]], List[int]]:
        """Remaining rows as a dense matrix over the columns they touch"""
        cols = sorted({c for row in self.rows.values() for c in row})
        where = {c: k for k, c in enumerate(cols)}
        dense = []
        for r in sorted(self.rows):
            line = [0] * len(cols)
            for c, v in self.rows[r].items():
                line[where[c]] = v
            dense.append(line)
        return dense, cols


def elementary_divisors(A: IntMatrix) -> List[int]:
    """Nonzero Smith diagonal of A (a divisibility chain, ones included)"""
    if A.layout == "sparse":
        elim = _UnitEliminator(A.row_dicts()).run()
        dense, cols = elim.core()
        diag = _smith_dense(dense, len(dense), len(cols))[0] if dense else []
        logger.debug(f"Sparse divisors of {A!r}: {len(elim.pivots)} unit pivots, core {len(dense)}x{len(cols)}")
        return [1] * len(elim.pivots) + diag
    return _smith_dense(A.to_dense(), A.rows, A.cols)[0]


def integer_rank(A: IntMatrix) -> int:
    return len(elementary_divisors(A))


def rank_mod_p(A: IntMatrix, p: int) -> int:
    """Rank of A over the field with p elements"""
    return rank_mod_p_columns((A.column(j) for j in range(A.cols)), p)


def rank_mod_p_columns(columns: Iterable[Dict[int, int]], p: int, limit: Optional[int] = None) -> int:
    """Rank over F_p of a matrix given as a stream of sparse columns.

    Each column is reduced against the pivots found so far, keyed by their
    lowest (largest) row.  Reading stops once `limit` independent columns are
    found, so a known upper bound on the rank saves scanning the rest.
    """
    if not isprime(p):
        raise PreconditionError(f"rank_mod_p needs a prime, got {p}")
    pivots: Dict[int, Dict[int, int]] = {}
    if limit is not None and limit <= 0:
        return 0
    for column in columns:
        col = {i: v % p for i, v in column.items() if v % p}
        while col:
            low = max(col)
            pivot = pivots.get(low)
            if pivot is None:
                inv = pow(col[low], -1, p)
                pivots[low] = {i: v * inv % p for i, v in col.items()}
                break
            f = col[low]
            for i, v in pivot.items():
                nv = (col.get(i, 0) - f * v) % p
                if nv:
                    col[i] = nv
                else:
                    col.pop(i, None)
        if limit is not None and len(pivots) >= limit:
            break
    return len(pivots)


def kernel_basis(A: IntMatrix) -> List[List[int]]:
    """Basis of the integer kernel lattice {x : A x = 0}"""
    n = A.cols
    elim = _UnitEliminator(A.row_dicts()).run()
    pivoted = {c for c, _ in elim.pivots}
    dense, core_cols = elim.core()
    seeds: List[Dict[int, int]] = []
    core_set = set(core_cols)
    for c in range(n):
        if c not in pivoted and c not in core_set:
            seeds.append({c: 1})
    if core_cols:
        diagonal, _, _, V, _ = _smith_dense(dense, len(dense), len(core_cols), track_cols=True)
        rank = len(diagonal)
        for k in range(rank, len(core_cols)):
            seeds.append({core_cols[i]: V[i][k] for i in range(len(core_cols)) if V[i][k]})
    basis = []
    for seed in seeds:
        x = dict(seed)
        for c, prow in reversed(elim.pivots):
            s = sum(v * x.get(col, 0) for col, v in prow.items() if col != c)
            if s:
                x[c] = -s * prow[c]
        vec = [0] * n
        for c, v in x.items():
            vec[c] = v
        basis.append(vec)
    return basis


def kernel_modulo(A: IntMatrix, moduli: Sequence[int]) -> List[List[int]]:
    """Basis of {x : (A x)_i == 0 mod moduli[i]}; a modulus of 0 means exact"""
    if len(moduli) != A.rows:
        raise PreconditionError(f"Need {A.rows} moduli, got {len(moduli)}")
    if not any(moduli):
        return kernel_basis(A)
    n = A.cols
    columns = {j: A.column(j) for j in range(n)}
    extra = n
    for i, m in enumerate(moduli):
        if m:
            columns[extra] = {i: m}
            extra += 1
    stacked = IntMatrix(A.rows, extra, columns)
    return [vec[:n] for vec in kernel_basis(stacked)]


# ---------------------------------------------------------------------------
# Lattices and subquotients
# ---------------------------------------------------------------------------

def _as_dict(vec) -> Dict[int, int]:
    if isinstance(vec, dict):
        return {i: v for i, v in vec.items() if v}
    return {i: v for i, v in enumerate(vec) if v}


class Lattice:
    """Sublattice of Z^n kept as a row-echelon basis keyed by pivot column"""

    def __init__(self, dimension: int, vectors: Iterable = ()):
        self.dimension = dimension
        self._rows: Dict[int, Dict[int, int]] = {}
        for vec in vectors:
            self.add(vec)

    def add(self, vec):
        v = _as_dict(vec)
        while v:
            f = min(v)
            row = self._rows.get(f)
            if row is None:
                if v[f] < 0:
                    v = {i: -x for i, x in v.items()}
                self._rows[f] = v
                return
            a, b = row[f], v[f]
            if b % a == 0:
                v = _combine(v, row, 1, -(b // a))
            else:
                x, y, g = xgcd(a, b)
                self._rows[f] = _combine(row, v, x, y)
                v = _combine(v, row, a // g, -(b // g))

    @property
    def rank(self) -> int:
        return len(self._rows)

    def pivots(self) -> List[int]:
        return sorted(self._rows)

    def basis(self) -> List[List[int]]:
        out = []
        for p in self.pivots():
            vec = [0] * self.dimension
            for i, x in self._rows[p].items():
                vec[i] = x
            out.append(vec)
        return out

    def solve(self, vec) -> Optional[List[int]]:
        """Coefficients on basis() reproducing vec, or None if vec is outside"""
        v = _as_dict(vec)
        coeffs = {}
        while v:
            f = min(v)
            row = self._rows.get(f)
            if row is None:
                return None
            q, r = divmod(v[f], row[f])
            if r:
                return None
            coeffs[f] = q
            v = _combine(v, row, 1, -q)
        return [coeffs.get(p, 0) for p in self.pivots()]

    def __contains__(self, vec) -> bool:
        return self.solve(vec) is not None

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(vec in self for vec in other.basis())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Lattice):
            return NotImplemented
        return (self.dimension == other.dimension and self.rank == other.rank
                and self.contains_lattice(other) and other.contains_lattice(self))

    def __repr__(self) -> str:
        return f"Lattice(rank {self.rank} in Z^{self.dimension})"


def _combine(u: Dict[int, int], w: Dict[int, int], a: int, b: int) -> Dict[int, int]:
    """a*u + b*w for sparse vectors"""
    out = {i: a * x for i, x in u.items()} if a != 1 else dict(u)
    for i, x in w.items():
        nv = out.get(i, 0) + b * x
        if nv:
            out[i] = nv
        elif i in out:
            del out[i]
    return {i: x for i, x in out.items() if x}


class Subquotient:
    """Canonical presentation of L / R for lattices R <= L <= Z^n.

    `generators` are vectors of L whose classes generate L / R with the
    matching `orders` (0 = infinite order); `coordinates` maps a vector of L
    to its canonical coordinates.
    """

    def __init__(self, dimension: int, lattice_vectors: Iterable, relation_vectors: Iterable):
        self.dimension = dimension
        self.lattice = Lattice(dimension, lattice_vectors)
        s = self.lattice.rank
        rel = Lattice(s)
        for vec in relation_vectors:
            coords = self.lattice.solve(vec)
            if coords is None:
                raise PreconditionError("Relation vector does not lie in the lattice")
            rel.add(coords)
        self.relation_rank = rel.rank
        C = IntMatrix.from_columns(s, rel.basis())
        diagonal, U, Ui, _, _ = _smith_dense(C.to_dense(), s, C.cols, track_rows=True)
        full = list(diagonal) + [0] * (s - len(diagonal))
        self._keep = [i for i in range(s) if full[i] != 1]
        self.orders: Tuple[int, ...] = tuple(full[i] for i in self._keep)
        self._U = U
        basis = self.lattice.basis()
        self.generators: List[List[int]] = []
        for i in self._keep:
            vec = [0] * dimension
            for k in range(s):
                c = Ui[k][i]
                if c:
                    for idx, x in enumerate(basis[k]):
                        if x:
                            vec[idx] += c * x
            self.generators.append(vec)

    @property
    def invariants(self) -> "AbelianInvariants":
        return AbelianInvariants.from_diagonal(self.orders)

    def coordinates(self, vec) -> List[int]:
        coords = self.lattice.solve(vec)
        if coords is None:
            raise PreconditionError("Vector is not an element of the presented subgroup")
        out = []
        for i, d in zip(self._keep, self.orders):
            y = sum(u * c for u, c in zip(self._U[i], coords) if c)
            out.append(y % d if d else y)
        return out

    def reduce(self, coords: Sequence[int]) -> List[int]:
        return [c % d if d else c for c, d in zip(coords, self.orders)]

    def __repr__(self) -> str:
        return f"Subquotient({self.invariants})"


# ---------------------------------------------------------------------------
# Abelian invariants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AbelianInvariants:
    """Free rank plus torsion as a divisibility chain d1 | d2 | ..."""
    free_rank: int = 0
    torsion: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.free_rank < 0:
            raise PreconditionError("free_rank must be nonnegative")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise PreconditionError(f"Torsion {list(self.torsion)} is not a divisibility chain")
        if any(d < 2 for d in self.torsion):
            raise PreconditionError(f"Torsion entries must be at least 2: {list(self.torsion)}")

    @classmethod
    def from_diagonal(cls, entries: Iterable[int], extra_free: int = 0) -> "AbelianInvariants":
        """Direct sum of cyclic groups Z/d (d = 0 meaning Z, d = 1 trivial)"""
        free = extra_free
        powers = []
        for d in entries:
            d = abs(int(d))
            if d == 0:
                free += 1
            elif d > 1:
                powers.extend(p ** e for p, e in factorint(d).items())
        return cls.from_primary(powers, free)

    @classmethod
    def from_primary(cls, prime_powers: Iterable[int], free_rank: int = 0) -> "AbelianInvariants":
        by_prime: Dict[int, List[int]] = {}
        for q in prime_powers:
            q = int(q)
            if q < 2:
                continue
            factors = factorint(q)
            if len(factors) != 1:
                raise PreconditionError(f"{q} is not a prime power")
            by_prime.setdefault(next(iter(factors)), []).append(q)
        length = max((len(v) for v in by_prime.values()), default=0)
        chain = [1] * length
        for qs in by_prime.values():
            qs.sort(reverse=True)
            for k, q in enumerate(qs):
                chain[length - 1 - k] *= q
        return cls(free_rank, tuple(chain))

    def primary(self) -> List[int]:
        """Prime-power decomposition sorted by prime, then power"""
        powers = []
        for d in self.torsion:
            powers.extend(p ** e for p, e in factorint(d).items())
        return sorted(powers, key=lambda q: (min(factorint(q)), q))

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def order(self) -> Optional[int]:
        if self.free_rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def exponent(self) -> Optional[int]:
        if self.free_rank:
            return None
        return self.torsion[-1] if self.torsion else 1

    def p_part(self, p: int) -> "AbelianInvariants":
        return AbelianInvariants.from_primary(
            [q for q in self.primary() if q % p == 0])

    def direct_sum(self, other: "AbelianInvariants") -> "AbelianInvariants":
        return AbelianInvariants.from_primary(self.primary() + other.primary(),
                                              self.free_rank + other.free_rank)

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " x ".join(parts) if parts else "0"

    def primary_str(self) -> str:
        parts = ["Z"] * self.free_rank + [f"C{q}" for q in self.primary()]
        return " x ".join(parts) if parts else "Trivial"

    def to_dict(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


# ---------------------------------------------------------------------------
# Homology of complexes of abelian groups
# ---------------------------------------------------------------------------

def _check_pair(d_n: IntMatrix, d_next: IntMatrix):
    if d_n.cols != d_next.rows:
        raise PreconditionError(
            f"Boundary shapes do not compose: {d_n.rows}x{d_n.cols} after {d_next.rows}x{d_next.cols}")


def _check_relations(d: IntMatrix, source_rel: Sequence[int], target_rel: Sequence[int], what: str):
    for j, m in enumerate(source_rel):
        if m:
            for i, v in d.column(j).items():
                t = target_rel[i]
                if (v * m) % t if t else v * m:
                    raise PreconditionError(f"{what} does not respect relations at generator {j}")


def _check_composite_zero(d_n: IntMatrix, d_next: IntMatrix, target_rel: Sequence[int]):
    product = d_n @ d_next
    for j in range(product.cols):
        for i, v in product.column(j).items():
            t = target_rel[i] if target_rel else 0
            if (v % t) if t else v:
                raise PreconditionError(f"Composite of boundaries is nonzero at ({i}, {j})")


def homology_of_pair(d_n: IntMatrix, d_next: IntMatrix) -> AbelianInvariants:
    """ker(d_n) / im(d_next) for a complex of free abelian groups"""
    _check_pair(d_n, d_next)
    _check_composite_zero(d_n, d_next, ())
    rank_n = integer_rank(d_n)
    divisors = elementary_divisors(d_next)
    free = d_n.cols - rank_n - len(divisors)
    return AbelianInvariants.from_diagonal([d for d in divisors if d > 1], free)


def homology_presentation(d_n: IntMatrix, d_next: IntMatrix,
                          rel_prev: Optional[Sequence[int]] = None,
                          rel_here: Optional[Sequence[int]] = None) -> Subquotient:
    """Cycles modulo boundaries with explicit generators.

    Chain groups are Z^r modulo diagonal relations (0 = free factor);
    rel_prev belongs to the target of d_n, rel_here to its source.
    """
    _check_pair(d_n, d_next)
    rel_prev = list(rel_prev) if rel_prev is not None else [0] * d_n.rows
    rel_here = list(rel_here) if rel_here is not None else [0] * d_n.cols
    if len(rel_prev) != d_n.rows or len(rel_here) != d_n.cols:
        raise PreconditionError("Relation lists do not match the chain group ranks")
    _check_relations(d_n, rel_here, rel_prev, "Outgoing boundary")
    _check_composite_zero(d_n, d_next, rel_prev)
    cycles = kernel_modulo(d_n, rel_prev)
    relations = [d_next.column(j) for j in range(d_next.cols)]
    relations.extend({i: m} for i, m in enumerate(rel_here) if m)
    return Subquotient(d_n.cols, cycles, relations)


def homology_with_relations(d_n: IntMatrix, d_next: IntMatrix,
                            relation_diags: Tuple[Sequence[int], Sequence[int]]) -> AbelianInvariants:
    """Homology when chain groups carry diagonal relations.

    relation_diags = (relations of the target of d_n, relations of its source).
    """
    rel_prev, rel_here = relation_diags
    return homology_presentation(d_n, d_next, rel_prev, rel_here).invariants
