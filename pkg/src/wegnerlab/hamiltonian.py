"""Finite-volume n-particle Hamiltonians on a cube.

The operator is  H = -laplacian + sum_j V(x_j) + h*U  with the kinetic part
stored positive semidefinite: +2nd on the diagonal and -1 on every pair of
cube sites at one_norm distance 1.  The cube restriction is the Dirichlet
one: hopping terms leaving the cube are dropped, the diagonal is untouched.
This keeps the h=0 operator an exact Kronecker sum of the n single-particle
Hamiltonians, which the tensor module relies on.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sparse

from .errors import CapacityError
from .lattice import Cube, coords_array
from .randomfield import FieldSample

DENSE_LIMIT = 4096
_SCAN_LIMIT = 1 << 22


@dataclass(frozen=True)
class InteractionSpec:
    """Inter-particle potential U; ``pair_contact`` counts close pairs.

    U(x) = amplitude * #{(i, j): i < j, sup-dist(x_i, x_j) <= radius}, so
    |U| is bounded by |amplitude| * n(n-1)/2.
    """

    kind: str
    radius: int = 0
    amplitude: float = 0.0

    @classmethod
    def none(cls):
        return cls(kind="none")

    @classmethod
    def pair_contact(cls, radius: int, amplitude: float):
        if radius < 0:
            raise ValueError(f"contact radius must be >= 0, got {radius}")
        return cls(kind="pair_contact", radius=int(radius), amplitude=float(amplitude))


@dataclass
class SymMatrix:
    """Real symmetric matrix in the cube enumeration basis.

    Dense ndarray up to DENSE_LIMIT, scipy CSR above.  Symmetry is exact by
    construction and checked bitwise on creation.
    """

    dim: int
    entries: object

    def __post_init__(self):
        if self.is_sparse:
            if (self.entries != self.entries.T).nnz != 0:
                raise ValueError("matrix entries are not exactly symmetric")
        else:
            self.entries = np.asarray(self.entries, dtype=np.float64)
            if self.entries.shape != (self.dim, self.dim):
                raise ValueError(
                    f"entries shape {self.entries.shape} does not match dim {self.dim}"
                )
            if not np.array_equal(self.entries, self.entries.T):
                raise ValueError("matrix entries are not exactly symmetric")

    @property
    def is_sparse(self) -> bool:
        return sparse.issparse(self.entries)

    def dense(self) -> np.ndarray:
        return self.entries.toarray() if self.is_sparse else self.entries

    def diagonal(self) -> np.ndarray:
        return np.asarray(self.entries.diagonal())

    def inf_norm(self) -> float:
        if self.is_sparse:
            return float(abs(self.entries).sum(axis=1).max())
        return float(np.abs(self.entries).sum(axis=1).max())

    def nonzeros(self):
        """Yield (row, col, value) sorted by (row, col)."""
        if self.is_sparse:
            coo = self.entries.tocoo()
            order = np.lexsort((coo.col, coo.row))
            for k in order:
                yield int(coo.row[k]), int(coo.col[k]), float(coo.data[k])
        else:
            rows, cols = np.nonzero(self.entries)
            for r, c in zip(rows.tolist(), cols.tolist()):
                yield r, c, float(self.entries[r, c])


def _pair_counts(coords: np.ndarray, n: int, d: int, radius: int) -> np.ndarray:
    """Number of particle pairs within sup-distance ``radius``, per site."""
    counts = np.zeros(coords.shape[0], dtype=np.int64)
    for i in range(n):
        ci = coords[:, i * d : (i + 1) * d]
        for j in range(i + 1, n):
            cj = coords[:, j * d : (j + 1) * d]
            counts += np.max(np.abs(ci - cj), axis=1) <= radius
    return counts


def interaction_values(cube: Cube, inter: InteractionSpec) -> np.ndarray:
    """U(x) over the cube sites in enumeration order."""
    dim = cube.site_count
    if inter.kind == "none":
        return np.zeros(dim)
    if dim > _SCAN_LIMIT:
        raise CapacityError(f"interaction scan over {dim} sites not supported")
    n, d = cube.center.n, cube.center.d
    counts = _pair_counts(coords_array(cube), n, d, inter.radius)
    return inter.amplitude * counts


def interaction_sup_norm(cube: Cube, inter: InteractionSpec) -> float:
    """max over cube sites of |U(x)|, exact.

    Falls back to the closed form |amplitude|*n(n-1)/2 when all
    single-particle cubes share a center, in which case the fully clustered
    configuration is attainable.
    """
    if inter.kind == "none":
        return 0.0
    n = cube.center.n
    centers = {cube.center.particle(i) for i in range(n)}
    if len(centers) == 1:
        return abs(inter.amplitude) * (n * (n - 1) // 2)
    return float(np.max(np.abs(interaction_values(cube, inter))))


def _diagonal(cube: Cube, field: FieldSample, inter: InteractionSpec, h: float) -> np.ndarray:
    n, d = cube.center.n, cube.center.d
    side = cube.side
    per_axis = side**d
    dim = cube.site_count
    diag = np.full(dim, 2.0 * n * d)
    # Kronecker pattern: particle i's potential vector tiles the flat index.
    for i in range(n):
        pts = coords_array(cube.particle_cube(i))
        v = field.values_at(pts)
        inner = per_axis ** (n - 1 - i)
        outer = per_axis**i
        diag += np.tile(np.repeat(v, inner), outer)
    if inter.kind != "none" and h != 0.0:
        diag = diag + h * interaction_values(cube, inter)
    return diag


def _hopping_pairs(cube: Cube):
    """(rows, cols) with cols = rows + stride, per axis, for in-cube bonds."""
    nd = cube.center.n * cube.center.d
    side = cube.side
    dim = cube.site_count
    idx = np.arange(dim)
    stride = dim
    for _ in range(nd):
        stride //= side
        pos = (idx // stride) % side
        rows = idx[pos < side - 1]
        yield rows, rows + stride


def build_hamiltonian(
    cube: Cube, field: FieldSample, inter: InteractionSpec, h: float
) -> SymMatrix:
    """Assemble H on the cube in enumeration order.

    Diagonal entry at configuration x is 2nd + sum_j V(x_j) + h*U(x); the
    off-diagonal entry is exactly -1 between cube sites at one_norm
    distance 1, and 0 elsewhere.
    """
    dim = cube.site_count
    diag = _diagonal(cube, field, inter, h)
    if dim <= DENSE_LIMIT:
        m = np.zeros((dim, dim))
        np.fill_diagonal(m, diag)
        for rows, cols in _hopping_pairs(cube):
            m[rows, cols] = -1.0
            m[cols, rows] = -1.0
        return SymMatrix(dim=dim, entries=m)
    all_rows = [np.arange(dim)]
    all_cols = [np.arange(dim)]
    all_vals = [diag]
    for rows, cols in _hopping_pairs(cube):
        ones = np.full(rows.size, -1.0)
        all_rows += [rows, cols]
        all_cols += [cols, rows]
        all_vals += [ones, ones]
    m = sparse.coo_matrix(
        (np.concatenate(all_vals), (np.concatenate(all_rows), np.concatenate(all_cols))),
        shape=(dim, dim),
    ).tocsr()
    return SymMatrix(dim=dim, entries=m)


def write_matrix_dump(matrix: SymMatrix, stream):
    """Text dump, one line per nonzero: ``row col value`` sorted by (row, col).

    First two lines are ``# wegnerlab matrix dump v1`` and ``# dim N``.
    """
    stream.write("# wegnerlab matrix dump v1\n")
    stream.write(f"# dim {matrix.dim}\n")
    for r, c, v in matrix.nonzeros():
        stream.write(f"{r} {c} {v!r}\n")


def read_matrix_dump(stream) -> SymMatrix:
    """Parse the write_matrix_dump format back into a dense SymMatrix."""
    dim = None
    triples = []
    for line in stream:
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) == 2 and parts[0] == "dim":
                dim = int(parts[1])
            continue
        r, c, v = line.split()
        triples.append((int(r), int(c), float(v)))
    if dim is None:
        raise ValueError("matrix dump is missing the '# dim N' header")
    m = np.zeros((dim, dim))
    for r, c, v in triples:
        m[r, c] = v
    return SymMatrix(dim=dim, entries=m)
