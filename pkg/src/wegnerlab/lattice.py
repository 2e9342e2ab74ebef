"""Geometry of n-particle configuration space.

A configuration of n particles in Z^d is a flat integer vector of length
n*d; particle i occupies ``coords[i*d:(i+1)*d]``.  Cubes are sup-norm balls
around a center configuration and factor into a Cartesian product of n
single-particle cubes.  Sites of a cube are enumerated in lexicographic
order of the flat coordinate vector, which fixes the matrix index basis
used by every other module.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError


@dataclass(frozen=True)
class Site:
    """One n-particle configuration in (Z^d)^n."""

    n: int
    d: int
    coords: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ValueError(f"need n >= 1 and d >= 1, got n={self.n}, d={self.d}")
        coords = tuple(int(c) for c in self.coords)
        if len(coords) != self.n * self.d:
            raise ValueError(
                f"coords length {len(coords)} does not match n*d = {self.n * self.d}"
            )
        object.__setattr__(self, "coords", coords)

    def particle(self, i: int) -> tuple[int, ...]:
        """Coordinates of particle i (0-based) in Z^d."""
        return self.coords[i * self.d : (i + 1) * self.d]


def _check_same_shape(a: Site, b: Site):
    if (a.n, a.d) != (b.n, b.d):
        raise DimensionMismatchError(
            f"sites have different shapes: (n={a.n}, d={a.d}) vs (n={b.n}, d={b.d})"
        )


def sup_norm(a: Site, b: Site) -> int:
    """max_i |a_i - b_i| over all n*d components."""
    _check_same_shape(a, b)
    return max(abs(x - y) for x, y in zip(a.coords, b.coords))


def one_norm(a: Site, b: Site) -> int:
    """sum_i |a_i - b_i| over all n*d components."""
    _check_same_shape(a, b)
    return sum(abs(x - y) for x, y in zip(a.coords, b.coords))


@dataclass(frozen=True)
class Cube:
    """Sup-norm ball of radius L around a center configuration.

    Only center and radius are stored; the site count grows as
    (2L+1)^(n*d), so the site list is never materialized here.
    """

    center: Site
    radius: int

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError(f"radius must be >= 0, got {self.radius}")
        object.__setattr__(self, "radius", int(self.radius))

    @property
    def side(self) -> int:
        return 2 * self.radius + 1

    @property
    def site_count(self) -> int:
        return self.side ** (self.center.n * self.center.d)

    def particle_cube(self, i: int) -> "Cube":
        """Single-particle cube C_L(x_i) as a Cube with n=1."""
        return Cube(Site(1, self.center.d, self.center.particle(i)), self.radius)

    def contains(self, site: Site) -> bool:
        return sup_norm(self.center, site) <= self.radius

    def field_region(self) -> frozenset[tuple[int, ...]]:
        """Union over particles of the single-particle cube points in Z^d."""
        d = self.center.d
        points = set()
        for i in range(self.center.n):
            base = self.center.particle(i)
            grids = np.meshgrid(
                *[np.arange(c - self.radius, c + self.radius + 1) for c in base],
                indexing="ij",
            )
            block = np.stack(grids, axis=-1).reshape(-1, d)
            points.update(map(tuple, block.tolist()))
        return frozenset(points)


def coords_array(cube: Cube) -> np.ndarray:
    """(site_count, n*d) int64 array of cube sites in lexicographic order."""
    nd = cube.center.n * cube.center.d
    ranges = [
        np.arange(c - cube.radius, c + cube.radius + 1, dtype=np.int64)
        for c in cube.center.coords
    ]
    grids = np.meshgrid(*ranges, indexing="ij")
    return np.stack(grids, axis=-1).reshape(-1, nd)


def enumerate_sites(cube: Cube) -> list[Site]:
    """All (2L+1)^(n*d) sites of the cube, lexicographic in the flat coords."""
    n, d = cube.center.n, cube.center.d
    return [Site(n, d, tuple(row)) for row in coords_array(cube).tolist()]


def index_of(cube: Cube, site: Site) -> int:
    """Ordinal of a site in the enumeration order; O(n*d) mixed-radix lookup."""
    _check_same_shape(cube.center, site)
    if not cube.contains(site):
        raise ValueError(f"site {site.coords} outside cube of radius {cube.radius}")
    side = cube.side
    k = 0
    for c, c0 in zip(site.coords, cube.center.coords):
        k = k * side + (c - c0 + cube.radius)
    return k


def site_at(cube: Cube, k: int) -> Site:
    """Inverse of index_of."""
    if not 0 <= k < cube.site_count:
        raise ValueError(f"index {k} out of range for cube with {cube.site_count} sites")
    side = cube.side
    digits = []
    for _ in range(cube.center.n * cube.center.d):
        digits.append(k % side)
        k //= side
    digits.reverse()
    coords = tuple(
        c0 - cube.radius + g for c0, g in zip(cube.center.coords, digits)
    )
    return Site(cube.center.n, cube.center.d, coords)
