"""Exact subspaces of Q^n represented by canonical column bases.

The canonical form is the reduced column echelon form with pivots normalized
to 1, so two Subspace objects are equal iff their basis arrays are identical.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import _linalg as la
from .blockmat import Partition
from .errors import AmbientMismatch

__all__ = ["Subspace", "image", "kernel"]


class Subspace:
    """A linear subspace of Q^ambient with a canonical rational basis."""

    def __init__(self, ambient: int, basis: np.ndarray):
        self.ambient = int(ambient)
        if basis.shape[0] != self.ambient:
            raise AmbientMismatch(f"basis rows {basis.shape[0]} != ambient {self.ambient}")
        basis = la.column_echelon(basis)
        basis = basis.copy()
        basis.flags.writeable = False
        self.basis = basis

    # construction -----------------------------------------------------

    @classmethod
    def from_columns(cls, ambient: int, columns) -> "Subspace":
        """Span of the given vectors (iterable of length-``ambient`` sequences)."""
        cols = [la.fvec(c) for c in columns]
        if not cols:
            return cls.zero(ambient)
        return cls(ambient, np.hstack(cols))

    @classmethod
    def zero(cls, ambient: int) -> "Subspace":
        return cls(ambient, la.zeros(ambient, 0))

    @classmethod
    def full(cls, ambient: int) -> "Subspace":
        return cls(ambient, la.eye(ambient))

    # basic queries ----------------------------------------------------

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def is_zero(self) -> bool:
        return self.dim == 0

    def _require_same_ambient(self, other: "Subspace") -> None:
        if self.ambient != other.ambient:
            raise AmbientMismatch(f"ambients differ: {self.ambient} vs {other.ambient}")

    def equals(self, other: "Subspace") -> bool:
        self._require_same_ambient(other)
        return self.basis.shape == other.basis.shape and all(
            x == y for x, y in zip(self.basis.flat, other.basis.flat)
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, Subspace) and self.ambient == other.ambient and self.equals(other)

    def __hash__(self):
        return hash((self.ambient, tuple(self.basis.flat)))

    def contains(self, other: "Subspace") -> bool:
        self._require_same_ambient(other)
        return self.sum(other).dim == self.dim

    def contains_vector(self, vec) -> bool:
        v = la.fvec(vec) if not isinstance(vec, np.ndarray) else vec
        return la.rank(np.hstack([self.basis, v.reshape(self.ambient, 1)])) == self.dim

    # lattice operations -----------------------------------------------

    def sum(self, other: "Subspace") -> "Subspace":
        self._require_same_ambient(other)
        return Subspace(self.ambient, np.hstack([self.basis, other.basis]))

    def intersect(self, other: "Subspace") -> "Subspace":
        self._require_same_ambient(other)
        if self.is_zero() or other.is_zero():
            return Subspace.zero(self.ambient)
        stacked = np.hstack([self.basis, -other.basis])
        null = la.kernel_basis(stacked)
        coords = null[: self.dim, :]
        return Subspace(self.ambient, la.mdot(self.basis, coords))

    def complement(self) -> "Subspace":
        """Orthogonal complement in the standard inner product."""
        return Subspace(self.ambient, la.kernel_basis(self.basis.T))

    def ominus(self, other: "Subspace") -> "Subspace":
        """self intersected with the orthogonal complement of ``other``."""
        return self.intersect(other.complement())

    # maps and projections ----------------------------------------------

    def apply(self, matrix: np.ndarray) -> "Subspace":
        """Image of this subspace under a linear map (rows = new ambient)."""
        return Subspace(matrix.shape[0], la.mdot(matrix, self.basis))

    def project_onto(self, target: "Subspace") -> "Subspace":
        """Orthogonal projection of this subspace onto ``target``."""
        self._require_same_ambient(target)
        if target.is_zero() or self.is_zero():
            return Subspace.zero(self.ambient)
        coords = la.solve_gram(target.basis, self.basis)
        return Subspace(self.ambient, la.mdot(target.basis, coords))

    def coordinate_project(self, partition: Partition, nodes) -> "Subspace":
        """Projection onto the coordinate blocks in ``nodes``, in full ambient coordinates."""
        if partition.total != self.ambient:
            raise AmbientMismatch(
                f"partition total {partition.total} != ambient {self.ambient}"
            )
        keep = set()
        for j in nodes:
            keep.update(partition.block_range(j))
        masked = self.basis.copy()
        for row in range(self.ambient):
            if row not in keep:
                masked[row, :] = [Fraction(0)] * masked.shape[1]
        return Subspace(self.ambient, masked)

    # serialization ------------------------------------------------------

    def vectors(self) -> list[list[Fraction]]:
        """Canonical basis as a list of column vectors."""
        return [[self.basis[r, c] for r in range(self.ambient)] for c in range(self.dim)]

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"


def image(matrix: np.ndarray) -> Subspace:
    """Exact column space."""
    return Subspace(matrix.shape[0], matrix)


def kernel(matrix: np.ndarray) -> Subspace:
    """Exact null space."""
    return Subspace(matrix.shape[1], la.kernel_basis(matrix))
