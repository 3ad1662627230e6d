"""Unordered Delta-complexes with exact integer chain algebra.

A complex stores, per dimension, one record per cell: the ordered list of
its (k-1)-dimensional faces.  A k-cell has exactly k+1 faces and the
boundary map is the usual alternating sum, so the composite boundary
vanishes; build_complex checks this and names the offending cell when it
does not.

Values are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .intlinalg import IntMatrix, rank, smith_normal_form

CellSpec = Sequence[Sequence[int]]


class ComplexError(ValueError):
    pass


@dataclass(frozen=True)
class AbelianGroup:
    """A finitely generated abelian group: rank plus invariant factors d1 | d2 | ..."""

    rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("negative rank")
        prev = None
        for d in self.torsion:
            if d < 2:
                raise ValueError("invariant factors must be >= 2")
            if prev is not None and d % prev != 0:
                raise ValueError("invariant factors must form a divisibility chain")
            prev = d

    @classmethod
    def from_invariant_factors(cls, rank: int, factors: Iterable[int]) -> "AbelianGroup":
        torsion = tuple(sorted(d for d in factors if d > 1))
        return cls(rank, torsion)

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    @property
    def is_finite(self) -> bool:
        return self.rank == 0

    def order(self) -> Optional[int]:
        if self.rank > 0:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def __str__(self) -> str:
        parts = ["Z"] * self.rank + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class DeltaComplex:
    """Graded cells with attaching data; cells[k][i] is the face list of cell (k, i)."""

    cells: tuple[tuple[tuple[int, ...], ...], ...]
    labels: tuple[tuple[Optional[str], ...], ...] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.labels is None:
            object.__setattr__(
                self, "labels", tuple(tuple(None for _ in layer) for layer in self.cells)
            )

    @property
    def dim(self) -> int:
        return len(self.cells) - 1

    def n_cells(self, k: int) -> int:
        if 0 <= k < len(self.cells):
            return len(self.cells[k])
        return 0

    def cell_counts(self) -> tuple[int, ...]:
        return tuple(len(layer) for layer in self.cells)

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * len(layer) for k, layer in enumerate(self.cells))

    def boundary_matrix(self, k: int) -> IntMatrix:
        """The map C_k -> C_{k-1}; for k = 0 a 0-row matrix."""
        if k <= 0 or k > self.dim:
            return IntMatrix.zero(0 if k <= 0 else self.n_cells(k - 1), self.n_cells(max(k, 0)))
        rows = self.n_cells(k - 1)
        cols = self.n_cells(k)
        grid = [[0] * cols for _ in range(rows)]
        for j, faces in enumerate(self.cells[k]):
            for pos, f in enumerate(faces):
                grid[f][j] += (-1) ** pos
        return IntMatrix.from_rows(grid, cols)

    def is_connected(self) -> bool:
        n = self.n_cells(0)
        if n == 0:
            return False
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for head, tail in self.cells[1] if self.dim >= 1 else ():
            a, b = find(head), find(tail)
            if a != b:
                parent[a] = b
        return len({find(v) for v in range(n)}) == 1

    def homology(self, k: int) -> AbelianGroup:
        """H_k over the integers; out-of-range k gives the zero group."""
        if k < 0 or k > self.dim:
            return AbelianGroup(0)
        n_k = self.n_cells(k)
        rank_in = rank(self.boundary_matrix(k)) if k >= 1 else 0
        if k + 1 <= self.dim:
            snf_out = smith_normal_form(self.boundary_matrix(k + 1))
            rank_out = snf_out.rank
            torsion = tuple(d for d in snf_out.nonzero if d > 1)
        else:
            rank_out = 0
            torsion = ()
        return AbelianGroup.from_invariant_factors(n_k - rank_in - rank_out, torsion)

    def betti(self, k: int) -> int:
        return self.homology(k).rank

    def all_betti(self) -> tuple[int, ...]:
        return tuple(self.betti(k) for k in range(self.dim + 1))

    def is_q_acyclic(self) -> bool:
        """True when the rational cohomology vanishes in every positive degree."""
        if not self.is_connected():
            raise ComplexError("Q-acyclicity is only defined for connected complexes")
        return all(self.betti(k) == 0 for k in range(1, self.dim + 1))

    def label(self, k: int, i: int) -> Optional[str]:
        return self.labels[k][i]

    def to_json_dict(self) -> dict:
        out = {"dim": self.dim, "cells": [[list(c) for c in layer] for layer in self.cells]}
        if any(lbl is not None for layer in self.labels for lbl in layer):
            out["labels"] = [list(layer) for layer in self.labels]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True) + "\n"


def build_complex(cells: Sequence[CellSpec], labels=None) -> DeltaComplex:
    """Validate raw cell lists and return the complex.

    The 0-dimensional layer may list anything (labels, nulls); only its
    length matters.  Each k-cell for k >= 1 must list exactly k+1 existing
    (k-1)-cells, and the composite boundary must vanish over the integers.
    """
    if not cells:
        raise ComplexError("a complex needs at least one dimension layer")
    normalized: list[tuple[tuple[int, ...], ...]] = [tuple(() for _ in cells[0])]
    for k in range(1, len(cells)):
        layer = []
        for i, spec in enumerate(cells[k]):
            faces = tuple(int(f) for f in spec)
            if len(faces) != k + 1:
                raise ComplexError(f"cell ({k},{i}) must have exactly {k + 1} faces")
            for f in faces:
                if not 0 <= f < len(cells[k - 1]):
                    raise ComplexError(f"dangling face reference in cell ({k},{i}): {f}")
            layer.append(faces)
        normalized.append(tuple(layer))
    # drop empty top layers so dim reflects actual cells
    while len(normalized) > 1 and not normalized[-1]:
        normalized.pop()
    if labels is not None:
        norm_labels = tuple(
            tuple(None if x is None else str(x) for x in layer)
            for layer in list(labels)[: len(normalized)]
        )
        if tuple(len(l) for l in norm_labels) != tuple(len(l) for l in normalized):
            raise ComplexError("labels shape does not match cells")
    else:
        norm_labels = None
    complex_ = DeltaComplex(tuple(normalized), norm_labels)
    for k in range(2, complex_.dim + 1):
        composite = complex_.boundary_matrix(k - 1) * complex_.boundary_matrix(k)
        if not composite.is_zero():
            for j in range(composite.cols):
                if any(composite[(i, j)] != 0 for i in range(composite.rows)):
                    raise ComplexError(
                        f"boundary composite is nonzero on cell ({k},{j})"
                    )
    return complex_


def from_simplices(simplices: Iterable[Sequence[int]]) -> DeltaComplex:
    """Build the simplicial Delta-complex generated by the given simplices.

    Vertices are arbitrary sortable keys; all faces are generated and
    vertices are labeled by their keys.  The i-th face of a simplex drops
    its i-th vertex, which makes the boundary identity automatic.
    """
    from itertools import combinations

    by_dim: list[set[tuple]] = []
    for s in simplices:
        vs = tuple(sorted(set(s)))
        if not vs:
            continue
        k = len(vs) - 1
        while len(by_dim) <= k:
            by_dim.append(set())
        for size in range(1, len(vs) + 1):
            for sub in combinations(vs, size):
                by_dim[size - 1].add(sub)
    if not by_dim:
        raise ComplexError("no simplices given")
    index: list[dict[tuple, int]] = []
    for layer in by_dim:
        ordered = sorted(layer)
        index.append({s: i for i, s in enumerate(ordered)})
    cells: list[list[list[int]]] = [[[] for _ in index[0]]]
    for k in range(1, len(by_dim)):
        layer = []
        for s in sorted(by_dim[k]):
            faces = []
            for i in range(len(s)):
                sub = s[:i] + s[i + 1 :]
                faces.append(index[k - 1][sub])
            layer.append(faces)
        cells.append(layer)
    vertex_keys = sorted(by_dim[0])
    labels = [[str(v[0]) for v in vertex_keys]] + [
        [None] * len(layer) for layer in cells[1:]
    ]
    return build_complex(cells, labels)


def complex_from_json_dict(data: dict) -> DeltaComplex:
    if "cells" not in data:
        raise ComplexError("complex JSON needs a 'cells' field")
    return build_complex(data["cells"], data.get("labels"))


def delta_isomorphic(a: DeltaComplex, b: DeltaComplex) -> bool:
    """Graded isomorphism search over face-preserving bijections.

    Backtracks dimension by dimension; face lists must correspond as
    multisets under the already-chosen lower mapping.  Intended for the
    desk-size complexes this package produces.
    """
    if a.cell_counts() != b.cell_counts():
        return False

    def extend(k: int, lower_map: dict[int, int]) -> bool:
        if k > a.dim:
            return True
        na = a.n_cells(k)
        imaged = [None] * na
        used = [False] * b.n_cells(k)

        def key_a(i):
            if k == 0:
                return ()
            return tuple(sorted(lower_map[f] for f in a.cells[k][i]))

        keys_b: dict[tuple, list[int]] = {}
        for j in range(b.n_cells(k)):
            kb = tuple(sorted(b.cells[k][j])) if k > 0 else ()
            keys_b.setdefault(kb, []).append(j)

        def place(i: int) -> bool:
            if i == na:
                next_map = {idx: imaged[idx] for idx in range(na)}
                return extend(k + 1, next_map)
            for j in keys_b.get(key_a(i), []):
                if not used[j]:
                    used[j] = True
                    imaged[i] = j
                    if place(i + 1):
                        return True
                    used[j] = False
            return False

        return place(0)

    return extend(0, {})
