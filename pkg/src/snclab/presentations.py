"""Finite group presentations and the rational perfectness tests.

Relator words are lists of signed 1-based generator indices.  The only
simplifications ever applied are free reduction and removal of empty
relators, which keeps presentations reproducible across runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .complexes import AbelianGroup, ComplexError, DeltaComplex
from .intlinalg import IntMatrix, rank, smith_normal_form


class PresentationError(ValueError):
    pass


def free_reduce(word: Sequence[int]) -> tuple[int, ...]:
    out: list[int] = []
    for letter in word:
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


@dataclass(frozen=True)
class Presentation:
    """<x_1..x_n | relators>, relators as signed 1-based index words."""

    generators: int
    relators: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.generators < 0:
            raise PresentationError("negative generator count")
        for w in self.relators:
            for letter in w:
                if letter == 0 or abs(letter) > self.generators:
                    raise PresentationError(f"relator letter {letter} out of range")

    @classmethod
    def build(cls, generators: int, relators: Iterable[Sequence[int]]) -> "Presentation":
        return cls(generators, tuple(tuple(int(x) for x in w) for w in relators))

    def simplified(self) -> "Presentation":
        """Free reduction plus removal of empty relators; nothing else."""
        reduced = [free_reduce(w) for w in self.relators]
        return Presentation(self.generators, tuple(w for w in reduced if w))

    def exponent_matrix(self) -> IntMatrix:
        """Generators-by-relators matrix of exponent sums."""
        grid = [[0] * len(self.relators) for _ in range(self.generators)]
        for j, w in enumerate(self.relators):
            for letter in w:
                grid[abs(letter) - 1][j] += 1 if letter > 0 else -1
        return IntMatrix.from_rows(grid, len(self.relators))

    def to_json_dict(self) -> dict:
        return {"generators": self.generators, "relators": [list(w) for w in self.relators]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True) + "\n"


def presentation_from_json_dict(data: dict) -> Presentation:
    return Presentation.build(int(data["generators"]), data.get("relators", []))


def abelianization(p: Presentation) -> AbelianGroup:
    """H_1 of the presented group: cokernel of the exponent-sum matrix."""
    if p.generators == 0:
        return AbelianGroup(0)
    snf = smith_normal_form(p.exponent_matrix())
    return AbelianGroup.from_invariant_factors(p.generators - snf.rank, snf.nonzero)


def is_q_perfect(p: Presentation) -> bool:
    """True when the largest abelian quotient is finite (H_1 rank zero)."""
    return abelianization(p).rank == 0


class SuperperfectVerdict(Enum):
    CONFIRMED = "confirmed"
    INCONCLUSIVE = "inconclusive"


def is_q_superperfect_sufficient(p: Presentation) -> SuperperfectVerdict:
    """One-sided test via the presentation 2-complex.

    The complex has one vertex, a loop per generator and a disc per
    relator, so b1 = g - rank and b2 = r - rank over the rationals.  Both
    vanishing is sufficient for H_1(G,Q) = H_2(G,Q) = 0 because H_2 of the
    group is a quotient of H_2 of the complex; failure refutes nothing.
    """
    r = rank(p.exponent_matrix()) if p.generators else 0
    b1 = p.generators - r
    b2 = len(p.relators) - r
    if b1 == 0 and b2 == 0:
        return SuperperfectVerdict.CONFIRMED
    return SuperperfectVerdict.INCONCLUSIVE


def higman_presentation() -> Presentation:
    """Four generators with x_i [x_i, x_{i+1}] relators, indices mod 4."""
    relators = []
    for i in range(1, 5):
        j = 1 + (i % 4)
        relators.append([i, i, j, -i, -j])
    return Presentation.build(4, relators)


def sl2z_presentation() -> Presentation:
    """<a, b | a^4, a^2 b^-3>."""
    return Presentation.build(2, [[1, 1, 1, 1], [1, 1, -2, -2, -2]])


def pi1_presentation(k: DeltaComplex, basepoint: int = 0) -> Presentation:
    """Presentation of pi_1 of the 2-skeleton.

    Generators are the edges outside a breadth-first spanning tree rooted
    at the basepoint (ties broken by lowest edge index); every 2-cell
    contributes its boundary word with tree edges deleted.  Collapsing the
    tree justifies dropping the conjugating tree paths.
    """
    if not k.is_connected():
        raise ComplexError("pi_1 needs a connected complex")
    if not 0 <= basepoint < k.n_cells(0):
        raise ComplexError("basepoint out of range")
    n_edges = k.n_cells(1) if k.dim >= 1 else 0
    edges = k.cells[1] if k.dim >= 1 else ()
    incident: dict[int, list[int]] = {}
    for e, (head, tail) in enumerate(edges):
        incident.setdefault(head, []).append(e)
        incident.setdefault(tail, []).append(e)
    visited = {basepoint}
    tree: set[int] = set()
    queue = [basepoint]
    while queue:
        v = queue.pop(0)
        for e in sorted(incident.get(v, [])):
            head, tail = edges[e]
            other = tail if head == v else head
            if other not in visited:
                visited.add(other)
                tree.add(e)
                queue.append(other)
    gen_index = {}
    for e in range(n_edges):
        if e not in tree:
            gen_index[e] = len(gen_index) + 1
    relators = []
    for faces in k.cells[2] if k.dim >= 2 else ():
        f0, f1, f2 = faces
        word = []
        for e, sign in ((f2, 1), (f0, 1), (f1, -1)):
            if e in gen_index:
                word.append(sign * gen_index[e])
        word = free_reduce(word)
        if word:
            relators.append(word)
    return Presentation.build(len(gen_index), relators)
