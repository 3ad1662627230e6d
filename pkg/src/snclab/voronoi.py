"""Exact-rational Voronoi complexes: face lattice, duals, subspace classes.

Sites live in Q^m.  The nearness predicate is linearized exactly:
d(x, y_i) <= d(x, y_j) iff 2(y_j - y_i) . x <= |y_j|^2 - |y_i|^2, so every
face is cut out by rational equalities and strict inequalities and its
existence is a Fourier-Motzkin feasibility question.  Faces are keyed by
the set J of sites attaining equality; the equidistance locus of J is the
affine subspace H(J).

Face enumeration brute-forces index subsets, which is fine for the
intended scale (about ten sites, ambient dimension up to four).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .complexes import DeltaComplex, build_complex
from .qlinalg import (
    AffineSubspace,
    Constraint,
    Vector,
    dot,
    feasible_point,
    solve_affine,
    vec,
    whole_space,
)


class VoronoiError(ValueError):
    pass


class GenericityError(VoronoiError):
    """Two distinct index sets produced the same equidistance subspace."""


class NotSimpleError(VoronoiError):
    def __init__(self, witness: "VoronoiFace"):
        self.witness = witness
        super().__init__(
            f"not simple: face {sorted(witness.sites)} lies in {len(witness.sites)} cells "
            f"but has codimension {witness.codim}"
        )


@dataclass(frozen=True)
class SiteSet:
    """Distinct rational points indexed 0..len-1."""

    dim: int
    sites: tuple[Vector, ...]

    def __post_init__(self):
        if self.dim < 1:
            raise VoronoiError("ambient dimension must be at least 1")
        if not self.sites:
            raise VoronoiError("at least one site is required")
        for s in self.sites:
            if len(s) != self.dim:
                raise VoronoiError("site coordinate length does not match dimension")
        if len(set(self.sites)) != len(self.sites):
            raise VoronoiError("duplicate sites")

    @classmethod
    def build(cls, dim: int, sites: Iterable[Sequence]) -> "SiteSet":
        return cls(dim, tuple(vec(s) for s in sites))

    def __len__(self) -> int:
        return len(self.sites)

    def bisector(self, i: int, j: int) -> tuple[Vector, Fraction]:
        """(a, b) with a.x <= b exactly when x is at least as close to i as to j."""
        yi, yj = self.sites[i], self.sites[j]
        a = tuple(2 * (cj - ci) for ci, cj in zip(yi, yj))
        b = dot(yj, yj) - dot(yi, yi)
        return a, b

    def cell_halfspaces(self, i: int) -> list[tuple[Vector, Fraction]]:
        return [self.bisector(i, j) for j in range(len(self.sites)) if j != i]

    def nearest_set(self, x: Sequence) -> frozenset[int]:
        p = vec(x)
        d2 = [dot(tuple(a - b for a, b in zip(p, s)), tuple(a - b for a, b in zip(p, s)))
              for s in self.sites]
        best = min(d2)
        return frozenset(i for i, d in enumerate(d2) if d == best)


def equidistance_subspace(sites: SiteSet, j_set: Sequence[int]) -> Optional[AffineSubspace]:
    """H(J): the locus equidistant to every site in J, or None when empty."""
    indices = sorted(set(j_set))
    if len(indices) == 1:
        return whole_space(sites.dim)
    base = indices[0]
    rows, rhs = [], []
    for other in indices[1:]:
        a, b = sites.bisector(base, other)
        rows.append(list(a))
        rhs.append(b)
    solved = solve_affine(rows, rhs)
    if solved is None:
        return None
    return AffineSubspace(solved[0], solved[1])


@dataclass(frozen=True)
class VoronoiFace:
    """A face of the complex: sites J attaining the minimum, span, witness."""

    sites: frozenset[int]
    span: AffineSubspace
    witness: Vector
    ambient_dim: int

    @property
    def dim(self) -> int:
        return self.span.dim

    @property
    def codim(self) -> int:
        return self.ambient_dim - self.span.dim


@dataclass(frozen=True)
class VoronoiComplex:
    sites: SiteSet
    faces: dict[frozenset[int], VoronoiFace]
    subspaces: dict[frozenset[int], AffineSubspace]

    @property
    def dim(self) -> int:
        return self.sites.dim

    def cell_indices(self) -> tuple[int, ...]:
        return tuple(range(len(self.sites)))

    def cell_halfspaces(self, i: int) -> list[tuple[Vector, Fraction]]:
        """The cell as an exact half-space system (one bisector per rival)."""
        return self.sites.cell_halfspaces(i)

    def face_list(self) -> list[VoronoiFace]:
        return [self.faces[k] for k in sorted(self.faces, key=lambda j: (len(j), sorted(j)))]

    def faces_of_cell(self, i: int) -> list[VoronoiFace]:
        return [f for f in self.face_list() if i in f.sites]

    def simplicity_witness(self) -> Optional[VoronoiFace]:
        for face in self.face_list():
            if len(face.sites) != face.codim + 1:
                return face
        return None

    def is_simple(self) -> bool:
        return self.simplicity_witness() is None

    def to_json_dict(self) -> dict:
        return {
            "dim": self.sites.dim,
            "sites": [[str(c) for c in s] for s in self.sites.sites],
            "faces": [
                {
                    "sites": sorted(f.sites),
                    "dim": f.dim,
                    "witness": [str(c) for c in f.witness],
                }
                for f in self.face_list()
            ],
            "simple": self.is_simple(),
        }


def _face_constraints(sites: SiteSet, indices: tuple[int, ...]) -> list[Constraint]:
    base = indices[0]
    others = [k for k in range(len(sites)) if k not in indices]
    out = []
    for k in others:
        a, b = sites.bisector(base, k)
        out.append(Constraint(a, b, strict=True))
    return out


def voronoi_complex(site_set: SiteSet) -> VoronoiComplex:
    """Build the full face lattice by subset enumeration.

    A face exists for J exactly when some point has nearest-site set J; the
    test substitutes the equidistance span into the strict inequalities
    against the remaining sites and runs Fourier-Motzkin.
    """
    n = len(site_set)
    faces: dict[frozenset[int], VoronoiFace] = {}
    subspaces: dict[frozenset[int], AffineSubspace] = {}
    for size in range(1, n + 1):
        for indices in combinations(range(n), size):
            span = equidistance_subspace(site_set, indices)
            if span is None:
                continue
            key = frozenset(indices)
            if size >= 2:
                subspaces[key] = span
            constraints = [c.substitute(span) for c in _face_constraints(site_set, indices)]
            witness_params = feasible_point(constraints, span.dim)
            if witness_params is None:
                continue
            witness = span.parametrize(witness_params)
            faces[key] = VoronoiFace(key, span, witness, site_set.dim)
    return VoronoiComplex(site_set, faces, subspaces)


def restricted_simplicity_witness(
    vc: VoronoiComplex, selection: Sequence[int]
) -> Optional[VoronoiFace]:
    chosen = set(selection)
    for face in vc.face_list():
        if face.sites & chosen and len(face.sites) != face.codim + 1:
            return face
    return None


def delaunay_dual(vc: VoronoiComplex, selection: Optional[Sequence[int]] = None) -> DeltaComplex:
    """The Delaunay triangulation as a Delta-complex.

    One vertex per selected cell and one (|J|-1)-cell per face with J
    inside the selection; this is the nerve of the selected closed cells.
    Requires simplicity on every face touching the selection.
    """
    cells = sorted(set(selection)) if selection is not None else sorted(vc.cell_indices())
    for c in cells:
        if not 0 <= c < len(vc.sites):
            raise VoronoiError(f"unknown cell index {c}")
    witness = restricted_simplicity_witness(vc, cells)
    if witness is not None:
        raise NotSimpleError(witness)
    chosen = set(cells)
    js_by_dim: list[list[tuple[int, ...]]] = []
    for key in vc.faces:
        if key <= chosen:
            k = len(key) - 1
            while len(js_by_dim) <= k:
                js_by_dim.append([])
            js_by_dim[k].append(tuple(sorted(key)))
    for layer in js_by_dim:
        layer.sort()
    index = [{j: i for i, j in enumerate(layer)} for layer in js_by_dim]
    spec: list[list[list[int]]] = [[[] for _ in js_by_dim[0]]]
    for k in range(1, len(js_by_dim)):
        layer = []
        for j in js_by_dim[k]:
            faces = []
            for drop in range(len(j)):
                sub = j[:drop] + j[drop + 1 :]
                if sub not in index[k - 1]:
                    raise VoronoiError(
                        f"face {list(j)} lacks subface {list(sub)}; complex is not simple"
                    )
                faces.append(index[k - 1][sub])
            layer.append(faces)
        spec.append(layer)
    labels = [[str(j[0]) for j in js_by_dim[0]]] + [
        [None] * len(layer) for layer in js_by_dim[1:]
    ]
    return build_complex(spec, labels)


Region = tuple[tuple[Vector, ...], ...]


def region_from_json_dict(data: dict) -> Region:
    simplices = data.get("simplices", [])
    return tuple(tuple(vec(p) for p in simplex) for simplex in simplices)


def select_subcomplex(vc: VoronoiComplex, region: Region) -> tuple[int, ...]:
    """Indices of cells whose closed cell meets the region.

    The region is a finite union of closed rational simplices; emptiness
    of cell-meets-simplex is decided exactly via feasibility in barycentric
    coordinates.  An empty selection is a valid result.
    """
    m = vc.dim
    selected = []
    for i in vc.cell_indices():
        halfspaces = vc.sites.cell_halfspaces(i)
        hit = False
        for simplex in region:
            if not simplex:
                continue
            for p in simplex:
                if len(p) != m:
                    raise VoronoiError("region vertex dimension mismatch")
            k = len(simplex)
            # barycentric lambdas 1..k-1 free, lambda_0 = 1 - sum
            constraints = []
            p0 = simplex[0]
            for a, b in halfspaces:
                base = dot(a, p0)
                coeffs = tuple(dot(a, simplex[v]) - base for v in range(1, k))
                constraints.append(Constraint(coeffs, b - base, strict=False))
            for v in range(1, k):
                coeffs = tuple(Fraction(-1) if u == v else Fraction(0) for u in range(1, k))
                constraints.append(Constraint(coeffs, Fraction(0), strict=False))
            constraints.append(
                Constraint(tuple(Fraction(1) for _ in range(1, k)), Fraction(1), strict=False)
            )
            if feasible_point(constraints, k - 1) is not None:
                hit = True
                break
        if hit:
            selected.append(i)
    return tuple(selected)


@dataclass(frozen=True)
class SubspaceRecord:
    sites: frozenset[int]
    span: AffineSubspace

    @property
    def dim(self) -> int:
        return self.span.dim


@dataclass(frozen=True)
class SubspaceReport:
    """Essential versus parasitic equidistance subspaces for one cell."""

    cell: int
    ambient_dim: int
    essential: tuple[SubspaceRecord, ...]
    parasitic: tuple[SubspaceRecord, ...]
    minimal_parasitic_parent: dict[frozenset[int], frozenset[int]]


def _check_genericity(vc: "VoronoiComplex") -> None:
    if getattr(vc, "_genericity_checked", False):
        return
    by_dim: dict[int, list[tuple[frozenset[int], AffineSubspace]]] = {}
    for key, span in vc.subspaces.items():
        by_dim.setdefault(span.dim, []).append((key, span))
    for group in by_dim.values():
        for (k1, s1), (k2, s2) in combinations(group, 2):
            if s1.contains_point(s2.point) and s1 == s2:
                raise GenericityError(
                    f"H{sorted(k1)} and H{sorted(k2)} span the same subspace"
                )
    object.__setattr__(vc, "_genericity_checked", True)


def classify_subspaces(vc: VoronoiComplex, cell: int) -> SubspaceReport:
    """Split every nonempty H(J) into essential or parasitic for one cell.

    Essential subspaces are the spans of the cell's faces.  For each
    essential subspace of dimension <= m-2 the unique smallest parasitic
    subspace containing it is recorded (and must have dimension one
    higher); the parasitic family must be closed under pairwise
    intersection whenever the intersection is itself some H(Q).
    """
    if not 0 <= cell < len(vc.sites):
        raise VoronoiError(f"unknown cell index {cell}")
    witness = vc.simplicity_witness()
    if witness is not None:
        raise NotSimpleError(witness)
    _check_genericity(vc)
    m = vc.dim
    essential_keys = {
        key for key in vc.faces if cell in key and len(key) >= 2
    }
    essential = []
    parasitic = []
    for key in sorted(vc.subspaces, key=lambda j: (len(j), sorted(j))):
        record = SubspaceRecord(key, vc.subspaces[key])
        if key in essential_keys:
            essential.append(record)
        else:
            parasitic.append(record)
    parent: dict[frozenset[int], frozenset[int]] = {}
    for record in essential:
        if record.dim > m - 2:
            continue
        supers = [
            p
            for p in parasitic
            if p.dim > record.dim and _contains(vc, p, record)
        ]
        minimal = [
            p
            for p in supers
            if not any(q is not p and _contains(vc, p, q) for q in supers)
        ]
        if len(minimal) != 1 or minimal[0].dim != record.dim + 1:
            raise VoronoiError(
                f"essential H{sorted(record.sites)} of cell {cell} has no unique "
                f"minimal parasitic parent of dimension {record.dim + 1}"
            )
        parent[record.sites] = minimal[0].sites
    _check_intersection_closure(vc, parasitic)
    return SubspaceReport(cell, m, tuple(essential), tuple(parasitic), parent)


def _contains(vc: VoronoiComplex, big: SubspaceRecord, small: SubspaceRecord) -> bool:
    """big.span contains small.span, using index structure where possible."""
    if big.sites <= small.sites:
        return True
    if big.sites & small.sites:
        # overlapping index sets: containment would force H(big | small) to
        # coincide with H(small), which genericity rules out
        return False
    if not big.span.contains_point(small.span.point):
        return False
    return big.span.contains(small.span)


def _check_intersection_closure(vc: VoronoiComplex, parasitic: Sequence[SubspaceRecord]) -> None:
    parasitic_keys = {p.sites for p in parasitic}
    table = vc.subspaces
    for p1, p2 in combinations(parasitic, 2):
        if p1.sites & p2.sites:
            union = p1.sites | p2.sites
            if union in table and union not in parasitic_keys:
                raise VoronoiError(
                    f"intersection of parasitic H{sorted(p1.sites)} and H{sorted(p2.sites)} "
                    f"is essential H{sorted(union)}"
                )
            continue
        meet = p1.span.intersect(p2.span)
        if meet is None:
            continue
        for key, span in table.items():
            if span.dim == meet.dim and span.contains_point(meet.point) and span == meet:
                if key not in parasitic_keys:
                    raise VoronoiError(
                        f"intersection of parasitic H{sorted(p1.sites)} and "
                        f"H{sorted(p2.sites)} equals essential H{sorted(key)}"
                    )
