"""Combinatorial models of the glued projective varieties built on a
Voronoi subcomplex: per-cell blow-up ledgers over parasitic subspaces,
codimension-1 gluings, quotient strata, the dual complex, cohomology
dimensions of the structure sheaf under the rational-strata hypothesis,
and the triangular-pillow projectivity test.

One chart per selected top cell.  Gluings identify the chart faces lying
over a shared codimension-1 face, and strata are the equivalence classes
of chart faces under the transitive closure of all gluings (union-find,
class representatives by lowest (chart, face) pair).  The ledgers are
what keeps spurious identifications from appearing: with them disabled
(a test hook) the classes may merge charts whose cells do not share a
face, reproducing the classical failure of the naive quotient.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from .complexes import DeltaComplex, build_complex, delta_isomorphic
from .voronoi import (
    NotSimpleError,
    SubspaceRecord,
    VoronoiComplex,
    classify_subspaces,
    delaunay_dual,
)


class SncError(ValueError):
    pass


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def add(self, x) -> None:
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # deterministic representative: the smaller key wins
            lo, hi = sorted((ra, rb))
            self.parent[hi] = lo

    def classes(self) -> dict:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return out


@dataclass(frozen=True)
class BlowupLedger:
    """Ordered blow-up centers for one chart, by increasing dimension.

    Every parasitic subspace of the cell is listed.  Centers of dimension
    at most m-2 are genuine blow-up centers and must be pairwise disjoint
    within their stage once earlier stages removed their intersections;
    codimension-1 entries are kept for bookkeeping (blowing up a divisor
    changes nothing) and are exempt from the disjointness requirement.
    """

    cell: int
    centers: tuple[SubspaceRecord, ...]

    def centers_of_dim(self, d: int) -> tuple[SubspaceRecord, ...]:
        return tuple(c for c in self.centers if c.dim == d)

    def keys(self) -> tuple[frozenset[int], ...]:
        return tuple(c.sites for c in self.centers)


def blowup_ledger(vc: VoronoiComplex, cell: int) -> BlowupLedger:
    """All parasitic subspaces for the cell, sorted by (dimension, index set)."""
    report = classify_subspaces(vc, cell)
    centers = sorted(report.parasitic, key=lambda r: (r.dim, sorted(r.sites)))
    ledger = BlowupLedger(cell, tuple(centers))
    _verify_stage_disjointness(vc, ledger)
    return ledger


def _verify_stage_disjointness(vc: VoronoiComplex, ledger: BlowupLedger) -> None:
    m = vc.dim
    for d in range(0, max(m - 1, 0)):
        stage = ledger.centers_of_dim(d)
        for a_idx in range(len(stage)):
            for b_idx in range(a_idx + 1, len(stage)):
                a, b = stage[a_idx], stage[b_idx]
                meet = a.span.intersect(b.span)
                if meet is None:
                    continue
                covered = any(
                    c.dim < d and c.span.contains_point(meet.point) and c.span.contains(meet)
                    for c in ledger.centers
                )
                if not covered:
                    raise SncError(
                        f"stage-{d} centers H{sorted(a.sites)} and H{sorted(b.sites)} of cell "
                        f"{ledger.cell} overlap outside every earlier center"
                    )


@dataclass(frozen=True)
class Chart:
    cell: int
    ledger: BlowupLedger
    faces: tuple[frozenset[int], ...]


@dataclass(frozen=True)
class Stratum:
    key: frozenset[int]
    members: tuple[tuple[int, frozenset[int]], ...]
    dim: int
    is_face: bool


@dataclass(frozen=True)
class SncModel:
    vc: VoronoiComplex
    selection: tuple[int, ...]
    charts: dict[int, Chart]
    gluings: tuple[tuple[int, int], ...]
    strata: tuple[Stratum, ...]
    all_classes: tuple[Stratum, ...]
    ledgers_applied: bool
    rational: dict[frozenset[int], bool]
    sphere_class: dict[frozenset[int], bool]

    @property
    def dim(self) -> int:
        return self.vc.dim

    def components(self) -> tuple[Stratum, ...]:
        return tuple(s for s in self.strata if len(s.key) == 1)

    def stratum_by_key(self, key) -> Optional[Stratum]:
        target = frozenset(key)
        for s in self.strata:
            if s.key == target:
                return s
        return None

    def with_flags(self, rational=None, sphere_class=None) -> "SncModel":
        new_rational = dict(self.rational)
        new_sphere = dict(self.sphere_class)
        if rational:
            for key, value in rational.items():
                new_rational[frozenset(key)] = bool(value)
        if sphere_class:
            for key, value in sphere_class.items():
                new_sphere[frozenset(key)] = bool(value)
        return SncModel(
            self.vc, self.selection, self.charts, self.gluings, self.strata,
            self.all_classes, self.ledgers_applied, new_rational, new_sphere,
        )

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "selection": list(self.selection),
            "charts": [
                {
                    "cell": c.cell,
                    "ledger": [
                        {"sites": sorted(r.sites), "dim": r.dim} for r in c.ledger.centers
                    ],
                    "faces": [sorted(f) for f in c.faces],
                }
                for _, c in sorted(self.charts.items())
            ],
            "gluings": [list(g) for g in self.gluings],
            "strata": [
                {
                    "key": sorted(s.key),
                    "dim": s.dim,
                    "members": [[ch, sorted(j)] for ch, j in s.members],
                }
                for s in self.strata
            ],
            "flags": {
                "rational": {
                    json.dumps(sorted(k)): v for k, v in sorted(
                        self.rational.items(), key=lambda kv: sorted(kv[0])
                    )
                },
                "sphere_class": {
                    json.dumps(sorted(k)): v for k, v in sorted(
                        self.sphere_class.items(), key=lambda kv: sorted(kv[0])
                    )
                },
            },
            "ledgers_applied": self.ledgers_applied,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True) + "\n"


def build_snc(
    vc: VoronoiComplex,
    selection: Sequence[int],
    *,
    apply_ledgers: bool = True,
) -> SncModel:
    """Charts, gluings and strata over the selected pure top-dimensional cells.

    apply_ledgers=False is a test hook that skips the parasitic blow-ups,
    so the gluing closure also identifies chart loci over parasitic
    subspaces; the resulting spurious classes reproduce the failure of
    the naive chart quotient.
    """
    cells = sorted(set(selection))
    if not cells:
        raise SncError("empty selection; the model needs at least one top cell")
    for c in cells:
        if not 0 <= c < len(vc.sites):
            raise SncError(f"unknown cell index {c}")
    witness = vc.simplicity_witness()
    if witness is not None:
        raise NotSimpleError(witness)
    chosen = set(cells)
    ledgers = {i: blowup_ledger(vc, i) for i in cells}
    charts = {
        i: Chart(
            i,
            ledgers[i],
            tuple(sorted((f.sites for f in vc.faces_of_cell(i)), key=sorted)),
        )
        for i in cells
    }
    gluings = []
    for a_idx in range(len(cells)):
        for b_idx in range(a_idx + 1, len(cells)):
            i, j = cells[a_idx], cells[b_idx]
            if frozenset((i, j)) in vc.faces:
                gluings.append((i, j))
    for i, j in gluings:
        _verify_ledger_match(vc, ledgers[i], ledgers[j], frozenset((i, j)))

    uf = _UnionFind()
    face_keys = set(vc.faces)
    glued_keys = face_keys if apply_ledgers else face_keys | set(vc.subspaces)
    for key in glued_keys:
        for i in key & chosen:
            uf.add((i, tuple(sorted(key))))
    for i, j in gluings:
        pair = {i, j}
        for key in glued_keys:
            if pair <= key:
                uf.union((i, tuple(sorted(key))), (j, tuple(sorted(key))))

    classes = []
    for rep, members in sorted(uf.classes().items()):
        key = frozenset(rep[1])
        members = tuple(sorted((ch, frozenset(j)) for ch, j in members))
        dim = vc.dim - (len(key) - 1)
        classes.append(Stratum(key, members, dim, key in face_keys))
    strata = tuple(
        s for s in classes if s.is_face and s.key <= chosen
    )
    rational = {s.key: True for s in strata}
    sphere = {s.key: True for s in strata}
    return SncModel(
        vc, tuple(cells), charts, tuple(gluings), strata, tuple(classes),
        apply_ledgers, rational, sphere,
    )


def _verify_ledger_match(vc, ledger_a: BlowupLedger, ledger_b: BlowupLedger, glue_key) -> None:
    """The two charts must blow up the same centers inside the shared face."""
    wall = vc.subspaces[glue_key]

    def restriction(ledger: BlowupLedger):
        out = []
        for c in ledger.centers:
            if glue_key <= c.sites:
                out.append(c.sites)
            elif not (c.sites & glue_key) and wall.contains_point(c.span.point) and wall.contains(c.span):
                out.append(c.sites)
        return sorted(out, key=sorted)

    if restriction(ledger_a) != restriction(ledger_b):
        raise SncError(
            f"ledgers of cells {ledger_a.cell} and {ledger_b.cell} disagree on their "
            f"shared face {sorted(glue_key)}"
        )


def dual_complex(model: SncModel) -> DeltaComplex:
    """One (|J|-1)-cell per stratum; checked against the Delaunay dual.

    The check is an honest graded isomorphism search, not a comparison of
    the shared index bookkeeping.
    """
    by_dim: list[list[tuple[int, ...]]] = []
    for s in model.strata:
        j = tuple(sorted(s.key))
        k = len(j) - 1
        while len(by_dim) <= k:
            by_dim.append([])
        by_dim[k].append(j)
    if not by_dim:
        raise SncError("model has no strata")
    for layer in by_dim:
        layer.sort()
    index = [{j: i for i, j in enumerate(layer)} for layer in by_dim]
    spec: list[list[list[int]]] = [[[] for _ in by_dim[0]]]
    for k in range(1, len(by_dim)):
        layer = []
        for j in by_dim[k]:
            faces = []
            for drop in range(len(j)):
                sub = j[:drop] + j[drop + 1 :]
                if sub not in index[k - 1]:
                    raise SncError(f"stratum {list(j)} lacks boundary stratum {list(sub)}")
                faces.append(index[k - 1][sub])
            layer.append(faces)
        spec.append(layer)
    labels = [[str(j[0]) for j in by_dim[0]]] + [[None] * len(l) for l in by_dim[1:]]
    out = build_complex(spec, labels)
    reference = delaunay_dual(model.vc, model.selection)
    if not delta_isomorphic(out, reference):
        raise SncError("dual complex is not isomorphic to the Delaunay dual")
    return out


def blowup_dual_complex(d: DeltaComplex, center) -> DeltaComplex:
    """Blow-up behavior of the dual complex.

    A stratum center (dim, index) deletes its cell together with every
    cell whose closure contains it (the open star); any center that is
    not a stratum leaves the complex unchanged.
    """
    if center == "non-stratum":
        return d
    dim, idx = center
    if not (0 <= dim <= d.dim and 0 <= idx < d.n_cells(dim)):
        raise SncError(f"unknown cell ({dim},{idx})")
    doomed: list[set[int]] = [set() for _ in range(d.dim + 1)]
    doomed[dim].add(idx)
    for k in range(dim + 1, d.dim + 1):
        for i, faces in enumerate(d.cells[k]):
            if any(f in doomed[k - 1] for f in faces):
                doomed[k].add(i)
    keep: list[list[int]] = [
        [i for i in range(d.n_cells(k)) if i not in doomed[k]] for k in range(d.dim + 1)
    ]
    remap = [{old: new for new, old in enumerate(layer)} for layer in keep]
    cells: list[list[list[int]]] = [[[] for _ in keep[0]]]
    labels: list[list] = [[d.labels[0][i] for i in keep[0]]]
    for k in range(1, d.dim + 1):
        layer = []
        for old in keep[k]:
            layer.append([remap[k - 1][f] for f in d.cells[k][old]])
        cells.append(layer)
        labels.append([d.labels[k][i] for i in keep[k]])
    while len(cells) > 1 and not cells[-1]:
        cells.pop()
        labels.pop()
    return build_complex(cells, labels)


def sheaf_cohomology_dims(model: SncModel) -> tuple[int, ...]:
    """dim H^i(Z, O_Z) for the glued variety, all strata rational.

    Under the rationality hypothesis these equal the rational Betti
    numbers of the dual complex; a single non-rational stratum makes the
    identification unavailable and is refused.
    """
    bad = [sorted(k) for k, ok in sorted(model.rational.items(), key=lambda kv: sorted(kv[0])) if not ok]
    if bad:
        raise SncError(f"strata flagged non-rational: {bad}")
    return dual_complex(model).all_betti()


@dataclass(frozen=True)
class PillowConstant:
    """A gluing constant: positive modulus times a rational turn."""

    modulus: Fraction
    turns: Fraction

    def __post_init__(self):
        if self.modulus <= 0:
            raise SncError("pillow constant needs a positive modulus")

    @classmethod
    def build(cls, modulus, turns) -> "PillowConstant":
        return cls(Fraction(modulus), Fraction(turns))


def pillow_projectivity(
    c_x: PillowConstant, c_y: PillowConstant, c_z: PillowConstant
) -> tuple[bool, Optional[int]]:
    """Projectivity of the two-triangle pillow surface.

    The glued surface is projective exactly when the product of the three
    constants is a root of unity; in modulus-and-turns form that means the
    moduli multiply to 1.  Returns the minimal r with (c_x c_y c_z)^r = 1
    when projective.
    """
    modulus = c_x.modulus * c_y.modulus * c_z.modulus
    if modulus != 1:
        return False, None
    total = (c_x.turns + c_y.turns + c_z.turns) % 1
    return True, total.denominator


class Pi1Verdict(Enum):
    ISOMORPHISM_CLAIMED = "isomorphism_claimed"
    UNKNOWN = "unknown"


def pi1_link_criterion(model: SncModel) -> Pi1Verdict:
    """Claim pi_1(link) = pi_1(dual complex) when every component carries a
    2-sphere class pairing to 1 with the conormal Chern class; anything
    less is unknown, never a refutation."""
    components = model.components()
    if not components:
        raise SncError("no components")
    if all(model.sphere_class[c.key] for c in components):
        return Pi1Verdict.ISOMORPHISM_CLAIMED
    return Pi1Verdict.UNKNOWN
