"""The compactified fan space as a stratified cell complex.

A cell carries a sedentarity cone sigma (which stratum at infinity it
lives in) and a shape; internally the shape is kept as a lifted cone tau
in N with sigma as a face, so the face relation is uniform:

    (sigma', tau') is a face of (sigma, tau)  iff
    sigma is a face of sigma' and tau' is a face of tau.

Multi-tangent spaces F_p live in lex wedge coordinates of the stratum
lattice N_sigma; F^p is presented as the dual via the pairing with the
canonical echelon basis of F_p.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from trophodge import fans
from trophodge.exactla import (
    QMatrix,
    QSubspace,
    _minor,
    wedge_matrix,
    wedge_power,
)
from trophodge.fans import Cone, Fan, faces, orbit_lattice


@dataclass(frozen=True)
class Cell:
    """Cell of a stratified complex: sedentarity cone plus lifted shape cone."""

    sedentarity: Cone
    tau: Cone

    def __post_init__(self):
        if self.sedentarity not in faces(self.tau):
            raise ValueError("sedentarity must be a face of the lifted shape")

    @property
    def dim(self):
        return self.tau.dim - self.sedentarity.dim

    @property
    def stratum_rank(self):
        return self.sedentarity.ambient_rank - self.sedentarity.dim

    def shape(self):
        """The shape cone in the coordinates of N_sigma."""
        proj = orbit_lattice(self.sedentarity).proj
        rays = []
        for r in self.tau.rays:
            img = proj.to_q().apply(r)
            if any(x != 0 for x in img):
                rays.append(fans.primitive(img))
        return Cone(self.stratum_rank, rays)

    def span(self):
        """Q-span of the shape inside N_{sigma,Q}."""
        proj = orbit_lattice(self.sedentarity).proj.to_q()
        return QSubspace.span([proj.apply(r) for r in self.tau.rays], self.stratum_rank)

    def is_face_of(self, other):
        return (
            other.sedentarity in faces(self.sedentarity)
            and self.tau in faces(other.tau)
        )

    def sort_key(self):
        return (self.dim, self.sedentarity.dim, self.sedentarity.rays, self.tau.rays)

    def label(self):
        return f"sed={list(self.sedentarity.rays)} shape={list(self.tau.rays)}"


@dataclass(frozen=True)
class MultiTangent:
    """F_p(P) with its dual presentation.

    ``f_p`` is a subspace of wedge^p N_{sigma,Q} in lex coordinates;
    ``f_up`` is the isomorphic dual presentation in wedge^p (M cap
    sigma-perp)_Q: coordinates of a covector are its pairings with the
    canonical basis of ``f_p``, and ``annihilator`` is the kernel of the
    restriction from the full dual wedge.
    """

    cell_id: int
    p: int
    f_p: QSubspace
    f_up: QSubspace
    annihilator: QSubspace

    @property
    def dim(self):
        return self.f_p.dim


class TropComplex:
    """Finite stratified cell complex over a base fan."""

    def __init__(self, base_fan: Fan, cells, validate=True):
        seen = {}
        for cell in cells:
            if not base_fan.contains_cone(cell.sedentarity):
                raise ValueError("cell sedentarity is not a cone of the base fan")
            seen[(cell.sedentarity, cell.tau)] = cell
        ordered = tuple(sorted(seen.values(), key=Cell.sort_key))
        self.base_fan = base_fan
        self.cells = ordered
        self._index = {cell: i for i, cell in enumerate(ordered)}
        self._f_cache = {}
        self._map_cache = {}
        self._poset_cache = None
        if validate:
            self._validate()

    def __eq__(self, other):
        return (
            isinstance(other, TropComplex)
            and self.base_fan == other.base_fan
            and self.cells == other.cells
        )

    def __repr__(self):
        return f"TropComplex(cells={len(self.cells)})"

    # -- construction -------------------------------------------------

    @classmethod
    def tautological(cls, fan: Fan, structure: Fan | None = None):
        """Cells C_{sigma,tau} for sigma in the fan, tau a coface in `structure`.

        With the default structure (the fan itself) this is the tautological
        complex of Trop(T_Sigma).  A finer or larger complete structure fan
        gives the same space a different cell structure.
        """
        if structure is None:
            structure = fan
        elif not fan.is_subfan_of(structure):
            raise ValueError("base fan must be a subfan of the structure fan")
        cells = [
            Cell(sigma, tau)
            for tau in structure.cones
            for sigma in faces(tau)
            if fan.contains_cone(sigma)
        ]
        return cls(fan, cells, validate=False)

    @classmethod
    def from_json_dict(cls, data):
        base = fans.from_json_dict(data["base_fan"])
        rays = [fans.primitive(r) for r in data["base_fan"]["rays"]]
        cells = []
        for rec in data["cells"]:
            sed = Cone(base.ambient_rank, [rays[i] for i in rec["sedentarity"]])
            if not base.contains_cone(sed):
                raise ValueError("cell sedentarity is not a cone of the base fan")
            sec = _section(sed)
            lifted = [sec.apply(r) for r in rec["rays"]]
            tau = Cone(base.ambient_rank, list(sed.rays) + [r for r in lifted if any(r)])
            cells.append(Cell(sed, tau))
        return cls(base, cells)

    def to_json_dict(self):
        fan_dict = fans.to_json_dict(self.base_fan)
        ray_index = {tuple(r): i for i, r in enumerate(fan_dict["rays"])}
        recs = []
        for cell in self.cells:
            recs.append({
                "sedentarity": sorted(ray_index[r] for r in cell.sedentarity.rays),
                "rays": [list(r) for r in cell.shape().rays],
            })
        return {"base_fan": fan_dict, "cells": recs}

    # -- poset --------------------------------------------------------

    def cell_id(self, cell):
        return self._index[cell]

    def cells_of_dim(self, d):
        return tuple(c for c in self.cells if c.dim == d)

    @property
    def top_dim(self):
        return max((c.dim for c in self.cells), default=0)

    def is_face(self, face, coface):
        return face.is_face_of(coface)

    def faces_of(self, cell):
        return tuple(c for c in self.cells if c.is_face_of(cell))

    def cofaces_of(self, cell):
        return tuple(c for c in self.cells if cell.is_face_of(c))

    def stratum_cofaces(self, cell):
        """Cofaces in the same stratum, including the cell itself."""
        return tuple(
            c for c in self.cofaces_of(cell) if c.sedentarity == cell.sedentarity
        )

    def face_poset(self):
        """Codimension-1 face pairs: (face_id, coface_id, case, sign)."""
        if self._poset_cache is None:
            out = []
            for coface in self.cells:
                for face in self.cells:
                    if face.dim != coface.dim - 1 or not face.is_face_of(coface):
                        continue
                    case = _case_tag(face, coface)
                    sign = self._incidence_sign(face, coface)
                    out.append((self._index[face], self._index[coface], case, sign))
            self._poset_cache = tuple(out)
        return self._poset_cache

    def is_boundary_closed(self):
        """True iff every face at infinity of every cell is present.

        Exactly then is the support compact and the plain incidence
        cochain complex computes sheaf cohomology.
        """
        cell_set = set(self.cells)
        for cell in self.cells:
            for sig in faces(cell.tau):
                if cell.sedentarity in faces(sig):
                    if Cell(sig, cell.tau) not in cell_set:
                        return False
        return True

    def subcomplex(self, predicate):
        kept = [c for c in self.cells if predicate(c)]
        return TropComplex(self.base_fan, kept, validate=False)

    def is_closed_subcomplex(self, other):
        mine = set(self.cells)
        if not all(c in mine for c in other.cells):
            return False
        theirs = set(other.cells)
        return all(f in theirs for c in other.cells for f in self.faces_of(c))

    # -- multi-tangent spaces -----------------------------------------

    def f_lower(self, cell, p) -> MultiTangent:
        key = (cell, p)
        if key not in self._f_cache:
            total = QSubspace.zero(math.comb(cell.stratum_rank, p)) if p else None
            for coface in self.stratum_cofaces(cell):
                piece = wedge_power(coface.span(), p)
                total = piece if total is None else total.sum(piece)
            ann = (
                total.matrix().kernel_basis()
                if total.dim
                else QSubspace.full(total.ambient_dim)
            )
            f_up = QSubspace(total.ambient_dim, total.basis)
            self._f_cache[key] = MultiTangent(
                self._index[cell], p, total, f_up, ann
            )
        return self._f_cache[key]

    def face_map(self, face, coface, p) -> QMatrix:
        """i_{P2 < P1}: F_p(P1) -> F_p(P2) in the canonical bases."""
        key = (face, coface, p)
        if key in self._map_cache:
            return self._map_cache[key]
        if not face.is_face_of(coface):
            raise ValueError("face_map requires a face pair")
        src = self.f_lower(coface, p).f_p
        dst = self.f_lower(face, p).f_p
        if face.sedentarity == coface.sedentarity:
            images = list(src.basis)
        else:
            if face.tau != coface.tau:
                mid = Cell(face.sedentarity, coface.tau)
                if mid not in self._index:
                    raise ValueError(
                        "composite face map needs the intermediate cell "
                        f"({mid.label()}) in the complex"
                    )
            proj = _stratum_projection(coface.sedentarity, face.sedentarity)
            wedge = wedge_matrix(proj, p)
            images = [wedge.apply(v) for v in src.basis]
        cols = []
        for img in images:
            coords = dst.coordinates(img)
            if coords is None:
                raise ValueError("face map image leaves the target F_p")
            cols.append(coords)
        mat = QMatrix(
            dst.dim, src.dim,
            [[cols[j][i] for j in range(src.dim)] for i in range(dst.dim)],
        )
        self._map_cache[key] = mat
        return mat

    # -- orientation and signs ----------------------------------------

    def _incidence_sign(self, face, coface):
        bp = coface.span()
        if face.sedentarity == coface.sedentarity:
            proj = orbit_lattice(coface.sedentarity).proj.to_q()
            inward = [Fraction(0)] * coface.stratum_rank
            for r in coface.tau.rays:
                if r not in face.tau.rays:
                    img = proj.apply(r)
                    inward = [a + b for a, b in zip(inward, img)]
            first = [-x for x in inward]
            lifted = list(face.span().basis)
        else:
            proj = orbit_lattice(coface.sedentarity).proj.to_q()
            new_rays = [
                r for r in face.sedentarity.rays if r not in coface.sedentarity.rays
            ]
            first = [Fraction(0)] * coface.stratum_rank
            for r in new_rays:
                img = proj.apply(r)
                first = [a + b for a, b in zip(first, img)]
            b = _stratum_projection(coface.sedentarity, face.sedentarity)
            bpmat_t = bp.matrix().transpose()
            lift_system = b @ bpmat_t
            lifted = []
            for v in face.span().basis:
                coeffs = lift_system.solve(v)
                lifted.append(bpmat_t.apply(coeffs))
        rows = []
        for vec in [first] + lifted:
            coords = bp.coordinates(vec)
            if coords is None:
                raise ValueError("orientation vector leaves the coface span")
            rows.append(coords)
        d = bp.dim
        det = _minor(rows, range(d), range(d))
        if det == 0:
            raise ValueError("degenerate incidence orientation")
        return 1 if det > 0 else -1

    # -- validation ---------------------------------------------------

    def _validate(self):
        cell_set = set(self.cells)
        by_sed = {}
        for cell in self.cells:
            by_sed.setdefault(cell.sedentarity, []).append(cell)
        for cell in self.cells:
            for sub in faces(cell.tau):
                if cell.sedentarity in faces(sub):
                    if Cell(cell.sedentarity, sub) not in cell_set:
                        raise ValueError("complex is not closed under faces")
        for sed, group in by_sed.items():
            shapes = [c.tau for c in group]
            for i, a in enumerate(shapes):
                for b in shapes[i + 1:]:
                    common = set(faces(a)) & set(faces(b))
                    top = max(common, key=lambda c: c.dim)
                    if sum(1 for c in common if c.dim == top.dim) != 1:
                        raise ValueError("cells intersect badly within a stratum")
                    if top in (a, b):
                        continue
                    if not fans._intersection_inside_face(
                        a.ambient_rank, a, b, top
                    ):
                        raise ValueError(
                            "cell intersection is not a common face"
                        )


def _case_tag(face, coface):
    if face.sedentarity == coface.sedentarity:
        return 1
    if face.tau == coface.tau:
        return 2
    return 3


def _section(sed: Cone) -> QMatrix:
    """Right inverse of the stratum projection N -> N_sigma."""
    n = sed.ambient_rank
    proj = orbit_lattice(sed).proj.to_q()
    cols = []
    for i in range(proj.rows):
        e = [Fraction(1) if j == i else Fraction(0) for j in range(proj.rows)]
        sol = proj.solve(e)
        cols.append(sol)
    return QMatrix(n, proj.rows, [[cols[j][i] for j in range(proj.rows)] for i in range(n)])


def _stratum_projection(sed_small: Cone, sed_big: Cone) -> QMatrix:
    """Matrix of N_{sigma1} -> N_{sigma2} for sigma1 a face of sigma2."""
    p1 = orbit_lattice(sed_small).proj.to_q()
    p2 = orbit_lattice(sed_big).proj.to_q()
    p1t = p1.transpose()
    rows = []
    for row in p2.entries:
        sol = p1t.solve(row)
        if sol is None:
            raise ValueError("stratum projections are not nested")
        rows.append(sol)
    return QMatrix(p2.rows, p1.rows, rows)


def tautological_complex(fan: Fan, structure: Fan | None = None) -> TropComplex:
    return TropComplex.tautological(fan, structure)


def _minimal_containing_cone(fan: Fan, eta: Cone):
    best = None
    for sigma in fan.cones:
        if all(sigma.contains(r) for r in eta.rays):
            if best is None or sigma.dim < best.dim:
                best = sigma
    return best


def refined_complex(fan: Fan, refinement: Fan) -> TropComplex:
    """Cell structure on Trop(T_fan) whose shapes come from a refinement.

    The refinement must contain every cone of the fan and may subdivide
    the rest of its (possibly larger) support, as when refining a
    completion of a non-complete fan.  A cone tau' of the refinement
    reaches the stratum of sigma exactly when some face of tau' has sigma
    as its minimal containing cone, and the lifted shape of that cell is
    sigma + tau'.  With the fan itself as the refinement this reproduces
    the tautological complex.  Subdividing a base cone is rejected: the
    corner cell of its stratum could no longer name its cofaces through
    lifted cone faces.
    """
    n = fan.ambient_rank
    for sigma in fan.cones:
        if not refinement.contains_cone(sigma):
            raise ValueError("refinement must keep every base cone intact")
    cells = set()
    for taup in refinement.cones:
        for eta in faces(taup):
            sigma = _minimal_containing_cone(fan, eta)
            if sigma is None:
                continue
            lift = Cone(n, list(sigma.rays) + list(taup.rays))
            cells.add(Cell(sigma, lift))
    return TropComplex(fan, cells)


def torus_complex(n: int) -> TropComplex:
    """R^n with the orthant cell structure (the fan {0} has one cell only)."""
    return TropComplex.tautological(fans.torus(n), fans.orthant_fan(n))


def affine_complex(n: int) -> TropComplex:
    """Trop(A^n) with the orthant cell structure."""
    return TropComplex.tautological(fans.affine_space(n), fans.orthant_fan(n))


def tropical_line() -> TropComplex:
    """The tropical line in R^2: a vertex and rays e1, e2, -e1-e2."""
    t2 = fans.torus(2)
    zero = Cone(2, [])
    cells = [Cell(zero, zero)]
    for ray in [(1, 0), (0, 1), (-1, -1)]:
        cells.append(Cell(zero, Cone(2, [ray])))
    return TropComplex(t2, cells)


def load(path) -> TropComplex:
    with open(path) as fh:
        return TropComplex.from_json_dict(json.load(fh))
