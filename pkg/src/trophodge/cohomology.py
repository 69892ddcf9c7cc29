"""Tropical cohomology H^{p,q} of a stratified cell complex.

Three independent computations live here:

* the incidence cochain complex C^q = direct sum of F^p over q-cells,
  with the signed dual face maps as differential;
* a face-poset (derived limit) complex built from strict chains of
  cells, which computes sheaf cohomology of F^p without any
  compactness assumption;
* a Cech complex on the open cover by open stars, used as an oracle.

The incidence complex equals sheaf cohomology only when the complex is
boundary closed (every face at infinity present, so all cells have
compact closure).  On supports with unbounded cells it computes the
compactly supported groups instead, so :func:`cohomology` switches to
the poset complex there.  The oracle cross-checks both.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from trophodge.exactla import QMatrix, QSubspace, sparse_rank
from trophodge.tropspace import TropComplex


def _thread_count():
    env = os.environ.get("TROPHODGE_THREADS", "").strip()
    if env:
        return max(1, int(env))
    return min(4, os.cpu_count() or 1)


@dataclass(frozen=True)
class CochainComplex:
    """Incidence cochain complex for a fixed p.

    ``layout[q]`` lists (cell_id, block_dim) in block order; ``deltas[q]``
    maps C^q to C^{q+1}.
    """

    p: int
    layout: tuple
    deltas: tuple

    def space_dim(self, q):
        if 0 <= q < len(self.layout):
            return sum(d for _, d in self.layout[q])
        return 0

    def delta(self, q):
        if 0 <= q < len(self.deltas):
            return self.deltas[q]
        return QMatrix.zeros(self.space_dim(q + 1), self.space_dim(q))

    def verify_d_squared(self):
        for q in range(len(self.deltas) - 1):
            if not (self.deltas[q + 1] @ self.deltas[q]).is_zero():
                return False
        return True


@dataclass(frozen=True)
class CohomologyResult:
    p: int
    q: int
    dim: int
    representatives: tuple
    layout: tuple
    engine: str


def _assemble(blocks, row_layout, col_layout):
    """Dense matrix from a {(row_block, col_block): QMatrix} dict."""
    rdim = sum(d for _, d in row_layout)
    cdim = sum(d for _, d in col_layout)
    roff = {}
    off = 0
    for key, d in row_layout:
        roff[key] = off
        off += d
    coff = {}
    off = 0
    for key, d in col_layout:
        coff[key] = off
        off += d
    ent = [[Fraction(0)] * cdim for _ in range(rdim)]
    for (rk, ck), m in blocks.items():
        r0, c0 = roff[rk], coff[ck]
        for i, row in enumerate(m.entries):
            for j, v in enumerate(row):
                if v:
                    ent[r0 + i][c0 + j] = v
    return QMatrix(rdim, cdim, ent)


def _assemble_rank(blocks, row_layout, col_layout):
    """Rank of the block matrix, without densifying it."""
    roff = {}
    off = 0
    for key, d in row_layout:
        roff[key] = off
        off += d
    nrows = off
    coff = {}
    off = 0
    for key, d in col_layout:
        coff[key] = off
        off += d
    rows = [dict() for _ in range(nrows)]
    for (rk, ck), m in blocks.items():
        r0, c0 = roff[rk], coff[ck]
        for i, row in enumerate(m.entries):
            for j, v in enumerate(row):
                if v:
                    rows[r0 + i][c0 + j] = v
    return sparse_rank(rows)


def _cache(cx):
    return cx.__dict__.setdefault("_coh_cache", {})


def build_cochain_complex(cx: TropComplex, p: int) -> CochainComplex:
    cache = _cache(cx)
    if ("cochain", p) in cache:
        return cache[("cochain", p)]
    top = cx.top_dim
    layout = []
    for q in range(top + 1):
        layout.append(tuple(
            (cx.cell_id(c), cx.f_lower(c, p).dim) for c in cx.cells_of_dim(q)
        ))
    poset = cx.face_poset()
    deltas = []
    for q in range(top):
        blocks = {}
        for fid, cid, _case, sign in poset:
            face = cx.cells[fid]
            if face.dim != q:
                continue
            coface = cx.cells[cid]
            rho = cx.face_map(face, coface, p).transpose()
            blocks[(cid, fid)] = rho.scale(sign)
        deltas.append(_assemble(blocks, layout[q + 1], layout[q]))
    out = CochainComplex(p, tuple(layout), tuple(deltas))
    cache[("cochain", p)] = out
    return out


def _quotient_representatives(ker: QSubspace, im_rows):
    """Echelon basis of ker modulo the span of im_rows."""
    if not ker.dim:
        return ()
    pivots, red = QMatrix.from_rows(
        [list(r) for r in im_rows], ker.ambient_dim
    ).rref() if im_rows else ([], [])
    vecs = []
    for v in ker.basis:
        v = list(v)
        for i, piv in enumerate(pivots):
            f = v[piv]
            if f:
                v = [a - f * b for a, b in zip(v, red[i])]
        vecs.append(v)
    return QSubspace.span(vecs, ker.ambient_dim).basis


def _incidence_cohomology(cx, p, q):
    cc = build_cochain_complex(cx, p)
    ker = cc.delta(q).kernel_basis()
    prev = cc.delta(q - 1) if q >= 1 else None
    im_rows = []
    if prev is not None and prev.cols:
        im_rows = [
            tuple(row[j] for row in prev.entries) for j in range(prev.cols)
        ]
    reps = _quotient_representatives(ker, im_rows)
    layout = cc.layout[q] if 0 <= q < len(cc.layout) else ()
    return CohomologyResult(p, q, len(reps), tuple(reps), layout, "incidence")


def _poset_chains(cx):
    cache = _cache(cx)
    if "chains" not in cache:
        n = len(cx.cells)
        strict = [
            [j for j in range(n) if j != i and cx.cells[i].is_face_of(cx.cells[j])]
            for i in range(n)
        ]
        levels = [[(i,) for i in range(n)]]
        while True:
            nxt = []
            for chain in levels[-1]:
                for j in strict[chain[-1]]:
                    nxt.append(chain + (j,))
            if not nxt:
                break
            levels.append(nxt)
        cache["chains"] = levels
    return cache["chains"]


def _poset_data(cx, p):
    """Layouts, differentials, and ranks of the face-poset complex."""
    cache = _cache(cx)
    if ("poset", p) in cache:
        return cache[("poset", p)]
    levels = _poset_chains(cx)
    dims = [cx.f_lower(c, p).dim for c in cx.cells]
    rhos = {}

    def rho(i, j):
        if (i, j) not in rhos:
            rhos[(i, j)] = cx.face_map(cx.cells[i], cx.cells[j], p).transpose()
        return rhos[(i, j)]

    layouts = [
        tuple(
            (chain, dims[chain[-1]]) for chain in level if dims[chain[-1]]
        )
        for level in levels
    ]
    live = [set(chain for chain, _ in lay) for lay in layouts]
    ranks = []
    delta0 = None
    for k in range(len(levels) - 1):
        blocks = {}
        for target, _ in layouts[k + 1]:
            for i in range(len(target)):
                source = target[:i] + target[i + 1:]
                if source not in live[k]:
                    continue
                sign = -1 if i % 2 else 1
                if i < len(target) - 1:
                    m = QMatrix.identity(dims[target[-1]]).scale(sign)
                else:
                    m = rho(source[-1], target[-1]).scale(sign)
                key = (target, source)
                blocks[key] = blocks[key] + m if key in blocks else m
        if k == 0:
            delta0 = _assemble(blocks, layouts[1], layouts[0])
            ranks.append(delta0.rank())
        else:
            ranks.append(_assemble_rank(blocks, layouts[k + 1], layouts[k]))
    cache[("poset", p)] = (layouts, delta0, ranks)
    return cache[("poset", p)]


def _poset_cohomology(cx, p, q):
    layouts, delta0, ranks = _poset_data(cx, p)
    if q >= len(layouts) or q < 0:
        return CohomologyResult(p, q, 0, (), (), "poset")
    space = sum(d for _, d in layouts[q])
    rank_out = ranks[q] if q < len(ranks) else 0
    rank_in = ranks[q - 1] if q >= 1 else 0
    dim = space - rank_out - rank_in
    reps = ()
    layout = ()
    if q == 0 and dim:
        ker = (
            delta0.kernel_basis() if delta0 is not None
            else QSubspace.full(space)
        )
        reps = tuple(ker.basis)
        layout = tuple((chain[0], d) for chain, d in layouts[0])
    return CohomologyResult(p, q, dim, reps, layout, "poset")


def cohomology(cx: TropComplex, p: int, q: int) -> CohomologyResult:
    """H^{p,q} of the complex, exact over Q.

    Boundary-closed complexes use the incidence cochain complex; the
    rest use the face-poset complex (the incidence model would compute
    compact supports there).
    """
    cache = _cache(cx)
    if "closed" not in cache:
        cache["closed"] = cx.is_boundary_closed()
    if cache["closed"]:
        return _incidence_cohomology(cx, p, q)
    return _poset_cohomology(cx, p, q)


def relative_cohomology(cx: TropComplex, sub, p: int, q: int) -> CohomologyResult:
    """Cohomology of cochains vanishing on a closed subcomplex."""
    if isinstance(sub, TropComplex):
        sub_cells = set(sub.cells)
    else:
        sub_cells = set(sub)
    mine = set(cx.cells)
    if not sub_cells <= mine:
        raise ValueError("subcomplex has cells outside the complex")
    for c in sub_cells:
        for f in cx.faces_of(c):
            if f not in sub_cells:
                raise ValueError("subcomplex is not closed")
    if not sub_cells:
        return cohomology(cx, p, q)
    cc = build_cochain_complex(cx, p)
    keep = {
        q_: [i for i, (cid, _) in enumerate(cc.layout[q_])
             if cx.cells[cid] not in sub_cells]
        for q_ in range(len(cc.layout))
    }

    def restrict(q_):
        if not (0 <= q_ < len(cc.layout)):
            return ()
        return tuple(cc.layout[q_][i] for i in keep[q_])

    def restricted_delta(q_):
        full = cc.delta(q_)
        row_l = cc.layout[q_ + 1] if q_ + 1 < len(cc.layout) else ()
        col_l = cc.layout[q_] if 0 <= q_ < len(cc.layout) else ()
        rkeep = _block_positions(row_l, keep.get(q_ + 1, []))
        ckeep = _block_positions(col_l, keep.get(q_, []))
        ent = [[full.entries[i][j] for j in ckeep] for i in rkeep]
        return QMatrix(len(rkeep), len(ckeep), ent)

    ker = restricted_delta(q).kernel_basis()
    prev = restricted_delta(q - 1) if q >= 1 else None
    im_rows = []
    if prev is not None and prev.cols:
        im_rows = [tuple(r[j] for r in prev.entries) for j in range(prev.cols)]
    reps = _quotient_representatives(ker, im_rows)
    return CohomologyResult(p, q, len(reps), tuple(reps), restrict(q), "relative")


def _block_positions(layout, kept_indices):
    offs = []
    off = 0
    kept = set(kept_indices)
    out = []
    for i, (_cid, d) in enumerate(layout):
        if i in kept:
            out.extend(range(off, off + d))
        off += d
    return out


def _cech_data(cx, p):
    """Cech complex of F^p on the open-star cover: space dims and ranks."""
    cache = _cache(cx)
    if ("cech", p) in cache:
        return cache[("cech", p)]
    n = len(cx.cells)
    face_sets = [
        frozenset(cx.cell_id(f) for f in cx.faces_of(c)) for c in cx.cells
    ]
    subsets = set()
    for i in range(n):
        members = sorted(face_sets[i])
        for mask in range(1, 1 << len(members)):
            subsets.add(frozenset(
                members[k] for k in range(len(members)) if mask >> k & 1
            ))
    ub = {
        s: tuple(j for j in range(n) if s <= face_sets[j]) for s in subsets
    }
    dims = [cx.f_lower(c, p).dim for c in cx.cells]
    sections = {}

    def gamma(s):
        """Basis of sections over the union of stars of UB(s)."""
        if s not in sections:
            cover = ub[s]
            offs = {}
            off = 0
            for j in cover:
                offs[j] = off
                off += dims[j]
            rows = []
            for a in cover:
                for b in cover:
                    if a == b or not cx.cells[a].is_face_of(cx.cells[b]):
                        continue
                    rho = cx.face_map(cx.cells[a], cx.cells[b], p).transpose()
                    for r in range(dims[b]):
                        row = [Fraction(0)] * off
                        for cidx in range(dims[a]):
                            row[offs[a] + cidx] = rho.entries[r][cidx]
                        row[offs[b] + r] -= 1
                        rows.append(row)
            if rows:
                basis = QMatrix.from_rows(rows, off).kernel_basis()
            elif off:
                basis = QSubspace.full(off)
            else:
                basis = QSubspace.zero(0)
            sections[s] = (basis, offs, off)
        return sections[s]

    by_size = {}
    for s in subsets:
        if gamma(s)[0].dim:
            by_size.setdefault(len(s) - 1, []).append(s)
    max_k = max(by_size) if by_size else -1
    space_dims = {}
    ranks = {}
    for k in range(max_k + 1):
        cols = sorted(by_size.get(k, []), key=sorted)
        rows_s = sorted(by_size.get(k + 1, []), key=sorted)
        col_layout = tuple((s, gamma(s)[0].dim) for s in cols)
        row_layout = tuple((s, gamma(s)[0].dim) for s in rows_s)
        space_dims[k] = sum(d for _, d in col_layout)
        blocks = {}
        for t in rows_s:
            t_sorted = sorted(t)
            gt, offs_t, total_t = gamma(t)
            ws = []
            segments = []
            for i, drop in enumerate(t_sorted):
                s = frozenset(x for x in t if x != drop)
                if s not in ub or not gamma(s)[0].dim:
                    continue
                gs, offs_s, _ = gamma(s)
                start = len(ws)
                for v in gs.basis:
                    w = [Fraction(0)] * total_t
                    for j in ub[t]:
                        for cidx in range(dims[j]):
                            w[offs_t[j] + cidx] = v[offs_s[j] + cidx]
                    ws.append(w)
                segments.append((i, s, gs.dim, start))
            coords_all = gt.coordinates_many(ws) if ws else []
            for i, s, sdim, start in segments:
                sign = -1 if i % 2 else 1
                cols_m = coords_all[start:start + sdim]
                m = QMatrix(
                    gt.dim, sdim,
                    [[cols_m[b][a] for b in range(sdim)]
                     for a in range(gt.dim)],
                ).scale(sign)
                key = (t, s)
                blocks[key] = blocks[key] + m if key in blocks else m
        ranks[k] = _assemble_rank(blocks, row_layout, col_layout)
    cache[("cech", p)] = (space_dims, ranks, max_k)
    return cache[("cech", p)]


def cech_oracle(cx: TropComplex, p: int, q: int) -> int:
    """dim H^q of F^p from the Cech complex on the open-star cover."""
    if len(cx.cells) > 50:
        raise ValueError("cech_oracle is capped at 50 cells")
    space_dims, ranks, max_k = _cech_data(cx, p)
    if q > max_k or q < 0:
        return 0
    return space_dims[q] - ranks.get(q, 0) - (ranks.get(q - 1, 0) if q else 0)


def betti_table(cx: TropComplex):
    """Matrix h[p][q] for 0 <= p,q <= n, computed per (p,q) in parallel."""
    n = cx.base_fan.ambient_rank
    for p in range(n + 1):
        for c in cx.cells:
            cx.f_lower(c, p)
    pq = [(p, q) for p in range(n + 1) for q in range(n + 1)]
    table = [[0] * (n + 1) for _ in range(n + 1)]
    with ThreadPoolExecutor(max_workers=_thread_count()) as pool:
        for (p, q), res in zip(pq, pool.map(
            lambda t: cohomology(cx, t[0], t[1]), pq
        )):
            table[p][q] = res.dim
    return table


def betti_to_tsv(table):
    lines = ["p\\q\t" + "\t".join(str(q) for q in range(len(table[0])))]
    for p, row in enumerate(table):
        lines.append(str(p) + "\t" + "\t".join(str(x) for x in row))
    return "\n".join(lines) + "\n"


def betti_to_json(table):
    records = [
        {"p": p, "q": q, "dim": table[p][q]}
        for p in range(len(table))
        for q in range(len(table[p]))
    ]
    return json.dumps(records, sort_keys=True)


def representatives_to_json(result: CohomologyResult):
    return json.dumps({
        "p": result.p,
        "q": result.q,
        "dim": result.dim,
        "engine": result.engine,
        "layout": [[list(k) if isinstance(k, tuple) else k, d]
                   for k, d in result.layout],
        "representatives": [
            [str(x) for x in vec] for vec in result.representatives
        ],
    }, sort_keys=True)
