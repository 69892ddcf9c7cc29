"""Weight spectral sequence of a smooth toric variety.

E_1^{p,q} is the direct sum over p-dimensional cones of the lattice
realization wedge^{q-p}(M cap sigma-perp)_Q of the orbit cohomology;
d_1 is the signed Gersten residue (contraction with the new ray's
primitive normal, then restriction to the smaller perp lattice).
Everything is exact over Q.
"""

from __future__ import annotations

import functools
import json
import math
from dataclasses import dataclass
from fractions import Fraction

from trophodge import fans
from trophodge.exactla import (
    QMatrix,
    QSubspace,
    lex_subsets,
    wedge_matrix,
)
from trophodge.fans import Fan, faces, orbit_lattice


@dataclass(frozen=True)
class SSPage:
    """One page of the spectral sequence.

    ``dims[(p, q)]`` holds the entry dimension; ``layouts[(p, q)]`` the
    per-cone block layout of the ambient E_1 term; on the E_2 page
    ``representatives[(p, q)]`` is a basis of ker/im in E_1 coordinates.
    """

    level: int
    rank: int
    dims: dict
    layouts: dict
    representatives: dict

    def dim(self, p, q):
        return self.dims.get((p, q), 0)

    def table(self):
        n = self.rank
        return [[self.dim(p, q) for q in range(n + 1)] for p in range(n + 1)]

    def to_json(self):
        entries = [
            {"p": p, "q": q, "dim": d}
            for (p, q), d in sorted(self.dims.items())
            if d
        ]
        return json.dumps({"level": self.level, "entries": entries}, sort_keys=True)


def _require_smooth(fan):
    if not fan.is_smooth():
        raise ValueError("the weight spectral sequence needs a smooth fan")


def _e1_layout(fan, p, q):
    n = fan.ambient_rank
    k = q - p
    if k < 0 or k > n - p:
        return ()
    return tuple((sigma, math.comb(n - p, k)) for sigma in fan.cones_of_dim(p))


def _e1_dim(fan, p, q):
    return sum(d for _, d in _e1_layout(fan, p, q))


def e1_page(fan: Fan) -> SSPage:
    _require_smooth(fan)
    n = fan.ambient_rank
    dims = {}
    layouts = {}
    for p in range(n + 1):
        for q in range(n + 1):
            lay = _e1_layout(fan, p, q)
            layouts[(p, q)] = lay
            dims[(p, q)] = sum(d for _, d in lay)
    return SSPage(1, n, dims, layouts, {})


def _contraction_matrix(m, k, coeffs):
    """Contraction wedge^k Q^m -> wedge^{k-1} Q^m with the functional coeffs."""
    rows_idx = lex_subsets(m, k - 1)
    cols_idx = lex_subsets(m, k)
    pos = {s: i for i, s in enumerate(rows_idx)}
    ent = [[Fraction(0)] * len(cols_idx) for _ in rows_idx]
    for j, s in enumerate(cols_idx):
        for a, elem in enumerate(s):
            rest = s[:a] + s[a + 1:]
            sign = -1 if a % 2 else 1
            ent[pos[rest]][j] += sign * coeffs[elem]
    return QMatrix(len(rows_idx), len(cols_idx), ent)


def _epsilon(sigma, tau):
    """Incidence sign and the new ray for a one-ray cone extension.

    The residue blocks L . i_rho already anticommute around every square
    sigma < tau_1, tau_2 < upsilon (interior products with distinct rays
    anticommute and the splittings drop out), so the combinatorial sign
    is trivial; a position-based sign would double instead of cancel.
    """
    new = [r for r in tau.rays if r not in sigma.rays]
    if len(new) != 1:
        raise ValueError("expected a one-ray extension in a smooth fan")
    return 1, new[0]


def d1(fan: Fan, p: int, q: int, corrupt_sign: bool = False) -> QMatrix:
    """The residue differential E_1^{p,q} -> E_1^{p+1,q} as a block matrix.

    ``corrupt_sign`` flips one block sign; it exists as a negative
    control for the verification suite.
    """
    _require_smooth(fan)
    src = _e1_layout(fan, p, q)
    dst = _e1_layout(fan, p + 1, q)
    k = q - p
    rows = sum(d for _, d in dst)
    cols = sum(d for _, d in src)
    ent = [[Fraction(0)] * cols for _ in range(rows)]
    roff = {}
    off = 0
    for sigma, d in dst:
        roff[sigma] = off
        off += d
    coff = {}
    off = 0
    for sigma, d in src:
        coff[sigma] = off
        off += d
    first_block = True
    for sigma, sdim in src:
        if not sdim:
            continue
        a_sigma = orbit_lattice(sigma).m_perp_basis
        for tau, tdim in dst:
            if sigma not in faces(tau) or not tdim:
                continue
            eps, rho = _epsilon(sigma, tau)
            if corrupt_sign and first_block:
                eps = -eps
                first_block = False
            pair = [
                sum(Fraction(a) * b for a, b in zip(vec, rho))
                for vec in a_sigma
            ]
            contr = _contraction_matrix(len(a_sigma), k, pair)
            m0 = _splitting_vector(a_sigma, pair)
            a_tau = orbit_lattice(tau).m_perp_basis
            restr = _restriction_matrix(a_sigma, a_tau, pair, m0)
            block = (wedge_matrix(restr, k - 1) @ contr).scale(eps)
            r0, c0 = roff[tau], coff[sigma]
            for i, row in enumerate(block.entries):
                for j, v in enumerate(row):
                    if v:
                        ent[r0 + i][c0 + j] = v
    return QMatrix(rows, cols, ent)


def _splitting_vector(a_sigma, pair):
    """Coordinates (in the sigma-perp basis) of m0 with <m0, rho> = 1."""
    sol = QMatrix(1, len(a_sigma), [pair]).solve([Fraction(1)])
    if sol is None:
        raise ValueError("ray pairs to zero with the whole perp lattice")
    return sol


def _restriction_matrix(a_sigma, a_tau, pair, m0_coords):
    """Matrix of x -> x - <x,rho> m0 from sigma-perp to tau-perp bases."""
    n = len(a_sigma[0]) if a_sigma else 0
    m0 = [
        sum(c * Fraction(v[i]) for c, v in zip(m0_coords, a_sigma))
        for i in range(n)
    ]
    images = []
    for vec, pr in zip(a_sigma, pair):
        images.append(tuple(Fraction(x) - pr * y for x, y in zip(vec, m0)))
    if not a_tau:
        return QMatrix(0, len(a_sigma), [])
    at = QMatrix.from_rows([list(r) for r in a_tau], n).transpose()
    cols = at.solve_many(images)
    if any(c is None for c in cols):
        raise ValueError("restriction image leaves the tau-perp lattice")
    return QMatrix(
        len(a_tau), len(a_sigma),
        [[cols[j][i] for j in range(len(a_sigma))] for i in range(len(a_tau))],
    )


def e2_page(fan: Fan, corrupt_sign: bool = False) -> SSPage:
    _require_smooth(fan)
    n = fan.ambient_rank
    e1 = e1_page(fan)
    dims = {}
    reps = {}
    for p in range(n + 1):
        for q in range(n + 1):
            out = d1(fan, p, q, corrupt_sign=corrupt_sign)
            ker = out.kernel_basis()
            if p >= 1:
                inc = d1(fan, p - 1, q, corrupt_sign=corrupt_sign)
                im = [
                    tuple(row[j] for row in inc.entries)
                    for j in range(inc.cols)
                ]
            else:
                im = []
            basis = _mod_out(ker, im)
            dims[(p, q)] = len(basis)
            if basis:
                reps[(p, q)] = basis
    return SSPage(2, n, dims, e1.layouts, reps)


def _mod_out(ker: QSubspace, im_rows):
    if not ker.dim:
        return ()
    if im_rows:
        pivots, red = QMatrix.from_rows(
            [list(r) for r in im_rows], ker.ambient_dim
        ).rref()
    else:
        pivots, red = [], []
    vecs = []
    for v in ker.basis:
        v = list(v)
        for i, piv in enumerate(pivots):
            f = v[piv]
            if f:
                v = [a - f * b for a, b in zip(v, red[i])]
        vecs.append(v)
    return QSubspace.span(vecs, ker.ambient_dim).basis


@functools.lru_cache(maxsize=None)
def trop_complex_for(fan: Fan):
    """The cell structure used on the tropical side of the comparison.

    Complete fans carry their tautological structure; non-complete fans
    are given the orthant structure of a built-in completion.
    """
    from trophodge import tropspace

    if fans.is_complete(fan):
        return tropspace.tautological_complex(fan)
    return tropspace.tautological_complex(fan, fans.completion(fan))


def compare_with_trop(fan: Fan, corrupt_sign: bool = False):
    """Entries (p, q, dim E_2^{p,q}, h^{q,p}_Trop, ok) plus overall pass."""
    from trophodge import cohomology

    _require_smooth(fan)
    n = fan.ambient_rank
    e2 = e2_page(fan, corrupt_sign=corrupt_sign)
    cx = trop_complex_for(fan)
    betti = cohomology.betti_table(cx)
    entries = []
    ok = True
    for p in range(n + 1):
        for q in range(n + 1):
            lhs = e2.dim(p, q)
            rhs = betti[q][p]
            good = lhs == rhs
            ok = ok and good
            entries.append((p, q, lhs, rhs, good))
    return {"fan_rank": n, "entries": entries, "pass": ok}


def betti_from_h_vector(fan: Fan):
    """Even Betti numbers of the toric variety from the fan's cone counts.

    Sum over cones of (t-1)^(n - dim sigma) equals sum of h_k t^k; then
    b_{2k} = h_k and odd Betti numbers vanish.
    """
    n = fan.ambient_rank
    h = [0] * (n + 1)
    for sigma in fan.cones:
        e = n - sigma.dim
        for i in range(e + 1):
            h[i] += math.comb(e, i) * ((-1) ** (e - i))
    b = [0] * (2 * n + 1)
    for i, hi in enumerate(h):
        b[2 * i] = hi
    return b


def euler_consistency(fan: Fan):
    """Check sum of E_2 diagonals against the h-vector Betti numbers."""
    _require_smooth(fan)
    if not fans.is_complete(fan):
        raise ValueError("euler_consistency needs a complete fan")
    n = fan.ambient_rank
    e2 = e2_page(fan)
    b = betti_from_h_vector(fan)
    entries = []
    ok = True
    for k in range(2 * n + 1):
        total = sum(
            e2.dim(p, k - p) for p in range(n + 1) if 0 <= k - p <= n
        )
        good = total == b[k]
        ok = ok and good
        entries.append((k, total, b[k], good))
    return {"betti": b, "entries": entries, "pass": ok}


def compare_report_tsv(report):
    lines = ["p\tq\tE2\th_trop\tok"]
    for p, q, lhs, rhs, good in report["entries"]:
        lines.append(f"{p}\t{q}\t{lhs}\t{rhs}\t{'pass' if good else 'FAIL'}")
    lines.append("overall\t\t\t\t" + ("pass" if report["pass"] else "FAIL"))
    return "\n".join(lines) + "\n"
