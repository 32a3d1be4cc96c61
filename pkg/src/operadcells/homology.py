"""Cellular homology ranks of a complex built from its nondegenerate
simplices: collapse faces contribute nothing to the boundary operator."""

from __future__ import annotations

import numpy as np

# Two large primes; an incidence matrix with torsion-free cokernels has
# the same rank over both iff that rank is the rational one.  A mismatch
# raises instead of silently reporting either value.
_PRIMES = (2147483647, 2147483629)
_DENSE_LIMIT = 4_000_000


def boundary_matrices(cx):
    """List of integer matrices D[k]: chain degree k -> k-1 for k >= 1."""
    dim = cx.dimension
    by_dim = [[] for _ in range(dim + 1)]
    pos = [None] * len(cx)
    for i, d in enumerate(cx.dims):
        pos[i] = len(by_dim[d])
        by_dim[d].append(i)
    mats = []
    for k in range(1, dim + 1):
        rows, cols = len(by_dim[k - 1]), len(by_dim[k])
        m = np.zeros((rows, cols), dtype=np.int64)
        for j, i in enumerate(by_dim[k]):
            for f, e in enumerate(cx.faces[i]):
                if e[0] == "f":
                    m[pos[e[1]], j] += (-1) ** f
        mats.append(m)
    return [len(b) for b in by_dim], mats


def _rank_mod_p(mat, p):
    if mat.size == 0:
        return 0
    if mat.size <= _DENSE_LIMIT:
        return _rank_dense(mat, p)
    return _rank_sparse(mat, p)


def _rank_dense(mat, p):
    m = np.ascontiguousarray(mat % p)
    rows, cols = m.shape
    rank = 0
    row = 0
    for col in range(cols):
        if row >= rows:
            break
        nz = np.nonzero(m[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            m[[row, piv]] = m[[piv, row]]
        inv = pow(int(m[row, col]), p - 2, p)
        m[row] = (m[row] * inv) % p
        below = np.nonzero(m[row + 1:, col])[0]
        if below.size:
            idx = below + row + 1
            m[idx] = (m[idx] - np.outer(m[idx, col], m[row])) % p
        rank += 1
        row += 1
    return rank


def _rank_sparse(mat, p):
    rows = []
    for i in range(mat.shape[0]):
        nz = np.nonzero(mat[i])[0]
        if nz.size:
            rows.append({int(j): int(mat[i, j]) % p for j in nz})
    pivots = {}  # col -> reduced row dict
    rank = 0
    for r in rows:
        r = dict(r)
        while r:
            c = min(r)
            if c not in pivots:
                inv = pow(r[c], p - 2, p)
                pivots[c] = {j: (v * inv) % p for j, v in r.items()}
                rank += 1
                break
            coef = r[c]
            for j, v in pivots[c].items():
                nv = (r.get(j, 0) - coef * v) % p
                if nv:
                    r[j] = nv
                elif j in r:
                    del r[j]
        # empty r: dependent row
    return rank


def betti_numbers(cx, coefficients="rational"):
    """Homology ranks (b_0, ..., b_dim) over the rationals or mod 2."""
    if coefficients not in ("rational", "mod-2"):
        raise ValueError(f"unknown coefficients {coefficients!r}")
    counts, mats = boundary_matrices(cx)
    if coefficients == "mod-2":
        ranks = [_rank_mod_p(np.abs(m) % 2, 2) for m in mats]
    else:
        ranks = []
        for m in mats:
            r0 = _rank_mod_p(m, _PRIMES[0])
            r1 = _rank_mod_p(m, _PRIMES[1])
            if r0 != r1:
                raise ArithmeticError(
                    "boundary rank differs between prime fields; "
                    "rational rank is not certified"
                )
            ranks.append(r0)
    ranks = ranks + [0]
    out = []
    for k, n_k in enumerate(counts):
        incoming = ranks[k] if k < len(ranks) else 0
        outgoing = ranks[k - 1] if k >= 1 else 0
        out.append(n_k - outgoing - incoming)
    return tuple(out)


def betti_agreement_report(cx):
    """Rational vs mod-2 ranks; a nonempty report flags torsion (or a bug),
    which is recorded rather than silently accepted."""
    q = betti_numbers(cx, "rational")
    f2 = betti_numbers(cx, "mod-2")
    if q != f2:
        return [f"betti numbers disagree: rational {q} vs mod-2 {f2}"]
    return []
