"""Exact Gaussian elimination over the rationals on sparse coefficient vectors.

Vectors are dicts ``{key: Fraction}``; keys are whatever indexes an equation
(typically ``(component, monomial)`` pairs of normal forms).
"""

from fractions import Fraction


def nf_vector(nf, tag=None):
    """Sparse vector of a normal form, one entry per monomial."""
    return {(tag, mono): c for mono, c in nf.terms}


def add_vectors(*vecs):
    out = {}
    for v in vecs:
        for k, c in v.items():
            out[k] = out.get(k, 0) + c
    return {k: c for k, c in out.items() if c}


def solve(columns, rhs):
    """Solve ``sum_i x_i * columns[i] = rhs`` exactly.

    Returns a list of Fractions (free unknowns set to zero) or ``None`` when
    the system is inconsistent.
    """
    n = len(columns)
    keys = sorted(set().union(rhs, *columns), key=repr)
    rows = [[Fraction(col.get(k, 0)) for col in columns] + [Fraction(rhs.get(k, 0))] for k in keys]
    pivots = []
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][c]
        rows[r] = [v / pv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    for row in rows[r:]:
        if row[n] != 0:
            return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = rows[i][n]
    return x


def rank(columns):
    keys = sorted(set().union(*columns), key=repr) if columns else []
    rows = [[Fraction(col.get(k, 0)) for col in columns] for k in keys]
    rk = 0
    for c in range(len(columns)):
        pivot = next((i for i in range(rk, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[rk], rows[pivot] = rows[pivot], rows[rk]
        for i in range(rk + 1, len(rows)):
            if rows[i][c] != 0:
                f = rows[i][c] / rows[rk][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rk])]
        rk += 1
    return rk


def linearly_independent(nfs):
    return rank([nf_vector(e) for e in nfs]) == len(nfs)
