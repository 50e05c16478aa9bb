"""Exact linear algebra over the integers and the rationals.

Matrices are sequences of rows holding plain ints (or Fractions where
noted), so every result is exact.  Sizes stay tiny throughout the
package; clarity beats asymptotics here.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def _identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(matrix: Sequence[Sequence[int]]):
    """Diagonalise an integer matrix by unimodular transforms.

    Returns ``(diag, U, V)`` with ``U @ matrix @ V`` diagonal, the diagonal
    entries nonnegative and each dividing the next, and ``U``, ``V``
    unimodular.  ``diag`` has length ``min(m, n)``.
    """
    A = [[int(x) for x in row] for row in matrix]
    m = len(A)
    n = len(A[0]) if m else 0
    for row in A:
        if len(row) != n:
            raise ValueError("ragged matrix")
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):
        A[dst] = [a + c * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, c):
        for row in A:
            row[dst] += c * row[src]
        for row in V:
            row[dst] += c * row[src]

    def negate_row(i):
        A[i] = [-x for x in A[i]]
        U[i] = [-x for x in U[i]]

    def diagonalise():
        t = 0
        while t < min(m, n):
            pivot = None
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    v = abs(A[i][j])
                    if v and (best is None or v < best):
                        pivot, best = (i, j), v
            if pivot is None:
                return
            swap_rows(t, pivot[0])
            swap_cols(t, pivot[1])
            if A[t][t] < 0:
                negate_row(t)
            while True:
                for i in range(t + 1, m):
                    if A[i][t]:
                        add_row(t, i, -(A[i][t] // A[t][t]))
                left = [i for i in range(t + 1, m) if A[i][t]]
                if left:
                    swap_rows(t, min(left, key=lambda i: abs(A[i][t])))
                    if A[t][t] < 0:
                        negate_row(t)
                    continue
                for j in range(t + 1, n):
                    if A[t][j]:
                        add_col(t, j, -(A[t][j] // A[t][t]))
                left = [j for j in range(t + 1, n) if A[t][j]]
                if left:
                    swap_cols(t, min(left, key=lambda j: abs(A[t][j])))
                    if A[t][t] < 0:
                        negate_row(t)
                    continue
                break
            t += 1

    diagonalise()
    # Enforce the divisibility chain d_i | d_{i+1}.
    while True:
        bad = None
        k = min(m, n)
        for i in range(k - 1):
            a, b = A[i][i], A[i + 1][i + 1]
            if a and b % a:
                bad = i
                break
        if bad is None:
            break
        add_col(bad + 1, bad, 1)
        diagonalise()
    diag = [A[i][i] for i in range(min(m, n))]
    return diag, [row[:] for row in U], [row[:] for row in V]


def mat_mul_int(A, B):
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if inner else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)]
            for i in range(len(A))]


def mat_vec_int(A, v):
    return [sum(a * b for a, b in zip(row, v)) for row in A]


def solve_integer(matrix, rhs):
    """Solve ``matrix @ x == rhs`` over the integers, or return None."""
    m = len(matrix)
    n = len(matrix[0]) if m else 0
    if len(rhs) != m:
        raise ValueError("rhs length mismatch")
    if n == 0:
        return () if all(b == 0 for b in rhs) else None
    diag, U, V = smith_normal_form(matrix)
    c = mat_vec_int(U, list(rhs))
    y = [0] * n
    for i in range(m):
        d = diag[i] if i < len(diag) else 0
        if d:
            if c[i] % d:
                return None
            y[i] = c[i] // d
        elif c[i]:
            return None
    x = mat_vec_int(V, y)
    return tuple(x)


def zspan_contains(vectors, target, modulus=None):
    """Is ``target`` an integer combination of ``vectors``?

    ``vectors`` are coordinate tuples; with ``modulus`` set, membership is
    decided in (Z/modulus)^k by adjoining multiples of the modulus.
    """
    target = [int(t) for t in target]
    dim = len(target)
    cols = [list(map(int, v)) for v in vectors]
    for v in cols:
        if len(v) != dim:
            raise ValueError("vector length mismatch")
    if modulus:
        cols.extend([modulus if i == j else 0 for i in range(dim)] for j in range(dim))
    if not cols:
        return all(t % modulus == 0 if modulus else t == 0 for t in target)
    matrix = [[col[i] for col in cols] for i in range(dim)]
    return solve_integer(matrix, target) is not None


def zspan_combination(vectors, target, modulus=None):
    """Coefficients expressing ``target`` in span of ``vectors``, or None."""
    target = [int(t) for t in target]
    dim = len(target)
    cols = [list(map(int, v)) for v in vectors]
    extra = 0
    if modulus:
        cols.extend([modulus if i == j else 0 for i in range(dim)] for j in range(dim))
        extra = dim
    if not cols:
        ok = all(t % modulus == 0 if modulus else t == 0 for t in target)
        return () if ok else None
    matrix = [[col[i] for col in cols] for i in range(dim)]
    sol = solve_integer(matrix, target)
    if sol is None:
        return None
    return sol[: len(sol) - extra]


def integer_kernel_basis(matrix):
    """Basis of the right integer kernel ``{x : matrix @ x = 0}``."""
    m = len(matrix)
    n = len(matrix[0]) if m else 0
    if n == 0:
        return []
    if m == 0:
        return [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]
    diag, _, V = smith_normal_form(matrix)
    basis = []
    for j in range(n):
        if j >= len(diag) or diag[j] == 0:
            basis.append(tuple(V[i][j] for i in range(n)))
    return basis


def row_hnf(rows):
    """Row-style Hermite normal form of an integer row lattice basis.

    Rows come out in echelon form with positive pivots and with the
    entries above each pivot reduced into ``[0, pivot)``; suitable for
    picking canonical coset representatives.
    """
    work = [list(map(int, r)) for r in rows if any(r)]
    if not work:
        return []
    cols = len(work[0])
    r = 0
    for c in range(cols):
        while True:
            nz = [i for i in range(r, len(work)) if work[i][c]]
            if not nz:
                break
            i = min(nz, key=lambda i: abs(work[i][c]))
            work[r], work[i] = work[i], work[r]
            if work[r][c] < 0:
                work[r] = [-x for x in work[r]]
            done = True
            for i in range(r + 1, len(work)):
                if work[i][c]:
                    q = work[i][c] // work[r][c]
                    work[i] = [a - q * b for a, b in zip(work[i], work[r])]
                    if work[i][c]:
                        done = False
            if done:
                break
        if r < len(work) and work[r][c]:
            r += 1
        if r == len(work):
            break
    work = work[:r]
    pivots = [next(j for j, x in enumerate(row) if x) for row in work]
    for i in reversed(range(len(work))):
        c = pivots[i]
        for k in range(i):
            q = work[k][c] // work[i][c]
            if q:
                work[k] = [a - q * b for a, b in zip(work[k], work[i])]
    return [tuple(row) for row in work]


def reduce_mod_rows(vec, hnf_rows):
    """Canonical representative of ``vec`` modulo the HNF row lattice."""
    v = list(map(int, vec))
    for row in hnf_rows:
        c = next(j for j, x in enumerate(row) if x)
        q = v[c] // row[c]
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return tuple(v)


def rank_rational(matrix):
    """Rank of a matrix with int/Fraction entries, by Gaussian elimination."""
    A = [[Fraction(x) for x in row] for row in matrix]
    m = len(A)
    n = len(A[0]) if m else 0
    rank = 0
    for c in range(n):
        pivot = next((i for i in range(rank, m) if A[i][c]), None)
        if pivot is None:
            continue
        A[rank], A[pivot] = A[pivot], A[rank]
        inv = 1 / A[rank][c]
        A[rank] = [x * inv for x in A[rank]]
        for i in range(m):
            if i != rank and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[rank])]
        rank += 1
        if rank == m:
            break
    return rank


def rank_mod_p(matrix, p):
    """Rank of an integer matrix over the prime field F_p."""
    A = [[int(x) % p for x in row] for row in matrix]
    m = len(A)
    n = len(A[0]) if m else 0
    rank = 0
    for c in range(n):
        pivot = next((i for i in range(rank, m) if A[i][c] % p), None)
        if pivot is None:
            continue
        A[rank], A[pivot] = A[pivot], A[rank]
        inv = pow(A[rank][c], -1, p)
        A[rank] = [(x * inv) % p for x in A[rank]]
        for i in range(m):
            if i != rank and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[rank])]
        rank += 1
        if rank == m:
            break
    return rank


def det_rational(matrix) -> Fraction:
    A = [[Fraction(x) for x in row] for row in matrix]
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("determinant of a non-square matrix")
    det = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if A[i][c]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            A[c], A[pivot] = A[pivot], A[c]
            det = -det
        det *= A[c][c]
        inv = 1 / A[c][c]
        for i in range(c + 1, n):
            if A[i][c]:
                f = A[i][c] * inv
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return det
