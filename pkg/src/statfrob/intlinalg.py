"""Exact integer linear algebra on lists of Python ints.

Everything here works on plain nested lists so that entries are
arbitrary-precision integers; numpy integer arrays would overflow silently
on adversarial inputs.
"""

from fractions import Fraction


def as_int_matrix(rows):
    out = []
    for row in rows:
        new = []
        for x in row:
            if isinstance(x, bool) or int(x) != x:
                raise ValueError(f"non-integer entry {x!r}")
            new.append(int(x))
        out.append(new)
    return out


def matvec(A, u):
    return [sum(a * b for a, b in zip(row, u)) for row in A]


def rank(A):
    """Rank over the rationals, by exact Gaussian elimination."""
    M = [[Fraction(x) for x in row] for row in as_int_matrix(A)]
    if not M:
        return 0
    r = 0
    for c in range(len(M[0])):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(r + 1, len(M)):
            f = M[i][c] / M[r][c]
            if f:
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        r += 1
        if r == len(M):
            break
    return r


def column_echelon(A):
    """Return ``(H, U)`` with ``H = A @ U``, ``U`` unimodular and ``H`` in
    column echelon form.

    Columns of ``U`` whose image column in ``H`` is zero span the integer
    kernel of ``A`` exactly, since ``U`` is invertible over the integers.
    """
    A = as_int_matrix(A)
    nrows = len(A)
    ncols = len(A[0]) if A else 0
    H = [list(row) for row in A]
    U = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def colop(i, j, q):
        # col_j -= q * col_i
        for M in (H, U):
            for row in M:
                row[j] -= q * row[i]

    def swap(i, j):
        for M in (H, U):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def negate(i):
        for M in (H, U):
            for row in M:
                row[i] = -row[i]

    c = 0
    for r in range(nrows):
        if c >= ncols:
            break
        while True:
            nz = [j for j in range(c, ncols) if H[r][j] != 0]
            if not nz:
                break
            p = min(nz, key=lambda j: abs(H[r][j]))
            swap(c, p)
            done = True
            for j in range(c + 1, ncols):
                if H[r][j]:
                    colop(c, j, H[r][j] // H[r][c])
                    if H[r][j]:
                        done = False
            if done:
                break
        if H[r][c] != 0:
            if H[r][c] < 0:
                negate(c)
            c += 1
    return H, U


def kernel_basis(A):
    """Integer basis of ``{u : A u = 0}`` as a list of vectors (may be empty)."""
    A = as_int_matrix(A)
    ncols = len(A[0]) if A else 0
    H, U = column_echelon(A)
    basis = []
    for j in range(ncols):
        if all(H[i][j] == 0 for i in range(len(H))):
            basis.append([U[i][j] for i in range(ncols)])
    return basis


def row_hermite_form(rows):
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Pivots are positive, entries above a pivot are reduced into
    ``[0, pivot)`` and zero rows are dropped. Two generating sets span the
    same lattice iff their forms agree.
    """
    M = [list(r) for r in as_int_matrix(rows)]
    if not M:
        return []
    ncols = len(M[0])
    out = []
    r = 0
    for c in range(ncols):
        while True:
            nz = [i for i in range(r, len(M)) if M[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(M[i][c]))
            M[r], M[p] = M[p], M[r]
            done = True
            for i in range(r + 1, len(M)):
                if M[i][c]:
                    q = M[i][c] // M[r][c]
                    M[i] = [a - q * b for a, b in zip(M[i], M[r])]
                    if M[i][c]:
                        done = False
            if done:
                break
        if r < len(M) and M[r][c] != 0:
            if M[r][c] < 0:
                M[r] = [-a for a in M[r]]
            for i in range(r):
                q = M[i][c] // M[r][c]
                if q:
                    M[i] = [a - q * b for a, b in zip(M[i], M[r])]
            r += 1
    for row in M[:r]:
        out.append(row)
    return out


def solve_in_lattice(hermite_rows, u):
    """Coefficients expressing ``u`` over Hermite-form rows, or None."""
    u = list(as_int_matrix([u])[0])
    coeffs = []
    for row in hermite_rows:
        c = next(j for j, a in enumerate(row) if a != 0)
        if u[c] % row[c]:
            return None
        q = u[c] // row[c]
        coeffs.append(q)
        u = [a - q * b for a, b in zip(u, row)]
    if any(u):
        return None
    return coeffs
