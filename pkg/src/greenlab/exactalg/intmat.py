"""Integer matrices: Hermite and Smith normal forms, kernels."""

from __future__ import annotations

from typing import List, Sequence, Tuple


class IntMatrix:
    """Immutable integer matrix stored as a tuple of row tuples."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Sequence[Sequence[int]], ncols: int | None = None):
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("empty matrix needs an explicit column count")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged integer matrix")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, m: int, n: int) -> "IntMatrix":
        return cls([[0] * n for _ in range(m)], n)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def tolist(self) -> List[List[int]]:
        return [list(r) for r in self.rows]

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i) -> Tuple[int, ...]:
        return self.rows[i]

    def col(self, j) -> Tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    def transpose(self) -> "IntMatrix":
        return IntMatrix([self.col(j) for j in range(self.ncols)], self.nrows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in integer matrix product")
        cols = [other.col(j) for j in range(other.ncols)]
        return IntMatrix([[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows],
                         other.ncols)

    def vecmul(self, v: Sequence[int]) -> Tuple[int, ...]:
        """Row vector times matrix."""
        return tuple(sum(v[i] * self.rows[i][j] for i in range(self.nrows)) for j in range(self.ncols))

    def stack(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.ncols:
            raise ValueError("column mismatch in stack")
        return IntMatrix(self.rows + other.rows, self.ncols)

    def select_rows(self, idx) -> "IntMatrix":
        return IntMatrix([self.rows[i] for i in idx], self.ncols)

    def select_cols(self, idx) -> "IntMatrix":
        idx = list(idx)
        return IntMatrix([[r[j] for j in idx] for r in self.rows], len(idx))

    def nonzero_rows(self) -> "IntMatrix":
        return IntMatrix([r for r in self.rows if any(r)], self.ncols)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def __eq__(self, other):
        if isinstance(other, IntMatrix):
            return self.ncols == other.ncols and self.rows == other.rows
        return NotImplemented

    def __hash__(self):
        return hash((self.ncols, self.rows))

    def __repr__(self):
        return f"IntMatrix({self.tolist()})"

    def __str__(self):
        return "[" + "; ".join(" ".join(str(x) for x in r) for r in self.rows) + "]"


def _as_lists(m: IntMatrix) -> List[List[int]]:
    return [list(r) for r in m.rows]


def _identity(n: int) -> List[List[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def hnf(m: IntMatrix) -> Tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form.

    Returns (H, U) with H = U*m, U unimodular, pivots positive, entries above
    each pivot reduced into [0, pivot), zero rows last.
    """
    A = _as_lists(m)
    nr, nc = m.nrows, m.ncols
    U = _identity(nr)
    r = 0
    for c in range(nc):
        if r >= nr:
            break
        while True:
            nz = [i for i in range(r, nr) if A[i][c]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(A[i][c]))
            if piv != r:
                A[r], A[piv] = A[piv], A[r]
                U[r], U[piv] = U[piv], U[r]
            done = True
            p = A[r][c]
            for i in range(r + 1, nr):
                if A[i][c]:
                    q = A[i][c] // p
                    if q:
                        Ai, Ar = A[i], A[r]
                        for j in range(c, nc):
                            Ai[j] -= q * Ar[j]
                        Ui, Ur = U[i], U[r]
                        for j in range(nr):
                            Ui[j] -= q * Ur[j]
                    if A[i][c]:
                        done = False
            if done:
                break
        if not A[r][c]:
            continue
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
            U[r] = [-x for x in U[r]]
        p = A[r][c]
        for i in range(r):
            q = A[i][c] // p
            if q:
                A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                U[i] = [a - q * b for a, b in zip(U[i], U[r])]
        r += 1
    return IntMatrix(A, nc), IntMatrix(U, nr)


def hnf_basis(m: IntMatrix) -> IntMatrix:
    """Nonzero rows of the HNF: the canonical basis of the row lattice."""
    H, _ = hnf(m)
    return H.nonzero_rows()


def _snf_core(m: IntMatrix):
    A = _as_lists(m)
    nr, nc = m.nrows, m.ncols
    U = _identity(nr)
    V = _identity(nc)
    Vinv = _identity(nc)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        # col_dst += q * col_src
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]
        Vinv[src] = [a - q * b for a, b in zip(Vinv[src], Vinv[dst])]

    t = 0
    while t < min(nr, nc):
        nz = [(abs(A[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if A[i][j]]
        if not nz:
            break
        _, i0, j0 = min(nz)
        if i0 != t:
            swap_rows(t, i0)
        if j0 != t:
            swap_cols(t, j0)
        while True:
            changed = False
            p = A[t][t]
            for i in range(t + 1, nr):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    if A[i][t]:
                        changed = True
            for j in range(t + 1, nc):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    if A[t][j]:
                        changed = True
            if changed:
                cand = [(abs(A[i][t]), i, t) for i in range(t, nr) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t, nc) if A[t][j]]
                _, i0, j0 = min(cand)
                if i0 != t:
                    swap_rows(t, i0)
                if j0 != t:
                    swap_cols(t, j0)
                continue
            bad = None
            for i in range(t + 1, nr):
                for j in range(t + 1, nc):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return A, U, V, Vinv, t


def snf(m: IntMatrix) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form: S = U*m*V diagonal with d1 | d2 | ..."""
    A, U, V, _, _ = _snf_core(m)
    return IntMatrix(A, m.ncols), IntMatrix(U, m.nrows), IntMatrix(V, m.ncols)


def snf_full(m: IntMatrix):
    """Like snf but also returns V^-1 and the rank."""
    A, U, V, Vinv, r = _snf_core(m)
    return IntMatrix(A, m.ncols), IntMatrix(U, m.nrows), IntMatrix(V, m.ncols), IntMatrix(Vinv, m.ncols), r


def rank(m: IntMatrix) -> int:
    H, _ = hnf(m)
    return sum(1 for r in H.rows if any(r))


def left_kernel(m: IntMatrix) -> IntMatrix:
    """Saturated basis (HNF) of {x : x*m = 0} as rows."""
    H, U = hnf(m)
    ker = [U.rows[i] for i in range(m.nrows) if not any(H.rows[i])]
    return hnf_basis(IntMatrix(ker, m.nrows)) if ker else IntMatrix([], m.nrows)


def right_kernel(m: IntMatrix) -> IntMatrix:
    """Saturated basis of {x : m*x = 0} as rows."""
    return left_kernel(m.transpose())


def saturate_rows(m: IntMatrix) -> IntMatrix:
    """HNF basis of (row lattice tensor Q) intersected with Z^n."""
    if m.nrows == 0 or m.is_zero():
        return IntMatrix([], m.ncols)
    _, _, _, Vinv, r = snf_full(m)
    return hnf_basis(IntMatrix(Vinv.rows[:r], m.ncols))


def det(m: IntMatrix) -> int:
    if m.nrows != m.ncols:
        raise ValueError("determinant of a non-square matrix")
    H, U = hnf(m)
    d = 1
    for i in range(m.nrows):
        d *= H.rows[i][i]
    # det(U) is +-1; recover it by Bareiss on U
    return d * _bareiss_det(U.tolist())


def _bareiss_det(A: List[List[int]]) -> int:
    n = len(A)
    if n == 0:
        return 1
    A = [r[:] for r in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]
