"""Numeric cross-checks on a truncated full Fock space.

Everything here is float and sparse, built independently of the symbolic
code: operators are explicit matrices and ``tau`` is a vacuum expectation.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Dict, List, Tuple

import numpy as np
import scipy.sparse as sp

from .algebra import NcPoly
from .errors import ResourceLimitError
from .leray import DEFAULT_CAP, build_leray_basis

Word = Tuple[int, ...]


def _words(n: int, m: int) -> List[Word]:
    return [w for k in range(m + 1) for w in product(range(1, n + 1), repeat=k)]


@dataclass(frozen=True)
class TruncatedFock:
    n: int
    level: int
    basis: Tuple[Word, ...]
    index: Dict[Word, int]
    creation: Tuple[sp.csr_matrix, ...]
    semicircular: Tuple[sp.csr_matrix, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def vacuum(self) -> np.ndarray:
        e = np.zeros(self.dim, dtype=complex)
        e[0] = 1.0
        return e

    def annihilation(self, j: int) -> sp.csr_matrix:
        return self.creation[j - 1].T.tocsr()

    def act(self, P: NcPoly, vec: np.ndarray) -> np.ndarray:
        """``P(S_1, ..., S_n) vec`` by matrix-vector products."""
        out = np.zeros(self.dim, dtype=complex)
        for word, c in P.terms.items():
            x = vec
            for j in reversed(word):
                x = self.semicircular[j - 1] @ x
            out += complex(c) * x
        return out


def build(n: int, m: int, cap: int = DEFAULT_CAP) -> TruncatedFock:
    """Fock space truncated at tensor degree ``m``; basis in (length, lex) order."""
    if n < 1 or m < 0:
        raise ValueError("need n >= 1 and m >= 0")
    dim = m + 1 if n == 1 else (n ** (m + 1) - 1) // (n - 1)
    if dim > cap:
        raise ResourceLimitError(f"Fock dimension {dim} exceeds the cap {cap}")
    basis = tuple(_words(n, m))
    index = {w: i for i, w in enumerate(basis)}
    creation = []
    for j in range(1, n + 1):
        rows, cols = [], []
        for w, i in index.items():
            if len(w) < m:
                rows.append(index[(j,) + w])
                cols.append(i)
        creation.append(sp.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(dim, dim)))
    semi = tuple((l + l.T).tocsr() for l in creation)
    return TruncatedFock(n, m, basis, index, tuple(creation), semi)


def vacuum_expectation(F: TruncatedFock, P: NcPoly) -> complex:
    """``<P(S) Omega, Omega>``; refuses when truncation could change the value."""
    if P.n != F.n:
        raise ValueError(f"polynomial has {P.n} generators, Fock space has {F.n}")
    if P.degree > F.level:
        raise ValueError(f"degree {P.degree} exceeds the truncation level {F.level}")
    return complex(F.act(P, F.vacuum())[0])


def _tensor_ops(n: int, k: int):
    """``l_j*`` and ``r_j*`` from degree ``k + 1`` to degree ``k`` as dense matrices."""
    hi = list(product(range(1, n + 1), repeat=k + 1))
    lo = {w: i for i, w in enumerate(product(range(1, n + 1), repeat=k))}
    left = [np.zeros((len(lo), len(hi))) for _ in range(n)]
    right = [np.zeros((len(lo), len(hi))) for _ in range(n)]
    for col, w in enumerate(hi):
        left[w[0] - 1][lo[w[1:]], col] = 1.0
        right[w[-1] - 1][lo[w[:-1]], col] = 1.0
    return left, right


def oracle_xk_check(n: int, k: int, cap: int = DEFAULT_CAP, tol: float = 1e-10) -> bool:
    """Rebuild the degree-``k`` divergence-free space from explicit matrices and compare.

    The space is the column span of ``((l_j* - r_j*))_j`` applied to
    degree ``k + 1`` tensors.  Its rank (by SVD) and its orthogonal
    projector must agree with :func:`build_leray_basis`.
    """
    if n ** (k + 1) > cap:
        raise ResourceLimitError(f"n^(k+1) = {n ** (k + 1)} exceeds the cap {cap}")
    left, right = _tensor_ops(n, k)
    A = np.vstack([l - r for l, r in zip(left, right)])  # component-major, then lex
    U, S, _ = np.linalg.svd(A, full_matrices=False)
    scale = S[0] if S.size and S[0] > 0 else 1.0
    r = int(np.sum(S > tol * scale))
    Q = U[:, :r]
    P_oracle = Q @ Q.T

    basis = build_leray_basis(n, k, cap)
    if basis.rank != r:
        return False
    P = np.array(basis.projection_matrix(), dtype=float)
    return bool(np.max(np.abs(P - P_oracle), initial=0.0) <= tol)
