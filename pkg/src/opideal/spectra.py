"""Finite-dimensional operators and their characteristic numbers.

Operators are plain 2-D complex numpy arrays.  Singular values come from a
one-sided (Hestenes) Jacobi iteration on columns; no LAPACK SVD is used.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .sequences import MonotoneSequence, SequenceFormatError

#: Off-diagonal Gram entries below ``GRAM_TOL * ||T||_F**2`` count as zero.
GRAM_TOL = 1e-13
MAX_SWEEPS = 60
#: Characteristic numbers below ``CLAMP_TOL * mu_0`` are reported as zero.
CLAMP_TOL = 1e-14


class JacobiConvergenceError(RuntimeError):
    """The Jacobi sweeps did not orthogonalize the columns within the cap."""


def as_operator(T):
    """Validate and return ``T`` as a finite 2-D complex array."""
    A = np.asarray(T)
    if A.ndim != 2 or 0 in A.shape:
        raise ValueError(f"operator must be a nonempty 2-D matrix, got shape {A.shape}")
    A = A.astype(complex, copy=False)
    if not np.all(np.isfinite(A)):
        raise ValueError("operator entries must be finite")
    return A


def _round_robin(n):
    """Pairings of ``range(n)`` so each pair meets once per sweep.

    Circle method; for odd ``n`` a dummy slot sits out each round.
    """
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        left = players[: m // 2]
        right = players[m // 2 :][::-1]
        pairs = [(i, j) if i < j else (j, i) for i, j in zip(left, right) if i < n and j < n]
        if pairs:
            rounds.append(np.array(pairs, dtype=np.intp).T)
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def jacobi_singular_values(T, max_sweeps=MAX_SWEEPS, tol=GRAM_TOL):
    """Singular values of ``T`` (unsorted) and the number of sweeps used.

    Parameters
    ----------
    T : array_like
        Matrix of shape ``(m, n)``.
    max_sweeps : int
        Cap on cyclic sweeps before :class:`JacobiConvergenceError`.
    tol : float
        Relative threshold on off-diagonal Gram entries.

    Returns
    -------
    s : ndarray
        The ``min(m, n)`` singular values.
    sweeps : int
    """
    A = as_operator(T)
    if not A.imag.any():
        A = A.real  # same rotations in real arithmetic, half the memory traffic
    # work on columns stored as contiguous rows of B
    B = A.T.copy() if A.shape[0] >= A.shape[1] else A.conj().copy()
    # exactly-zero columns only contribute zero singular values
    nonzero = np.any(B != 0, axis=1)
    if not nonzero.all():
        s = np.zeros(B.shape[0])
        if nonzero.any():
            s[: nonzero.sum()], sweeps = jacobi_singular_values(B[nonzero].T, max_sweeps, tol)
            return s, sweeps
        return s, 0
    n = B.shape[0]
    fro2 = float(np.vdot(B, B).real)
    if n == 1:
        return np.linalg.norm(B, axis=1), 0
    thresh = tol * fro2
    rounds = _round_robin(n)
    for sweep in range(1, max_sweeps + 1):
        rotated = False
        norms2 = np.einsum("ij,ij->i", B.conj(), B).real
        for I, J in rounds:
            bi, bj = B[I], B[J]
            gamma = np.einsum("ij,ij->i", bi.conj(), bj)
            g = np.abs(gamma)
            act = g > thresh
            if not act.any():
                continue
            rotated = True
            if not act.all():
                I, J, bi, bj, gamma, g = I[act], J[act], bi[act], bj[act], gamma[act], g[act]
            alpha, beta = norms2[I], norms2[J]
            zeta = (beta - alpha) / (2.0 * g)
            t = np.where(zeta >= 0, 1.0, -1.0) / (np.abs(zeta) + np.sqrt(1.0 + zeta * zeta))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = c * t
            # rotate in the plane of b_i and e^{-i phi} b_j, where the Gram entry is real
            bjp = bj * (gamma / g).conj()[:, None]
            B[I] = c[:, None] * bi - s[:, None] * bjp
            B[J] = s[:, None] * bi + c[:, None] * bjp
            norms2[I] = alpha - t * g
            norms2[J] = beta + t * g
        if not rotated:
            return np.linalg.norm(B, axis=1), sweep
    raise JacobiConvergenceError(
        f"one-sided Jacobi did not converge in {max_sweeps} sweeps (shape {np.shape(T)})"
    )


def characteristic_numbers(T) -> MonotoneSequence:
    """Singular values of ``T``, nonincreasing, of length ``min(rows, cols)``."""
    s, _ = jacobi_singular_values(T)
    s = np.sort(s)[::-1]
    if s[0] > 0:
        s[s < CLAMP_TOL * s[0]] = 0.0
    return MonotoneSequence(s)


def operator_norm(T):
    return characteristic_numbers(T)[0]


def diagonal_operator(mu: MonotoneSequence):
    return np.diag(np.asarray(mu.values, dtype=complex))


@dataclass(frozen=True)
class ProjectionFamily:
    """Mutually orthogonal coordinate projections ``E_0, E_1, ...`` in ``C^dim``.

    Each block is a ``range`` of coordinates.
    """

    dim: int
    blocks: tuple

    def __post_init__(self):
        blocks = tuple(range(b.start, b.stop) if isinstance(b, range) else range(*b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        seen = set()
        for k, b in enumerate(blocks):
            if len(b) == 0:
                raise ValueError(f"block {k} is empty")
            if b.start < 0 or b.stop > self.dim:
                raise ValueError(f"block {k} = {b} leaves [0, {self.dim})")
            if seen.intersection(b):
                raise ValueError(f"block {k} overlaps an earlier block")
            seen.update(b)

    @classmethod
    def singletons(cls, dim):
        return cls(dim, tuple(range(i, i + 1) for i in range(dim)))

    def __len__(self):
        return len(self.blocks)


def scaled_projection(P: ProjectionFamily, n: int, scale: float):
    """``scale * E_n`` as a dense matrix."""
    if not 0 <= n < len(P):
        raise IndexError(f"projection index {n} out of range for {len(P)} blocks")
    d = np.zeros(P.dim, dtype=complex)
    d[P.blocks[n].start : P.blocks[n].stop] = scale
    return np.diag(d)


def product(A, B):
    A, B = as_operator(A), as_operator(B)
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"dimension mismatch: {A.shape} @ {B.shape}")
    return A @ B


def random_unitary(dim, rng):
    """Haar-distributed unitary via QR of a complex Gaussian matrix."""
    Z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


# ---------------------------------------------------------------------------
# CSV matrix format: one row per line, entries like ``1.5+0.25i`` or ``-2``.

_LITERAL_RE = re.compile(r"^[0-9eE.+\-]*i?$")


def parse_complex(text):
    """Parse ``re+im i`` style literals (``3``, ``-1.5i``, ``2-0.5i``)."""
    t = text.strip().replace(" ", "")
    if not t or "j" in t.lower() or not _LITERAL_RE.match(t):
        raise ValueError(f"bad complex literal {text!r}")
    try:
        return complex(t[:-1] + "j" if t.endswith("i") else t)
    except ValueError:
        raise ValueError(f"bad complex literal {text!r}") from None


def format_complex(z):
    z = complex(z)
    sign = "-" if np.signbit(z.imag) else "+"
    return f"{z.real!r}{sign}{abs(z.imag)!r}i"


def read_matrix_csv(path_or_text, source=None):
    if isinstance(path_or_text, (str, Path)):
        source = source or str(path_or_text)
        with open(path_or_text) as fh:
            return read_matrix_csv(fh, source=source)
    rows = []
    width = None
    for lineno, line in enumerate(path_or_text, start=1):
        if not line.strip():
            continue
        cells = line.strip().split(",")
        try:
            row = [parse_complex(c) for c in cells]
        except ValueError as exc:
            raise SequenceFormatError(str(exc), lineno, source) from None
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise SequenceFormatError(f"row has {len(row)} entries, expected {width}", lineno, source)
        rows.append(row)
    if not rows:
        raise SequenceFormatError("empty matrix file", None, source)
    return as_operator(np.array(rows, dtype=complex))


def write_matrix_csv(T, path=None):
    A = as_operator(T)
    text = "".join(",".join(format_complex(z) for z in row) + "\n" for row in A)
    if path is None:
        return text
    Path(path).write_text(text)
    return None
