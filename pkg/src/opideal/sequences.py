"""Nonincreasing sequences of characteristic numbers and symbolic families.

A :class:`MonotoneSequence` holds the first ``N`` characteristic numbers
``mu_0 >= mu_1 >= ... >= mu_{N-1} >= 0`` of a finite-rank operator (all later
terms are zero).  Partial sums are 1-indexed: ``sigma_n = mu_0 + ... + mu_{n-1}``.

Symbolic families ``mu_n = C (n+1)^{-a} log(n+e)^{-b}`` are represented by
:class:`PowerLogFamily`; they are turned into concrete sequences with
:func:`materialize`.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

#: Absolute tolerance used when validating monotonicity.
ATOL = 1e-12


class SequenceFormatError(ValueError):
    """Raised for malformed or non-monotone sequence input."""

    def __init__(self, message, lineno=None, source=None):
        self.lineno = lineno
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if lineno is not None:
            where += f"{lineno}:"
        super().__init__(f"{where} {message}" if where else message)


def _readonly(values):
    arr = np.array(values, dtype=float, copy=True).ravel()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class MonotoneSequence:
    """Finite nonincreasing nonnegative sequence, indexed from 0."""

    values: np.ndarray

    def __init__(self, values):
        arr = _readonly(values)
        if arr.size == 0:
            raise ValueError("a MonotoneSequence needs at least one term")
        if not np.all(np.isfinite(arr)):
            raise ValueError("sequence entries must be finite")
        if arr.min() < -ATOL:
            i = int(np.argmax(arr < -ATOL))
            raise ValueError(f"negative entry at index {i}: {arr[i]!r}")
        bad = np.nonzero(np.diff(arr) > ATOL)[0]
        if bad.size:
            i = int(bad[0]) + 1
            raise ValueError(
                f"sequence increases at index {i}: {arr[i - 1]!r} < {arr[i]!r}"
            )
        # absorb sub-tolerance wiggles so downstream code can rely on exact order
        arr = np.minimum.accumulate(np.maximum(arr, 0.0))
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __len__(self):
        return self.values.size

    def __getitem__(self, i):
        return float(self.values[i])

    def __iter__(self):
        return iter(self.values.tolist())

    def __eq__(self, other):
        if not isinstance(other, MonotoneSequence):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    def __repr__(self):
        return f"MonotoneSequence({self.values.tolist()!r})"

    def padded(self, n):
        """Return the sequence zero-padded (or cut) to length ``n``."""
        out = np.zeros(n)
        m = min(n, len(self))
        out[:m] = self.values[:m]
        return MonotoneSequence(out)


@dataclass(frozen=True, eq=False)
class PartialSums:
    """``sums[n-1] = sigma_n``, the sum of the ``n`` largest terms."""

    sums: np.ndarray

    def __init__(self, sums):
        object.__setattr__(self, "sums", _readonly(sums))

    def __len__(self):
        return self.sums.size

    def sigma(self, n):
        """sigma_n for ``n >= 1``; constant beyond the truncation."""
        if n < 1:
            raise IndexError("sigma_n is defined for n >= 1")
        return float(self.sums[min(n, len(self)) - 1])


def partial_sums(mu: MonotoneSequence) -> PartialSums:
    return PartialSums(np.cumsum(mu.values))


@dataclass(frozen=True)
class PowerLogFamily:
    """Symbolic sequence ``mu_n = C (n+1)^{-a} log(n+e)^{-b}``, ``n >= 0``.

    The shifts keep every term finite and positive at ``n = 0`` while leaving
    the asymptotics of ``n^{-a} log(n)^{-b}`` unchanged.
    """

    C: float = 1.0
    a: float = 0.0
    b: float = 0.0

    def __post_init__(self):
        for name in ("C", "a", "b"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"parameter {name} must be finite")
        if self.C <= 0:
            raise ValueError("scale C must be positive")
        if self.a < 0:
            raise ValueError("power exponent a must be >= 0")

    def terms(self, n):
        """Raw (unclamped) terms at the integer indices ``n``."""
        n = np.asarray(n, dtype=float)
        return self.C * (n + 1.0) ** (-self.a) * np.log(n + math.e) ** (-self.b)

    def log_terms(self, log_n):
        """``log mu_n`` for astronomically large ``n`` given as ``log n``.

        Uses the leading asymptotic form, valid once ``n`` dwarfs the shifts.
        """
        log_n = np.asarray(log_n, dtype=float)
        return math.log(self.C) - self.a * log_n - self.b * np.log(log_n)

    def __mul__(self, other):
        if isinstance(other, PowerLogFamily):
            return PowerLogFamily(self.C * other.C, self.a + other.a, self.b + other.b)
        if isinstance(other, (int, float)):
            return PowerLogFamily(self.C * other, self.a, self.b)
        return NotImplemented

    __rmul__ = __mul__


class ExplicitFamily:
    """A closed-form sequence given by a vectorized callable of the index."""

    def __init__(self, func: Callable[[np.ndarray], np.ndarray], name="explicit"):
        self.func = func
        self.name = name

    def terms(self, n):
        return np.asarray(self.func(np.asarray(n, dtype=float)), dtype=float)

    def __repr__(self):
        return f"ExplicitFamily({self.name})"


class FamilySum:
    """Termwise sum of families, optionally scaled: ``sum_i c_i f_i``."""

    def __init__(self, *families, weights=None):
        self.families = families
        self.weights = tuple(weights) if weights is not None else (1.0,) * len(families)

    def terms(self, n):
        return sum(w * f.terms(n) for w, f in zip(self.weights, self.families))

    def __repr__(self):
        return f"FamilySum({self.families!r}, weights={self.weights!r})"


def materialize(f, N: int) -> MonotoneSequence:
    """First ``N`` terms of a family, clamped to be nonincreasing.

    Families with ``b < 0`` may increase for small ``n``; the running minimum
    removes that without touching the tail behaviour.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    vals = f.terms(np.arange(N))
    if not np.all(np.isfinite(vals)):
        raise ValueError("family produced non-finite terms")
    return MonotoneSequence(np.minimum.accumulate(vals))


def pointwise_product(x: MonotoneSequence, y: MonotoneSequence) -> MonotoneSequence:
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} != {len(y)}")
    prod = x.values * y.values
    # products of nonincreasing nonnegative sequences stay nonincreasing
    assert np.all(np.diff(prod) <= ATOL * max(1.0, prod[0]))
    return MonotoneSequence(prod)


def read_csv(path_or_text, source=None) -> MonotoneSequence:
    """Read a ``mu`` column (header ``mu``, one value per line).

    ``path_or_text`` may be a path or an open text stream.  Errors carry the
    offending line number.
    """
    if isinstance(path_or_text, (str, Path)):
        source = source or str(path_or_text)
        with open(path_or_text, newline="") as fh:
            return read_csv(fh, source=source)
    reader = csv.reader(path_or_text)
    rows = [(i + 1, row) for i, row in enumerate(reader) if row and any(c.strip() for c in row)]
    if not rows or [c.strip() for c in rows[0][1]] != ["mu"]:
        raise SequenceFormatError("expected header 'mu'", 1, source)
    values = []
    for lineno, row in rows[1:]:
        if len(row) != 1:
            raise SequenceFormatError(f"expected one value, got {len(row)}", lineno, source)
        try:
            v = float(row[0])
        except ValueError:
            raise SequenceFormatError(f"not a number: {row[0]!r}", lineno, source) from None
        if not math.isfinite(v) or v < 0:
            raise SequenceFormatError(f"entry must be finite and >= 0: {row[0]!r}", lineno, source)
        if values and v > values[-1] + ATOL:
            raise SequenceFormatError(
                f"sequence not nonincreasing at index {len(values)} ({values[-1]!r} < {v!r})",
                lineno,
                source,
            )
        values.append(v)
    if not values:
        raise SequenceFormatError("no values", rows[0][0], source)
    return MonotoneSequence(values)


def write_csv(mu: MonotoneSequence, path=None):
    """Write ``mu`` as CSV; returns the text when ``path`` is None."""
    buf = io.StringIO()
    buf.write("mu\n")
    for v in mu.values:
        buf.write(f"{float(v)!r}\n")
    text = buf.getvalue()
    if path is None:
        return text
    Path(path).write_text(text)
    return None
