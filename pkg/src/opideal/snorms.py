"""Schatten and Lorentz norms, Lorentz quasi-norms and symmetric norming functions.

Every norm here is evaluated on a finite-rank operator: the input sequence
lists its leading characteristic numbers and all later ones vanish.  The
defining series therefore still run over all ``n >= 1``; beyond the
truncation ``sigma_n`` is constant and the tail is summed in closed form with
the Hurwitz zeta function.  Appending zeros to the input never changes a value.

Lorentz norms come in two flavours:

* ``normalized=True`` (default): scaled so that a rank-one operator with
  singular value ``c`` has norm ``c``.  These are symmetric norms and are what
  the ideal and topology layers use.
* ``normalized=False``: the bare weighted-``sigma`` expression.  This is the
  form for which ``quasinorm <= norm`` holds termwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import zeta

from .sequences import MonotoneSequence
from .spectra import characteristic_numbers, as_operator

INF = math.inf


class InadmissibleIndexError(ValueError):
    """A (p, q) pair outside the Lorentz range."""


def parse_exponent(text):
    """Parse ``'2'``, ``'1.5'``, ``'inf'`` into a float."""
    if isinstance(text, (int, float)):
        return float(text)
    t = str(text).strip().lower()
    if t in ("inf", "infinity", "oo"):
        return INF
    return float(t)


def _fmt(x):
    return "inf" if x == INF else f"{x:g}"


@dataclass(frozen=True)
class LorentzIndex:
    """Index ``(p, q)`` of a Lorentz ideal, plus the approximable-part flag.

    Admissible: ``1 < p < inf`` with ``1 <= q <= inf``, or ``(p, q)`` one of
    ``(1, 1)``, ``(1, inf)``, ``(inf, 1)``, ``(inf, inf)``.  For ``q < inf``
    the ideal is already approximable, so the flag only matters at ``q = inf``.
    """

    p: float
    q: float
    approximable_part: bool = False

    def __post_init__(self):
        p, q = parse_exponent(self.p), parse_exponent(self.q)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        if math.isnan(p) or math.isnan(q):
            raise InadmissibleIndexError("p and q must be numbers")
        bulk = 1 < p < INF and 1 <= q <= INF
        corner = p in (1.0, INF) and q in (1.0, INF)
        if not (bulk or corner):
            raise InadmissibleIndexError(f"inadmissible Lorentz index (p, q) = ({_fmt(p)}, {_fmt(q)})")

    @property
    def alpha(self):
        return 1.0 / self.p

    @property
    def beta(self):
        return 1.0 / self.q

    @property
    def is_approximable(self):
        return self.q < INF or self.approximable_part

    @property
    def key(self):
        """Lexicographic sort key; the approximable part sorts below the full ideal."""
        return (self.p, self.q, 0 if self.is_approximable else 1)

    def __str__(self):
        tail = "_0" if self.q == INF and self.approximable_part else ""
        return f"L^({_fmt(self.p)},{_fmt(self.q)}){tail}"


#: The nine-index test catalogue; ``q = inf`` entries appear with both flags
#: where the two ideals differ.
CATALOG_PQ = [(1, 1), (1, INF), (1.5, 1), (1.5, 2), (1.5, INF), (2, 2), (3, 1), (INF, 1), (INF, INF)]


def catalog(both_flags=True):
    out = []
    for p, q in CATALOG_PQ:
        out.append(LorentzIndex(p, q, q == INF))
        if both_flags and q == INF:
            out.append(LorentzIndex(p, q, False))
    return out


def _check_seq(mu):
    if not isinstance(mu, MonotoneSequence):
        mu = MonotoneSequence(mu)
    return mu


def schatten_norm(mu, p) -> float:
    """``(sum mu_n^p)^(1/p)``, or ``mu_0`` for ``p = inf``."""
    mu = _check_seq(mu)
    p = parse_exponent(p)
    if not p >= 1:
        raise ValueError(f"Schatten exponent must be >= 1, got {p}")
    v = mu.values
    if p == INF or v[0] == 0:
        return float(v[0])
    # scale out mu_0 to keep large p from underflowing
    return float(v[0] * np.sum((v / v[0]) ** p) ** (1.0 / p))


@dataclass(frozen=True)
class NormValue:
    """A norm value with the location of the supremum for sup-type norms."""

    value: float
    argmax_n: int | None = None
    truncation: int = 0


def _series_exponent(idx):
    """``s`` with weight ``n^{-s}`` multiplying ``sigma_n^q`` in the sum-type norm."""
    return (1.0 - idx.alpha) * idx.q + 1.0


def lorentz_constant(idx: LorentzIndex) -> float:
    """Raw norm of the unit rank-one operator."""
    if idx.p == idx.q:
        return 1.0
    if idx.q == INF:
        return 1.0 / math.log(2.0) if idx.p == 1 else 1.0
    return float(zeta(_series_exponent(idx))) ** (1.0 / idx.q)


def lorentz_norm_detail(mu, idx: LorentzIndex, normalized=True) -> NormValue:
    """Lorentz ``(p, q)`` norm with diagnostics; see :func:`lorentz_norm`."""
    mu = _check_seq(mu)
    N = len(mu)
    if idx.p == idx.q:
        argmax = 1 if idx.q == INF else None
        return NormValue(schatten_norm(mu, idx.p), argmax, N)
    sigma = np.cumsum(mu.values)
    n = np.arange(1, N + 1, dtype=float)
    if idx.q == INF:
        if idx.p == 1:
            # sup over n >= 2 of sigma_n / log n; sigma is constant past N so
            # n = max(N, 2) is the last candidate
            m = max(N, 2)
            ext = np.concatenate([sigma, np.full(m - N, sigma[-1])])
            ratios = ext[1:] / np.log(np.arange(2, m + 1, dtype=float))
            k = int(np.argmax(ratios))
            value, argmax = float(ratios[k]), k + 2
        else:
            ratios = n ** (idx.alpha - 1.0) * sigma
            k = int(np.argmax(ratios))
            value, argmax = float(ratios[k]), k + 1
    else:
        q, s = idx.q, _series_exponent(idx)
        scale = sigma[-1]
        if scale == 0:
            return NormValue(0.0, None, N)
        head = np.sum(n ** (-s) * (sigma / scale) ** q)
        tail = float(zeta(s, N + 1))
        value, argmax = float(scale * (head + tail) ** (1.0 / q)), None
    if normalized:
        value /= lorentz_constant(idx)
    return NormValue(value, argmax, N)


def lorentz_norm(mu, idx: LorentzIndex, normalized=True) -> float:
    """Lorentz norm of the finite-rank operator with characteristic numbers ``mu``.

    Cases: ``p = q`` gives the Schatten norm; ``q < inf`` the series
    ``(sum_{n>=1} n^{(alpha-1)q-1} sigma_n^q)^{1/q}``; ``q = inf, p > 1`` the
    supremum ``sup_n n^{alpha-1} sigma_n``; ``(1, inf)`` uses
    ``sup_{n>=2} sigma_n / log n``.
    """
    return lorentz_norm_detail(mu, idx, normalized).value


def _check_quasi_scope(idx):
    ok = (1 < idx.p < INF) or (idx.p == INF and idx.q == 1)
    if not ok:
        raise InadmissibleIndexError(f"no equivalent quasi-norm is provided for {idx}")


def lorentz_quasinorm_detail(mu, idx: LorentzIndex) -> NormValue:
    mu = _check_seq(mu)
    _check_quasi_scope(idx)
    N = len(mu)
    n = np.arange(1, N + 1, dtype=float)
    v = mu.values
    if idx.q == INF:
        vals = n ** idx.alpha * v
        k = int(np.argmax(vals))
        return NormValue(float(vals[k]), k + 1, N)
    if v[0] == 0:
        return NormValue(0.0, None, N)
    q = idx.q
    total = np.sum(n ** (idx.alpha * q - 1.0) * (v / v[0]) ** q)
    return NormValue(float(v[0] * total ** (1.0 / q)), None, N)


def lorentz_quasinorm(mu, idx: LorentzIndex) -> float:
    """``(sum n^{alpha q - 1} mu_{n-1}^q)^{1/q}``, or ``sup n^alpha mu_{n-1}`` at ``q = inf``.

    Defined for ``1 < p < inf`` and for ``(inf, 1)``; ``(1, inf)`` is refused.
    """
    return lorentz_quasinorm_detail(mu, idx).value


# ---------------------------------------------------------------------------
# symmetric norming functions


@dataclass(frozen=True)
class SnFunction:
    """A symmetric norming function on finitely supported sequences.

    ``evaluator`` receives a 1-D array of nonnegative, nonincreasing entries
    (the decreasing rearrangement of ``|xi|``) and must be free of side effects.
    """

    name: str
    evaluator: Callable[[np.ndarray], float] = field(compare=False)

    def __call__(self, xi):
        x = np.sort(np.abs(np.asarray(xi, dtype=complex)).ravel())[::-1]
        if x.size == 0:
            return 0.0
        return float(self.evaluator(x))


def sum_function():
    return SnFunction("sum", lambda x: float(np.sum(x)))


def max_function():
    return SnFunction("max", lambda x: float(x[0]))


def lorentz_function(idx: LorentzIndex):
    return SnFunction(f"lorentz{str(idx)[1:]}", lambda x: lorentz_norm(MonotoneSequence(x), idx))


def table_function(weights, name="table"):
    """``Phi(xi) = sum_k w_k xi*_k`` for a nonincreasing weight table, ``w_0 = 1``.

    The last weight is repeated past the end of the table.
    """
    w = np.asarray(weights, dtype=float)
    if w.size == 0 or w[0] != 1.0 or np.any(np.diff(w) > 0) or w[-1] <= 0:
        raise ValueError("weights must be positive, nonincreasing, and start at 1")

    def ev(x):
        ww = w[: x.size] if x.size <= w.size else np.concatenate([w, np.full(x.size - w.size, w[-1])])
        return float(np.dot(ww, x))

    return SnFunction(name, ev)


def induced_norm(phi: SnFunction, mu) -> float:
    """``Phi(mu)`` as the supremum of ``Phi`` over leading sections of ``mu``."""
    mu = _check_seq(mu)
    v = mu.values
    prefix = max(phi(v[:k]) for k in range(1, v.size + 1))
    full = phi(v)
    if prefix > full * (1 + 1e-12) + 1e-12:
        raise ArithmeticError(f"{phi.name} is not monotone under zero extension")
    return full


# ---------------------------------------------------------------------------
# multiplier seminorms


def mult_seminorm(x, K, idx: LorentzIndex, side="left") -> float:
    """``|||x K|||`` (left) or ``|||K x|||`` (right) in the Lorentz norm ``idx``."""
    x, K = as_operator(x), as_operator(K)
    if side == "left":
        if x.shape[1] != K.shape[0]:
            raise ValueError(f"dimension mismatch: {x.shape} @ {K.shape}")
        M = x @ K
    elif side == "right":
        if K.shape[1] != x.shape[0]:
            raise ValueError(f"dimension mismatch: {K.shape} @ {x.shape}")
        M = K @ x
    else:
        raise ValueError("side must be 'left' or 'right'")
    return lorentz_norm(characteristic_numbers(M), idx)


def bilateral_seminorm(x, K, idx: LorentzIndex) -> float:
    return max(mult_seminorm(x, K, idx, "left"), mult_seminorm(x, K, idx, "right"))
