"""Membership, inclusion, ideal quotients and factorizations for Lorentz ideals.

Membership of a :class:`~opideal.sequences.PowerLogFamily` is decided from its
exponents.  An independent numerical oracle (:func:`divergence_oracle`)
evaluates the defining series or supremum far into the asymptotic regime and
is used to cross-check the exponent rules.

Factorizations ``mu = s * t`` split a member of ``I`` into a member ``s`` of
``J`` and a multiplier ``t`` from ``J`` into ``I``.  Four index patterns are
supported; see :func:`factorize`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import logsumexp

from .sequences import MonotoneSequence, PowerLogFamily, materialize
from .snorms import INF, InadmissibleIndexError, LorentzIndex, lorentz_norm

#: Tolerance when comparing a power exponent with ``alpha``.
EXP_TOL = 1e-12

INTERIOR = "interior"
CRITICAL = "critical-line"
EXCLUDED = "excluded"


class PreconditionError(ValueError):
    """An operation was called outside its documented domain."""


class CriticalStripError(PreconditionError):
    """Case II input on the slowly decaying strip ``a = alpha_0, 0 < b <= 1``."""


@dataclass(frozen=True)
class MembershipVerdict:
    member: bool
    boundary: str
    reason: str


def member(f: PowerLogFamily, idx: LorentzIndex) -> MembershipVerdict:
    """Decide whether ``f`` belongs to ``L^{p,q}`` (or its approximable part).

    Examples
    --------
    >>> member(PowerLogFamily(1, 0.5, 1), LorentzIndex(2, 2)).member
    True
    """
    if not isinstance(f, PowerLogFamily):
        raise TypeError("member() decides PowerLogFamily inputs only")
    alpha = idx.alpha
    a, b = f.a, f.b
    head = f"a={a:g} vs alpha={alpha:g}"
    if a > alpha + EXP_TOL:
        return MembershipVerdict(True, INTERIOR, f"{head}: a > alpha")
    if a < alpha - EXP_TOL:
        return MembershipVerdict(False, EXCLUDED, f"{head}: a < alpha")
    if idx.q < INF:
        ok = b * idx.q > 1
        rel = ">" if ok else "<="
        return MembershipVerdict(ok, CRITICAL, f"{head} (critical); b*q={b * idx.q:g} {rel} 1")
    if idx.approximable_part:
        ok = b > 0
        return MembershipVerdict(ok, CRITICAL, f"{head} (critical); need b > 0 for decay, b={b:g}")
    ok = b >= 0
    return MembershipVerdict(ok, CRITICAL, f"{head} (critical); need b >= 0 for boundedness, b={b:g}")


# ---------------------------------------------------------------------------
# asymptotic oracle
#
# Terms are modelled as n^lam * log(n)^(-d).  Substituting n = e^u turns sums
# over dyadic ranges of u into smooth integrals of exp((lam+1) u - d log u),
# which are evaluated in log space with Gauss-Legendre panels.  That reaches
# n = 2^(2^16) without overflow, well past where log-log effects separate.

HEAD_LOG2 = 20
DOUBLINGS = range(5, 17)
_GL_NODES, _GL_WEIGHTS = leggauss(16)
_PANELS = 64
CONV_RATIO = 0.75
DIV_RATIO = 0.9
SUP_TOL = 1e-3


def _log_integral(log_integrand, u0, u1):
    """``log of the integral of exp(log_integrand(u))`` over ``[u0, u1]``."""
    edges = np.linspace(u0, u1, _PANELS + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    u = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    vals = log_integrand(u) + np.log(_GL_WEIGHTS)[None, :] + np.log(half)[:, None]
    return float(logsumexp(vals))


def _doubling_edges():
    ln2 = math.log(2.0)
    return [HEAD_LOG2 * ln2] + [2.0**j * ln2 for j in DOUBLINGS]


@dataclass(frozen=True)
class OracleResult:
    """Outcome of the asymptotic oracle.

    ``verdict`` is one of ``"member"``, ``"non-member"``, ``"inconclusive"``.
    ``steps`` holds the quantities the decision was made on: log-ratios of
    consecutive increments (series) or log-differences along ``n = 2^(2^j)``
    (suprema).
    """

    verdict: str
    kind: str
    steps: tuple
    head: tuple = ()

    @property
    def member(self):
        return {"member": True, "non-member": False}.get(self.verdict)


def series_oracle(lam, d):
    """Convergence of ``sum n^lam log(n)^(-d)`` from dyadic increments."""
    edges = _doubling_edges()
    logf = lambda u: (lam + 1.0) * u - d * np.log(u)
    incs = [_log_integral(logf, u0, u1) for u0, u1 in zip(edges[1:-1], edges[2:])]
    log_ratios = np.diff(incs)
    last = log_ratios[-3:]
    if np.all(last <= math.log(CONV_RATIO)):
        verdict = "member"
    elif np.all(last >= math.log(DIV_RATIO)):
        verdict = "non-member"
    else:
        verdict = "inconclusive"
    return OracleResult(verdict, "series", tuple(float(x) for x in log_ratios))


def _sup_decision(logs, tends_to_zero):
    diffs = np.diff(logs)
    last = diffs[-3:]
    if tends_to_zero:
        if np.all(last < -SUP_TOL):
            verdict = "member"
        elif np.all(last >= -SUP_TOL):
            verdict = "non-member"
        else:
            verdict = "inconclusive"
    else:
        if np.all(last <= SUP_TOL):
            verdict = "member"
        elif np.all(last > SUP_TOL):
            verdict = "non-member"
        else:
            verdict = "inconclusive"
    return OracleResult(verdict, "sup", tuple(float(x) for x in diffs))


def sup_oracle(lam, d, tends_to_zero=False):
    """Boundedness (or decay to 0) of ``n^lam log(n)^(-d)`` along ``n = 2^(2^j)``."""
    u = np.array(_doubling_edges()[1:])
    return _sup_decision(lam * u - d * np.log(u), tends_to_zero)


def _head_partials(terms):
    """Partial sums at ``N = 2^10, ..., 2^20`` of a precomputed term array."""
    cs = np.cumsum(terms)
    return tuple(float(cs[2**k - 1]) for k in range(10, HEAD_LOG2 + 1))


def divergence_oracle(f: PowerLogFamily, idx: LorentzIndex) -> OracleResult:
    """Numerically test membership of ``f`` in ``idx`` without the exponent rules.

    Exact partial sums up to ``N = 2^20`` are reported in ``head``; the
    decision uses the log-space continuation beyond that.
    """
    if not isinstance(f, PowerLogFamily):
        raise TypeError("the oracle needs a PowerLogFamily")
    alpha = idx.alpha
    if idx.q == INF and idx.p > 1:
        return sup_oracle(alpha - f.a, f.b, idx.approximable_part)
    N = 2**HEAD_LOG2
    n = np.arange(1, N + 1, dtype=float)
    mu = materialize(f, N).values
    if idx.q < INF:
        q = idx.q
        terms = n ** (alpha * q - 1.0) * mu**q
        res = series_oracle(alpha * q - 1.0 - f.a * q, f.b * q)
        return OracleResult(res.verdict, res.kind, res.steps, _head_partials(terms))
    # (1, inf): sigma_N / log N; sigma continues the exact head with the integral of mu
    head_sigma = float(np.sum(mu))
    logmu = lambda u: math.log(f.C) + (1.0 - f.a) * u - f.b * np.log(u)
    edges = _doubling_edges()
    log_sigma = [math.log(head_sigma)]
    for u0, u1 in zip(edges[:-1], edges[1:]):
        log_sigma.append(float(np.logaddexp(log_sigma[-1], _log_integral(logmu, u0, u1))))
    u = np.array(edges[1:])
    logs = np.array(log_sigma[1:]) - np.log(u)
    res = _sup_decision(logs, idx.approximable_part)
    return OracleResult(res.verdict, res.kind, res.steps, _head_partials(mu))


def series_converges(lam, d):
    """Exponent rule for ``sum n^lam log(n)^(-d) < inf``."""
    return lam < -1 - EXP_TOL or (abs(lam + 1) <= EXP_TOL and d > 1)


def tends_to_zero(lam, d):
    """Exponent rule for ``n^lam log(n)^(-d) -> 0``."""
    return lam < -EXP_TOL or (abs(lam) <= EXP_TOL and d > 0)


def is_bounded(lam, d):
    return lam < -EXP_TOL or (abs(lam) <= EXP_TOL and d >= 0)


# ---------------------------------------------------------------------------
# lattice


def includes(idx1: LorentzIndex, idx2: LorentzIndex) -> bool:
    """Whether ``L^{idx1}`` is contained in ``L^{idx2}``.

    Lexicographic in ``(p, q)``; at equal ``(p, inf)`` only the full ideal
    fails to sit inside the approximable part.
    """
    if idx1.p != idx2.p:
        return idx1.p < idx2.p
    if idx1.q != idx2.q:
        return idx1.q < idx2.q
    if idx1.q == INF:
        return idx1.is_approximable or not idx2.is_approximable
    return True


def non_inclusion_witness(idx1: LorentzIndex, idx2: LorentzIndex) -> PowerLogFamily:
    """A family inside ``L^{idx1}`` but outside ``L^{idx2}``.

    For ``p1 > p2`` the critical family ``n^{-1/p2}`` is used when it lies
    outside ``idx2``; otherwise (``idx2`` a full weak ideal) the power is taken
    halfway between the two critical lines.  For ``p1 = p2`` the family sits
    on the critical line with log exponent ``b = 1/q2`` (or ``b = 0`` when only
    the approximable flag differs).
    """
    if includes(idx1, idx2):
        raise PreconditionError(f"{idx1} is contained in {idx2}; no witness exists")
    a1, a2 = idx1.alpha, idx2.alpha
    if idx1.p > idx2.p:
        f = PowerLogFamily(1.0, a2, 0.0)
        if member(f, idx2).member:
            f = PowerLogFamily(1.0, 0.5 * (a1 + a2), 0.0)
    elif idx1.q > idx2.q:
        f = PowerLogFamily(1.0, a1, 1.0 / idx2.q)
    else:
        # same (p, inf): full ideal against its approximable part
        f = PowerLogFamily(1.0, a1, 0.0)
    assert member(f, idx1).member and not member(f, idx2).member
    return f


def _in_proposition_scope(idx):
    if idx.p == 1 and idx.q == INF:
        return False
    return idx.is_approximable


def preceq(idx1: LorentzIndex, idx2: LorentzIndex) -> bool:
    """The factorization order ``I <= J`` between approximable Lorentz ideals.

    Holds exactly when ``(p1, q1) <= (p2, q2)`` lexicographically.
    """
    for idx in (idx1, idx2):
        if not _in_proposition_scope(idx):
            raise PreconditionError(
                f"{idx} is outside the ordered family; use approximable parts and avoid (1, inf)"
            )
    return (idx1.p, idx1.q) <= (idx2.p, idx2.q)


# ---------------------------------------------------------------------------
# factorizations


@dataclass(frozen=True)
class Certificate:
    """One membership claim about a factor.

    ``analytic`` comes from exponent rules (``None`` for concrete input) and
    ``numeric`` from the oracle or, for concrete input, a finite trend.
    ``certified`` is False for concrete-input diagnostics.
    """

    claim: str
    analytic: bool | None
    numeric: str
    certified: bool

    @property
    def passed(self):
        if self.analytic is None:
            return self.numeric in ("member", "converging", "decaying")
        return bool(self.analytic) and self.numeric == "member"


@dataclass(frozen=True)
class FactorizationWitness:
    """``mu = s * t`` with ``s`` in ``J`` and ``t`` a multiplier from ``J`` into ``I``.

    For symbolic input ``s`` and ``t`` are :class:`PowerLogFamily` objects; for
    concrete input they are read-only arrays (``t`` need not be monotone).
    """

    s: object
    t: object
    case_tag: str
    idx_I: LorentzIndex
    idx_J: LorentzIndex
    certificates: tuple = field(default=())

    @property
    def symbolic(self):
        return isinstance(self.s, PowerLogFamily)

    @property
    def all_passed(self):
        return all(c.passed for c in self.certificates)

    def arrays(self, N=None):
        """``(s, t)`` as arrays of length ``N`` (raw family terms when symbolic)."""
        if self.symbolic:
            n = np.arange(N)
            return self.s.terms(n), self.t.terms(n)
        return np.asarray(self.s), np.asarray(self.t)


def classify_case(idx_I: LorentzIndex, idx_J: LorentzIndex) -> str:
    """Which of the four supported patterns ``(I, J)`` matches."""
    I, J = idx_I, idx_J
    if (I.p, I.q) == (1, 1) and J.q == 1 and J.p > 1:
        return "IV"
    if I.q == INF and I.approximable_part and 1 < I.p < J.p and J.q == 1:
        return "II"
    if J.q == INF and J.approximable_part and I.p == J.p and I.q < INF and J.p > 1:
        return "III"
    if I.q == 1 and I.p == J.p and J.q < INF and (I.p, J.q) != (1, INF):
        return "I"
    raise PreconditionError(f"no factorization pattern for I={I}, J={J}")


def _sym_cert(claim, analytic, oracle):
    return Certificate(claim, bool(analytic), oracle.verdict, True)


def _series_cert(claim, lam, d):
    return _sym_cert(claim, series_converges(lam, d), series_oracle(lam, d))


def _zero_cert(claim, lam, d):
    return _sym_cert(claim, tends_to_zero(lam, d), sup_oracle(lam, d, tends_to_zero=True))


def _bounded_cert(claim, lam, d):
    return _sym_cert(claim, is_bounded(lam, d), sup_oracle(lam, d))


def _to_zero_split(f, alpha, q):
    """Split a member of an approximable ideal with critical power ``alpha``.

    Returns ``(s, t)`` with ``s`` still in the ideal and ``t -> 0``.
    """
    a, b, C = f.a, f.b, f.C
    if a > alpha + EXP_TOL:
        s = PowerLogFamily(1.0, 0.5 * (a + alpha), 0.5 * b)
        t = PowerLogFamily(C, 0.5 * (a - alpha), 0.5 * b)
    elif q < INF:
        shift = (b * q - 1.0) / (2.0 * q)
        s = PowerLogFamily(1.0, alpha, shift)
        t = PowerLogFamily(C, 0.0, b - shift)
    else:
        s = PowerLogFamily(1.0, alpha, 0.5 * b)
        t = PowerLogFamily(C, 0.0, 0.5 * b)
    return s, t


def compact_split(f: PowerLogFamily, idx: LorentzIndex):
    """Factor a member of an approximable ideal as ``s * t``, ``s`` in ``idx``, ``t -> 0``."""
    if not idx.is_approximable:
        raise PreconditionError(f"{idx} is not approximable")
    if not member(f, idx).member:
        raise PreconditionError(f"family is not a member of {idx}")
    s, t = _to_zero_split(f, idx.alpha, idx.q)
    if idx.q < INF and abs(f.a - idx.alpha) <= EXP_TOL:
        # on the critical line the larger log power must stay with s
        s, t = PowerLogFamily(1.0, idx.alpha, t.b), PowerLogFamily(f.C, 0.0, s.b)
    return s, t


def _require_member(f, idx):
    v = member(f, idx)
    if not v.member:
        raise PreconditionError(f"input is not a member of I={idx}: {v.reason}")


def _factorize_symbolic(f, I, J, case):
    _require_member(f, I)
    a, b, C = f.a, f.b, f.C
    if case == "I":
        q, alpha = J.q, J.alpha
        s = PowerLogFamily(C ** (1.0 / q), (a + alpha * (q - 1.0)) / q, b / q)
        t = PowerLogFamily(C ** ((q - 1.0) / q), (q - 1.0) * (a - alpha) / q, b * (q - 1.0) / q)
        certs = [_series_cert("s in J", alpha * q - 1.0 - s.a * q, s.b * q)]
        if q > 1:
            qp = q / (q - 1.0)
            certs.append(_series_cert("sum t^q'/n < inf (Hoelder multiplier)", -1.0 - t.a * qp, t.b * qp))
        else:
            certs.append(_bounded_cert("t bounded", -t.a, t.b))
    elif case == "III":
        q, alpha = I.q, I.alpha
        s, t = _to_zero_split(f, alpha, q)
        certs = [
            _zero_cert("n^alpha s_n -> 0 (s in J)", alpha - s.a, s.b),
            _series_cert("sum t^q/n < inf (multiplier into I)", -1.0 - t.a * q, t.b * q),
            _zero_cert("t -> 0", -t.a, t.b),
        ]
    else:
        alpha0 = 1.0 if case == "IV" else I.alpha
        alpha1 = J.alpha
        critical = abs(a - alpha0) <= EXP_TOL
        if critical and b <= 1:
            raise CriticalStripError(
                f"a = {a:g} = alpha_0 with 0 < b = {b:g} <= 1: no power-log split keeps "
                "both s in J and n^(alpha_0 - alpha_1) t_n -> 0"
            )
        eps = 0.5 * (b - 1.0) if critical else 1.0
        s = PowerLogFamily(1.0, alpha1, 1.0 + eps)
        t = PowerLogFamily(C, a - alpha1, b - 1.0 - eps)
        certs = [
            _series_cert("s in J", alpha1 - 1.0 - s.a, s.b),
            _zero_cert("n^(alpha_0 - alpha_1) t_n -> 0", alpha0 - alpha1 - t.a, t.b),
        ]
    return FactorizationWitness(s, t, case, I, J, tuple(certs))


def _trend(values):
    """Label a finite sequence of partial sums as converging/diverging/inconclusive."""
    inc = np.diff(np.asarray(values, dtype=float))
    if inc.size < 4:
        return "inconclusive"
    if np.all(inc[-3:] == 0):
        return "converging"
    r = inc[-3:] / np.where(inc[-4:-1] == 0, np.nan, inc[-4:-1])
    if np.all(r <= CONV_RATIO):
        return "converging"
    if np.all(r >= DIV_RATIO):
        return "diverging"
    return "inconclusive"


def _dyadic_partials(terms):
    cs = np.cumsum(terms)
    ks = [2**k for k in range(int(math.log2(len(terms))) + 1)]
    return [cs[k - 1] for k in ks]


def _factorize_concrete(mu, I, J, case):
    v = mu.values
    N = v.size
    n = np.arange(1, N + 1, dtype=float)
    if case == "I":
        q, alpha = J.q, J.alpha
        s = n ** (alpha * (1.0 - q) / q) * v ** (1.0 / q)
        t = n ** (alpha * (q - 1.0) / q) * v ** ((q - 1.0) / q)
        trend = _trend(_dyadic_partials(n ** (alpha * q - 1.0) * s**q))
        certs = [Certificate("s in J (finite trend)", None, trend, False)]
        if q > 1:
            qp = q / (q - 1.0)
            trend_t = _trend(_dyadic_partials(t**qp / n))
            certs.append(Certificate("sum t^q'/n (finite trend)", None, trend_t, False))
    elif case == "III":
        q, alpha = I.q, I.alpha
        h = n**alpha * v
        c = h**q / n
        R = np.cumsum(c[::-1])[::-1]
        if R[0] == 0:
            raise PreconditionError("zero sequence has no nontrivial factorization")
        with np.errstate(divide="ignore", invalid="ignore"):
            g = (R / R[0]) ** (1.0 / (2.0 * q))
            t = np.where(g > 0, h / g, 0.0)
        s = g / n**alpha
        decaying = "decaying" if g[-1] < g[0] else "inconclusive"
        certs = [
            Certificate("n^alpha s_n nonincreasing towards 0 (finite)", None, decaying, False),
            Certificate(
                "sum t^q/n <= 2 * sum h^q/n (finite)",
                None,
                "converging" if np.sum(c[g > 0] / g[g > 0] ** q) <= 2 * R[0] * (1 + 1e-12) else "diverging",
                False,
            ),
        ]
    else:
        raise PreconditionError(f"case {case} is implemented for PowerLogFamily input only")
    s.setflags(write=False)
    t.setflags(write=False)
    return FactorizationWitness(s, t, case, I, J, tuple(certs))


def factorize(f, idx_I: LorentzIndex, idx_J: LorentzIndex) -> FactorizationWitness:
    """Split a member of ``I`` as ``s * t`` through ``J``.

    Patterns (``alpha = 1/p``):

    ``I``   ``I = (p, 1)``, ``J = (p, q)`` with ``q < inf``.
    ``II``  ``I = (p0, inf)_0``, ``J = (p1, 1)``, ``p0 < p1`` (symbolic only).
    ``III`` ``I = (p, q)``, ``J = (p, inf)_0``, ``q < inf``.
    ``IV``  ``I = (1, 1)``, ``J = (p, 1)``, ``p > 1`` (symbolic only).

    Concrete inputs index ``mu`` from ``n = 1`` (``mu_{n-1} = s_n t_n``) and
    receive finite-truncation diagnostics that are not certificates.

    Raises
    ------
    PreconditionError
        Pattern mismatch or ``f`` not a member of ``I``.
    CriticalStripError
        Case II input with ``a = alpha_0`` and ``0 < b <= 1``.
    """
    case = classify_case(idx_I, idx_J)
    if isinstance(f, PowerLogFamily):
        return _factorize_symbolic(f, idx_I, idx_J, case)
    mu = f if isinstance(f, MonotoneSequence) else MonotoneSequence(f)
    return _factorize_concrete(mu, idx_I, idx_J, case)


# ---------------------------------------------------------------------------
# the block construction for approximable ideals


def block_factorization(mu, idx: LorentzIndex):
    """Split a finite ``mu`` as ``s * t`` with ``t`` constant ``2^-k`` on blocks.

    Block ``k`` starts at the first ``n_k`` whose tail ``(mu_n)_{n >= n_k}``
    has ``idx``-norm below ``4^-k * ||mu||``; there ``s = 2^k mu``.  Hence
    ``||diag(s)|| <= 2 ||mu||`` while ``t`` steps down to 0.

    Returns
    -------
    s, t : ndarray
    starts : list of int
        The block starts ``n_0 = 0 < n_1 < ...``.
    """
    if not idx.is_approximable:
        raise PreconditionError(f"{idx} is not approximable")
    mu = mu if isinstance(mu, MonotoneSequence) else MonotoneSequence(mu)
    v = mu.values
    N = v.size
    total = lorentz_norm(mu, idx)
    tail = lambda n: lorentz_norm(MonotoneSequence(v[n:]), idx) if n < N else 0.0
    starts = [0]
    k = 1
    while starts[-1] < N and total > 0:
        target = total * 4.0**-k
        lo, hi = starts[-1] + 1, N
        while lo < hi:  # first n with tail(n) < target
            mid = (lo + hi) // 2
            if tail(mid) < target:
                hi = mid
            else:
                lo = mid + 1
        if lo >= N:
            break
        starts.append(lo)
        k += 1
    t = np.empty(N)
    bounds = starts + [N]
    for k, (b0, b1) in enumerate(zip(bounds[:-1], bounds[1:])):
        t[b0:b1] = 2.0**-k
    s = v / t
    return s, t, starts


__all__ = [
    "Certificate",
    "CriticalStripError",
    "FactorizationWitness",
    "InadmissibleIndexError",
    "MembershipVerdict",
    "OracleResult",
    "PreconditionError",
    "block_factorization",
    "classify_case",
    "compact_split",
    "divergence_oracle",
    "factorize",
    "includes",
    "is_bounded",
    "member",
    "non_inclusion_witness",
    "preceq",
    "series_converges",
    "series_oracle",
    "sup_oracle",
    "tends_to_zero",
]
