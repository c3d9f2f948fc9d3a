"""Finite-truncation experiments on multiplier seminorms.

Three experiments live here:

* :func:`run_separation` builds the rescaled projections ``x_n = E_n / mu_n``
  from a witness of ``I not in J`` and tracks their seminorms on both sides.
* :func:`needapprox_demo` shows a strongly null sequence whose
  ``(1, inf)``-seminorm does not go to zero.
* :func:`bounded_coincidence` runs norm-bounded nets against a Hilbert-Schmidt
  catalogue and a Lorentz catalogue and compares the two decay curves.

:func:`ordering_consistency` checks the transfer of seminorm bounds along a
factorization ``x_I = x_J t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import digamma

from . import ideals
from .ideals import PreconditionError, factorize, member, non_inclusion_witness
from .sequences import MonotoneSequence, PowerLogFamily, materialize
from .snorms import INF, LorentzIndex, lorentz_norm, mult_seminorm
from .spectra import (
    ProjectionFamily,
    characteristic_numbers,
    diagonal_operator,
    random_unitary,
    scaled_projection,
)

#: Dense matrices are used (instead of the rank-one shortcut) up to this size.
MATRIX_PATH_MAX_DIM = 64
ROTATION_BLOCK = 64
SEPARATION_THRESHOLD = 0.1


def _log_threshold(idx):
    """Smallest log exponent ``b`` on the critical line that is (nearly) inside ``idx``."""
    return 1.0 / idx.q if idx.q < INF else 0.0


def interior_families(idx: LorentzIndex):
    """Five power-log families strictly inside ``idx``."""
    a, b = idx.alpha, _log_threshold(idx)
    fams = [
        PowerLogFamily(1.0, a, b + 1.5),
        PowerLogFamily(1.0, a, b + 2.5),
        PowerLogFamily(1.0, a + 0.5, 0.0),
        PowerLogFamily(1.0, a + 1.0, 0.0),
        PowerLogFamily(1.0, a + 0.25, b + 1.0),
    ]
    assert all(member(f, idx).member for f in fams)
    return fams


@dataclass(frozen=True)
class CatalogMember:
    """``U diag(mu) U*`` with ``U`` acting on a leading block (identity when None)."""

    family: PowerLogFamily
    rotation: np.ndarray | None = None
    scale: float = 1.0

    def diagonal(self, dim):
        return self.scale * materialize(self.family, dim).values

    def matrix(self, dim):
        T = np.diag(self.diagonal(dim).astype(complex))
        if self.rotation is not None:
            k = min(self.rotation.shape[0], dim)
            U = self.rotation[:k, :k]
            T[:k, :k] = U @ T[:k, :k] @ U.conj().T
        return T

    def row_col_norms(self, dim):
        """Norms of the rows and columns of :meth:`matrix` without forming it."""
        d = self.diagonal(dim)
        rows, cols = d.copy(), d.copy()
        if self.rotation is not None:
            k = min(self.rotation.shape[0], dim)
            block = self.matrix(k)
            rows[:k] = np.linalg.norm(block, axis=1)
            cols[:k] = np.linalg.norm(block, axis=0)
        return rows, cols


def build_catalog(idx: LorentzIndex, seed=0, rotated=3, dim_hint=ROTATION_BLOCK):
    """Interior families of ``idx`` plus ``rotated`` unitary conjugates of them."""
    rng = np.random.default_rng(seed)
    fams = interior_families(idx)
    out = [CatalogMember(f) for f in fams]
    for f in fams[::2][:rotated]:
        out.append(CatalogMember(f, random_unitary(min(ROTATION_BLOCK, dim_hint), rng)))
    return out


@dataclass(frozen=True)
class SeparationExperiment:
    idx_I: LorentzIndex
    idx_J: LorentzIndex
    dim: int
    witness: PowerLogFamily
    blocks: ProjectionFamily
    test_catalog: tuple

    @classmethod
    def build(cls, idx_I, idx_J, dim, seed=0):
        w = non_inclusion_witness(idx_I, idx_J)
        cat = tuple(build_catalog(idx_J, seed=seed, dim_hint=dim))
        return cls(idx_I, idx_J, dim, w, ProjectionFamily.singletons(dim), cat)


@dataclass(frozen=True)
class SeparationReport:
    i_side_values: np.ndarray
    j_side_values: np.ndarray
    j_side_min_curve: np.ndarray
    verdict: bool
    threshold: float
    path: str

    def to_dict(self):
        return {
            "i_side_values": self.i_side_values.tolist(),
            "j_side_values": self.j_side_values.tolist(),
            "j_side_min_curve": self.j_side_min_curve.tolist(),
            "j_side_final": float(self.j_side_min_curve[-1]),
            "verdict": self.verdict,
            "threshold": self.threshold,
            "path": self.path,
        }


def run_separation(e: SeparationExperiment, threshold=SEPARATION_THRESHOLD, path="auto"):
    """Seminorms of ``x_n = E_n / mu_n(witness)`` on the ``I`` and ``J`` sides.

    The ``I`` side is ``|||x_n D|||_I`` with ``D = diag(witness)``; it is 1 for
    every ``n`` because ``x_n D`` is a rank-one partial isometry.  The ``J``
    side is, for each ``n``, the largest bilateral seminorm of ``x_n`` over the
    catalogue, followed by a running minimum over ``n``.

    ``path="matrix"`` forms every product and computes characteristic
    numbers; ``path="diagonal"`` uses that each ``x_n T`` has rank one, so its
    norm is a row norm of ``T``.  ``"auto"`` picks the matrix path for
    ``dim <= 64``.
    """
    if not member(e.witness, e.idx_I).member or member(e.witness, e.idx_J).member:
        raise PreconditionError("witness does not separate the two ideals")
    dim = e.dim
    if path == "auto":
        path = "matrix" if dim <= MATRIX_PATH_MAX_DIM else "diagonal"
    mu = materialize(e.witness, dim).values
    inv = 1.0 / mu
    if path == "matrix":
        D = diagonal_operator(MonotoneSequence(mu))
        mats = [T.matrix(dim) for T in e.test_catalog]
        i_side = np.empty(dim)
        j_side = np.empty(dim)
        for n in range(dim):
            x = scaled_projection(e.blocks, n, inv[n])
            i_side[n] = mult_seminorm(x, D, e.idx_I, "left")
            j_side[n] = max(
                max(mult_seminorm(x, T, e.idx_J, "left"), mult_seminorm(x, T, e.idx_J, "right"))
                for T in mats
            )
    elif path == "diagonal":
        # rank-one operators have every symmetric norm equal to their one singular value
        i_side = np.array([lorentz_norm([abs(inv[n] * mu[n])], e.idx_I) for n in range(dim)])
        vals = []
        for T in e.test_catalog:
            rows, cols = T.row_col_norms(dim)
            vals.append(np.maximum(rows, cols) * inv)
        j_side = np.max(vals, axis=0)
    else:
        raise ValueError("path must be 'auto', 'matrix' or 'diagonal'")
    curve = np.minimum.accumulate(j_side)
    constant = bool(np.all(np.abs(i_side - 1.0) <= 1e-9))
    verdict = dim > 1 and constant and bool(curve[-1] < threshold)
    return SeparationReport(i_side, j_side, curve, verdict, threshold, path)


def separation_pairs(both=False):
    """Strictly ordered ``(bigger, smaller)`` pairs of the approximable catalogue."""
    from .snorms import catalog

    cat = [i for i in catalog(both_flags=both) if i.is_approximable]
    return [(I, J) for I in cat for J in cat if I != J and ideals.includes(J, I) and not ideals.includes(I, J)]


# ---------------------------------------------------------------------------
# ordering consistency along a factorization


def hardy_value(mu, idx: LorentzIndex):
    """``(sum n^{alpha q - 1} mu_{n-1}^q)^{1/q}`` or ``sup n^alpha mu_{n-1}``.

    The weighted expression used on both sides of the transfer bound; for
    ``(1, 1)`` and ``(inf, inf)`` it reduces to the trace and operator norms.
    """
    if idx.p == 1 and idx.q == INF:
        raise PreconditionError("no weighted-mu expression is used for (1, inf)")
    v = np.asarray(mu, dtype=float)
    n = np.arange(1, v.size + 1, dtype=float)
    if idx.q == INF:
        return float(np.max(n**idx.alpha * v))
    q = idx.q
    return float(np.sum(n ** (idx.alpha * q - 1.0) * v**q) ** (1.0 / q))


def _duplicate(v):
    return np.repeat(v, 2)


def transfer_constant(t, idx_I: LorentzIndex, idx_J: LorentzIndex, case: str):
    """A constant ``C`` with ``h_I(mu(Y diag(t))) <= C h_J(mu(Y))`` for all ``Y``.

    ``h`` is :func:`hardy_value`.  The bound rests on
    ``mu_{2k}(Yt), mu_{2k+1}(Yt) <= mu_k(Y) t*_k`` with ``t*`` the decreasing
    rearrangement of ``|t|``, followed by Hoelder's inequality (cases I, IV),
    the partial-sum bound ``mu_k(Y) W_{k+1} <= h_J(Y)`` (case II) or the weak
    bound ``mu_k(Y) <= h_J(Y) (k+1)^{-alpha}`` (case III).
    """
    ts = np.sort(np.abs(np.asarray(t, dtype=float)))[::-1]
    k = np.arange(ts.size, dtype=float)
    if case in ("I", "IV"):
        aI = idx_I.alpha
        w = (2 * k + 1) ** (aI - 1.0) + (2 * k + 2) ** (aI - 1.0)
        vec = ts * w * (k + 1) ** (1.0 / idx_J.q - idx_J.alpha)
        if idx_J.q == 1:
            return float(np.max(vec))
        qp = idx_J.q / (idx_J.q - 1.0)
        return float(np.sum(vec**qp) ** (1.0 / qp))
    if case == "II":
        W = np.cumsum((k + 1) ** (idx_J.alpha - 1.0))
        return float(np.max((2 * k + 2) ** idx_I.alpha * ts / W))
    if case == "III":
        m = (k + 1) ** (-idx_J.alpha)
        return hardy_value(_duplicate(m * ts), idx_I)
    raise ValueError(f"unknown case {case!r}")


@dataclass(frozen=True)
class OrderingReport:
    case: str
    constant: float
    lhs: np.ndarray
    rhs: np.ndarray
    slack: float

    @property
    def ratios(self):
        return self.lhs / (self.constant * self.rhs)

    @property
    def holds(self):
        return bool(np.all(self.lhs <= self.slack * self.constant * self.rhs))


def random_contraction(dim, rng):
    """Real Gaussian matrix scaled to Frobenius norm 1 (so operator norm < 1)."""
    X = rng.standard_normal((dim, dim))
    return X / np.linalg.norm(X)


def ordering_consistency(f: PowerLogFamily, idx_I, idx_J, dim=128, trials=100, seed=0, slack=1.05):
    """Check ``h_I(x x_I) <= C h_J(x x_J)`` on random contractions ``x``.

    ``x_I = diag(f)`` and ``x_J = diag(s)`` come from :func:`factorize`, so
    ``x_I = x_J diag(t)``; ``C`` is :func:`transfer_constant` of ``t``.
    """
    w = factorize(f, idx_I, idx_J)
    s, t = w.arrays(dim)
    C = transfer_constant(t, idx_I, idx_J, w.case_tag)
    xI = np.diag((s * t).astype(complex))
    xJ = np.diag(s.astype(complex))
    rng = np.random.default_rng(seed)
    lhs, rhs = np.empty(trials), np.empty(trials)
    for i in range(trials):
        x = random_contraction(dim, rng)
        lhs[i] = hardy_value(characteristic_numbers(x @ xI).values, idx_I)
        rhs[i] = hardy_value(characteristic_numbers(x @ xJ).values, idx_J)
    return OrderingReport(w.case_tag, C, lhs, rhs, slack)


# ---------------------------------------------------------------------------
# strong convergence without seminorm convergence


def analytic_tail_sup(n, m_max=1e12, points=400):
    """``sup_{m >= 2} sigma_m / log m`` for the infinite tail ``(1/(k+1))_{k > n}``.

    ``sigma_m = psi(n + 2 + m) - psi(n + 2)`` grows like ``log m``, so the
    ratio creeps up to 1; the value is sampled on a geometric grid of ``m``.
    """
    m = np.unique(np.geomspace(2, m_max, points).astype(np.int64)).astype(float)
    ratios = (digamma(n + 2 + m) - digamma(n + 2)) / np.log(m)
    return float(np.max(ratios))


@dataclass(frozen=True)
class NeedApproxReport:
    dim: int
    seminorm_curve: np.ndarray
    strong_curve: np.ndarray
    analytic_tail: np.ndarray

    def floor_at(self, n):
        return float(self.seminorm_curve[n])

    def to_dict(self):
        return {
            "dim": self.dim,
            "seminorm_curve": self.seminorm_curve.tolist(),
            "strong_curve": self.strong_curve.tolist(),
            "analytic_tail": self.analytic_tail.tolist(),
            "floor_at_half": self.floor_at(self.dim // 2),
        }


def needapprox_demo(dim=64):
    """Tails ``(1 - E_n) D`` of ``D = diag(1, 1/2, ..., 1/dim)``.

    ``E_n`` projects onto ``span(e_0, ..., e_n)``.  Returns, for
    ``n = 0 .. dim-1``, the raw ``(1, inf)`` seminorm of the tail, the largest
    column norm of the tail (a strong-topology proxy, equal to ``1/(n+2)``)
    and the seminorm of the untruncated tail.
    """
    if dim < 8:
        raise PreconditionError("needapprox_demo needs dim >= 8")
    idx = LorentzIndex(1, INF)
    diag = 1.0 / np.arange(1, dim + 1, dtype=float)
    D = np.diag(diag.astype(complex))
    semi, strong, analytic = np.empty(dim), np.empty(dim), np.empty(dim)
    for n in range(dim):
        tail = D.copy()
        tail[: n + 1, :] = 0
        semi[n] = lorentz_norm(characteristic_numbers(tail), idx, normalized=False)
        strong[n] = float(np.max(np.linalg.norm(tail, axis=0)))
        analytic[n] = analytic_tail_sup(n)
    return NeedApproxReport(dim, semi, strong, analytic)


# ---------------------------------------------------------------------------
# bounded-set coincidence

COINCIDENCE_TOL = 0.1
NETS = ("truncation", "scalar", "unitary")


@dataclass(frozen=True)
class CoincidenceReport:
    idx: LorentzIndex
    net: str
    hs_curve: np.ndarray
    idx_curve: np.ndarray
    hs_crossing: int | None
    idx_crossing: int | None
    tol: float
    extras: dict = field(default_factory=dict)

    @property
    def hs_converges(self):
        return self.hs_crossing is not None

    @property
    def idx_converges(self):
        return self.idx_crossing is not None

    @property
    def joint(self):
        """Both curves decay, or neither does; crossings at most two steps apart."""
        if self.hs_converges != self.idx_converges:
            return False
        if not self.hs_converges:
            return True
        return abs(self.hs_crossing - self.idx_crossing) <= 2

    def to_dict(self):
        return {
            "idx": str(self.idx),
            "net": self.net,
            "hs_curve": self.hs_curve.tolist(),
            "idx_curve": self.idx_curve.tolist(),
            "hs_crossing": self.hs_crossing,
            "idx_crossing": self.idx_crossing,
            "hs_converges": self.hs_converges,
            "idx_converges": self.idx_converges,
            "joint": self.joint,
            "tol": self.tol,
        }


def _unit_catalog(idx, dim, seed, size):
    members = build_catalog(idx, seed=seed, rotated=1, dim_hint=dim)
    members = members[: size - 1] + members[-1:]  # diagonal members plus one rotation
    out = []
    for m in members:
        T = m.matrix(dim)
        out.append(T / lorentz_norm(characteristic_numbers(T), idx))
    return out


def _crossing(curve, tol):
    below = curve <= tol * (1 + 1e-9)
    # first index from which the curve stays below tol
    above = np.nonzero(~below)[0]
    k = 0 if above.size == 0 else int(above[-1]) + 1
    return k if k < curve.size else None


def _net(kind, dim, net_size, rng):
    """``(x_k - x)`` for ``k = 1 .. net_size``."""
    if kind == "truncation":
        x = random_contraction(dim, rng)
        ranks = np.unique(np.round(np.geomspace(2, dim, net_size)).astype(int))
        # x_k = x P_k, so x_k - x = -x (1 - P_k)
        for r in ranks:
            d = x.copy()
            d[:, :r] = 0
            yield -d
    elif kind == "scalar":
        # x_k = (1 - 1/k) 1 converging to 1
        for k in range(1, net_size + 1):
            yield -np.eye(dim, dtype=complex) / k
    elif kind == "unitary":
        for _ in range(net_size):
            yield random_unitary(dim, rng)
    else:
        raise ValueError(f"net must be one of {NETS}")


def bounded_coincidence(idx: LorentzIndex, dim=128, net_size=10, seed=0, net="truncation",
                        catalog_size=3, tol=COINCIDENCE_TOL):
    """Compare ``mu_2`` and ``mu_idx`` seminorm decay along a bounded net.

    For every net element the largest left seminorm ``|||(x_k - x) K|||`` over
    a unit-norm catalogue is recorded, once for Hilbert-Schmidt members and
    once for members of ``idx``; both curves are divided by their first value.
    The crossing index is the first ``k`` from which a curve stays below
    ``tol``.  The ``unitary`` net has limit 0 and does not converge.
    """
    if not idx.is_approximable:
        raise PreconditionError(f"{idx} is not approximable; bounded-set coincidence needs an approximable ideal")
    rng = np.random.default_rng(seed)
    hs = LorentzIndex(2, 2)
    hs_cat = _unit_catalog(hs, dim, seed, catalog_size)
    same = idx.p == 2 and idx.q == 2
    idx_cat = hs_cat if same else _unit_catalog(idx, dim, seed + 1, catalog_size)
    hs_curve, idx_curve = [], []
    for d in _net(net, dim, net_size, rng):
        h = max(lorentz_norm(characteristic_numbers(d @ K), hs) for K in hs_cat)
        hs_curve.append(h)
        if same:
            idx_curve.append(h)
        else:
            idx_curve.append(max(lorentz_norm(characteristic_numbers(d @ K), idx) for K in idx_cat))
    hs_curve = np.array(hs_curve) / hs_curve[0]
    idx_curve = np.array(idx_curve) / idx_curve[0]
    return CoincidenceReport(idx, net, hs_curve, idx_curve, _crossing(hs_curve, tol),
                             _crossing(idx_curve, tol), tol)
