"""Dixmier-trace values on the measurable slice.

Where ``sigma_N / log N`` converges every Dixmier trace takes that limit.  The
estimate here is the least-squares slope of ``sigma_N`` against ``log N`` over
the window ``N in {N_max/8, N_max/4, N_max/2, N_max}``; fitting a slope
instead of dividing removes additive constants such as Euler's gamma in the
harmonic sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ideals import PreconditionError, member
from .sequences import FamilySum, PowerLogFamily, materialize
from .snorms import INF, LorentzIndex, lorentz_norm

WINDOW = (8, 4, 2, 1)
DRIFT_TOL = 1e-3
RESIDUAL_TOL = 1e-6
MIN_NMAX = 10**4

WEAK_TRACE = LorentzIndex(1, INF)


@dataclass(frozen=True)
class DixmierEstimate:
    """Slope fit of ``sigma_N`` against ``log N``.

    ``drift`` compares the slopes over the first three and the last three
    window points; ``converged`` requires a small residual and
    ``drift < 1e-3``.  ``verified_member`` is None for families whose
    membership in ``L^{1,inf}`` was not checked symbolically.
    """

    value: float
    converged: bool
    fit: tuple
    residual: float
    drift: float
    window: tuple
    sigma: tuple
    verified_member: bool | None = None

    def to_dict(self):
        return {
            "value": self.value,
            "converged": self.converged,
            "fit": {"slope": self.fit[0], "intercept": self.fit[1]},
            "residual": self.residual,
            "drift": self.drift,
            "window": list(self.window),
            "sigma": list(self.sigma),
            "verified_member": self.verified_member,
        }


def _slope(x, y):
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    return coef


def _check_family(f):
    if isinstance(f, PowerLogFamily):
        v = member(f, WEAK_TRACE)
        if not v.member:
            raise PreconditionError(f"family is not in L^(1,inf): {v.reason}")
        return True
    if isinstance(f, FamilySum):
        checks = [_check_family(g) for g in f.families]
        if any(w < 0 for w in f.weights):
            return None
        return True if all(c is True for c in checks) else None
    return None


def dixmier_estimate(f, N_max=10**6) -> DixmierEstimate:
    """Estimate ``lim sigma_N / log N`` for a family in ``L^{1,inf}``.

    Parameters
    ----------
    f : PowerLogFamily, FamilySum or ExplicitFamily
        Power-log families (and positive sums of them) are checked for
        membership in ``L^{1,inf}``; other families are accepted unchecked.
    N_max : int
        Largest truncation, at least ``10^4``.

    Examples
    --------
    >>> round(dixmier_estimate(PowerLogFamily(1, 1, 0)).value, 2)
    1.0
    """
    if N_max < MIN_NMAX:
        raise PreconditionError(f"N_max must be >= {MIN_NMAX}")
    verified = _check_family(f)
    sigma = np.cumsum(materialize(f, N_max).values)
    Ns = np.array([N_max // k for k in WINDOW])
    y = sigma[Ns - 1]
    x = np.log(Ns.astype(float))
    slope, intercept = _slope(x, y)
    resid = y - (slope * x + intercept)
    scale = max(abs(slope), 1e-300)
    residual = float(np.sqrt(np.mean(resid**2)))
    drift = float(abs(_slope(x[:3], y[:3])[0] - _slope(x[1:], y[1:])[0]))
    converged = residual <= RESIDUAL_TOL * max(scale, 1.0) and drift < DRIFT_TOL
    return DixmierEstimate(
        float(slope), bool(converged), (float(slope), float(intercept)), residual, drift,
        tuple(int(n) for n in Ns), tuple(float(v) for v in y), verified,
    )


def dixmier_pairing(f, x_scalar: float, N_max=10**6) -> float:
    """``Tr(T x)`` for the scalar operator ``x = x_scalar * 1``."""
    return float(x_scalar) * dixmier_estimate(f, N_max).value


def continuity_ratio(f, g, N_max=10**6) -> float:
    """``|Tr(f + g) - Tr(f)| / ||g||_{1,inf}`` at truncation ``N_max``.

    A finite-size look at the continuity of the trace in the weak-trace norm;
    ``g`` should be a perturbation with nonincreasing terms.
    """
    shift = abs(dixmier_estimate(FamilySum(f, g), N_max).value - dixmier_estimate(f, N_max).value)
    norm = lorentz_norm(materialize(g, N_max), WEAK_TRACE, normalized=False)
    return shift / norm if norm > 0 else math.inf
