"""Newman's three-term recurrence for coefficients of ``f_1^r f_q^s``.

For ``c(n)`` defined by ``prod (1-x^n)^r (1-x^{nq})^s = sum c(n) x^n`` and a
prime ``p != q``::

    c(n p^2 + D) - g_n c(n) + p^{2e-2} c((n - D) / p^2) = 0
    g_n = K - (theta | p) p^{e - 3/2} ((n - D) | p)

with ``e = (r+s)/2``, ``D = (r + s q)(p^2 - 1)/24``, ``theta = (-1)^{1/2-e} 2 q^s``
and ``(a | p)`` the Legendre symbol.  ``K`` (``p^{2e-2}`` times Newman's
constant) is solved from the ``n = 0`` case and then over-determines every
other ``n``.

Parity of ``r + s`` and integrality of ``D`` are not sufficient on their own:
the relation fails for e.g. ``(r, s, q) = (2, 1, 13)`` or ``(4, 3, 7)`` at every
p.  Both instantiations used downstream, ``(2, 1, 3)`` and ``(6, 1, 3)``, hold.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

from .qseries import EtaQuotient, QSeries, compile_quotient
from .report import VerificationReport
from .util import is_prime

__all__ = [
    "legendre",
    "NewmanParams",
    "newman_params",
    "newman_series",
    "solve_constant",
    "verify_recurrence",
    "SERIES",
    "omega",
    "omega_value",
]


def legendre(a: int, p: int) -> int:
    """Legendre symbol ``(a | p)`` by Euler's criterion."""
    if p < 3 or not is_prime(p):
        raise ValueError(f"legendre symbol needs an odd prime, got {p}")
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _pow_frac(base: int, exp: int) -> Fraction | int:
    return base**exp if exp >= 0 else Fraction(1, base**-exp)


@dataclass(frozen=True)
class NewmanParams:
    r: int
    s: int
    qp: int
    p: int
    epsilon: Fraction
    t: Fraction
    delta: int
    theta: int

    @property
    def outer_factor(self):
        """``p^{2e-2}``, the weight on ``c((n - D)/p^2)``."""
        return _pow_frac(self.p, int(2 * self.epsilon - 2))

    @property
    def twist_factor(self):
        """``(theta | p) p^{e - 3/2}``."""
        return legendre(self.theta, self.p) * _pow_frac(self.p, int(self.epsilon - Fraction(3, 2)))

    def gamma(self, n: int, K) -> Fraction | int:
        return K - self.twist_factor * legendre(n - self.delta, self.p)


def newman_params(r: int, s: int, qp: int, p: int) -> NewmanParams:
    if r == 0 or s == 0:
        raise ValueError("r and s must be nonzero")
    if (r + s) % 2 == 0:
        raise ValueError(f"r + s must be odd, got r={r}, s={s}")
    if not (is_prime(qp) and is_prime(p)) or qp == p:
        raise ValueError(f"q={qp} and p={p} must be distinct primes")
    if p == 2:
        raise ValueError("p must be odd for the Legendre symbol")
    epsilon = Fraction(r + s, 2)
    t = Fraction(r + s * qp, 24)
    delta = t * (p * p - 1)
    if delta.denominator != 1:
        raise ValueError(f"Delta = {delta} is not an integer for r={r}, s={s}, q={qp}, p={p}")
    # (-1)^{1/2 - e}: the exponent is an integer because r + s is odd
    sign = -1 if int(Fraction(1, 2) - epsilon) % 2 else 1
    if s < 0:
        raise ValueError("negative s gives a non-integral theta; not supported")
    return NewmanParams(r, s, qp, p, epsilon, t, int(delta), sign * 2 * qp**s)


def newman_series(r: int, s: int, qp: int, order: int, modulus: int | None = None) -> QSeries:
    return compile_quotient(EtaQuotient.combine([(1, r), (qp, s)]), order, modulus)


def _c(coeffs: QSeries, x) -> int:
    # c(x) = 0 off the nonnegative integers
    if isinstance(x, Fraction):
        if x.denominator != 1:
            return 0
        x = x.numerator
    if x < 0:
        return 0
    return coeffs.coeff(x)


def solve_constant(coeffs: QSeries, params: NewmanParams):
    """``K`` from the n = 0 case: ``K = c(D) + (theta|p) p^{e-3/2} (-D|p)``."""
    if not coeffs.exact:
        raise ValueError("solve_constant needs exact coefficients")
    if coeffs.order < params.delta:
        raise ValueError(f"series order {coeffs.order} is below Delta = {params.delta}")
    if coeffs.coeff(0) != 1:
        raise ValueError("c(0) must be 1")
    return coeffs.coeff(params.delta) + params.twist_factor * legendre(-params.delta, params.p)


def verify_recurrence(coeffs: QSeries, params: NewmanParams, n_max: int | None = None,
                      label: str | None = None) -> VerificationReport:
    """Check the three-term relation for ``0 <= n <= n_max`` with one solved K.

    ``n_max`` defaults to the largest n with ``n p^2 + D`` inside the series.
    """
    start = time.perf_counter()
    p2 = params.p**2
    limit = (coeffs.order - params.delta) // p2
    if n_max is None:
        n_max = limit
    if n_max > limit:
        raise ValueError(f"order {coeffs.order} too short: need {n_max * p2 + params.delta}")
    K = solve_constant(coeffs, params)
    rep = VerificationReport(
        label or f"newman:{params.r},{params.s},{params.qp},{params.p}",
        "newman",
        params={"p": params.p, "n_max": n_max, "K": K, "delta": params.delta},
    )
    outer = params.outer_factor
    for n in range(n_max + 1):
        residual = (_c(coeffs, n * p2 + params.delta)
                    - params.gamma(n, K) * _c(coeffs, n)
                    + outer * _c(coeffs, Fraction(n - params.delta, p2)))
        rep.checks_run += 1
        if residual != 0:
            rep.add_failure({"n": n}, n * p2 + params.delta, residual)
    return rep.finish(start)


# the two instantiations driving the omega-branch theorems
SERIES = {
    "b": (2, 1, 3),  # f_1^2 f_3
    "a": (6, 1, 3),  # f_1^6 f_3
}


def omega_value(series_id: str, p: int) -> int:
    """Exact ``omega(p)`` (= K) for series ``'b'`` or ``'a'``."""
    if p < 5 or not is_prime(p):
        raise ValueError(f"omega needs a prime p >= 5, got {p}")
    try:
        r, s, qp = SERIES[series_id]
    except KeyError:
        raise KeyError(f"unknown series {series_id!r}; expected one of {sorted(SERIES)}") from None
    params = newman_params(r, s, qp, p)
    K = solve_constant(newman_series(r, s, qp, params.delta), params)
    if isinstance(K, Fraction):
        assert K.denominator == 1, K
        K = K.numerator
    return int(K)


def omega(series_id: str, p: int, modulus: int) -> int:
    return omega_value(series_id, p) % modulus
