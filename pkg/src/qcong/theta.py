"""Ramanujan theta functions, p-dissections of f_1 and f_1^3, and the catalog
of fixed q-series identities (2-dissections, odd parts of generalized
partition functions, the 5-dissection of Euler's product).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

from .qseries import (
    EtaQuotient,
    QSeries,
    compile_quotient,
    divide,
    eta_series,
    extract,
    mul,
    pochhammer_series,
)
from .report import VerificationReport
from .util import is_prime

__all__ = [
    "ThetaSpec",
    "theta_f",
    "phi_series",
    "psi_series",
    "DissectionTerm",
    "p_dissect_f1",
    "p_dissect_f1_cubed",
    "residue_avoidance_f1",
    "residue_avoidance_f1_cubed",
    "Identity",
    "CATALOG",
    "identity_ids",
    "verify_identity",
    "verify_dissection",
]


@dataclass(frozen=True)
class ThetaSpec:
    """Monomial specialisation ``f(-q^alpha, -q^beta)``."""

    alpha: int
    beta: int

    def __post_init__(self):
        if self.alpha < 1 or self.beta < 1:
            raise ValueError(f"theta exponents must be >= 1, got ({self.alpha}, {self.beta})")


def _theta_terms(alpha: int, beta: int, order: int):
    # exponent alpha*T(n) + beta*T(n-1) is convex in n with minimum near 0,
    # so walk outward in both directions until both sides exceed the order
    terms = []
    for direction in (1, -1):
        n = 0 if direction == 1 else -1
        while True:
            e = alpha * n * (n + 1) // 2 + beta * n * (n - 1) // 2
            if e > order:
                break
            terms.append((e, -1 if n % 2 else 1))
            n += direction
    return terms


def theta_f(spec: ThetaSpec | tuple[int, int], order: int, modulus: int | None = None) -> QSeries:
    """``sum_{n in Z} (-1)^n q^{alpha n(n+1)/2 + beta n(n-1)/2}`` truncated at ``order``."""
    if not isinstance(spec, ThetaSpec):
        spec = ThetaSpec(*spec)
    if order < 0:
        raise ValueError("order must be nonnegative")
    return QSeries.from_terms(_theta_terms(spec.alpha, spec.beta, order), order, modulus)


def phi_series(order: int, modulus: int | None = None) -> QSeries:
    """phi(q) = 1 + 2 sum_{n>=1} q^{n^2}."""
    terms = [(0, 1)]
    n = 1
    while n * n <= order:
        terms.append((n * n, 2))
        n += 1
    return QSeries.from_terms(terms, order, modulus)


def psi_series(order: int, modulus: int | None = None) -> QSeries:
    """psi(q) = sum_{n>=0} q^{n(n+1)/2}."""
    terms = []
    n = 0
    while n * (n + 1) // 2 <= order:
        terms.append((n * (n + 1) // 2, 1))
        n += 1
    return QSeries.from_terms(terms, order, modulus)


# --- p-dissections ----------------------------------------------------------------


@dataclass(frozen=True)
class DissectionTerm:
    """One summand ``q^shift * series`` of a p-dissection.

    ``k`` is the summation index it came from (``None`` for the distinguished
    f_{p^2} term) and ``residue`` is ``shift mod p``; every exponent of
    ``series`` is a multiple of p, so the term lives on that residue class.
    """

    k: int | None
    shift: int
    residue: int
    series: QSeries
    distinguished: bool = False

    def full(self, order: int) -> QSeries:
        return place(self.series, self.shift, order)


def _distinguished_k_f1(p: int) -> int:
    return (p - 1) // 6 if p % 6 == 1 else (-p - 1) // 6


def p_dissect_f1(p: int, order: int) -> list[DissectionTerm]:
    """Split f_1 into p pieces supported on distinct residue classes mod p.

    For k in ``-(p-1)/2 .. (p-1)/2`` other than ``(+-p-1)/6`` the piece is
    ``(-1)^k q^{(3k^2+k)/2} f(-q^{(3p^2+(6k+1)p)/2}, -q^{(3p^2-(6k+1)p)/2})``;
    the remaining piece is ``(-1)^{(+-p-1)/6} q^{(p^2-1)/24} f_{p^2}``.
    """
    if p < 5 or not is_prime(p):
        raise ValueError(f"p must be a prime >= 5, got {p}")
    k0 = _distinguished_k_f1(p)
    half = (p - 1) // 2
    terms = []
    for k in range(-half, half + 1):
        if k == k0:
            continue
        shift = (3 * k * k + k) // 2
        a = (3 * p * p + (6 * k + 1) * p) // 2
        b = (3 * p * p - (6 * k + 1) * p) // 2
        rest = max(order - shift, 0)
        series = theta_f(ThetaSpec(a, b), rest) * (-1 if k % 2 else 1)
        terms.append(DissectionTerm(k, shift, shift % p, series))
    shift = (p * p - 1) // 24
    sign = -1 if k0 % 2 else 1
    series = eta_series(p * p, max(order - shift, 0)) * sign
    terms.append(DissectionTerm(None, shift, shift % p, series, distinguished=True))
    return terms


def p_dissect_f1_cubed(p: int, order: int) -> list[DissectionTerm]:
    """Split f_1^3 into p pieces following Jacobi's series for f_1^3.

    For k in ``0..p-1`` other than ``(p-1)/2`` the piece is
    ``(-1)^k q^{k(k+1)/2} sum_{n>=0} (-1)^n (2pn+2k+1) q^{pn(pn+2k+1)/2}``;
    the remaining piece is ``p (-1)^{(p-1)/2} q^{(p^2-1)/8} f_{p^2}^3``.
    """
    if p < 3 or p % 2 == 0 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    k0 = (p - 1) // 2
    terms = []
    for k in range(p):
        if k == k0:
            continue
        shift = k * (k + 1) // 2
        rest = max(order - shift, 0)
        inner = []
        n = 0
        while p * n * (p * n + 2 * k + 1) // 2 <= rest:
            inner.append((p * n * (p * n + 2 * k + 1) // 2, (-1) ** n * (2 * p * n + 2 * k + 1)))
            n += 1
        series = QSeries.from_terms(inner, rest) * (-1 if k % 2 else 1)
        terms.append(DissectionTerm(k, shift, shift % p, series))
    shift = (p * p - 1) // 8
    rest = max(order - shift, 0)
    f = eta_series(p * p, rest)
    series = mul(mul(f, f), f) * (p * (-1) ** k0)
    terms.append(DissectionTerm(None, shift, shift % p, series, distinguished=True))
    return terms


def residue_avoidance_f1(p: int) -> bool:
    """True when no non-distinguished ``(3k^2+k)/2`` hits ``(p^2-1)/24`` mod p."""
    target = (p * p - 1) // 24 % p
    k0 = _distinguished_k_f1(p)
    half = (p - 1) // 2
    return all((3 * k * k + k) // 2 % p != target for k in range(-half, half + 1) if k != k0)


def residue_avoidance_f1_cubed(p: int) -> bool:
    """True when no ``k(k+1)/2`` with ``k != (p-1)/2`` hits ``(p^2-1)/8`` mod p."""
    target = (p * p - 1) // 8 % p
    return all(k * (k + 1) // 2 % p != target for k in range(p) if k != (p - 1) // 2)


def place(series: QSeries, shift: int, order: int) -> QSeries:
    """``q^shift * series`` as a series of exactly ``order`` (needs order(series) >= order - shift)."""
    if shift > order:
        return QSeries.monomial(0, order, 0, series.modulus)
    body = series.truncate(order - shift).tolist()
    return QSeries([0] * shift + body, series.modulus)


def verify_dissection(kind: str, p: int, order: int) -> VerificationReport:
    """Reconstruct f_1 (``kind='f1'``) or f_1^3 (``kind='f1_cubed'``) from its p pieces."""
    start = time.perf_counter()
    if kind == "f1":
        terms = p_dissect_f1(p, order)
        target = eta_series(1, order)
        avoid = residue_avoidance_f1(p)
    elif kind == "f1_cubed":
        terms = p_dissect_f1_cubed(p, order)
        f = eta_series(1, order)
        target = mul(mul(f, f), f)
        avoid = residue_avoidance_f1_cubed(p)
    else:
        raise ValueError(f"unknown dissection kind {kind!r}")
    rep = VerificationReport(f"dissect:{kind}:{p}", "dissection", params={"p": p, "order": order})
    total = [0] * (order + 1)
    for t in terms:
        for e, c in t.series.nonzero_terms():
            # each piece must be a series in q^p
            rep.checks_run += 1
            if e % p:
                rep.add_failure({"k": t.k, "check": "support"}, t.shift + e, c)
            if t.shift + e <= order:
                total[t.shift + e] += c
    for n, (got, want) in enumerate(zip(total, target)):
        rep.checks_run += 1
        if got != want:
            rep.add_failure({"check": "reconstruction"}, n, got - want)
    rep.checks_run += 1
    if not avoid:
        rep.add_failure({"check": "residue_avoidance"}, 0, 1)
    special = next(t.residue for t in terms if t.distinguished)
    for t in terms:
        rep.checks_run += 1
        if not t.distinguished and t.residue == special:
            rep.add_failure({"k": t.k, "check": "term_residue"}, t.shift, t.residue)
    rep.finish(start)
    return rep


# --- identity catalog ----------------------------------------------------------------

Recipe = Callable[[int], QSeries]


def _eq(terms: dict[int, int], coeff: int = 1, shift: int = 0) -> tuple[EtaQuotient, int, int]:
    return (EtaQuotient(terms), coeff, shift)


def _rhs(parts: list[tuple[EtaQuotient, int, int]]) -> Recipe:
    def build(order: int) -> QSeries:
        total = QSeries.monomial(0, order, 0)
        for quotient, coeff, shift in parts:
            if shift <= order:
                total = total + place(compile_quotient(quotient, order - shift) * coeff, shift, order)
        return total

    return build


def _quotient(terms: dict[int, int]) -> Recipe:
    return lambda order: compile_quotient(EtaQuotient(terms), order)


def _odd_part(terms: dict[int, int]) -> Recipe:
    return lambda order: extract(compile_quotient(EtaQuotient(terms), 2 * order + 1), 2, 1)


def _euler_5(order: int) -> QSeries:
    # f_25 (R^-1 - q - q^2 R), R = (q^5;q^25)(q^20;q^25) / ((q^10;q^25)(q^15;q^25))
    num = mul(pochhammer_series(5, 25, order), pochhammer_series(20, 25, order))
    den = mul(pochhammer_series(10, 25, order), pochhammer_series(15, 25, order))
    r = divide(num, den)
    r_inv = divide(den, num)
    inner = r_inv - QSeries.monomial(1, order) - r.shift(2)
    return mul(eta_series(25, order), inner)


@dataclass(frozen=True)
class Identity:
    """A fixed series identity ``lhs == rhs`` checked coefficientwise."""

    id: str
    lhs: Recipe
    rhs: Recipe
    source: str
    min_order: int
    parts: tuple = field(default=(), compare=False)
    modulus: int | None = None


def _identity(id, lhs_terms, parts, source, lhs=None, max_scale=None):
    scales = [s for q, _, _ in parts for s, _ in q.terms] + list(lhs_terms or {})
    return Identity(
        id=id,
        lhs=lhs if lhs is not None else _quotient(lhs_terms),
        rhs=_rhs(parts),
        source=source,
        min_order=3 * (max_scale or max(scales)),
        parts=tuple(parts),
    )


CATALOG: dict[str, Identity] = {
    i.id: i
    for i in [
        _identity(
            "inv_f1_sq_2dissect",
            {1: -2},
            [_eq({8: 5, 2: -5, 16: -2}), _eq({4: 2, 16: 2, 2: -5, 8: -1}, 2, 1)],
            "1/f1^2 2-dissection",
        ),
        _identity(
            "inv_f1_4th_2dissect",
            {1: -4},
            [_eq({4: 14, 2: -14, 8: -4}), _eq({4: 2, 8: 4, 2: -10}, 4, 1)],
            "1/f1^4 2-dissection",
        ),
        _identity(
            "f3_over_f1_2dissect",
            {3: 1, 1: -1},
            [_eq({4: 1, 6: 1, 16: 1, 24: 2, 2: -2, 8: -1, 12: -1, 48: -1}),
             _eq({6: 1, 8: 2, 48: 1, 2: -2, 16: -1, 24: -1}, 1, 1)],
            "f3/f1 2-dissection",
        ),
        _identity(
            "f5_over_f1_2dissect",
            {5: 1, 1: -1},
            [_eq({8: 1, 20: 2, 2: -2, 40: -1}), _eq({4: 3, 10: 1, 40: 1, 2: -3, 8: -1, 20: -1}, 1, 1)],
            "f5/f1 2-dissection",
        ),
        _identity(
            "f9_over_f1_2dissect",
            {9: 1, 1: -1},
            [_eq({12: 3, 18: 1, 2: -2, 6: -1, 36: -1}), _eq({4: 2, 6: 1, 36: 1, 2: -3, 12: -1}, 1, 1)],
            "f9/f1 2-dissection",
        ),
        _identity(
            "f3_over_f1_cubed_2dissect",
            {3: 1, 1: -3},
            [_eq({4: 6, 6: 3, 2: -9, 12: -2}), _eq({4: 2, 6: 1, 12: 2, 2: -7}, 3, 1)],
            "f3/f1^3 2-dissection",
        ),
        _identity(
            "inv_f1f7_2dissect",
            {1: -1, 7: -1},
            [_eq({16: 2, 56: 5, 2: -2, 8: -1, 14: -2, 28: -2, 112: -2}),
             _eq({4: 2, 28: 2, 2: -3, 14: -3}, 1, 1),
             _eq({8: 5, 112: 2, 2: -2, 4: -2, 14: -2, 16: -2, 56: -1}, 1, 6)],
            "1/(f1 f7) 2-dissection",
        ),
        _identity(
            "p_3_5_odd",
            None,
            [_eq({2: 2, 30: 2, 3: -2, 5: -2, 1: -1, 15: -1}, 1, 1)],
            "odd part of 1/(f3 f5)",
            lhs=_odd_part({3: -1, 5: -1}),
            max_scale=30,
        ),
        _identity(
            # the odd part of 1/(f1 f15) is not an eta quotient; this quotient is its even part
            "p_1_15_even",
            None,
            [_eq({6: 2, 10: 2, 1: -2, 3: -1, 5: -1, 15: -2})],
            "even part of 1/(f1 f15)",
            lhs=lambda order: extract(compile_quotient(EtaQuotient({1: -1, 15: -1}), 2 * order), 2, 0),
            max_scale=30,
        ),
        _identity(
            "p_1_3_5_15_odd",
            None,
            [_eq({2: 1, 6: 1, 10: 1, 30: 1, 1: -2, 3: -2, 5: -2, 15: -2}),
             _eq({2: 2, 6: 2, 10: 2, 30: 2, 1: -3, 3: -3, 5: -3, 15: -3}, 2, 1)],
            "odd part of 1/(f1 f3 f5 f15)",
            lhs=_odd_part({1: -1, 3: -1, 5: -1, 15: -1}),
            max_scale=30,
        ),
        Identity(
            id="euler_5dissect",
            lhs=lambda order: eta_series(1, order),
            rhs=_euler_5,
            source="5-dissection of Euler's product",
            min_order=120,
        ),
    ]
}


def identity_ids() -> list[str]:
    return sorted(CATALOG)


def verify_identity(id: str, order: int) -> VerificationReport:
    """Expand both sides of a catalog identity to ``order`` and compare exactly.

    For the 2-dissections each right-hand piece is also checked to live on
    its own parity class, i.e. the left side's even/odd sections are
    reproduced piece by piece.
    """
    try:
        ident = CATALOG[id]
    except KeyError:
        raise KeyError(f"unknown identity {id!r}; known: {', '.join(identity_ids())}") from None
    if order < ident.min_order:
        raise ValueError(f"{id} needs order >= {ident.min_order} to be meaningful, got {order}")
    start = time.perf_counter()
    rep = VerificationReport(id, "identity", params={"order": order})
    lhs = ident.lhs(order)
    rhs = ident.rhs(order)
    for n, (a, b) in enumerate(zip(lhs, rhs)):
        rep.checks_run += 1
        if a != b:
            rep.add_failure({"side": "lhs-rhs"}, n, a - b)
    if id.endswith("2dissect"):
        for parity in (0, 1):
            pieces = [p for p in ident.parts if p[2] % 2 == parity]
            rep.checks_run += 1
            if any(s % 2 for q, _, _ in pieces for s, _ in q.terms):
                rep.add_failure({"parity": parity, "check": "piece-in-q^2"}, parity, 1)
            section = _rhs(pieces)(order)
            for n, (a, b) in enumerate(zip(extract(lhs, 2, parity), extract(section, 2, parity))):
                rep.checks_run += 1
                if a != b:
                    rep.add_failure({"parity": parity, "check": "section"}, 2 * n + parity, a - b)
    rep.finish(start)
    return rep
