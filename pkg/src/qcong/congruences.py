"""Registry of the congruence families for (l,k)- and (l,k,r)-regular partitions
and the sweeps that check them against series computed mod M.

Indices are evaluated as exact :class:`~fractions.Fraction` values and must
come out integral; a fractional index is recorded as a failure of the family
as stated, never rounded.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import count
from typing import Callable, Iterable, Iterator, Sequence

from .newman import omega_value
from .partitions import regular_quotient
from .qseries import EtaQuotient, QSeries, compile_quotient, extract
from .report import VerificationReport

__all__ = [
    "Target",
    "TARGETS",
    "Hypothesis",
    "OmegaBranch",
    "CongruenceFamily",
    "FAMILIES",
    "family_ids",
    "SeriesCache",
    "DEFAULT_ORDER",
    "DEFAULT_PRIMES",
    "sweep",
    "sweep_vanishing",
    "sweep_equivalence",
    "sweep_series_congruence",
    "integrality_audit",
    "omega_table",
]

DEFAULT_ORDER = 200_000
DEFAULT_PRIMES = (3, 5, 7, 11, 13)

F = Fraction


@dataclass(frozen=True)
class Target:
    name: str
    quotient: EtaQuotient
    description: str


TARGETS: dict[str, Target] = {
    t.name: t
    for t in [
        Target("p", EtaQuotient({1: -1}), "unrestricted partitions, 1/f1"),
        Target("b", EtaQuotient({1: 2, 3: 1}), "coefficients of f1^2 f3"),
        Target("a", EtaQuotient({1: 6, 3: 1}), "coefficients of f1^6 f3"),
        Target("b_3_8", regular_quotient({3, 8}), "(3,8)-regular partitions"),
        Target("b_4_7", regular_quotient({4, 7}), "(4,7)-regular partitions"),
        Target("b_4_9", regular_quotient({4, 9}), "(4,9)-regular partitions"),
        Target("b_3_5_8", regular_quotient({3, 5, 8}), "(3,5,8)-regular partitions"),
        # The (3,5,8) theorems are proved from this quotient, which carries f120
        # in the denominator; it agrees with b_3_5_8 only below q^120.
        Target(
            "b_3_5_8_printed",
            EtaQuotient({3: 1, 5: 1, 8: 1, 1: -1, 15: -1, 24: -1, 40: -1, 120: -1}),
            "f3 f5 f8 / (f1 f15 f24 f40 f120), the quotient the (3,5,8) proofs expand",
        ),
    ]
}


class SeriesCache:
    """Per-run cache of compiled targets keyed by (quotient, modulus).

    A stored series is only ever replaced by a longer one, and readers take
    a truncated view, so concurrent sweeps never observe a partial entry.
    """

    def __init__(self):
        self._store: dict[tuple[EtaQuotient, int | None], QSeries] = {}
        self._lock = threading.Lock()

    def get(self, quotient: EtaQuotient, order: int, modulus: int | None) -> QSeries:
        key = (quotient, modulus)
        with self._lock:
            hit = self._store.get(key)
        if hit is not None and hit.order >= order:
            return hit.truncate(order)
        series = compile_quotient(quotient, order, modulus)
        with self._lock:
            cur = self._store.get(key)
            if cur is None or cur.order < series.order:
                self._store[key] = series
        return series

    def clear(self) -> None:
        with self._lock:
            self._store.clear()


_DEFAULT_CACHE = SeriesCache()

IndexFn = Callable[[int, int, int], Fraction]


@dataclass(frozen=True)
class Hypothesis:
    name: str
    holds: Callable[[int, int, int], bool]


@dataclass(frozen=True)
class OmegaBranch:
    """Gate on ``omega(p)`` for series ``series`` reduced mod ``modulus``."""

    series: str
    modulus: int
    description: str
    accepts: Callable[[int, int], bool]  # (omega mod M, p) -> bool


def _p_not_divides(expr: Callable[[int, int, int], int], label: str) -> Hypothesis:
    return Hypothesis(f"p does not divide {label}", lambda n, p, j: expr(n, p, j) % p != 0)


P_NOT_DIV_N = _p_not_divides(lambda n, p, j: n, "n")


def _default_js(p, j_max):
    return range(j_max + 1)


@dataclass(frozen=True)
class CongruenceFamily:
    """One theorem clause.

    ``index`` maps ``(n, p, j)`` to the coefficient index as an exact
    fraction.  For ``equivalence`` families the claim is
    ``c(index) == multiplier * c'(other_index) (mod M)`` where ``c'`` is
    ``other_target`` (default: the same target).  ``series`` families compare
    the progression ``c(progression[0] n + progression[1])`` with
    ``multiplier * rhs`` as whole series.
    """

    id: str
    target: str
    modulus: int
    kind: str
    statement: str
    index: IndexFn | None = None
    other_index: IndexFn | None = None
    other_target: str | None = None
    multiplier: int = 1
    uses_prime: bool = False
    min_prime: int = 2
    js: Callable[[int | None, int], Iterable[int]] = _default_js
    var: str = "j"
    hypotheses: tuple[Hypothesis, ...] = ()
    omega: OmegaBranch | None = None
    progression: tuple[int, int] | None = None
    rhs: EtaQuotient | None = None
    default_nmax: int | None = 100
    default_jmax: int = 0
    default_primes: tuple[int, ...] = DEFAULT_PRIMES

    def swapped(self) -> "CongruenceFamily":
        """Equivalence family with the two sides exchanged (only meaningful for multiplier 1)."""
        if self.kind != "equivalence" or self.multiplier != 1 or self.other_target not in (None, self.target):
            raise ValueError(f"{self.id} is not a symmetric equivalence")
        return replace(self, id=self.id + "-swapped", index=self.other_index, other_index=self.index)


# --- family registry ---------------------------------------------------------------


def _fixed(*values: int):
    return lambda p, j_max: values


def _branch_b_even():
    return OmegaBranch("b", 2, "omega(p) = 0 mod 2", lambda w, p: w == 0)


def _branch_b_odd():
    return OmegaBranch("b", 2, "omega(p) != 0 mod 2", lambda w, p: w != 0)


def _branch_a_zero():
    return OmegaBranch("a", 8, "omega(p) = 0 mod 8", lambda w, p: w == 0)


def _branch_a_odd():
    # "omega not in {0,2,4,6} mod 8" read literally: omega odd, plus p = 1 mod 8
    return OmegaBranch("a", 8, "p = 1 mod 8 and omega(p) odd mod 8", lambda w, p: p % 8 == 1 and w % 2 == 1)


_families: list[CongruenceFamily] = [
    # (3,8)-regular, mod 2, branches on omega of f1^2 f3
    CongruenceFamily(
        "T1.1.i", "b_3_8", 2, "vanishing",
        "b_{3,8}(2p^{4j+3}n + 5p^{4j+4}/12 + 7/12) = 0 mod 2, p does not divide n, omega(p) even",
        index=lambda n, p, j: 2 * p ** (4 * j + 3) * n + F(5 * p ** (4 * j + 4), 12) + F(7, 12),
        uses_prime=True, min_prime=5, hypotheses=(P_NOT_DIV_N,), omega=_branch_b_even(),
        default_nmax=None, default_jmax=1,
    ),
    CongruenceFamily(
        "T1.1.ii.a", "b_3_8", 2, "vanishing",
        "b_{3,8}(2p^{6j+2}n + 5p^{6j+2}/12 + 7/12) = 0 mod 2, p does not divide 24n+5, omega(p) odd",
        index=lambda n, p, j: 2 * p ** (6 * j + 2) * n + F(5 * p ** (6 * j + 2), 12) + F(7, 12),
        uses_prime=True, min_prime=5, hypotheses=(_p_not_divides(lambda n, p, j: 24 * n + 5, "24n+5"),),
        omega=_branch_b_odd(), default_nmax=None, default_jmax=1,
    ),
    CongruenceFamily(
        "T1.1.ii.b", "b_3_8", 2, "vanishing",
        "b_{3,8}(2p^{6j+5}n + 5p^{6j+6}/12 + 7/12) = 0 mod 2, p does not divide n, omega(p) odd",
        index=lambda n, p, j: 2 * p ** (6 * j + 5) * n + F(5 * p ** (6 * j + 6), 12) + F(7, 12),
        uses_prime=True, min_prime=5, hypotheses=(P_NOT_DIV_N,), omega=_branch_b_odd(),
        default_nmax=None, default_jmax=1,
    ),
    CongruenceFamily(
        "R1", "b_3_8", 2, "vanishing",
        "b_{3,8}(686n + 98r + 21) = 0 mod 2, r in {0,1,2,4,5,6}",
        index=lambda n, p, r: 686 * n + 98 * r + 21,
        js=_fixed(0, 1, 2, 4, 5, 6), var="r", default_nmax=200,
    ),
    # (4,7)-regular, mod 2
    CongruenceFamily(
        "T1.2.i", "b_4_7", 2, "vanishing",
        "b_{4,7}(14(7n+j)+13) = 0 mod 2, j in 1..6",
        index=lambda n, p, j: 14 * (7 * n + j) + 13,
        js=_fixed(1, 2, 3, 4, 5, 6), default_nmax=500,
    ),
    CongruenceFamily(
        "T1.2.ii", "b_4_7", 2, "equivalence",
        "b_{4,7}(98p^2 n + (98p^2+6)/8) = b_{4,7}(98n+13) mod 2, p >= 3",
        index=lambda n, p, j: 98 * p * p * n + F(98 * p * p + 6, 8),
        other_index=lambda n, p, j: 98 * n + 13,
        uses_prime=True, min_prime=3, default_nmax=100,
    ),
    CongruenceFamily(
        "T1.2.iii-printed", "b_4_7", 2, "vanishing",
        "b_{4,7}(98p^2 n + (49p(p+6j)+3)/4) = 0 mod 2, j in 1..p-1 (as printed)",
        index=lambda n, p, j: 98 * p * p * n + F(49 * p * (p + 6 * j) + 3, 4),
        uses_prime=True, min_prime=3, js=lambda p, j_max: range(1, p), default_nmax=20,
    ),
    CongruenceFamily(
        "T1.2.iii-corrected", "b_4_7", 2, "vanishing",
        "b_{4,7}(98p^2 n + (49p(p+8j)+3)/4) = 0 mod 2, j in 1..p-1",
        index=lambda n, p, j: 98 * p * p * n + F(49 * p * (p + 8 * j) + 3, 4),
        uses_prime=True, min_prime=3, js=lambda p, j_max: range(1, p), default_nmax=20,
    ),
    # (4,9)-regular
    CongruenceFamily(
        "T1.3.i", "b_4_9", 12, "vanishing", "b_{4,9}(8n+7) = 0 mod 12",
        index=lambda n, p, j: 8 * n + 7,
    ),
    CongruenceFamily(
        "T1.3.ii", "b_4_9", 8, "vanishing", "b_{4,9}(16n+15) = 0 mod 8",
        index=lambda n, p, j: 16 * n + 15,
    ),
    CongruenceFamily(
        "T1.3.iii", "b_4_9", 8, "equivalence", "b_{4,9}(16n+7) = 4 a(n) mod 8, a from f1^6 f3",
        index=lambda n, p, j: 16 * n + 7, other_index=lambda n, p, j: n,
        other_target="a", multiplier=4, default_nmax=150,
    ),
    CongruenceFamily(
        "T1.3.iv", "b_4_9", 9, "equivalence", "b_{4,9}(32n+29) = 5 b_{4,9}(16n+15) mod 9",
        index=lambda n, p, j: 32 * n + 29, other_index=lambda n, p, j: 16 * n + 15, multiplier=5,
    ),
    # (4,9)-regular mod 8, branches on omega of f1^6 f3
    CongruenceFamily(
        "T1.4.i", "b_4_9", 8, "vanishing",
        "b_{4,9}(16p^{4k+3}n + 6p^{4k+4} + 1) = 0 mod 8, p does not divide n, omega(p) = 0 mod 8",
        index=lambda n, p, k: 16 * p ** (4 * k + 3) * n + 6 * p ** (4 * k + 4) + 1,
        uses_prime=True, min_prime=5, hypotheses=(P_NOT_DIV_N,), omega=_branch_a_zero(),
        var="k", default_nmax=None, default_jmax=1,
    ),
    CongruenceFamily(
        "T1.4.ii.a", "b_4_9", 8, "vanishing",
        "b_{4,9}(16p^{6k+2}n + 6p^{6k+2} + 1) = 0 mod 8, p does not divide 8n+3, p = 1 mod 8, omega(p) odd",
        index=lambda n, p, k: 16 * p ** (6 * k + 2) * n + 6 * p ** (6 * k + 2) + 1,
        uses_prime=True, min_prime=5, hypotheses=(_p_not_divides(lambda n, p, k: 8 * n + 3, "8n+3"),),
        omega=_branch_a_odd(), var="k", default_nmax=None, default_jmax=1,
    ),
    CongruenceFamily(
        "T1.4.ii.b", "b_4_9", 8, "vanishing",
        "b_{4,9}(16p^{6k+5}n + 6p^{6k+6} + 1) = 0 mod 8, p does not divide n, p = 1 mod 8, omega(p) odd",
        index=lambda n, p, k: 16 * p ** (6 * k + 5) * n + 6 * p ** (6 * k + 6) + 1,
        uses_prime=True, min_prime=5, hypotheses=(P_NOT_DIV_N,), omega=_branch_a_odd(),
        var="k", default_nmax=None, default_jmax=1,
    ),
    # (3,5,8), mod 2
    CongruenceFamily(
        "T1.5.i", "b_3_5_8_printed", 2, "vanishing", "b_{3,5,8}(16(5n+j)+3) = 0 mod 2, j in {2,4}",
        index=lambda n, p, j: 16 * (5 * n + j) + 3, js=_fixed(2, 4),
    ),
    CongruenceFamily(
        "T1.5.ii", "b_3_5_8_printed", 2, "vanishing", "b_{3,5,8}(80(5n+j)+51) = 0 mod 2, j in {2,4}",
        index=lambda n, p, j: 80 * (5 * n + j) + 51, js=_fixed(2, 4),
    ),
    CongruenceFamily(
        "T1.5.iii", "b_3_5_8_printed", 2, "vanishing", "b_{3,5,8}(400(5n+j)+291) = 0 mod 2, j in {1,3}",
        index=lambda n, p, j: 400 * (5 * n + j) + 291, js=_fixed(1, 3), default_nmax=20,
    ),
    CongruenceFamily(
        "T1.5.iv", "b_3_5_8_printed", 2, "equivalence", "b_{3,5,8}(2000n+1091) = b_{3,5,8}(80n+51) mod 2",
        index=lambda n, p, j: 2000 * n + 1091, other_index=lambda n, p, j: 80 * n + 51, default_nmax=20,
    ),
    CongruenceFamily(
        "T1.6", "b_3_5_8_printed", 2, "equivalence",
        "b_{3,5,8}(16*5^{2k+1} n + (26*5^{2k+1}+23)/3) = b_{3,5,8}(80n+51) mod 2",
        index=lambda n, p, k: 16 * 5 ** (2 * k + 1) * n + F(26 * 5 ** (2 * k + 1) + 23, 3),
        other_index=lambda n, p, k: 80 * n + 51, var="k", default_nmax=20, default_jmax=1,
    ),
    # whole-series congruences
    CongruenceFamily(
        "S1", "b_3_8", 2, "series", "sum b_{3,8}(2n+1) q^n = f1^2 f3 mod 2",
        progression=(2, 1), rhs=EtaQuotient({1: 2, 3: 1}), default_nmax=150,
    ),
    CongruenceFamily(
        "S2", "b_4_9", 8, "series", "sum b_{4,9}(16n+7) q^n = 4 f1^6 f3 mod 8",
        progression=(16, 7), rhs=EtaQuotient({1: 6, 3: 1}), multiplier=4, default_nmax=150,
    ),
]

FAMILIES: dict[str, CongruenceFamily] = {f.id: f for f in _families}


def family_ids() -> list[str]:
    return sorted(FAMILIES)


def omega_table(series: str, primes: Sequence[int], modulus: int) -> dict[int, int]:
    return {p: omega_value(series, p) % modulus for p in primes if p >= 5}


# --- sweeps ------------------------------------------------------------------------


@dataclass
class _Point:
    n: int
    p: int | None
    j: int
    index: Fraction
    other: Fraction | None = None

    def params(self, var: str) -> dict:
        out = {"n": self.n}
        if self.p is not None:
            out["p"] = self.p
        out[var] = self.j
        return out


def _as_int(x: Fraction) -> int | None:
    return x.numerator if x.denominator == 1 else None


def _points(fam: CongruenceFamily, rep: VerificationReport, n_max: int | None, primes: Sequence[int],
            j_max: int, order: int) -> Iterator[_Point]:
    """Admissible grid points; records skips and ω gating on ``rep``."""
    if fam.uses_prime:
        prime_list = [p for p in primes if p >= fam.min_prime]
    else:
        prime_list = [None]
    if fam.omega is not None:
        table = omega_table(fam.omega.series, [p for p in prime_list if p is not None], fam.omega.modulus)
        rep.notes.append(
            f"omega table ({fam.omega.series}, mod {fam.omega.modulus}): "
            + ", ".join(f"p={p}: {w}" for p, w in table.items())
            + f"; branch requires {fam.omega.description}"
        )
        active = [p for p in prime_list if fam.omega.accepts(table[p], p)]
        for p in prime_list:
            if p not in active:
                rep.skip("omega_branch")
        prime_list = active
    for p in prime_list:
        for j in fam.js(p, j_max):
            ns = range(n_max + 1) if n_max is not None else count()
            for n in ns:
                idx = Fraction(fam.index(n, p, j))
                other = Fraction(fam.other_index(n, p, j)) if fam.other_index else None
                top = max(idx, other) if other is not None else idx
                if top > order:
                    if n_max is None:
                        break
                    rep.skip("beyond_order")
                    continue
                if not all(h.holds(n, p, j) for h in fam.hypotheses):
                    rep.skip("hypothesis")
                    continue
                yield _Point(n, p, j, idx, other)


def _resolve(fam, n_max, primes, j_max, order):
    if n_max is None and fam.default_nmax is not None:
        n_max = fam.default_nmax
    return (n_max,
            tuple(primes) if primes is not None else fam.default_primes,
            j_max if j_max is not None else fam.default_jmax,
            order if order is not None else DEFAULT_ORDER)


def _target_series(name: str, order: int, modulus: int, cache: SeriesCache | None) -> QSeries:
    cache = cache or _DEFAULT_CACHE
    return cache.get(TARGETS[name].quotient, order, modulus)


def _run_grid(fam, n_max, primes, j_max, order, cache, target, exhaustive=False):
    start = time.perf_counter()
    n_max, primes, j_max, order = _resolve(fam, n_max, primes, j_max, order)
    if exhaustive:
        n_max = None
    target = target or fam.target
    params = {"target": target, "modulus": fam.modulus, "order": order,
              "n_max": "auto" if n_max is None else n_max, f"{fam.var}_max": j_max}
    if fam.uses_prime:
        params["primes"] = ",".join(map(str, primes))
    rep = VerificationReport(fam.id, fam.kind, params=params)
    points = []
    for pt in _points(fam, rep, n_max, primes, j_max, order):
        bad = [x for x in (pt.index, pt.other) if x is not None and x.denominator != 1]
        if bad:
            rep.checks_run += 1
            rep.add_failure(pt.params(fam.var) | {"check": "integrality"}, bad[0], None)
            continue
        points.append(pt)
    return start, rep, points, order, target


def sweep_vanishing(fam: CongruenceFamily, n_max: int | None = None, primes: Sequence[int] | None = None,
                    j_max: int | None = None, order: int | None = None, cache: SeriesCache | None = None,
                    target: str | None = None, exhaustive: bool = False) -> VerificationReport:
    """Check ``c(index) = 0 mod M`` at every admissible grid point with index <= order."""
    if fam.kind != "vanishing":
        raise ValueError(f"{fam.id} is a {fam.kind} family")
    start, rep, points, order, target = _run_grid(fam, n_max, primes, j_max, order, cache, target, exhaustive)
    if points:
        need = max(_as_int(pt.index) for pt in points)
        series = _target_series(target, need, fam.modulus, cache)
        for pt in points:
            i = _as_int(pt.index)
            rep.checks_run += 1
            value = series.coeff(i)
            if value:
                rep.add_failure(pt.params(fam.var), i, value)
    return rep.finish(start)


def sweep_equivalence(fam: CongruenceFamily, n_max: int | None = None, primes: Sequence[int] | None = None,
                      j_max: int | None = None, order: int | None = None, cache: SeriesCache | None = None,
                      target: str | None = None, exhaustive: bool = False) -> VerificationReport:
    """Check ``c(index) = multiplier * c'(other_index) mod M`` over the grid."""
    if fam.kind != "equivalence":
        raise ValueError(f"{fam.id} is a {fam.kind} family")
    start, rep, points, order, target = _run_grid(fam, n_max, primes, j_max, order, cache, target, exhaustive)
    if points:
        other_name = fam.other_target or target
        need = max(_as_int(pt.index) for pt in points)
        need_other = max(_as_int(pt.other) for pt in points)
        left = _target_series(target, need, fam.modulus, cache)
        right = _target_series(other_name, need_other, fam.modulus, cache)
        for pt in points:
            i, k = _as_int(pt.index), _as_int(pt.other)
            rep.checks_run += 1
            diff = (left.coeff(i) - fam.multiplier * right.coeff(k)) % fam.modulus
            if diff:
                rep.add_failure(pt.params(fam.var) | {"other_index": k}, i, diff)
    return rep.finish(start)


def sweep_series_congruence(fam: CongruenceFamily | str, n_terms: int | None = None,
                            cache: SeriesCache | None = None, target: str | None = None) -> VerificationReport:
    """Extract the progression from the target mod M and compare with ``multiplier * rhs``."""
    if isinstance(fam, str):
        fam = FAMILIES[fam]
    if fam.kind != "series":
        raise ValueError(f"{fam.id} is a {fam.kind} family")
    start = time.perf_counter()
    n_terms = n_terms if n_terms is not None else fam.default_nmax
    if n_terms < 1:
        raise ValueError("need at least one term")
    m, r = fam.progression
    target = target or fam.target
    rep = VerificationReport(fam.id, "series", params={"target": target, "modulus": fam.modulus,
                                                        "n_terms": n_terms})
    need = m * (n_terms - 1) + r
    lhs = extract(_target_series(target, need, fam.modulus, cache), m, r)
    rhs = compile_quotient(fam.rhs, n_terms - 1, fam.modulus) * fam.multiplier
    for n, (a, b) in enumerate(zip(lhs, rhs)):
        rep.checks_run += 1
        if a != b:
            rep.add_failure({"n": n}, m * n + r, (a - b) % fam.modulus)
    return rep.finish(start)


def sweep(fam: CongruenceFamily | str, n_max: int | None = None, primes: Sequence[int] | None = None,
          j_max: int | None = None, order: int | None = None, cache: SeriesCache | None = None,
          target: str | None = None) -> VerificationReport:
    """Dispatch on the family kind."""
    if isinstance(fam, str):
        try:
            fam = FAMILIES[fam]
        except KeyError:
            raise KeyError(f"unknown family {fam!r}") from None
    if target is not None and target not in TARGETS:
        raise KeyError(f"unknown target {target!r}")
    if fam.kind == "series":
        return sweep_series_congruence(fam, n_max, cache, target)
    runner = sweep_vanishing if fam.kind == "vanishing" else sweep_equivalence
    return runner(fam, n_max, primes, j_max, order, cache, target)


def integrality_audit(fam: CongruenceFamily | str, primes: Sequence[int] | None = None,
                      j_max: int | None = None) -> VerificationReport:
    """Evaluate the index maps over the (p, j) grid at n = 0, 1 and flag non-integers."""
    if isinstance(fam, str):
        fam = FAMILIES[fam]
    start = time.perf_counter()
    primes = tuple(primes) if primes is not None else fam.default_primes
    j_max = j_max if j_max is not None else fam.default_jmax
    rep = VerificationReport(fam.id + ":integrality", "integrality", params={"primes": ",".join(map(str, primes))})
    prime_list = [p for p in primes if p >= fam.min_prime] if fam.uses_prime else [None]
    fns = [fam.index, fam.other_index] if fam.other_index else [fam.index]
    if fam.index is None:
        return rep.finish(start)
    for p in prime_list:
        for j in fam.js(p, j_max):
            for n in (0, 1):
                for fn in fns:
                    value = Fraction(fn(n, p, j))
                    rep.checks_run += 1
                    if value.denominator != 1:
                        params = {"n": n, fam.var: j} if p is None else {"n": n, "p": p, fam.var: j}
                        rep.add_failure(params, value, None)
    return rep.finish(start)
