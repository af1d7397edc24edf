"""Partition counts by direct dynamic programming, and the eta quotients that
generate them.

The counting functions here never touch :mod:`qcong.qseries`; they exist to
cross-check the series code, so they must not share its arithmetic.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass
from itertools import combinations
from math import gcd, lcm
from typing import Iterable, Mapping

from .qseries import EtaQuotient, QSeries, compile_quotient
from .report import VerificationReport

__all__ = [
    "RegularitySpec",
    "ColoredSpec",
    "count_regular",
    "count_regular_table",
    "count_colored",
    "count_colored_table",
    "regular_quotient",
    "colored_quotient",
    "gf_regular",
    "gf_colored",
    "verify_oracle",
]


@dataclass(frozen=True)
class RegularitySpec:
    """Forbidden divisors: a part is allowed when no element divides it."""

    forbidden: frozenset[int]

    def __init__(self, forbidden: Iterable[int] = ()):
        fs = frozenset(int(x) for x in forbidden)
        if any(x < 2 for x in fs):
            raise ValueError(f"forbidden divisors must be >= 2, got {sorted(fs)}")
        if any(gcd(a, b) != 1 for a, b in combinations(sorted(fs), 2)):
            warnings.warn(f"forbidden divisors {sorted(fs)} are not pairwise coprime", stacklevel=2)
        object.__setattr__(self, "forbidden", fs)

    def allows(self, part: int) -> bool:
        return all(part % d for d in self.forbidden)

    @property
    def label(self) -> str:
        return "p" if not self.forbidden else "b_" + "_".join(map(str, sorted(self.forbidden)))


@dataclass(frozen=True)
class ColoredSpec:
    """``{scale: colours}``: parts divisible by ``scale`` available in that many colours."""

    parts: tuple[tuple[int, int], ...]

    def __init__(self, parts: Mapping[int, int]):
        for c, s in parts.items():
            if c < 1 or s < 1:
                raise ValueError(f"scale and multiplicity must be >= 1, got {c}:{s}")
        object.__setattr__(self, "parts", tuple(sorted(parts.items())))


def _as_regular(spec) -> RegularitySpec:
    return spec if isinstance(spec, RegularitySpec) else RegularitySpec(spec)


def _as_colored(spec) -> ColoredSpec:
    return spec if isinstance(spec, ColoredSpec) else ColoredSpec(spec)


def count_regular_table(n_max: int, spec) -> list[int]:
    """``[b(0), ..., b(n_max)]`` for the given forbidden set.

    Two-dimensional recurrence over (largest allowed part, total), kept as a
    rolling row: after processing parts ``<= m`` the row holds the number of
    partitions using only those parts.
    """
    spec = _as_regular(spec)
    if n_max < 0:
        raise ValueError("n must be nonnegative")
    row = [1] + [0] * n_max
    for part in range(1, n_max + 1):
        if not spec.allows(part):
            continue
        for total in range(part, n_max + 1):
            row[total] += row[total - part]
    return row


def count_regular(n: int, spec) -> int:
    return count_regular_table(n, spec)[n]


def count_colored_table(n_max: int, spec) -> list[int]:
    """Counts for ``1 / prod f_c^s``: each multiple of ``c`` is a part in ``s`` colours."""
    spec = _as_colored(spec)
    if n_max < 0:
        raise ValueError("n must be nonnegative")
    row = [1] + [0] * n_max
    for scale, colours in spec.parts:
        for part in range(scale, n_max + 1, scale):
            for _ in range(colours):
                for total in range(part, n_max + 1):
                    row[total] += row[total - part]
    return row


def count_colored(n: int, spec) -> int:
    return count_colored_table(n, spec)[n]


def regular_quotient(spec) -> EtaQuotient:
    """Inclusion-exclusion over the forbidden set: ``prod_S f_{lcm S}^{(-1)^{|S|+1}}``.

    For ``{l, k}`` this is ``f_l f_k / (f_1 f_lk)``; for three divisors the
    triple lcm lands in the numerator.
    """
    spec = _as_regular(spec)
    items = sorted(spec.forbidden)
    terms = []
    for size in range(len(items) + 1):
        for subset in combinations(items, size):
            scale = lcm(*subset) if subset else 1
            terms.append((scale, 1 if size % 2 else -1))
    return EtaQuotient.combine(terms)


def colored_quotient(spec) -> EtaQuotient:
    spec = _as_colored(spec)
    return EtaQuotient({c: -s for c, s in spec.parts})


def gf_regular(spec, order: int, modulus: int | None = None) -> QSeries:
    return compile_quotient(regular_quotient(spec), order, modulus)


def gf_colored(spec, order: int, modulus: int | None = None) -> QSeries:
    return compile_quotient(colored_quotient(spec), order, modulus)


def verify_oracle(spec, n_max: int) -> VerificationReport:
    """Compare DP counts with the compiled eta quotient coefficient by coefficient."""
    start = time.perf_counter()
    if isinstance(spec, (ColoredSpec, Mapping)):
        spec = _as_colored(spec)
        label = "oracle:colored:" + ",".join(f"{c}^{s}" for c, s in spec.parts)
        dp, series = count_colored_table(n_max, spec), gf_colored(spec, n_max)
    else:
        spec = _as_regular(spec)
        label = "oracle:regular:" + ",".join(map(str, sorted(spec.forbidden)))
        dp, series = count_regular_table(n_max, spec), gf_regular(spec, n_max)
    rep = VerificationReport(label, "oracle", params={"n_max": n_max})
    for n, (a, b) in enumerate(zip(dp, series)):
        rep.checks_run += 1
        if a != b:
            rep.add_failure({"n": n}, n, b - a)
    return rep.finish(start)
