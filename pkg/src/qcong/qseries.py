"""Truncated formal power series in q with exact or residue coefficients.

A :class:`QSeries` stores the coefficients of ``q^0 .. q^N``.  Coefficients
are either arbitrary-precision Python integers (``modulus is None``) or
residues in ``[0, M)`` held in an ``int64`` array.  Binary operations
truncate to the smaller order; they never extend a series with zeros.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import gcd, isqrt
from typing import Iterable, Mapping, Sequence

import numpy as np

from ._kernels import MAX_MODULUS, divide_mod

__all__ = [
    "ModeError",
    "QSeries",
    "EtaQuotient",
    "eta_series",
    "pochhammer_series",
    "mul",
    "invert",
    "divide",
    "compile_quotient",
    "extract",
    "scale_q",
    "reduce_mod",
    "pentagonal_terms",
]


class ModeError(ValueError):
    """Raised when exact and residue series (or two moduli) are mixed."""


def _check_modulus(modulus: int | None) -> None:
    if modulus is None:
        return
    if not isinstance(modulus, (int, np.integer)) or modulus < 2:
        raise ValueError(f"modulus must be an integer >= 2, got {modulus!r}")
    if modulus > MAX_MODULUS:
        raise ValueError(f"modulus {modulus} exceeds the machine-word limit {MAX_MODULUS}")


class QSeries:
    """Immutable truncated power series ``sum_{n<=order} c_n q^n``."""

    __slots__ = ("_c", "_modulus")

    def __init__(self, coeffs: Iterable[int] | np.ndarray, modulus: int | None = None):
        _check_modulus(modulus)
        if modulus is None:
            data = tuple(int(c) for c in coeffs)
        else:
            modulus = int(modulus)
            arr = np.array([int(c) % modulus for c in coeffs] if not isinstance(coeffs, np.ndarray)
                           else np.asarray(coeffs, dtype=np.int64) % modulus, dtype=np.int64)
            arr.setflags(write=False)
            data = arr
        if len(data) == 0:
            raise ValueError("a QSeries needs at least the constant coefficient")
        self._c = data
        self._modulus = modulus

    @classmethod
    def _wrap(cls, data, modulus: int | None) -> "QSeries":
        # trusted constructor: data already normalised (tuple, or reduced int64 array)
        obj = cls.__new__(cls)
        if modulus is not None:
            data.setflags(write=False)
        obj._c = data
        obj._modulus = modulus
        return obj

    @classmethod
    def one(cls, order: int, modulus: int | None = None) -> "QSeries":
        return cls.monomial(0, order, 1, modulus)

    @classmethod
    def monomial(cls, exponent: int, order: int, coeff: int = 1, modulus: int | None = None) -> "QSeries":
        """``coeff * q^exponent`` truncated at ``order`` (zero if exponent > order)."""
        if order < 0 or exponent < 0:
            raise ValueError("order and exponent must be nonnegative")
        c = [0] * (order + 1)
        if exponent <= order:
            c[exponent] = coeff
        return cls(c, modulus)

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[int, int]], order: int, modulus: int | None = None) -> "QSeries":
        """Build from ``(exponent, coefficient)`` pairs; exponents above ``order`` are dropped."""
        c = [0] * (order + 1)
        for e, v in terms:
            if 0 <= e <= order:
                c[e] += v
        return cls(c, modulus)

    # --- basic accessors -------------------------------------------------

    @property
    def order(self) -> int:
        return len(self._c) - 1

    @property
    def modulus(self) -> int | None:
        return self._modulus

    @property
    def exact(self) -> bool:
        return self._modulus is None

    def coeff(self, n: int) -> int:
        if not 0 <= n <= self.order:
            raise IndexError(f"coefficient {n} outside 0..{self.order}")
        return int(self._c[n])

    def __getitem__(self, key):
        if isinstance(key, slice):
            return [int(v) for v in self._c[key]]
        return self.coeff(key)

    def __len__(self) -> int:
        return len(self._c)

    def __iter__(self):
        return (int(v) for v in self._c)

    def tolist(self) -> list[int]:
        return [int(v) for v in self._c]

    def nonzero_terms(self) -> list[tuple[int, int]]:
        if self._modulus is None:
            return [(e, c) for e, c in enumerate(self._c) if c]
        idx = np.flatnonzero(self._c)
        return [(int(e), int(self._c[e])) for e in idx]

    def nnz(self) -> int:
        if self._modulus is None:
            return sum(1 for c in self._c if c)
        return int(np.count_nonzero(self._c))

    def is_sparse(self) -> bool:
        return self.nnz() <= sparse_threshold(self.order)

    def truncate(self, order: int) -> "QSeries":
        if order < 0 or order > self.order:
            raise ValueError(f"cannot truncate order {self.order} series to {order}")
        if order == self.order:
            return self
        if self._modulus is None:
            return QSeries._wrap(self._c[: order + 1], None)
        return QSeries._wrap(self._c[: order + 1].copy(), self._modulus)

    def __repr__(self) -> str:
        head = self.tolist()[:8]
        more = ", ..." if self.order >= 8 else ""
        mode = "exact" if self._modulus is None else f"mod {self._modulus}"
        return f"QSeries(order={self.order}, {mode}, [{', '.join(map(str, head))}{more}])"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        if self._modulus != other._modulus or self.order != other.order:
            return False
        if self._modulus is None:
            return self._c == other._c
        return bool(np.array_equal(self._c, other._c))

    __hash__ = None  # type: ignore[assignment]

    # --- ring operations ---------------------------------------------------

    def _common(self, other: "QSeries") -> int:
        if not isinstance(other, QSeries):
            raise TypeError(f"expected QSeries, got {type(other).__name__}")
        if self._modulus != other._modulus:
            raise ModeError(f"cannot combine modulus {self._modulus} with modulus {other._modulus}")
        return min(self.order, other.order)

    def __add__(self, other):
        if isinstance(other, (int, np.integer)):
            return self + QSeries.monomial(0, self.order, int(other), self._modulus)
        if not isinstance(other, QSeries):
            return NotImplemented
        n = self._common(other) + 1
        if self._modulus is None:
            return QSeries._wrap(tuple(a + b for a, b in zip(self._c[:n], other._c[:n])), None)
        return QSeries._wrap((self._c[:n] + other._c[:n]) % self._modulus, self._modulus)

    __radd__ = __add__

    def __neg__(self):
        if self._modulus is None:
            return QSeries._wrap(tuple(-a for a in self._c), None)
        return QSeries._wrap((-self._c) % self._modulus, self._modulus)

    def __sub__(self, other):
        if isinstance(other, (int, np.integer)):
            return self + (-int(other))
        if not isinstance(other, QSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            k = int(other)
            if self._modulus is None:
                return QSeries._wrap(tuple(k * a for a in self._c), None)
            return QSeries._wrap((self._c * (k % self._modulus)) % self._modulus, self._modulus)
        if not isinstance(other, QSeries):
            return NotImplemented
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "QSeries":
        return power(self, e)

    def __truediv__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return divide(self, other)

    def shift(self, k: int) -> "QSeries":
        """Multiply by ``q^k`` (k >= 0), keeping the order."""
        if k < 0:
            raise ValueError("shift must be nonnegative")
        if k == 0:
            return self
        n = self.order + 1
        if self._modulus is None:
            return QSeries._wrap((0,) * min(k, n) + self._c[: max(n - k, 0)], None)
        out = np.zeros(n, dtype=np.int64)
        if k < n:
            out[k:] = self._c[: n - k]
        return QSeries._wrap(out, self._modulus)


def sparse_threshold(order: int) -> int:
    # eta and theta factors carry about 1.6*sqrt(order) terms
    return 4 * isqrt(order + 1) + 4


# --- constructors ----------------------------------------------------------


def pentagonal_terms(scale: int, order: int) -> list[tuple[int, int]]:
    """Sorted ``(exponent, sign)`` pairs of f_scale up to ``order``.

    Exponents are ``scale * k(3k-1)/2`` for k in Z with sign ``(-1)^k``.
    """
    if scale < 1 or order < 0:
        raise ValueError("scale must be >= 1 and order >= 0")
    terms = [(0, 1)]
    k = 1
    while scale * k * (3 * k - 1) // 2 <= order:
        sign = -1 if k % 2 else 1
        terms.append((scale * k * (3 * k - 1) // 2, sign))
        e2 = scale * k * (3 * k + 1) // 2
        if e2 <= order:
            terms.append((e2, sign))
        k += 1
    terms.sort()
    return terms


def eta_series(i: int, order: int, modulus: int | None = None) -> QSeries:
    """``f_i = prod_{m>=1} (1 - q^{im})`` via the pentagonal number theorem."""
    return QSeries.from_terms(pentagonal_terms(i, order), order, modulus)


def pochhammer_series(a: int, m: int, order: int, modulus: int | None = None) -> QSeries:
    """``(q^a; q^m)_inf = prod_{j>=0} (1 - q^{a + jm})`` truncated at ``order``."""
    if a < 1 or m < 1:
        raise ValueError("pochhammer_series needs a >= 1 and m >= 1")
    if order < 0:
        raise ValueError("order must be nonnegative")
    c = [0] * (order + 1)
    c[0] = 1
    e = a
    while e <= order:
        # multiply in place by (1 - q^e), high to low
        for k in range(order, e - 1, -1):
            c[k] -= c[k - e]
        e += m
    return QSeries(c, modulus)


# --- multiplication and division --------------------------------------------


def mul(x: QSeries, y: QSeries) -> QSeries:
    """Cauchy product truncated at ``min(order(x), order(y))``.

    The loop runs over the nonzero terms of the sparser operand, so an eta
    or theta factor costs O(N sqrt N) instead of O(N^2).
    """
    order = x._common(y)
    if x.nnz() > y.nnz():
        x, y = y, x
    terms = [(e, c) for e, c in x.nonzero_terms() if e <= order]
    if x._modulus is None:
        return QSeries._wrap(tuple(_mul_terms_exact(terms, y._c, order)), None)
    return QSeries._wrap(_mul_terms_mod(terms, y._c, order, x._modulus), x._modulus)


def _mul_terms_exact(terms, dense, order: int) -> list[int]:
    out = [0] * (order + 1)
    for e, c in terms:
        seg = dense[: order + 1 - e]
        if c == 1:
            out[e:] = [o + d for o, d in zip(out[e:], seg)]
        elif c == -1:
            out[e:] = [o - d for o, d in zip(out[e:], seg)]
        else:
            out[e:] = [o + c * d for o, d in zip(out[e:], seg)]
    return out


def _mul_terms_mod(terms, dense: np.ndarray, order: int, modulus: int) -> np.ndarray:
    out = np.zeros(order + 1, dtype=np.int64)
    limit = 2**62
    bound = 0
    step = (modulus - 1) ** 2
    for e, c in terms:
        if bound + step >= limit:
            np.remainder(out, modulus, out=out)
            bound = modulus - 1
        out[e:] += c * dense[: order + 1 - e]
        bound += step
    np.remainder(out, modulus, out=out)
    return out


def _unit_inverse(c0: int, modulus: int | None) -> int:
    if modulus is None:
        if c0 not in (1, -1):
            raise ValueError(f"constant term {c0} is not a unit in the integers")
        return c0
    if gcd(c0, modulus) != 1:
        raise ValueError(f"constant term {c0} is not invertible mod {modulus}")
    return pow(c0, -1, modulus)


def divide(x: QSeries, d: QSeries) -> QSeries:
    """``x / d`` by the triangular recurrence ``c0 y_n = x_n - sum_{k>=1} d_k y_{n-k}``.

    Cost is O(N * nnz(d)); dividing by an eta factor is cheap.
    """
    order = x._common(d)
    unit = _unit_inverse(d.coeff(0), d._modulus)
    terms = [(e, c) for e, c in d.nonzero_terms() if 0 < e <= order]
    if d._modulus is None:
        src = x._c
        out = [0] * (order + 1)
        for n in range(order + 1):
            acc = src[n]
            for e, c in terms:
                if e > n:
                    break
                acc -= c * out[n - e]
            out[n] = unit * acc
        return QSeries._wrap(tuple(out), None)
    exps = np.array([e for e, _ in terms], dtype=np.int64)
    cs = np.array([c for _, c in terms], dtype=np.int64)
    out = divide_mod(np.ascontiguousarray(x._c[: order + 1]), exps, cs, unit, d._modulus)
    return QSeries._wrap(out, d._modulus)


def invert(x: QSeries) -> QSeries:
    """Multiplicative inverse; the constant term must be a unit."""
    return divide(QSeries.one(x.order, x.modulus), x)


def power(x: QSeries, e: int) -> QSeries:
    if e == 0:
        return QSeries.one(x.order, x.modulus)
    if x.is_sparse():
        # repeated sparse products beat squaring into dense operands
        out = x if e > 0 else invert(x)
        for _ in range(abs(e) - 1):
            out = mul(out, x) if e > 0 else divide(out, x)
        return out
    base = x if e > 0 else invert(x)
    e = abs(e)
    result = None
    while e:
        if e & 1:
            result = base if result is None else mul(result, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return result


# --- index operations ---------------------------------------------------------


def extract(x: QSeries, m: int, r: int) -> QSeries:
    """``sum_n coeff(x, mn + r) q^n``, of order ``(order(x) - r) // m``."""
    if m < 1 or not 0 <= r < m:
        raise ValueError(f"need m >= 1 and 0 <= r < m, got m={m}, r={r}")
    if r > x.order:
        raise ValueError(f"residue {r} exceeds series order {x.order}")
    if x._modulus is None:
        return QSeries._wrap(x._c[r::m], None)
    return QSeries._wrap(x._c[r::m].copy(), x._modulus)


def scale_q(x: QSeries, m: int) -> QSeries:
    """Substitute ``q -> q^m``; the order becomes ``m * order(x)``."""
    if m < 1:
        raise ValueError("scale factor must be >= 1")
    if m == 1:
        return x
    n = m * x.order + 1
    if x._modulus is None:
        out = [0] * n
        out[::m] = x._c
        return QSeries._wrap(tuple(out), None)
    arr = np.zeros(n, dtype=np.int64)
    arr[::m] = x._c
    return QSeries._wrap(arr, x._modulus)


def reduce_mod(x: QSeries, modulus: int) -> QSeries:
    """Reduce coefficients into ``[0, modulus)``.

    A residue series may be reduced further when ``modulus`` divides its own.
    """
    if modulus < 2:
        raise ValueError(f"modulus must be >= 2, got {modulus}")
    _check_modulus(modulus)
    if x._modulus is None:
        return QSeries._wrap(np.array([c % modulus for c in x._c], dtype=np.int64), modulus)
    if x._modulus % modulus:
        raise ModeError(f"cannot reduce a mod-{x._modulus} series mod {modulus}")
    return QSeries._wrap(x._c % modulus, modulus)


_ETA_TOKEN = re.compile(r"f(\d+)(?:\^(-?\d+))?")


# --- eta quotients --------------------------------------------------------------


@dataclass(frozen=True)
class EtaQuotient:
    """Formal product ``prod f_i^{e_i}``, stored as sorted ``(scale, exponent)`` pairs."""

    terms: tuple[tuple[int, int], ...]

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = list(terms.items()) if isinstance(terms, Mapping) else list(terms)
        seen: dict[int, int] = {}
        for scale, exp in items:
            if not isinstance(scale, int) or scale < 1:
                raise ValueError(f"eta scale must be a positive integer, got {scale!r}")
            if scale in seen:
                raise ValueError(f"duplicate eta scale {scale}")
            if exp == 0:
                raise ValueError(f"exponent of f_{scale} must be nonzero")
            seen[scale] = int(exp)
        object.__setattr__(self, "terms", tuple(sorted(seen.items())))

    @classmethod
    def combine(cls, terms: Iterable[tuple[int, int]]) -> "EtaQuotient":
        """Like the constructor but merges repeated scales and drops cancelled ones."""
        acc: dict[int, int] = {}
        for scale, exp in terms:
            acc[scale] = acc.get(scale, 0) + exp
        return cls({s: e for s, e in acc.items() if e})

    @classmethod
    def parse(cls, text: str) -> "EtaQuotient":
        """Inverse of ``str``: ``"f3 f5^2 / (f1 f15)"``; ``*`` separators are also accepted."""
        text = text.strip()
        top, sep, bottom = text.partition("/")
        bottom = bottom.strip()
        if sep and bottom.startswith("(") and bottom.endswith(")"):
            bottom = bottom[1:-1]
        terms = []
        for chunk, sign in ((top, 1), (bottom, -1)):
            for tok in chunk.replace("*", " ").split():
                if tok == "1":
                    continue
                m = _ETA_TOKEN.fullmatch(tok)
                if not m:
                    raise ValueError(f"cannot parse eta factor {tok!r} in {text!r}")
                terms.append((int(m.group(1)), sign * int(m.group(2) or 1)))
        if sep and not bottom:
            raise ValueError(f"empty denominator in {text!r}")
        return cls.combine(terms)

    def as_dict(self) -> dict[int, int]:
        return dict(self.terms)

    @property
    def max_scale(self) -> int:
        return max((s for s, _ in self.terms), default=1)

    def __mul__(self, other: "EtaQuotient") -> "EtaQuotient":
        return EtaQuotient.combine(self.terms + other.terms)

    def __pow__(self, k: int) -> "EtaQuotient":
        return EtaQuotient.combine((s, e * k) for s, e in self.terms)

    def inverse(self) -> "EtaQuotient":
        return self ** -1

    def compile(self, order: int, modulus: int | None = None) -> QSeries:
        return compile_quotient(self, order, modulus)

    def __str__(self) -> str:
        def fmt(parts):
            return " ".join(f"f{s}" + (f"^{e}" if e != 1 else "") for s, e in parts)

        num = [(s, e) for s, e in self.terms if e > 0]
        den = [(s, -e) for s, e in self.terms if e < 0]
        top = fmt(num) or "1"
        return top if not den else f"{top} / ({fmt(den)})"


def compile_quotient(eq: EtaQuotient | Mapping[int, int], order: int, modulus: int | None = None) -> QSeries:
    """Expand an eta quotient to ``order``, reducing mod ``modulus`` when given.

    Every factor is applied as a sparse multiply or a sparse division, so the
    result costs O(N sqrt N) per unit of exponent.
    """
    if not isinstance(eq, EtaQuotient):
        eq = EtaQuotient(eq)
    if order < 0:
        raise ValueError("order must be nonnegative")
    out = QSeries.one(order, modulus)
    for scale, exp in eq.terms:
        if exp > 0:
            f = eta_series(scale, order, modulus)
            for _ in range(exp):
                out = mul(out, f)
    for scale, exp in eq.terms:
        if exp < 0:
            f = eta_series(scale, order, modulus)
            for _ in range(-exp):
                out = divide(out, f)
    return out


def series_sum(parts: Sequence[QSeries]) -> QSeries:
    if not parts:
        raise ValueError("nothing to sum")
    total = parts[0]
    for p in parts[1:]:
        total = total + p
    return total
