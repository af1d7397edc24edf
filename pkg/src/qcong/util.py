from __future__ import annotations

from math import isqrt


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for f in range(3, isqrt(n) + 1, 2):
        if n % f == 0:
            return False
    return True


def parse_int_list(text: str) -> list[int]:
    return [int(t) for t in text.replace(" ", "").split(",") if t]
