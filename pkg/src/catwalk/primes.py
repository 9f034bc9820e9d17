"""Small-prime utilities, all by trial division (desk scale)."""

from __future__ import annotations

from .errors import ConfigError


def is_prime(x: int) -> bool:
    if x < 2:
        return False
    if x < 4:
        return True
    if x % 2 == 0:
        return False
    d = 3
    while d * d <= x:
        if x % d == 0:
            return False
        d += 2
    return True


def primes_stream(count: int) -> list[int]:
    """First `count` primes in increasing order."""
    if count < 1:
        raise ConfigError("prime count must be >= 1")
    out = []
    cand = 2
    while len(out) < count:
        if is_prime(cand):
            out.append(cand)
        cand += 1
    return out


def next_prime_after(x: int) -> int:
    cand = x + 1
    while not is_prime(cand):
        cand += 1
    return cand
