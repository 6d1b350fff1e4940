"""Exact integer arithmetic helpers: primality, factorization, Legendre symbols.

Factorization is trial division up to a configurable bound followed by
Brent's variant of Pollard rho.  A failure to split a composite within the
budget raises FactorizationFailed; we never return a wrong factorization.
"""

from __future__ import annotations

import math
import os
import random
from fractions import Fraction

from .errors import FactorizationFailed

DEFAULT_TRIAL_BOUND = 10 ** 6

_SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]


def factor_bound() -> int:
    """Current trial-division bound; PGAL_FACTOR_BOUND overrides the default."""
    raw = os.environ.get("PGAL_FACTOR_BOUND")
    if raw is None:
        return DEFAULT_TRIAL_BOUND
    try:
        return max(2, int(raw))
    except ValueError:
        return DEFAULT_TRIAL_BOUND


def is_prime(n: int) -> bool:
    """Miller-Rabin; deterministic for n < 3.3e24 via the standard base set."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n: int, max_steps: int) -> int:
    """One Brent-rho attempt; returns a nontrivial factor or 0 on failure."""
    if n % 2 == 0:
        return 2
    rng = random.Random(0xC0FFEE ^ n)
    for _ in range(16):
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        steps = 0
        x = ys = y
        while g == 1 and steps < max_steps:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
            steps += r
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
    return 0


def factor(n: int) -> dict[int, int]:
    """Factor |n| into primes, returned as {prime: exponent}.

    Raises FactorizationFailed if a cofactor survives trial division to the
    configured bound and the rho budget.
    """
    n = abs(n)
    if n == 0:
        raise FactorizationFailed("cannot factor 0")
    out: dict[int, int] = {}
    bound = factor_bound()
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)
    w = 0
    while d * d <= n and d <= bound:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += wheel[w]
        w = (w + 1) % 8
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if m <= bound * bound or is_prime(m):
            if is_prime(m):
                out[m] = out.get(m, 0) + 1
                continue
        g = _brent_rho(m, max_steps=4 * bound)
        if not g or g in (1, m):
            raise FactorizationFailed(f"could not split composite {m}")
        stack.append(g)
        stack.append(m // g)
    return out


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a|p) for odd prime p, in {-1, 0, 1}."""
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return 1 if r == 1 else -1


def p_free_part(q: Fraction | int, p: int) -> Fraction:
    """Representative of q modulo p-th powers of rationals.

    All prime exponents are reduced mod p.  For p = 2 the sign is kept;
    for odd p the sign is dropped (-1 is a p-th power).
    """
    q = Fraction(q)
    if q == 0:
        raise ZeroDivisionError("zero has no p-free part")
    n = q.numerator * q.denominator ** (p - 1)
    sign = -1 if (n < 0 and p == 2) else 1
    facs = factor(n)
    out = 1
    for prime, e in sorted(facs.items()):
        out *= prime ** (e % p)
    return Fraction(sign * out)


def is_square(q: Fraction | int) -> bool:
    q = Fraction(q)
    if q <= 0:
        return q == 0
    rn = math.isqrt(q.numerator)
    rd = math.isqrt(q.denominator)
    return rn * rn == q.numerator and rd * rd == q.denominator
