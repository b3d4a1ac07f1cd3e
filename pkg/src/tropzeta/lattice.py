"""Exact integer and modular arithmetic underlying the corner-cut calculus.

Conventions:
    - A primitive vector is (x, y) in Z^2 \\ {0} with gcd(|x|, |y|) = 1.
    - A unimodular quadruple (a, b, c, d) has nonnegative entries and
      a*d - b*c = 1; it encodes the adjacent normals u = (a, b), v = (c, d)
      whose mediant is u + v = (a+c, b+d).
    - A Farey interval [c/d, a/b] in [0, 1] satisfies a*d - b*c = 1 with
      0 <= c <= d, 0 < a <= b; its mediant is (a+c)/(b+d).
    - Kloosterman sums:  S(n, h; b) = sum over reduced residues r mod b of
      e((n*rbar + h*r)/b)  with rbar the inverse of r in {1, ..., b} and
      e(x) = exp(2*pi*i*x).  The incomplete variant truncates r at R.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

TWO_PI = 2.0 * math.pi


def is_primitive(x: int, y: int) -> bool:
    return (x, y) != (0, 0) and math.gcd(abs(x), abs(y)) == 1


@dataclass(frozen=True)
class PrimitiveVector:
    x: int
    y: int

    def __post_init__(self):
        if not is_primitive(self.x, self.y):
            raise ValueError(f"({self.x}, {self.y}) is not a primitive lattice vector")

    def as_tuple(self) -> tuple[int, int]:
        return (self.x, self.y)


@dataclass(frozen=True)
class UnimodularQuadruple:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if min(self.a, self.b, self.c, self.d) < 0:
            raise ValueError("quadruple entries must be nonnegative")
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"quadruple {(self.a, self.b, self.c, self.d)} has ad - bc != 1")

    @property
    def mediant(self) -> tuple[int, int]:
        return (self.a + self.c, self.b + self.d)

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)


@dataclass(frozen=True)
class CoprimePair:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 1 or self.q < 1 or math.gcd(self.p, self.q) != 1:
            raise ValueError(f"({self.p}, {self.q}) is not a coprime pair of positive integers")


@dataclass(frozen=True)
class FareyInterval:
    """Farey interval [c/d, a/b] with ad - bc = 1."""

    c: int
    d: int
    a: int
    b: int

    def __post_init__(self):
        if self.b < 1 or self.d < 1:
            raise ValueError("denominators must be positive")
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError("not a Farey interval: ad - bc != 1")
        if not (0 <= self.c <= self.d and 0 <= self.a <= self.b):
            raise ValueError("interval endpoints must lie in [0, 1]")

    @property
    def left(self) -> Fraction:
        return Fraction(self.c, self.d)

    @property
    def right(self) -> Fraction:
        return Fraction(self.a, self.b)

    @property
    def mediant(self) -> Fraction:
        return Fraction(self.a + self.c, self.b + self.d)

    def denominators(self) -> tuple[int, int]:
        return (self.b, self.d)


def mod_inverse(r: int, b: int) -> int:
    """Inverse of r modulo b, normalized to {1, ..., b}.

    Raises ValueError("not invertible") when gcd(r, b) != 1.
    """
    if b < 1:
        raise ValueError("modulus must be positive")
    # extended Euclid on (r mod b, b)
    r0 = r % b
    old_r, cur_r = r0, b
    old_s, cur_s = 1, 0
    while cur_r:
        qt = old_r // cur_r
        old_r, cur_r = cur_r, old_r - qt * cur_r
        old_s, cur_s = cur_s, old_s - qt * cur_s
    if old_r != 1:
        raise ValueError("not invertible")
    inv = old_s % b
    return inv if inv >= 1 else b  # b == 1 gives representative 1


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization by deterministic trial division up to sqrt(n)."""
    if n < 1:
        raise ValueError("n must be positive")
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return out


def arithmetic_functions(b: int) -> tuple[int, int, int]:
    """(phi(b), tau(b), mu(b)): Euler totient, divisor count, Moebius value."""
    fac = factorize(b)
    phi, tau, mu = 1, 1, 1
    for p, e in fac:
        phi *= (p - 1) * p ** (e - 1)
        tau *= e + 1
        mu = 0 if e > 1 else -mu
    return phi, tau, mu


def divisors(b: int) -> list[int]:
    ds = [1]
    for p, e in factorize(b):
        ds = [d * p**k for d in ds for k in range(e + 1)]
    return sorted(ds)


def reduced_residues(b: int) -> list[int]:
    """Residues r in {1, ..., b} with gcd(r, b) = 1.  For b = 1 this is [1]."""
    if b == 1:
        return [1]
    return [r for r in range(1, b + 1) if math.gcd(r, b) == 1]


def _e_of_residue(k: int, b: int) -> complex:
    # e(k/b) with k already reduced mod b; range reduction keeps the argument small
    return cmath.exp(1j * TWO_PI * (k % b) / b)


def kloosterman_complete(n: int, h: int, b: int) -> complex:
    """Complete Kloosterman sum S(n, h; b) over reduced residues mod b."""
    if b < 1:
        raise ValueError("modulus must be positive")
    total = 0j
    for r in reduced_residues(b):
        rbar = mod_inverse(r, b)
        total += _e_of_residue(n * rbar + h * r, b)
    return total


def kloosterman_grid(b: int, ns: np.ndarray, hs: np.ndarray) -> np.ndarray:
    """Matrix of S(n, h; b) over all (n, h) in ns x hs, via one complex matmul."""
    rs = np.array(reduced_residues(b))
    rbars = np.array([mod_inverse(int(r), b) for r in rs])
    left = np.exp(2j * np.pi * np.outer(np.asarray(ns), rbars % b) / b)
    right = np.exp(2j * np.pi * np.outer(rs % b, np.asarray(hs)) / b)
    return left @ right


def kloosterman_incomplete(n: int, b: int, R: int) -> complex:
    """Incomplete sum K_b(n; R) = sum_{1<=r<=R, (r,b)=1} e(n*rbar/b)."""
    if not 1 <= R <= b:
        raise ValueError("R must satisfy 1 <= R <= b")
    total = 0j
    for r in range(1, R + 1):
        if math.gcd(r, b) == 1:
            total += _e_of_residue(n * mod_inverse(r, b), b)
    return total


def ramanujan_sum(b: int, n: int) -> int:
    """c_b(n) = mu(b/g) * phi(b) / phi(b/g) with g = gcd(n, b)."""
    g = math.gcd(n, b) if n != 0 else b
    phi_b, _, _ = arithmetic_functions(b)
    phi_bg, _, mu_bg = arithmetic_functions(b // g)
    return mu_bg * phi_b // phi_bg


def farey_from_denominators(b: int, d: int) -> FareyInterval:
    """The Farey interval [c/d, a/b] determined by its coprime denominators.

    a is the inverse of d mod b in {1, ..., b} and c = (a*d - 1) / b.
    """
    if b < 1 or d < 1:
        raise ValueError("denominators must be positive")
    if math.gcd(b, d) != 1:
        raise ValueError("denominators must be coprime")
    a = mod_inverse(d, b)
    c = (a * d - 1) // b
    return FareyInterval(c=c, d=d, a=a, b=b)


def quadruple_from_coprime(p: int, q: int) -> UnimodularQuadruple:
    """Invert (a, b, c, d) -> (a+b, c+d): the unique nonnegative unimodular
    quadruple with a + b = p and c + d = q."""
    if p < 1 or q < 1:
        raise ValueError("p, q must be positive")
    if math.gcd(p, q) != 1:
        raise ValueError("p, q must be coprime")
    # unique b in [0, p) with q*b = -1 (mod p)
    if p == 1:
        b = 0
    else:
        b = (-mod_inverse(q, p)) % p
    d = (q * b + 1) // p
    return UnimodularQuadruple(a=p - b, b=b, c=q - d, d=d)


def quadruple_to_coprime(quad: UnimodularQuadruple) -> tuple[int, int]:
    return (quad.a + quad.b, quad.c + quad.d)


def stern_brocot_quadruples(max_p_plus_q: int) -> Iterator[UnimodularQuadruple]:
    """All nonnegative unimodular quadruples with (a+b) + (c+d) <= bound,
    depth-first in Stern-Brocot order from the root (1, 0, 0, 1)."""
    root = (1, 0, 0, 1)
    if root[0] + root[1] + root[2] + root[3] > max_p_plus_q:
        return
    stack = [root]
    while stack:
        a, b, c, d = stack.pop()
        yield UnimodularQuadruple(a, b, c, d)
        m1, m2 = a + c, b + d
        if a + b + m1 + m2 <= max_p_plus_q:
            stack.append((a, b, m1, m2))
        if m1 + m2 + c + d <= max_p_plus_q:
            stack.append((m1, m2, c, d))


def farey_intervals_stern_brocot(max_denominator: int) -> list[FareyInterval]:
    """All Farey intervals with max(b, d) <= N by mediant descent from [0/1, 1/1]."""
    if max_denominator < 1:
        return []
    out: list[FareyInterval] = []
    stack = [(0, 1, 1, 1)]  # (c, d, a, b)
    while stack:
        c, d, a, b = stack.pop()
        if max(b, d) <= max_denominator:
            out.append(FareyInterval(c=c, d=d, a=a, b=b))
        bd = b + d
        if bd <= max_denominator:
            stack.append((c, d, a + c, bd))
            stack.append((a + c, bd, a, b))
    return out


def coprime_pairs_by_max(bound: int) -> Iterator[tuple[int, int]]:
    """Coprime (b, d) with 1 <= b, d <= bound, ordered by max(b, d) ascending,
    ties broken lexicographically.  Deterministic enumeration for partial sums."""
    for m in range(1, bound + 1):
        # pairs with max exactly m: (m, d) and (b, m)
        pairs = [(m, d) for d in range(1, m + 1)] + [(b, m) for b in range(1, m)]
        for b, d in sorted(pairs):
            if math.gcd(b, d) == 1:
                yield (b, d)
