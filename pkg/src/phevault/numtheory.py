"""Modular arithmetic and number-theoretic primitives shared by every scheme.

All integers are plain Python ``int`` (arbitrary precision). Functions that
need randomness take an ``rng`` argument implementing the :class:`random.Random`
interface; pass a seeded ``random.Random`` for reproducible vectors and leave
the default (:class:`random.SystemRandom`) everywhere else.
"""

from __future__ import annotations

import random
from functools import lru_cache
from math import gcd, isqrt

from .errors import InvalidModulus, NotFound, NotInvertible

MR_ROUNDS = 64

_system_rng = random.SystemRandom()


def _sieve(limit: int) -> list[int]:
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for i in range(2, isqrt(limit) + 1):
        if flags[i]:
            flags[i * i :: i] = bytes(len(range(i * i, limit + 1, i)))
    return [i for i, f in enumerate(flags) if f]


_TRIAL_LIMIT = 1000
SMALL_PRIMES = _sieve(_TRIAL_LIMIT)
# odd primes used to pre-filter safe-prime candidates
_SIEVE_PRIMES = _sieve(1 << 16)[1:]


def default_rng() -> random.Random:
    return _system_rng


def _check_modulus(m: int) -> None:
    if m < 2:
        raise InvalidModulus(f"modulus must be >= 2, got {m}")


def mod_pow(base: int, exp: int, m: int) -> int:
    """Return ``base**exp mod m`` by square-and-multiply."""
    _check_modulus(m)
    if exp < 0:
        raise ValueError("exponent must be nonnegative")
    # builtin pow is a sliding-window square-and-multiply over big ints
    return pow(base, exp, m)


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """Extended Euclid: ``(g, u, v)`` with ``a*u + b*v == g == gcd(a, b)``."""
    if a == 0 and b == 0:
        raise ValueError("egcd(0, 0) is undefined")
    u0, u1, v0, v1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    return a, u0, v0


def mod_inv(x: int, m: int) -> int:
    """Inverse of ``x`` modulo ``m``; raises NotInvertible when gcd(x, m) != 1."""
    _check_modulus(m)
    g, u, _ = egcd(x % m, m)
    if g != 1:
        raise NotInvertible(f"{x} has no inverse modulo {m} (gcd {g})")
    return u % m


def lcm(a: int, b: int) -> int:
    if a < 1 or b < 1:
        raise ValueError("lcm arguments must be positive")
    return a * b // gcd(a, b)


def is_probable_prime(n: int, rounds: int = MR_ROUNDS, rng: random.Random | None = None) -> bool:
    """Miller-Rabin after trial division by the primes below 1000.

    A composite passes with probability below ``4**-rounds``. Numbers below
    ``1000**2`` are decided exactly by the trial division alone.
    """
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    if n < 2:
        return False
    for p in SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n < _TRIAL_LIMIT * _TRIAL_LIMIT:
        return True
    rng = rng or _system_rng
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for _ in range(rounds):
        x = pow(rng.randrange(2, n - 1), d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def gen_prime(bits: int, rng: random.Random | None = None) -> int:
    """Random prime of exactly ``bits`` bits with the two top bits set.

    Setting both top bits makes the product of a k1-bit and a k2-bit prime
    from here exactly k1 + k2 bits long.
    """
    if bits < 8:
        raise ValueError("bits must be >= 8")
    rng = rng or _system_rng
    top = 0b11 << (bits - 2)
    while True:
        candidate = rng.getrandbits(bits) | top | 1
        if is_probable_prime(candidate, MR_ROUNDS, rng):
            return candidate


def _fermat_base2(n: int) -> bool:
    return pow(2, n - 1, n) == 1


def gen_safe_prime(bits: int, rng: random.Random | None = None) -> tuple[int, int]:
    """Return ``(p, q)`` with ``p = 2q + 1``, both prime and p exactly ``bits`` bits.

    Candidates for q are taken from a window above a random start; a sieve
    strikes every offset where q or 2q+1 has a factor below 2**16, then the
    survivors get a base-2 Fermat check before the full Miller-Rabin rounds.
    """
    if bits < 16:
        raise ValueError("bits must be >= 16")
    rng = rng or _system_rng
    qbits = bits - 1
    width = 4096
    primes = [s for s in _SIEVE_PRIMES if s < (1 << (qbits - 2))]
    while True:
        start = rng.getrandbits(qbits) | (0b11 << (qbits - 2)) | 1
        # candidates q = start + 2k, k in [0, width)
        alive = bytearray([1]) * width
        for s in primes:
            half = (s + 1) // 2  # inverse of 2 mod s
            k_q = (-start * half) % s  # s | q
            k_p = ((-half - start) * half) % s  # s | 2q + 1
            alive[k_q::s] = bytes(len(range(k_q, width, s)))
            alive[k_p::s] = bytes(len(range(k_p, width, s)))
        for k in range(width):
            if not alive[k]:
                continue
            q = start + 2 * k
            if q.bit_length() != qbits:
                break
            p = 2 * q + 1
            if not (_fermat_base2(q) and _fermat_base2(p)):
                continue
            if is_probable_prime(q, MR_ROUNDS, rng) and is_probable_prime(p, MR_ROUNDS, rng):
                return p, q


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol ``(a/n)`` for odd positive n, by quadratic reciprocity."""
    if n < 1 or n % 2 == 0:
        raise InvalidModulus(f"Jacobi symbol needs an odd positive modulus, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def sample_unit(m: int, rng: random.Random | None = None) -> int:
    """Uniform element of the unit group mod m (rejection sampling)."""
    _check_modulus(m)
    rng = rng or _system_rng
    while True:
        x = rng.randrange(1, m)
        if gcd(x, m) == 1:
            return x


@lru_cache(maxsize=32)
def _baby_steps(base: int, m: int, stride: int) -> dict[int, int]:
    table: dict[int, int] = {}
    value = 1
    for j in range(stride):
        table.setdefault(value, j)
        value = value * base % m
    return table


def bsgs_dlog(base: int, target: int, m: int, bound: int) -> int:
    """Smallest ``x`` in ``[0, bound]`` with ``base**x == target (mod m)``.

    Baby-step giant-step: O(sqrt(bound)) time and memory. Baby-step tables are
    cached per (base, m, stride) so repeated decryptions under one key reuse
    them. Raises NotFound if no exponent up to ``bound`` matches.
    """
    _check_modulus(m)
    if bound < 1:
        raise ValueError("bound must be >= 1")
    base %= m
    target %= m
    if gcd(base, m) != 1:
        value = 1 % m
        for x in range(bound + 1):
            if value == target:
                return x
            value = value * base % m
        raise NotFound(f"no exponent <= {bound}")

    stride = isqrt(bound) + 1
    table = _baby_steps(base, m, stride)
    giant = pow(base, -stride, m)
    gamma = target
    for i in range(stride):
        j = table.get(gamma)
        if j is not None:
            x = i * stride + j
            if x <= bound:
                return x
            break
        gamma = gamma * giant % m
    raise NotFound(f"no exponent <= {bound}")
