from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import ClassVar

from ..errors import InvalidCiphertext, InvalidKey, MessageOutOfRange, NotInvertible
from ..numtheory import gen_prime, is_probable_prime, lcm, mod_inv, mod_pow, sample_unit
from .base import Ciphertext, SchemeId, check_ciphertext, check_pair, fingerprint


def _L(u: int, n: int) -> int:
    return (u - 1) // n


@dataclass(frozen=True)
class PaillierPublicKey:
    n: int
    g: int

    FIELDS: ClassVar[tuple[str, ...]] = ("n", "g")

    @property
    def scheme(self) -> SchemeId:
        return SchemeId.PAILLIER

    @cached_property
    def nsquare(self) -> int:
        return self.n * self.n

    @property
    def ciphertext_modulus(self) -> int:
        return self.nsquare

    def components(self) -> dict[str, int]:
        return {"n": self.n, "g": self.g}

    @cached_property
    def fingerprint(self) -> bytes:
        return fingerprint(self.scheme, self.components())


@dataclass(frozen=True)
class PaillierKeypair:
    n: int
    g: int
    lam: int = field(repr=False)
    mu: int = field(repr=False)
    p: int = field(repr=False)
    q: int = field(repr=False)

    # wire names; "lambda" is reserved in Python so the attribute is ``lam``
    PRIVATE_FIELDS: ClassVar[tuple[str, ...]] = ("lambda", "mu", "p", "q")

    @cached_property
    def public(self) -> PaillierPublicKey:
        return PaillierPublicKey(self.n, self.g)

    @property
    def scheme(self) -> SchemeId:
        return SchemeId.PAILLIER

    def private_components(self) -> dict[str, int]:
        return {"lambda": self.lam, "mu": self.mu, "p": self.p, "q": self.q}

    @classmethod
    def from_primes(cls, p: int, q: int, g: int | None = None) -> "PaillierKeypair":
        n = p * q
        g = n + 1 if g is None else g
        lam = lcm(p - 1, q - 1)
        try:
            mu = mod_inv(_L(mod_pow(g, lam, n * n), n), n)
        except NotInvertible:
            raise InvalidKey("L(g^lambda mod n^2) is not invertible mod n") from None
        key = cls(n=n, g=g, lam=lam, mu=mu, p=p, q=q)
        key.validate()
        return key

    def validate(self) -> None:
        p, q, n = self.p, self.q, self.n
        if p == q or not (is_probable_prime(p) and is_probable_prime(q)):
            raise InvalidKey("p and q must be distinct primes")
        if n != p * q or gcd(n, (p - 1) * (q - 1)) != 1:
            raise InvalidKey("n inconsistent with p, q or gcd(n, phi) != 1")
        if self.lam != lcm(p - 1, q - 1):
            raise InvalidKey("lambda is not lcm(p-1, q-1)")
        nsq = n * n
        if not 1 <= self.g < nsq or gcd(self.g, n) != 1:
            raise InvalidKey("g is not a unit mod n^2")
        if _L(mod_pow(self.g, self.lam, nsq), n) * self.mu % n != 1:
            raise InvalidKey("mu is not the inverse of L(g^lambda mod n^2)")


def paillier_keygen(bits: int, rng: random.Random | None = None, random_g: bool = False) -> PaillierKeypair:
    """Keypair with an exactly ``bits``-bit modulus.

    By default ``g = n + 1``, for which L(g^lambda mod n^2) = lambda mod n is
    always invertible. ``random_g=True`` instead draws g uniformly from the
    units mod n^2 until that invertibility condition holds.
    """
    if bits < 16:
        raise ValueError("bits must be >= 16")
    while True:
        p = gen_prime(bits - bits // 2, rng)
        q = gen_prime(bits // 2, rng)
        n = p * q
        if p == q or gcd(n, (p - 1) * (q - 1)) != 1:
            continue
        lam = lcm(p - 1, q - 1)
        nsq = n * n
        g = n + 1
        if random_g:
            while True:
                g = sample_unit(nsq, rng)
                if gcd(_L(mod_pow(g, lam, nsq), n), n) == 1:
                    break
        mu = mod_inv(_L(mod_pow(g, lam, nsq), n), n)
        return PaillierKeypair(n=n, g=g, lam=lam, mu=mu, p=p, q=q)


def paillier_encrypt(k, x: int, rng: random.Random | None = None, r: int | None = None) -> Ciphertext:
    """``g**x * r**n mod n**2`` with a fresh unit r (or the supplied one)."""
    k = getattr(k, "public", k)
    n, nsq = k.n, k.nsquare
    if not 0 <= x < n:
        raise MessageOutOfRange(f"Paillier plaintext must lie in [0, n), got {x}")
    if r is None:
        r = sample_unit(n, rng)
    elif gcd(r, n) != 1:
        raise ValueError("r must be a unit mod n")
    if k.g == n + 1:
        gx = (1 + x * n) % nsq
    else:
        gx = mod_pow(k.g, x, nsq)
    return Ciphertext(SchemeId.PAILLIER, gx * mod_pow(r, n, nsq) % nsq, None, k.fingerprint)


def paillier_decrypt(k: PaillierKeypair, y: Ciphertext) -> int:
    check_ciphertext(y, SchemeId.PAILLIER, k.public.fingerprint)
    n, nsq = k.n, k.public.nsquare
    if not 1 <= y.c1 < nsq or gcd(y.c1, n) != 1:
        raise InvalidCiphertext("Paillier ciphertext is not a unit mod n^2")
    return _L(mod_pow(y.c1, k.lam, nsq), n) * k.mu % n


def paillier_add(ca: Ciphertext, cb: Ciphertext, n: int) -> Ciphertext:
    check_pair(ca, cb, SchemeId.PAILLIER)
    return Ciphertext(SchemeId.PAILLIER, ca.c1 * cb.c1 % (n * n), None, ca.key_fingerprint)
