"""Goldwasser-Micali single-bit encryption.

Standard quadratic-residuosity construction: ``c = g**bit * r**2 mod n`` where
g is a pseudosquare (a non-residue mod both p and q, so its Jacobi symbol
mod n is +1). Multiplying ciphertexts XORs the bits.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import ClassVar

from ..errors import InvalidBit, InvalidCiphertext, InvalidKey
from ..numtheory import default_rng, gen_prime, is_probable_prime, jacobi, mod_pow, sample_unit
from .base import Ciphertext, SchemeId, check_ciphertext, check_pair, fingerprint


@dataclass(frozen=True)
class GmPublicKey:
    n: int
    g: int

    FIELDS: ClassVar[tuple[str, ...]] = ("n", "g")

    @property
    def scheme(self) -> SchemeId:
        return SchemeId.GM

    @property
    def ciphertext_modulus(self) -> int:
        return self.n

    def components(self) -> dict[str, int]:
        return {"n": self.n, "g": self.g}

    @cached_property
    def fingerprint(self) -> bytes:
        return fingerprint(self.scheme, self.components())


@dataclass(frozen=True)
class GmKeypair:
    n: int
    g: int
    p: int = field(repr=False)
    q: int = field(repr=False)

    PRIVATE_FIELDS: ClassVar[tuple[str, ...]] = ("p", "q")

    @cached_property
    def public(self) -> GmPublicKey:
        return GmPublicKey(self.n, self.g)

    @property
    def scheme(self) -> SchemeId:
        return SchemeId.GM

    def private_components(self) -> dict[str, int]:
        return {"p": self.p, "q": self.q}

    @classmethod
    def from_primes(cls, p: int, q: int, g: int) -> "GmKeypair":
        key = cls(p * q, g, p, q)
        key.validate()
        return key

    def validate(self) -> None:
        p, q = self.p, self.q
        if p == q or p == 2 or q == 2 or not (is_probable_prime(p) and is_probable_prime(q)):
            raise InvalidKey("p and q must be distinct odd primes")
        if self.n != p * q:
            raise InvalidKey("n != p*q")
        if jacobi(self.g, p) != -1 or jacobi(self.g, q) != -1:
            raise InvalidKey("g must be a non-residue mod p and mod q")


def gm_keygen(bits: int, rng: random.Random | None = None) -> GmKeypair:
    if bits < 16:
        raise ValueError("bits must be >= 16")
    rng = rng or default_rng()
    while True:
        p = gen_prime(bits - bits // 2, rng)
        q = gen_prime(bits // 2, rng)
        if p != q:
            break
    n = p * q
    while True:
        g = rng.randrange(2, n)
        if jacobi(g, p) == -1 and jacobi(g, q) == -1:
            return GmKeypair(n, g, p, q)


def gm_encrypt(k, bit: int, rng: random.Random | None = None, r: int | None = None) -> Ciphertext:
    k = getattr(k, "public", k)
    if bit not in (0, 1):
        raise InvalidBit(f"GM encrypts a single bit, got {bit!r}")
    if r is None:
        r = sample_unit(k.n, rng)
    c = mod_pow(k.g, bit, k.n) * r * r % k.n
    return Ciphertext(SchemeId.GM, c, None, k.fingerprint)


def gm_decrypt(k: GmKeypair, y: Ciphertext) -> int:
    """0 if c is a quadratic residue mod p (Euler's criterion), else 1."""
    check_ciphertext(y, SchemeId.GM, k.public.fingerprint)
    if not 1 <= y.c1 < k.n or gcd(y.c1, k.n) != 1:
        raise InvalidCiphertext("GM ciphertext must be a unit mod n")
    return 0 if mod_pow(y.c1, (k.p - 1) // 2, k.p) == 1 else 1


def gm_xor(ca: Ciphertext, cb: Ciphertext, n: int) -> Ciphertext:
    check_pair(ca, cb, SchemeId.GM)
    return Ciphertext(SchemeId.GM, ca.c1 * cb.c1 % n, None, ca.key_fingerprint)
