"""Textbook RSA.

No padding is applied: the multiplicative homomorphism only exists for the
raw map ``x -> x**b mod n``. That makes this scheme deterministic and
malleable by design; it is not IND-CPA secure and must not be used as a
general-purpose encryption primitive.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import ClassVar

from ..errors import InvalidKey, MessageNotUnit, MessageOutOfRange
from ..numtheory import gen_prime, is_probable_prime, mod_inv, mod_pow
from .base import Ciphertext, SchemeId, check_ciphertext, check_pair, fingerprint

DEFAULT_EXPONENT = 65537


@dataclass(frozen=True)
class RsaPublicKey:
    n: int
    b: int

    FIELDS: ClassVar[tuple[str, ...]] = ("n", "b")

    @property
    def scheme(self) -> SchemeId:
        return SchemeId.RSA

    @property
    def ciphertext_modulus(self) -> int:
        return self.n

    def components(self) -> dict[str, int]:
        return {"n": self.n, "b": self.b}

    @cached_property
    def fingerprint(self) -> bytes:
        return fingerprint(self.scheme, self.components())


@dataclass(frozen=True)
class RsaKeypair:
    n: int
    b: int
    a: int = field(repr=False)
    p: int = field(repr=False)
    q: int = field(repr=False)
    phi: int = field(repr=False)

    PRIVATE_FIELDS: ClassVar[tuple[str, ...]] = ("a", "p", "q", "phi")

    @cached_property
    def public(self) -> RsaPublicKey:
        return RsaPublicKey(self.n, self.b)

    @property
    def scheme(self) -> SchemeId:
        return SchemeId.RSA

    def private_components(self) -> dict[str, int]:
        return {"a": self.a, "p": self.p, "q": self.q, "phi": self.phi}

    @classmethod
    def from_primes(cls, p: int, q: int, b: int = DEFAULT_EXPONENT) -> "RsaKeypair":
        phi = (p - 1) * (q - 1)
        key = cls(n=p * q, b=b, a=mod_inv(b, phi), p=p, q=q, phi=phi)
        key.validate()
        return key

    def validate(self) -> None:
        if self.p == self.q or not (is_probable_prime(self.p) and is_probable_prime(self.q)):
            raise InvalidKey("p and q must be distinct primes")
        if self.n != self.p * self.q or self.phi != (self.p - 1) * (self.q - 1):
            raise InvalidKey("n or phi inconsistent with p, q")
        if gcd(self.b, self.phi) != 1 or self.a * self.b % self.phi != 1:
            raise InvalidKey("a*b != 1 mod phi(n)")


def rsa_keygen(bits: int, rng: random.Random | None = None, b: int = DEFAULT_EXPONENT) -> RsaKeypair:
    """Keypair whose modulus has exactly ``bits`` bits.

    ``b`` is the preferred public exponent; if it shares a factor with phi(n)
    the next odd integer is tried.
    """
    if bits < 16:
        raise ValueError("bits must be >= 16")
    while True:
        p = gen_prime(bits - bits // 2, rng)
        q = gen_prime(bits // 2, rng)
        if p == q:
            continue
        phi = (p - 1) * (q - 1)
        e = b
        while gcd(e, phi) != 1:
            e += 2
        return RsaKeypair(n=p * q, b=e, a=mod_inv(e, phi), p=p, q=q, phi=phi)


def rsa_encrypt(k, x: int) -> Ciphertext:
    k = getattr(k, "public", k)
    if not 1 <= x < k.n:
        raise MessageOutOfRange(f"RSA plaintext must lie in [1, n), got {x}")
    if gcd(x, k.n) != 1:
        raise MessageNotUnit("RSA plaintext must be coprime to n")
    return Ciphertext(SchemeId.RSA, mod_pow(x, k.b, k.n), None, k.fingerprint)


def rsa_decrypt(k: RsaKeypair, y: Ciphertext) -> int:
    check_ciphertext(y, SchemeId.RSA, k.public.fingerprint)
    return mod_pow(y.c1, k.a, k.n)


def rsa_mul(ca: Ciphertext, cb: Ciphertext, n: int) -> Ciphertext:
    check_pair(ca, cb, SchemeId.RSA)
    return Ciphertext(SchemeId.RSA, ca.c1 * cb.c1 % n, None, ca.key_fingerprint)
