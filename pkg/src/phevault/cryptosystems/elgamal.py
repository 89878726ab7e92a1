"""ElGamal over the units of a safe prime, multiplicative and exponential.

The MUL variant encrypts x as ``(alpha**r, x * beta**r)``. The ADD variant
puts the plaintext in the exponent, ``(alpha**r, alpha**x * beta**r)``, which
turns componentwise multiplication into plaintext addition; decryption then
needs a bounded discrete log, so plaintexts (and sums) must stay at or below
``add_bound``.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import ClassVar

from ..errors import SchemeMismatch, InvalidCiphertext, InvalidKey, MessageOutOfRange, NotFound, PlaintextOutOfBound
from ..numtheory import bsgs_dlog, default_rng, gen_safe_prime, is_probable_prime, mod_inv, mod_pow
from .base import Ciphertext, SchemeId, check_ciphertext, check_pair, fingerprint

DEFAULT_ADD_BOUND = 1 << 20


class Variant(str, enum.Enum):
    MUL = "MUL"
    ADD = "ADD"

    @property
    def scheme(self) -> SchemeId:
        return SchemeId.ELGAMAL_MUL if self is Variant.MUL else SchemeId.ELGAMAL_ADD


def is_generator(alpha: int, p: int) -> bool:
    """True iff alpha generates Z_p^* for a safe prime p = 2q + 1."""
    q = (p - 1) // 2
    return 1 < alpha < p and pow(alpha, 2, p) != 1 and pow(alpha, q, p) != 1


@dataclass(frozen=True)
class ElGamalPublicKey:
    p: int
    alpha: int
    beta: int
    variant: Variant = Variant.MUL
    # decryption policy, not key material: excluded from the fingerprint
    add_bound: int | None = None

    FIELDS: ClassVar[tuple[str, ...]] = ("p", "alpha", "beta")

    @property
    def scheme(self) -> SchemeId:
        return self.variant.scheme

    @property
    def ciphertext_modulus(self) -> int:
        return self.p

    def components(self) -> dict[str, int]:
        return {"p": self.p, "alpha": self.alpha, "beta": self.beta}

    @cached_property
    def fingerprint(self) -> bytes:
        return fingerprint(self.scheme, self.components())


@dataclass(frozen=True)
class ElGamalKeypair:
    p: int
    alpha: int
    beta: int
    a: int = field(repr=False)
    variant: Variant = Variant.MUL
    add_bound: int | None = None

    PRIVATE_FIELDS: ClassVar[tuple[str, ...]] = ("a",)

    def __post_init__(self):
        if self.variant is Variant.ADD and self.add_bound is None:
            object.__setattr__(self, "add_bound", DEFAULT_ADD_BOUND)

    @cached_property
    def public(self) -> ElGamalPublicKey:
        return ElGamalPublicKey(self.p, self.alpha, self.beta, self.variant, self.add_bound)

    @property
    def scheme(self) -> SchemeId:
        return self.variant.scheme

    def private_components(self) -> dict[str, int]:
        return {"a": self.a}

    @classmethod
    def from_params(cls, p: int, alpha: int, a: int, variant: Variant = Variant.MUL,
                    add_bound: int | None = None) -> "ElGamalKeypair":
        key = cls(p, alpha, mod_pow(alpha, a, p), a, variant, add_bound)
        key.validate()
        return key

    def validate(self) -> None:
        p = self.p
        if not (is_probable_prime(p) and is_probable_prime((p - 1) // 2)):
            raise InvalidKey("p must be a safe prime")
        if not is_generator(self.alpha, p):
            raise InvalidKey("alpha does not generate Z_p^*")
        if not 1 <= self.a <= p - 2 or self.beta != mod_pow(self.alpha, self.a, p):
            raise InvalidKey("beta != alpha^a mod p")
        if self.variant is Variant.ADD and self.add_bound < 1:
            raise InvalidKey("add_bound must be >= 1")


def elgamal_keygen(bits: int, variant: Variant = Variant.MUL, add_bound: int | None = None,
                   rng: random.Random | None = None) -> ElGamalKeypair:
    if bits < 16:
        raise ValueError("bits must be >= 16")
    variant = Variant(variant)
    if variant is Variant.ADD:
        add_bound = DEFAULT_ADD_BOUND if add_bound is None else add_bound
        if add_bound < 1:
            raise ValueError("add_bound must be >= 1")
    else:
        add_bound = None
    rng = rng or default_rng()
    p, _ = gen_safe_prime(bits, rng)
    while True:
        alpha = rng.randrange(2, p - 1)
        if is_generator(alpha, p):
            break
    a = rng.randrange(1, p - 1)
    return ElGamalKeypair(p, alpha, mod_pow(alpha, a, p), a, variant, add_bound)


def elgamal_encrypt(k, x: int, rng: random.Random | None = None, r: int | None = None) -> Ciphertext:
    """Encrypt under a fresh exponent r in [1, p-2]; r = 0 would expose x in c2."""
    k = getattr(k, "public", k)
    p = k.p
    if k.variant is Variant.MUL:
        if not 1 <= x < p:
            raise MessageOutOfRange(f"ElGamal plaintext must lie in [1, p), got {x}")
        encoded = x
    else:
        if not 0 <= x <= k.add_bound:
            raise MessageOutOfRange(f"exponential ElGamal plaintext must lie in [0, {k.add_bound}], got {x}")
        encoded = mod_pow(k.alpha, x, p)
    if r is None:
        r = (rng or default_rng()).randrange(1, p - 1)
    c1 = mod_pow(k.alpha, r, p)
    c2 = encoded * mod_pow(k.beta, r, p) % p
    return Ciphertext(k.scheme, c1, c2, k.fingerprint)


def elgamal_decrypt(k: ElGamalKeypair, y: Ciphertext) -> int:
    check_ciphertext(y, k.scheme, k.public.fingerprint)
    p = k.p
    if not (1 <= y.c1 < p and 1 <= y.c2 < p):
        raise InvalidCiphertext("ElGamal components must be units mod p")
    m = y.c2 * mod_inv(mod_pow(y.c1, k.a, p), p) % p
    if k.variant is Variant.MUL:
        return m
    try:
        return bsgs_dlog(k.alpha, m, p, k.add_bound)
    except NotFound:
        raise PlaintextOutOfBound(f"plaintext exceeds add_bound {k.add_bound}") from None


def elgamal_combine(ca: Ciphertext, cb: Ciphertext, p: int) -> Ciphertext:
    """Componentwise product: multiplies (MUL) or adds (ADD) the plaintexts."""
    if ca.scheme not in (SchemeId.ELGAMAL_MUL, SchemeId.ELGAMAL_ADD):
        raise SchemeMismatch(f"{ca.scheme} is not an ElGamal ciphertext")
    check_pair(ca, cb, ca.scheme)
    return Ciphertext(ca.scheme, ca.c1 * cb.c1 % p, ca.c2 * cb.c2 % p, ca.key_fingerprint)
