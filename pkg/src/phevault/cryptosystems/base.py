from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass

from .. import codec
from ..errors import InvalidCiphertext, KeyMismatch, SchemeMismatch

FINGERPRINT_BYTES = 16


class SchemeId(str, enum.Enum):
    RSA = "RSA"
    PAILLIER = "PAILLIER"
    ELGAMAL_MUL = "ELGAMAL_MUL"
    ELGAMAL_ADD = "ELGAMAL_ADD"
    GM = "GM"

    def __str__(self) -> str:
        return self.value


def public_key_document(scheme: SchemeId, components: dict[str, int]) -> dict:
    """The ``{"scheme", "public"}`` object that fingerprints hash and REGISTER_KEY carries."""
    return {
        "scheme": scheme.value,
        "public": {name: codec.to_hex(value) for name, value in components.items()},
    }


def fingerprint(scheme: SchemeId, components: dict[str, int]) -> bytes:
    canonical = codec.dumps(public_key_document(scheme, components))
    return hashlib.sha256(canonical.encode("ascii")).digest()[:FINGERPRINT_BYTES]


@dataclass(frozen=True)
class Ciphertext:
    scheme: SchemeId
    c1: int
    c2: int | None
    key_fingerprint: bytes

    def __post_init__(self):
        has_pair = self.scheme in (SchemeId.ELGAMAL_MUL, SchemeId.ELGAMAL_ADD)
        if has_pair != (self.c2 is not None):
            raise InvalidCiphertext(f"{self.scheme} ciphertext component count is wrong")

    def bit_length(self) -> int:
        return self.c1.bit_length() + (self.c2.bit_length() if self.c2 is not None else 0)


def check_ciphertext(y: Ciphertext, scheme: SchemeId, key_fingerprint: bytes) -> None:
    if y.scheme != scheme:
        raise SchemeMismatch(f"expected {scheme} ciphertext, got {y.scheme}")
    if y.key_fingerprint != key_fingerprint:
        raise KeyMismatch("ciphertext was produced under a different key")


def check_pair(ca: Ciphertext, cb: Ciphertext, scheme: SchemeId) -> None:
    if ca.scheme != scheme or cb.scheme != scheme:
        raise SchemeMismatch(f"both operands must be {scheme}")
    if ca.key_fingerprint != cb.key_fingerprint:
        raise KeyMismatch("operands were encrypted under different keys")
