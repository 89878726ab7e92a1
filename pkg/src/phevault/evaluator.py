"""Key-blind homomorphic evaluation.

The provider side only ever sees public keys and ciphertexts. :func:`evaluate`
checks the request against the capability matrix and left-folds the scheme's
combine operation over the inputs.
"""

from __future__ import annotations

import enum
from functools import reduce
from types import MappingProxyType
from typing import Sequence

from .cryptosystems import (
    PUBLIC_KEY_TYPES,
    Ciphertext,
    SchemeId,
    elgamal_combine,
    gm_xor,
    paillier_add,
    rsa_mul,
)
from .errors import MixedKeys, MixedSchemes, TooFewInputs, UnsupportedOp


class HomomorphicOp(str, enum.Enum):
    ADD = "ADD"
    MUL = "MUL"
    XOR = "XOR"

    def __str__(self) -> str:
        return self.value


# GM is additive over a one-bit message space, where addition is XOR.
CAPABILITIES = MappingProxyType({
    SchemeId.RSA: frozenset({HomomorphicOp.MUL}),
    SchemeId.PAILLIER: frozenset({HomomorphicOp.ADD}),
    SchemeId.ELGAMAL_MUL: frozenset({HomomorphicOp.MUL}),
    SchemeId.ELGAMAL_ADD: frozenset({HomomorphicOp.ADD}),
    SchemeId.GM: frozenset({HomomorphicOp.XOR}),
})

_COMBINE = {
    SchemeId.RSA: lambda pk, a, b: rsa_mul(a, b, pk.n),
    SchemeId.PAILLIER: lambda pk, a, b: paillier_add(a, b, pk.n),
    SchemeId.ELGAMAL_MUL: lambda pk, a, b: elgamal_combine(a, b, pk.p),
    SchemeId.ELGAMAL_ADD: lambda pk, a, b: elgamal_combine(a, b, pk.p),
    SchemeId.GM: lambda pk, a, b: gm_xor(a, b, pk.n),
}


def supports(scheme: SchemeId, op: HomomorphicOp) -> bool:
    return HomomorphicOp(op) in CAPABILITIES[SchemeId(scheme)]


def evaluate(op: HomomorphicOp, inputs: Sequence[Ciphertext], public_key) -> Ciphertext:
    """Combine ``inputs`` under ``op`` without any private key material.

    ``public_key`` must be one of the public key types; passing a keypair is a
    TypeError so private fields can never reach this code path.
    """
    op = HomomorphicOp(op)
    if not isinstance(public_key, PUBLIC_KEY_TYPES):
        raise TypeError(f"evaluate takes a public key, not {type(public_key).__name__}")
    if len(inputs) < 2:
        raise TooFewInputs(f"{op} needs at least 2 inputs, got {len(inputs)}")
    scheme = inputs[0].scheme
    if any(c.scheme != scheme for c in inputs) or public_key.scheme != scheme:
        raise MixedSchemes("all inputs and the key must share one scheme")
    if not supports(scheme, op):
        raise UnsupportedOp(f"{scheme} does not support {op}")
    fp = public_key.fingerprint
    if any(c.key_fingerprint != fp for c in inputs):
        raise MixedKeys("inputs were not all encrypted under the given key")
    combine = _COMBINE[scheme]
    return reduce(lambda acc, c: combine(public_key, acc, c), inputs[1:], inputs[0])
