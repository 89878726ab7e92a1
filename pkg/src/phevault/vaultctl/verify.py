"""End-to-end check: encrypt locally, compute remotely, decrypt, compare."""

from __future__ import annotations

import secrets
from dataclasses import dataclass
from functools import reduce

from ..cryptosystems import SchemeId, decrypt, encrypt
from ..errors import VaultError
from ..evaluator import HomomorphicOp
from .client import VaultClient


@dataclass
class VerifyResult:
    passed: bool
    remote: int | None = None
    local: int | None = None
    cause: str | None = None  # error code on failure
    detail: str = ""

    def report(self, op, scheme) -> str:
        if self.passed:
            return f"PASS op={op} scheme={scheme} remote={self.remote} local={self.local}"
        if self.cause:
            return f"FAIL({self.cause}) op={op} scheme={scheme} local={self.local}: {self.detail}"
        return f"FAIL op={op} scheme={scheme} remote={self.remote} local={self.local}"


def plaintext_fold(op: HomomorphicOp, values: list[int], public_key) -> int:
    """What the computation gives on raw data, reduced like the scheme reduces it."""
    scheme = public_key.scheme
    if op is HomomorphicOp.XOR:
        return reduce(lambda a, b: a ^ b, values)
    if op is HomomorphicOp.ADD:
        total = sum(values)
        return total % public_key.n if scheme is SchemeId.PAILLIER else total
    modulus = public_key.p if scheme is SchemeId.ELGAMAL_MUL else public_key.n
    return reduce(lambda a, b: a * b % modulus, values)


def run_verify(keypair, op, values: list[int], client: VaultClient, rng=None) -> VerifyResult:
    op = HomomorphicOp(op)
    if len(values) < 2:
        raise ValueError("verify needs at least two plaintext inputs")
    pk = keypair.public
    local = plaintext_fold(op, values, pk)
    tag = secrets.token_hex(4)
    input_ids = [f"verify-{tag}-{i}" for i in range(len(values))]
    output_id = f"verify-{tag}-out"
    remote = None
    try:
        client.register_key(pk)
        for blob_id, x in zip(input_ids, values):
            client.put(blob_id, encrypt(pk, x, rng))
        client.compute(op, input_ids, output_id)
        remote = decrypt(keypair, client.get(output_id))
    except VaultError as exc:
        return VerifyResult(False, remote, local, exc.code, exc.detail)
    return VerifyResult(remote == local, remote, local)
