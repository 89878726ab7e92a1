"""The client: key generation, local encryption and decryption, provider calls, bench."""

from .client import VaultClient
from .verify import VerifyResult, plaintext_fold, run_verify

__all__ = ["VaultClient", "VerifyResult", "plaintext_fold", "run_verify"]
