"""The partially homomorphic schemes: RSA, Paillier, ElGamal (two variants), GM."""

from .base import Ciphertext, SchemeId, fingerprint, public_key_document
from .elgamal import (
    DEFAULT_ADD_BOUND,
    ElGamalKeypair,
    ElGamalPublicKey,
    Variant,
    elgamal_combine,
    elgamal_decrypt,
    elgamal_encrypt,
    elgamal_keygen,
)
from .gm import GmKeypair, GmPublicKey, gm_decrypt, gm_encrypt, gm_keygen, gm_xor
from .paillier import (
    PaillierKeypair,
    PaillierPublicKey,
    paillier_add,
    paillier_decrypt,
    paillier_encrypt,
    paillier_keygen,
)
from .rsa import RsaKeypair, RsaPublicKey, rsa_decrypt, rsa_encrypt, rsa_keygen, rsa_mul

PUBLIC_KEY_TYPES = (RsaPublicKey, PaillierPublicKey, ElGamalPublicKey, GmPublicKey)
KEYPAIR_TYPES = (RsaKeypair, PaillierKeypair, ElGamalKeypair, GmKeypair)


def keygen(scheme, bits, rng=None, add_bound=None):
    """Generate a keypair for any scheme id."""
    scheme = SchemeId(scheme)
    if scheme is SchemeId.RSA:
        return rsa_keygen(bits, rng)
    if scheme is SchemeId.PAILLIER:
        return paillier_keygen(bits, rng)
    if scheme is SchemeId.ELGAMAL_MUL:
        return elgamal_keygen(bits, Variant.MUL, rng=rng)
    if scheme is SchemeId.ELGAMAL_ADD:
        return elgamal_keygen(bits, Variant.ADD, add_bound, rng)
    return gm_keygen(bits, rng)


def encrypt(key, x, rng=None):
    """Encrypt with the scheme matching ``key`` (public key or keypair)."""
    pk = getattr(key, "public", key)
    if isinstance(pk, RsaPublicKey):
        return rsa_encrypt(pk, x)
    if isinstance(pk, PaillierPublicKey):
        return paillier_encrypt(pk, x, rng)
    if isinstance(pk, ElGamalPublicKey):
        return elgamal_encrypt(pk, x, rng)
    return gm_encrypt(pk, x, rng)


def decrypt(keypair, y):
    if isinstance(keypair, RsaKeypair):
        return rsa_decrypt(keypair, y)
    if isinstance(keypair, PaillierKeypair):
        return paillier_decrypt(keypair, y)
    if isinstance(keypair, ElGamalKeypair):
        return elgamal_decrypt(keypair, y)
    if isinstance(keypair, GmKeypair):
        return gm_decrypt(keypair, y)
    raise TypeError(f"not a keypair: {type(keypair).__name__}")
