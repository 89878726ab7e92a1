"""Exception hierarchy.

Every error carries a stable ``code`` string; the daemon puts it on the wire
verbatim and the CLI maps the category to an exit status.
"""


class VaultError(Exception):
    code = "Error"

    def __init__(self, detail: str = ""):
        super().__init__(detail or self.code)
        self.detail = detail


class CryptoError(VaultError):
    """Bad key material, plaintext or ciphertext."""


class ProtocolError(VaultError):
    """Raised by the provider side: schema, store and evaluation failures."""


# numtheory
class NotInvertible(CryptoError):
    """gcd(x, m) != 1."""
    code = "NotInvertible"


class NotFound(CryptoError):
    """No exponent within the bound matches."""
    code = "NotFound"


class InvalidModulus(CryptoError):
    """Modulus outside the function's domain."""
    code = "InvalidModulus"


# cryptosystems
class MessageOutOfRange(CryptoError):
    """Plaintext outside the message space."""
    code = "MessageOutOfRange"


class MessageNotUnit(CryptoError):
    """RSA plaintext shares a factor with n."""
    code = "MessageNotUnit"


class InvalidBit(CryptoError):
    """GM plaintext is not 0 or 1."""
    code = "InvalidBit"


class SchemeMismatch(CryptoError):
    """Ciphertext belongs to another scheme."""
    code = "SchemeMismatch"


class KeyMismatch(CryptoError):
    """Ciphertext fingerprint does not match the key."""
    code = "KeyMismatch"


class InvalidCiphertext(CryptoError):
    """Ciphertext components out of range."""
    code = "InvalidCiphertext"


class PlaintextOutOfBound(CryptoError):
    """Exponential ElGamal plaintext exceeds add_bound."""
    code = "PlaintextOutOfBound"


class InvalidKey(CryptoError):
    """Keypair fails its structural invariants."""
    code = "InvalidKey"


# evaluator
class UnsupportedOp(ProtocolError):
    """Scheme lacks the requested homomorphism."""
    code = "UnsupportedOp"


class MixedSchemes(ProtocolError):
    """Inputs use different schemes."""
    code = "MixedSchemes"


class MixedKeys(ProtocolError):
    """Inputs were encrypted under different keys."""
    code = "MixedKeys"


class TooFewInputs(ProtocolError):
    """Evaluation needs at least two inputs."""
    code = "TooFewInputs"


# vaultd
class SchemaViolation(ProtocolError):
    """Document does not match its wire schema."""
    code = "SchemaViolation"


class DuplicateDifferent(ProtocolError):
    """Fingerprint already bound to other content."""
    code = "DuplicateDifferent"


class UnknownKey(ProtocolError):
    """Fingerprint not registered by this owner."""
    code = "UnknownKey"


class DuplicateBlobId(ProtocolError):
    """Blob id already in use."""
    code = "DuplicateBlobId"


class MalformedCiphertext(ProtocolError):
    """Ciphertext document rejected."""
    code = "MalformedCiphertext"


class UnknownBlob(ProtocolError):
    """No such blob."""
    code = "UnknownBlob"


class NotOwner(ProtocolError):
    """Blob belongs to another owner."""
    code = "NotOwner"


class Unauthorized(ProtocolError):
    """Unknown bearer token."""
    code = "Unauthorized"


class BadRequest(ProtocolError):
    """Unparseable or unknown request."""
    code = "BadRequest"


# vaultctl
class UnsupportedBits(VaultError):
    """Key size not allowed."""
    code = "UnsupportedBits"


class IoFailure(VaultError):
    """Reading or writing a file failed."""
    code = "IoFailure"


class ConnectionFailure(VaultError):
    """Provider unreachable."""
    code = "ConnectionFailure"


class RemoteError(VaultError):
    """An ERROR document returned by the provider."""

    def __init__(self, code: str, detail: str = ""):
        super().__init__(f"{code}: {detail}" if detail else code)
        self.code = code
        self.detail = detail


_BY_CODE = {
    cls.code: cls
    for cls in list(globals().values())
    if isinstance(cls, type) and issubclass(cls, VaultError) and "code" in cls.__dict__
}


def by_code(code: str):
    """Exception class for a wire error code, or None."""
    return _BY_CODE.get(code)