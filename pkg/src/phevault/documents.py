"""Key files, public-key documents and ciphertext documents.

Canonical field orders::

    ciphertext   v, scheme, c1, [c2], fingerprint
    public key   scheme, public{<scheme fields>}
    key file     format_version, scheme, public{...}, [private{...}], [add_bound]

Public fields per scheme: RSA n, b; PAILLIER n, g; ELGAMAL_* p, alpha, beta;
GM n, g. Private fields: RSA a, p, q, phi; PAILLIER lambda, mu, p, q;
ELGAMAL_* a; GM p, q. Every integer is canonical lowercase hex.

Parsers are strict: unknown fields, missing fields and non-canonical hex are
rejected, and a private field name inside a public document is always a
SchemaViolation.
"""

from __future__ import annotations

from . import codec
from .cryptosystems import (
    Ciphertext,
    ElGamalKeypair,
    ElGamalPublicKey,
    GmKeypair,
    GmPublicKey,
    PaillierKeypair,
    PaillierPublicKey,
    RsaKeypair,
    RsaPublicKey,
    SchemeId,
    Variant,
    public_key_document,
)
from .cryptosystems.base import FINGERPRINT_BYTES
from .errors import MalformedCiphertext, SchemaViolation

FORMAT_VERSION = 1
WIRE_VERSION = 1

PUBLIC_FIELDS = {
    SchemeId.RSA: RsaPublicKey.FIELDS,
    SchemeId.PAILLIER: PaillierPublicKey.FIELDS,
    SchemeId.ELGAMAL_MUL: ElGamalPublicKey.FIELDS,
    SchemeId.ELGAMAL_ADD: ElGamalPublicKey.FIELDS,
    SchemeId.GM: GmPublicKey.FIELDS,
}
PRIVATE_FIELDS = {
    SchemeId.RSA: RsaKeypair.PRIVATE_FIELDS,
    SchemeId.PAILLIER: PaillierKeypair.PRIVATE_FIELDS,
    SchemeId.ELGAMAL_MUL: ElGamalKeypair.PRIVATE_FIELDS,
    SchemeId.ELGAMAL_ADD: ElGamalKeypair.PRIVATE_FIELDS,
    SchemeId.GM: GmKeypair.PRIVATE_FIELDS,
}
_ALL_PRIVATE_NAMES = frozenset(name for names in PRIVATE_FIELDS.values() for name in names)


def _scheme(value, error) -> SchemeId:
    try:
        return SchemeId(value)
    except ValueError:
        raise error(f"unknown scheme {value!r}") from None


def _int_fields(obj, names, error, what) -> dict[str, int]:
    if not isinstance(obj, dict):
        raise error(f"{what} must be an object")
    if set(obj) != set(names):
        extra = sorted(set(obj) - set(names))
        missing = sorted(set(names) - set(obj))
        raise error(f"{what} fields wrong (unexpected {extra}, missing {missing})")
    try:
        return {name: codec.from_hex(obj[name]) for name in names}
    except ValueError as exc:
        raise error(f"{what}: {exc}") from None


def _check_keys(doc, required, optional, error, what):
    if not isinstance(doc, dict):
        raise error(f"{what} must be an object")
    keys = set(doc)
    if not set(required) <= keys or not keys <= set(required) | set(optional):
        raise error(f"{what} has fields {sorted(keys)}, expected {list(required)} (+ {list(optional)})")


# ciphertexts

def ciphertext_to_doc(ct: Ciphertext) -> dict:
    doc = {"v": WIRE_VERSION, "scheme": ct.scheme.value, "c1": codec.to_hex(ct.c1)}
    if ct.c2 is not None:
        doc["c2"] = codec.to_hex(ct.c2)
    doc["fingerprint"] = ct.key_fingerprint.hex()
    return doc


def dump_ciphertext(ct: Ciphertext) -> str:
    return codec.dumps(ciphertext_to_doc(ct))


def ciphertext_from_doc(doc) -> Ciphertext:
    if not isinstance(doc, dict):
        raise MalformedCiphertext("ciphertext must be an object")
    scheme = _scheme(doc.get("scheme"), MalformedCiphertext)
    pair = scheme in (SchemeId.ELGAMAL_MUL, SchemeId.ELGAMAL_ADD)
    names = ("v", "scheme", "c1", "c2", "fingerprint") if pair else ("v", "scheme", "c1", "fingerprint")
    _check_keys(doc, names, (), MalformedCiphertext, "ciphertext")
    if doc["v"] != WIRE_VERSION:
        raise MalformedCiphertext(f"unsupported version {doc['v']!r}")
    fp = doc["fingerprint"]
    if not isinstance(fp, str) or len(fp) != 2 * FINGERPRINT_BYTES or fp != fp.lower():
        raise MalformedCiphertext("fingerprint must be 32 lowercase hex digits")
    try:
        key_fp = bytes.fromhex(fp)
        c1 = codec.from_hex(doc["c1"])
        c2 = codec.from_hex(doc["c2"]) if pair else None
    except ValueError as exc:
        raise MalformedCiphertext(str(exc)) from None
    return Ciphertext(scheme, c1, c2, key_fp)


def load_ciphertext(text: str | bytes) -> Ciphertext:
    try:
        doc = codec.loads(text)
    except ValueError as exc:
        raise MalformedCiphertext(f"not a JSON object: {exc}") from None
    return ciphertext_from_doc(doc)


def check_ciphertext_range(ct: Ciphertext, public_key) -> None:
    """Provider-side sanity: scheme and components fit the registered key."""
    if ct.scheme != public_key.scheme:
        raise MalformedCiphertext(f"{ct.scheme} ciphertext under a {public_key.scheme} key")
    m = public_key.ciphertext_modulus
    for c in (ct.c1, ct.c2):
        if c is not None and not 1 <= c < m:
            raise MalformedCiphertext("ciphertext component out of range")


# public keys

def make_public_key(scheme: SchemeId, comps: dict[str, int], add_bound: int | None = None):
    if scheme is SchemeId.RSA:
        return RsaPublicKey(comps["n"], comps["b"])
    if scheme is SchemeId.PAILLIER:
        return PaillierPublicKey(comps["n"], comps["g"])
    if scheme is SchemeId.GM:
        return GmPublicKey(comps["n"], comps["g"])
    variant = Variant.ADD if scheme is SchemeId.ELGAMAL_ADD else Variant.MUL
    return ElGamalPublicKey(comps["p"], comps["alpha"], comps["beta"], variant,
                            add_bound if variant is Variant.ADD else None)


def _sanity(scheme: SchemeId, comps: dict[str, int]) -> None:
    if scheme in (SchemeId.ELGAMAL_MUL, SchemeId.ELGAMAL_ADD):
        p = comps["p"]
        ok = p >= 5 and 1 < comps["alpha"] < p and 1 <= comps["beta"] < p
    elif scheme is SchemeId.RSA:
        ok = comps["n"] >= 3 and comps["b"] >= 3
    elif scheme is SchemeId.PAILLIER:
        ok = comps["n"] >= 3 and 1 <= comps["g"] < comps["n"] ** 2
    else:
        ok = comps["n"] >= 3 and 1 <= comps["g"] < comps["n"]
    if not ok:
        raise SchemaViolation(f"{scheme} public components out of range")


def public_key_from_doc(doc, add_bound: int | None = None):
    """Parse a ``{"scheme", "public"}`` document into a public key object."""
    if not isinstance(doc, dict):
        raise SchemaViolation("public key document must be an object")
    leaked = _private_names_in(doc)
    if leaked:
        raise SchemaViolation(f"private field(s) {sorted(leaked)} in public key document")
    _check_keys(doc, ("scheme", "public"), (), SchemaViolation, "public key document")
    scheme = _scheme(doc["scheme"], SchemaViolation)
    comps = _int_fields(doc["public"], PUBLIC_FIELDS[scheme], SchemaViolation, "public")
    _sanity(scheme, comps)
    return make_public_key(scheme, comps, add_bound)


def _private_names_in(doc: dict) -> set[str]:
    """Private field names appearing at the top level or inside ``public``."""
    names = set(doc) & (_ALL_PRIVATE_NAMES | {"private"})
    public = doc.get("public")
    if isinstance(public, dict):
        scheme = doc.get("scheme")
        try:
            allowed = set(PUBLIC_FIELDS[SchemeId(scheme)])
        except ValueError:
            allowed = set()
        names |= (set(public) & _ALL_PRIVATE_NAMES) - allowed
    return names


def public_key_to_doc(pk) -> dict:
    return public_key_document(pk.scheme, pk.components())


# key files

def keyfile_to_doc(key, include_private: bool) -> dict:
    """Key-file document for a keypair (``.key``) or its public half (``.pub``)."""
    pk = getattr(key, "public", key)
    doc = {"format_version": FORMAT_VERSION, **public_key_to_doc(pk)}
    if include_private:
        if pk is key:
            raise ValueError("a public key has no private part to write")
        doc["private"] = {name: codec.to_hex(v) for name, v in key.private_components().items()}
    if pk.scheme is SchemeId.ELGAMAL_ADD:
        doc["add_bound"] = codec.to_hex(pk.add_bound)
    return doc


def key_from_keyfile_doc(doc):
    """Load a key file; returns a keypair if ``private`` is present, else a public key.

    Keypairs are re-validated against every structural invariant of their
    scheme, so a tampered file fails here with InvalidKey.
    """
    if not isinstance(doc, dict):
        raise SchemaViolation("key file must be an object")
    scheme = _scheme(doc.get("scheme"), SchemaViolation)
    optional = ["private"] + (["add_bound"] if scheme is SchemeId.ELGAMAL_ADD else [])
    required = ["format_version", "scheme", "public"]
    if scheme is SchemeId.ELGAMAL_ADD:
        required.append("add_bound")
        optional.remove("add_bound")
    _check_keys(doc, required, optional, SchemaViolation, "key file")
    if doc["format_version"] != FORMAT_VERSION:
        raise SchemaViolation(f"unsupported key file version {doc['format_version']!r}")
    pub = _int_fields(doc["public"], PUBLIC_FIELDS[scheme], SchemaViolation, "public")
    add_bound = None
    if scheme is SchemeId.ELGAMAL_ADD:
        try:
            add_bound = codec.from_hex(doc["add_bound"])
        except ValueError as exc:
            raise SchemaViolation(f"add_bound: {exc}") from None
    if "private" not in doc:
        _sanity(scheme, pub)
        return make_public_key(scheme, pub, add_bound)
    priv = _int_fields(doc["private"], PRIVATE_FIELDS[scheme], SchemaViolation, "private")
    key = _make_keypair(scheme, pub, priv, add_bound)
    key.validate()
    return key


def _make_keypair(scheme, pub, priv, add_bound):
    if scheme is SchemeId.RSA:
        return RsaKeypair(pub["n"], pub["b"], priv["a"], priv["p"], priv["q"], priv["phi"])
    if scheme is SchemeId.PAILLIER:
        return PaillierKeypair(pub["n"], pub["g"], priv["lambda"], priv["mu"], priv["p"], priv["q"])
    if scheme is SchemeId.GM:
        return GmKeypair(pub["n"], pub["g"], priv["p"], priv["q"])
    variant = Variant.ADD if scheme is SchemeId.ELGAMAL_ADD else Variant.MUL
    return ElGamalKeypair(pub["p"], pub["alpha"], pub["beta"], priv["a"], variant, add_bound)
