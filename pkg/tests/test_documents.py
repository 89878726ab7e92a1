import pytest
from hypothesis import given
from hypothesis import strategies as st

from phevault import codec
from phevault.cryptosystems import SchemeId, encrypt
from phevault.documents import (
    ciphertext_from_doc,
    dump_ciphertext,
    key_from_keyfile_doc,
    keyfile_to_doc,
    load_ciphertext,
    public_key_from_doc,
    public_key_to_doc,
)
from phevault.errors import InvalidKey, MalformedCiphertext, SchemaViolation


@given(st.integers(0, 2**4096))
def test_hex_roundtrip(x):
    s = codec.to_hex(x)
    assert codec.from_hex(s) == x
    assert s == s.lower() and (s == "0" or not s.startswith("0"))


@pytest.mark.parametrize("bad", ["", "00", "0a", "A", "-1", "0x1", " 1", 12])
def test_hex_rejects_noncanonical(bad):
    with pytest.raises(ValueError):
        codec.from_hex(bad)


def test_ciphertext_document_layout(toy_paillier, toy_elgamal_mul):
    from phevault.cryptosystems import elgamal_encrypt, paillier_encrypt

    fp = toy_paillier.public.fingerprint.hex()
    assert dump_ciphertext(paillier_encrypt(toy_paillier, 7, r=2)) == (
        '{"v":1,"scheme":"PAILLIER","c1":"53","fingerprint":"%s"}' % fp)
    fp = toy_elgamal_mul.public.fingerprint.hex()
    assert dump_ciphertext(elgamal_encrypt(toy_elgamal_mul, 10, r=3)) == (
        '{"v":1,"scheme":"ELGAMAL_MUL","c1":"a","c2":"e","fingerprint":"%s"}' % fp)


@pytest.mark.parametrize("scheme", list(SchemeId))
def test_ciphertext_roundtrip(scheme, keys256):
    ct = encrypt(keys256[scheme], 1)
    text = dump_ciphertext(ct)
    assert load_ciphertext(text) == ct
    assert dump_ciphertext(load_ciphertext(text)) == text


@pytest.mark.parametrize("mutate", [
    lambda d: d.pop("fingerprint"),
    lambda d: d.update(c1="0010"),
    lambda d: d.update(c2="1"),
    lambda d: d.update(scheme="FHE"),
    lambda d: d.update(extra=1),
    lambda d: d.update(v=2),
    lambda d: d.update(fingerprint="ab"),
])
def test_ciphertext_parser_is_strict(mutate, toy_rsa):
    doc = codec.loads(dump_ciphertext(encrypt(toy_rsa, 2)))
    mutate(doc)
    with pytest.raises(MalformedCiphertext):
        ciphertext_from_doc(doc)


@pytest.mark.parametrize("scheme", list(SchemeId))
def test_keyfile_roundtrip(scheme, keys256):
    key = keys256[scheme]
    loaded = key_from_keyfile_doc(codec.loads(codec.dumps(keyfile_to_doc(key, True))))
    assert loaded == key
    pub = key_from_keyfile_doc(codec.loads(codec.dumps(keyfile_to_doc(key, False))))
    assert pub == key.public


def test_keyfile_field_order(toy_rsa):
    text = codec.dumps(keyfile_to_doc(toy_rsa, True))
    assert text == ('{"format_version":1,"scheme":"RSA","public":{"n":"ca1","b":"11"},'
                    '"private":{"a":"ac1","p":"3d","q":"35","phi":"c30"}}')


def test_keyfile_revalidates_rsa(toy_rsa):
    doc = keyfile_to_doc(toy_rsa, True)
    doc["private"]["a"] = codec.to_hex(2751)
    with pytest.raises(InvalidKey):
        key_from_keyfile_doc(doc)


def test_elgamal_add_keyfile_carries_bound(toy_elgamal_add):
    doc = keyfile_to_doc(toy_elgamal_add, False)
    assert doc["add_bound"] == "a"
    assert key_from_keyfile_doc(doc).add_bound == 10
    del doc["add_bound"]
    with pytest.raises(SchemaViolation):
        key_from_keyfile_doc(doc)


def test_public_key_doc_rejects_private_fields(toy_paillier):
    doc = public_key_to_doc(toy_paillier.public)
    assert public_key_from_doc(doc) == toy_paillier.public
    smuggled = {**doc, "public": {**doc["public"], "lambda": "4"}}
    with pytest.raises(SchemaViolation, match="lambda"):
        public_key_from_doc(smuggled)
    with pytest.raises(SchemaViolation):
        public_key_from_doc({**doc, "private": {"mu": "4"}})
    with pytest.raises(SchemaViolation):
        public_key_from_doc({**doc, "lambda": "4"})


def test_public_key_doc_rejects_rsa_private_exponent(toy_rsa):
    doc = public_key_to_doc(toy_rsa.public)
    with pytest.raises(SchemaViolation):
        public_key_from_doc({**doc, "public": {**doc["public"], "a": "ac1"}})
