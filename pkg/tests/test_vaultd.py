import random
import socket

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from phevault import codec
from phevault.cryptosystems import SchemeId, decrypt, encrypt
from phevault.documents import ciphertext_to_doc, dump_ciphertext, public_key_to_doc
from phevault.errors import DuplicateBlobId, NotOwner, SchemaViolation, UnknownBlob, UnknownKey
from phevault.vaultd import BlobStore, VaultService
from phevault.vaultd.store import JOURNAL_NAME, JournalCorrupt


def call(service, kind, token=None, **payload):
    req = {"v": 1, "type": kind}
    if token is not None:
        req["token"] = token
    req.update(payload)
    return codec.loads(service.handle_line(codec.dumps(req)))


def ok(resp):
    assert resp["type"] == "OK", resp
    return resp


@pytest.fixture
def service(tmp_path):
    store = BlobStore(tmp_path)
    yield VaultService(store)
    store.close()


def register(service, key, token=None):
    resp = ok(call(service, "REGISTER_KEY", token, key=public_key_to_doc(key.public)))
    return resp["token"], resp["fingerprint"]


def put(service, token, blob_id, ct):
    return call(service, "PUT", token, blob_id=blob_id, ciphertext=ciphertext_to_doc(ct))


# register_key

def test_register_issues_token_and_fingerprint(service, toy_paillier):
    token, fp = register(service, toy_paillier)
    assert len(bytes.fromhex(fp)) == 16
    assert fp == toy_paillier.public.fingerprint.hex()
    again = ok(call(service, "REGISTER_KEY", token, key=public_key_to_doc(toy_paillier.public)))
    assert again["fingerprint"] == fp and again["token"] == token


def test_register_rejects_private_fields(service, toy_paillier):
    doc = public_key_to_doc(toy_paillier.public)
    doc["public"]["lambda"] = "4"
    resp = call(service, "REGISTER_KEY", key=doc)
    assert resp["type"] == "ERROR" and resp["code"] == "SchemaViolation"


def test_unknown_token_is_unauthorized(service):
    assert call(service, "LIST", "deadbeef")["code"] == "Unauthorized"


@pytest.mark.parametrize("line", [b"not json", b"[1,2]", b'{"v":2,"type":"LIST"}', b'{"v":1,"type":"NOPE"}',
                                  b'{"v":1,"type":"GET"}', b'{"v":1,"type":"LIST","extra":1}'])
def test_bad_requests(service, line):
    assert codec.loads(service.handle_line(line))["code"] == "BadRequest"


# put / get / list

def test_put_get_list(service, toy_paillier, rng):
    token, _ = register(service, toy_paillier)
    assert ok(call(service, "LIST", token))["blobs"] == []
    ct = encrypt(toy_paillier, 7, rng)
    assert ok(put(service, token, "salary.jan", ct))["blob_id"] == "salary.jan"
    assert put(service, token, "salary.jan", ct)["code"] == "DuplicateBlobId"
    got = ok(call(service, "GET", token, blob_id="salary.jan"))
    assert codec.dumps(got["ciphertext"]) == dump_ciphertext(ct)
    for name in ("c", "a", "b"):
        ok(put(service, token, name, ct))
    listing = ok(call(service, "LIST", token))["blobs"]
    assert [b["blob_id"] for b in listing] == ["a", "b", "c", "salary.jan"]
    assert {b["scheme"] for b in listing} == {"PAILLIER"}


def test_put_requires_registered_key(service, toy_paillier, toy_rsa, rng):
    token, _ = register(service, toy_paillier)
    assert put(service, token, "x", encrypt(toy_rsa, 2))["code"] == "UnknownKey"


@pytest.mark.parametrize("blob_id", ["", "a/b", "x" * 129, "sp ace", 5])
def test_put_rejects_bad_blob_ids(service, toy_rsa, blob_id):
    token, _ = register(service, toy_rsa)
    assert put(service, token, blob_id, encrypt(toy_rsa, 2))["code"] == "SchemaViolation"


def test_put_rejects_out_of_range_ciphertext(service, toy_rsa):
    token, _ = register(service, toy_rsa)
    doc = ciphertext_to_doc(encrypt(toy_rsa, 2))
    doc["c1"] = codec.to_hex(3233)
    assert call(service, "PUT", token, blob_id="x", ciphertext=doc)["code"] == "MalformedCiphertext"


def test_get_errors(service, toy_rsa):
    alice, _ = register(service, toy_rsa)
    bob, _ = register(service, toy_rsa)
    ok(put(service, alice, "secret", encrypt(toy_rsa, 2)))
    assert call(service, "GET", bob, blob_id="secret")["code"] == "NotOwner"
    assert call(service, "GET", bob, blob_id="missing")["code"] == "UnknownBlob"
    assert ok(call(service, "LIST", bob))["blobs"] == []


# compute

def test_compute_end_to_end(service, toy_paillier, rng):
    token, _ = register(service, toy_paillier)
    ok(put(service, token, "a", encrypt(toy_paillier, 7, rng)))
    ok(put(service, token, "b", encrypt(toy_paillier, 6, rng)))
    before = [call(service, "GET", token, blob_id=i)["ciphertext"] for i in "ab"]
    ok(call(service, "COMPUTE", token, op="ADD", input_ids=["a", "b"], output_id="sum"))
    after = [call(service, "GET", token, blob_id=i)["ciphertext"] for i in "ab"]
    assert before == after
    out = ok(call(service, "GET", token, blob_id="sum"))["ciphertext"]
    from phevault.documents import ciphertext_from_doc

    assert decrypt(toy_paillier, ciphertext_from_doc(out)) == 13


def test_compute_errors(service, toy_paillier, toy_rsa, rng):
    token, _ = register(service, toy_paillier)
    register(service, toy_rsa, token)
    ok(put(service, token, "a", encrypt(toy_paillier, 7, rng)))
    ok(put(service, token, "b", encrypt(toy_paillier, 6, rng)))
    ok(put(service, token, "r", encrypt(toy_rsa, 6)))

    def compute(op, ids, out="out"):
        return call(service, "COMPUTE", token, op=op, input_ids=ids, output_id=out)

    assert compute("MUL", ["a", "b"])["code"] == "UnsupportedOp"
    assert compute("ADD", ["a", "missing"])["code"] == "UnknownBlob"
    assert compute("ADD", ["a"])["code"] == "TooFewInputs"
    assert compute("ADD", ["a", "r"])["code"] == "MixedSchemes"
    assert compute("ADD", ["a", "b"], out="a")["code"] == "DuplicateBlobId"
    assert compute("POW", ["a", "b"])["code"] == "BadRequest"
    assert len(ok(call(service, "LIST", token))["blobs"]) == 3


def test_compute_mixed_keys(service, toy_paillier, keys256, rng):
    other = keys256[SchemeId.PAILLIER]
    token, _ = register(service, toy_paillier)
    register(service, other, token)
    ok(put(service, token, "a", encrypt(toy_paillier, 7, rng)))
    ok(put(service, token, "b", encrypt(other, 6, rng)))
    resp = call(service, "COMPUTE", token, op="ADD", input_ids=["a", "b"], output_id="c")
    assert resp["code"] == "MixedKeys"


def test_cannot_compute_over_other_owners_blobs(service, toy_rsa):
    alice, _ = register(service, toy_rsa)
    bob, _ = register(service, toy_rsa)
    ok(put(service, alice, "a", encrypt(toy_rsa, 2)))
    ok(put(service, alice, "b", encrypt(toy_rsa, 3)))
    resp = call(service, "COMPUTE", bob, op="MUL", input_ids=["a", "b"], output_id="c")
    assert resp["code"] == "NotOwner"


# durability

def test_restart_returns_identical_blobs(tmp_path, toy_gm, rng):
    store = BlobStore(tmp_path)
    service = VaultService(store)
    token, _ = register(service, toy_gm)
    docs = {}
    for i in range(5):
        ct = encrypt(toy_gm, i % 2, rng)
        ok(put(service, token, f"bit{i}", ct))
        docs[f"bit{i}"] = dump_ciphertext(ct)
    listing = ok(call(service, "LIST", token))["blobs"]
    store.close()

    service = VaultService(BlobStore(tmp_path))
    for blob_id, text in docs.items():
        assert codec.dumps(ok(call(service, "GET", token, blob_id=blob_id))["ciphertext"]) == text
    assert ok(call(service, "LIST", token))["blobs"] == listing
    assert put(service, token, "bit0", encrypt(toy_gm, 1, rng))["code"] == "DuplicateBlobId"


def test_torn_journal_tail_is_dropped(tmp_path, toy_rsa):
    store = BlobStore(tmp_path)
    token, owner = store.issue_token()
    store.register_key(owner, public_key_to_doc(toy_rsa.public))
    store.put(owner, "kept", encrypt(toy_rsa, 2))
    store.close()
    journal = tmp_path / JOURNAL_NAME
    intact = journal.read_bytes()
    journal.write_bytes(intact + b'{"rec":"blob","owner":"' + owner.encode() + b'","blob_id":"lo')

    store = BlobStore(tmp_path)
    assert store.owner_for(token) == owner
    assert store.get(owner, "kept").ciphertext == encrypt(toy_rsa, 2)
    assert journal.read_bytes() == intact
    store.put(owner, "next", encrypt(toy_rsa, 3))
    store.close()
    assert [r.blob_id for r in BlobStore(tmp_path).list(owner)] == ["kept", "next"]


def test_corrupt_journal_middle_is_reported(tmp_path):
    (tmp_path / JOURNAL_NAME).write_bytes(b'garbage\n{"rec":"owner","owner":"o","token_sha256":"x"}\n')
    with pytest.raises(JournalCorrupt):
        BlobStore(tmp_path)


def test_store_api_errors(tmp_path, toy_rsa):
    store = BlobStore(tmp_path)
    _, alice = store.issue_token()
    _, bob = store.issue_token()
    with pytest.raises(UnknownKey):
        store.put(alice, "x", encrypt(toy_rsa, 2))
    store.register_key(alice, public_key_to_doc(toy_rsa.public))
    store.put(alice, "x", encrypt(toy_rsa, 2))
    with pytest.raises(DuplicateBlobId):
        store.put(alice, "x", encrypt(toy_rsa, 2))
    with pytest.raises(NotOwner):
        store.get(bob, "x")
    with pytest.raises(UnknownBlob):
        store.get(alice, "y")
    with pytest.raises(SchemaViolation):
        store.get(alice, "../x")
    store.close()


# isolation under random interleavings

ACTIONS = st.lists(st.tuples(st.integers(0, 2), st.sampled_from(["put", "get", "list", "compute"]),
                             st.integers(0, 5), st.integers(0, 5)), min_size=1, max_size=40)

SMALLEST_FACTOR = 53  # plaintexts below it are units mod 3233


@given(actions=ACTIONS)
@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
def test_owner_isolation(tmp_path_factory, toy_rsa, actions):
    service = VaultService(BlobStore(tmp_path_factory.mktemp("iso")))
    tokens = [register(service, toy_rsa)[0] for _ in range(3)]
    owned = [set() for _ in range(3)]
    r = random.Random(len(actions))
    for who, action, a, b in actions:
        token = tokens[who]
        if action == "put":
            resp = put(service, token, f"b{a}", encrypt(toy_rsa, r.randrange(1, SMALLEST_FACTOR)))
            if f"b{a}" in owned[who]:
                assert resp["code"] == "DuplicateBlobId"
            else:
                ok(resp)
                owned[who].add(f"b{a}")
        elif action == "get":
            resp = call(service, "GET", token, blob_id=f"b{a}")
            if f"b{a}" in owned[who]:
                ok(resp)
            elif any(f"b{a}" in owned[o] for o in range(3) if o != who):
                assert resp["code"] == "NotOwner"
            else:
                assert resp["code"] == "UnknownBlob"
        elif action == "list":
            listed = {e["blob_id"] for e in ok(call(service, "LIST", token))["blobs"]}
            assert listed == owned[who]
        else:
            ids = [f"b{a}", f"b{b}"]
            out = f"c{a}{b}{len(owned[who])}"
            resp = call(service, "COMPUTE", token, op="MUL", input_ids=ids, output_id=out)
            if all(i in owned[who] for i in ids) and out not in owned[who]:
                ok(resp)
                owned[who].add(out)
            else:
                assert resp["type"] == "ERROR"
    service.store.close()


# TCP transport

def _session(address):
    host, port = address.rsplit(":", 1)
    sock = socket.create_connection((host, int(port)), timeout=10)
    return sock, sock.makefile("rb")


def test_tcp_newline_framing(server, toy_rsa):
    sock, rfile = _session(server.address)
    req = {"v": 1, "type": "REGISTER_KEY", "key": public_key_to_doc(toy_rsa.public)}
    # two requests in a single write, then one split across writes
    sock.sendall((codec.dumps(req) + "\n" + codec.dumps({"v": 1, "type": "LIST"}) + "\n").encode())
    first = codec.loads(rfile.readline())
    second = codec.loads(rfile.readline())
    assert first["type"] == "OK" and second["type"] == "OK" and second["blobs"] == []
    line = codec.dumps({"v": 1, "type": "LIST", "token": first["token"]}).encode() + b"\n"
    sock.sendall(line[:10])
    sock.sendall(line[10:])
    assert codec.loads(rfile.readline())["blobs"] == []
    sock.sendall(b"}{\n")
    assert codec.loads(rfile.readline())["code"] == "BadRequest"
    sock.close()


def test_tcp_concurrent_sessions(server, toy_rsa):
    import threading

    from phevault.vaultctl import VaultClient

    errors = []

    def worker(i):
        try:
            with VaultClient(server.address) as c:
                c.register_key(toy_rsa.public)
                for j in range(10):
                    c.put(f"w{i}-{j}", encrypt(toy_rsa, 2 + j))
                assert len(c.list()) == 10
        except Exception as exc:  # pragma: no cover
            errors.append(exc)

    threads = [threading.Thread(target=worker, args=(i,)) for i in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert errors == []
