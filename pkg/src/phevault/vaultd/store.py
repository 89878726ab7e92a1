"""Persistent owner-scoped blob store backed by an append-only journal.

Each mutation is one canonical JSON line, fsync'd before the call returns;
the in-memory index is rebuilt by replaying the journal at startup. A torn
final line (crash mid-append) is cut off during replay; damage anywhere else
is reported as corruption rather than silently skipped.
"""

from __future__ import annotations

import hashlib
import logging
import os
import re
import secrets
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .. import codec
from ..cryptosystems import Ciphertext
from ..documents import (
    check_ciphertext_range,
    ciphertext_from_doc,
    ciphertext_to_doc,
    public_key_from_doc,
    public_key_to_doc,
)
from ..errors import (
    DuplicateBlobId,
    DuplicateDifferent,
    NotOwner,
    SchemaViolation,
    Unauthorized,
    UnknownBlob,
    UnknownKey,
)

log = logging.getLogger(__name__)

JOURNAL_NAME = "vault.journal"
BLOB_ID = re.compile(r"[A-Za-z0-9._-]{1,128}\Z")


class JournalCorrupt(RuntimeError):
    pass


@dataclass(frozen=True)
class BlobRecord:
    blob_id: str
    owner: str
    ciphertext: Ciphertext
    document: str  # canonical ciphertext document, returned byte-exactly by get
    created_at: str


def check_blob_id(blob_id) -> str:
    if not isinstance(blob_id, str) or not BLOB_ID.match(blob_id):
        raise SchemaViolation(f"invalid blob id {blob_id!r}")
    return blob_id


def _token_hash(token: str) -> str:
    return hashlib.sha256(token.encode("utf-8")).hexdigest()


def _utcnow() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="microseconds").replace("+00:00", "Z")


class BlobStore:
    def __init__(self, data_dir: str | os.PathLike):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.path = self.data_dir / JOURNAL_NAME
        self._lock = threading.Lock()
        self._owners: dict[str, str] = {}  # token hash -> owner
        self._keys: dict[str, dict[str, tuple[str, object]]] = {}  # owner -> fp hex -> (doc, key)
        self._blobs: dict[str, dict[str, BlobRecord]] = {}
        self._replay()
        self._fh = open(self.path, "ab")

    def close(self) -> None:
        with self._lock:
            self._fh.close()

    # journal

    def _replay(self) -> None:
        if not self.path.exists():
            return
        data = self.path.read_bytes()
        good = data.rfind(b"\n") + 1
        if good < len(data):
            log.warning("dropping torn journal tail (%d bytes)", len(data) - good)
            with open(self.path, "r+b") as fh:
                fh.truncate(good)
                fh.flush()
                os.fsync(fh.fileno())
        for lineno, line in enumerate(data[:good].splitlines(), 1):
            try:
                self._apply(codec.loads(line))
            except (ValueError, KeyError) as exc:
                raise JournalCorrupt(f"{self.path}:{lineno}: {exc}") from None
        log.info("replayed journal: %d owners, %d blobs",
                 len(self._owners), sum(len(b) for b in self._blobs.values()))

    def _append(self, record: dict) -> None:
        # caller holds the lock
        self._fh.write((codec.dumps(record) + "\n").encode("ascii"))
        self._fh.flush()
        os.fsync(self._fh.fileno())
        self._apply(record)

    def _apply(self, rec: dict) -> None:
        kind = rec["rec"]
        if kind == "owner":
            self._owners[rec["token_sha256"]] = rec["owner"]
            self._keys.setdefault(rec["owner"], {})
            self._blobs.setdefault(rec["owner"], {})
        elif kind == "key":
            pk = public_key_from_doc(rec["key"])
            self._keys[rec["owner"]][rec["fingerprint"]] = (codec.dumps(rec["key"]), pk)
        elif kind == "blob":
            doc = rec["ciphertext"]
            self._blobs[rec["owner"]][rec["blob_id"]] = BlobRecord(
                rec["blob_id"], rec["owner"], ciphertext_from_doc(doc), codec.dumps(doc), rec["created_at"])
        else:
            raise ValueError(f"unknown record kind {kind!r}")

    # owners

    def issue_token(self) -> tuple[str, str]:
        token = secrets.token_hex(16)
        owner = "o-" + secrets.token_hex(8)
        with self._lock:
            self._append({"rec": "owner", "owner": owner, "token_sha256": _token_hash(token)})
        return token, owner

    def owner_for(self, token: str) -> str:
        owner = self._owners.get(_token_hash(token))
        if owner is None:
            raise Unauthorized("unknown token")
        return owner

    # keys

    def register_key(self, owner: str, doc) -> bytes:
        pk = public_key_from_doc(doc)
        canonical_doc = public_key_to_doc(pk)
        text = codec.dumps(canonical_doc)
        fp = pk.fingerprint.hex()
        with self._lock:
            existing = self._keys[owner].get(fp)
            if existing is not None:
                if existing[0] != text:
                    raise DuplicateDifferent(f"fingerprint {fp} already bound to other content")
                return pk.fingerprint
            self._append({"rec": "key", "owner": owner, "fingerprint": fp, "key": canonical_doc})
        return pk.fingerprint

    def public_key(self, owner: str, fingerprint: bytes):
        entry = self._keys[owner].get(fingerprint.hex())
        if entry is None:
            raise UnknownKey(f"key {fingerprint.hex()} is not registered for this owner")
        return entry[1]

    # blobs

    def put(self, owner: str, blob_id: str, ct: Ciphertext) -> BlobRecord:
        check_blob_id(blob_id)
        check_ciphertext_range(ct, self.public_key(owner, ct.key_fingerprint))
        doc = ciphertext_to_doc(ct)
        with self._lock:
            if blob_id in self._blobs[owner]:
                raise DuplicateBlobId(f"blob {blob_id!r} already exists")
            self._append({"rec": "blob", "owner": owner, "blob_id": blob_id,
                          "created_at": _utcnow(), "ciphertext": doc})
            return self._blobs[owner][blob_id]

    def exists(self, owner: str, blob_id: str) -> bool:
        return blob_id in self._blobs[owner]

    def get(self, owner: str, blob_id: str) -> BlobRecord:
        check_blob_id(blob_id)
        record = self._blobs[owner].get(blob_id)
        if record is None:
            with self._lock:
                elsewhere = any(blob_id in blobs for other, blobs in self._blobs.items() if other != owner)
            if elsewhere:
                raise NotOwner(f"blob {blob_id!r} belongs to another owner")
            raise UnknownBlob(f"no blob {blob_id!r}")
        return record

    def list(self, owner: str) -> list[BlobRecord]:
        blobs = self._blobs[owner]
        return [blobs[k] for k in sorted(blobs)]
