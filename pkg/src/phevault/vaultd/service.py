"""Request dispatch for the provider, independent of the transport.

Requests and responses are single-line JSON objects::

    {"v":1,"type":"REGISTER_KEY","token":T,"key":{"scheme":S,"public":{...}}}
    {"v":1,"type":"PUT","token":T,"blob_id":ID,"ciphertext":{...}}
    {"v":1,"type":"GET","token":T,"blob_id":ID}
    {"v":1,"type":"LIST","token":T}
    {"v":1,"type":"COMPUTE","token":T,"op":OP,"input_ids":[...],"output_id":ID}

Success is ``{"v":1,"type":"OK","token":T, ...}``; failure is
``{"v":1,"type":"ERROR","code":C,"detail":D}``. A request without a token is
issued a fresh one (a new owner), echoed in the OK response.
"""

from __future__ import annotations

import logging

from .. import codec
from ..documents import WIRE_VERSION, ciphertext_from_doc
from ..errors import BadRequest, DuplicateBlobId, TooFewInputs, VaultError
from ..evaluator import HomomorphicOp, evaluate
from .store import BlobStore, check_blob_id

log = logging.getLogger(__name__)

_PAYLOAD = {
    "REGISTER_KEY": ("key",),
    "PUT": ("blob_id", "ciphertext"),
    "GET": ("blob_id",),
    "LIST": (),
    "COMPUTE": ("op", "input_ids", "output_id"),
}


def error_doc(code: str, detail: str) -> dict:
    return {"v": WIRE_VERSION, "type": "ERROR", "code": code, "detail": detail}


class VaultService:
    def __init__(self, store: BlobStore):
        self.store = store

    def handle_line(self, line: bytes | str) -> str:
        try:
            request = codec.loads(line)
        except ValueError as exc:
            return codec.dumps(error_doc(BadRequest.code, f"unparseable request: {exc}"))
        return codec.dumps(self.handle(request))

    def handle(self, request: dict) -> dict:
        try:
            return self._dispatch(request)
        except VaultError as exc:
            return error_doc(exc.code, exc.detail)
        except Exception:
            log.exception("internal error")
            return error_doc("InternalError", "unexpected server error")

    def _dispatch(self, req: dict) -> dict:
        if req.get("v") != WIRE_VERSION:
            raise BadRequest(f"unsupported protocol version {req.get('v')!r}")
        kind = req.get("type")
        if kind not in _PAYLOAD:
            raise BadRequest(f"unknown request type {kind!r}")
        expected = {"v", "type", "token", *_PAYLOAD[kind]}
        if not set(_PAYLOAD[kind]) <= set(req) or not set(req) <= expected:
            raise BadRequest(f"{kind} expects fields {sorted(expected)}")

        token = req.get("token")
        if token is None:
            token, owner = self.store.issue_token()
        elif isinstance(token, str):
            owner = self.store.owner_for(token)
        else:
            raise BadRequest("token must be a string")

        payload = getattr(self, "_" + kind.lower())(owner, req)
        return {"v": WIRE_VERSION, "type": "OK", "token": token, **payload}

    def _register_key(self, owner, req):
        fp = self.store.register_key(owner, req["key"])
        return {"fingerprint": fp.hex()}

    def _put(self, owner, req):
        ct = ciphertext_from_doc(req["ciphertext"])
        record = self.store.put(owner, check_blob_id(req["blob_id"]), ct)
        return {"blob_id": record.blob_id}

    def _get(self, owner, req):
        record = self.store.get(owner, req["blob_id"])
        return {"blob_id": record.blob_id, "ciphertext": codec.loads(record.document)}

    def _list(self, owner, req):
        return {"blobs": [
            {"blob_id": r.blob_id, "scheme": r.ciphertext.scheme.value, "created_at": r.created_at}
            for r in self.store.list(owner)
        ]}

    def _compute(self, owner, req):
        try:
            op = HomomorphicOp(req["op"])
        except (TypeError, ValueError):
            raise BadRequest(f"unknown op {req['op']!r}") from None
        ids = req["input_ids"]
        if not isinstance(ids, list):
            raise BadRequest("input_ids must be a list")
        output_id = check_blob_id(req["output_id"])
        if len(ids) < 2:
            raise TooFewInputs(f"{op} needs at least 2 inputs")
        if self.store.exists(owner, output_id):
            raise DuplicateBlobId(f"blob {output_id!r} already exists")
        inputs = [self.store.get(owner, blob_id).ciphertext for blob_id in ids]
        public_key = self.store.public_key(owner, inputs[0].key_fingerprint)
        result = evaluate(op, inputs, public_key)
        self.store.put(owner, output_id, result)
        return {"blob_id": output_id}

