from __future__ import annotations

import socket

from .. import codec
from ..cryptosystems import Ciphertext
from ..documents import WIRE_VERSION, ciphertext_from_doc, dump_ciphertext, public_key_to_doc
from ..errors import ConnectionFailure, RemoteError


def parse_address(address: str) -> tuple[str, int]:
    host, sep, port = address.rpartition(":")
    if not sep or not port.isdigit():
        raise ValueError(f"expected HOST:PORT, got {address!r}")
    return host or "127.0.0.1", int(port)


class VaultClient:
    """One TCP session with a vaultd provider.

    Only public keys and ciphertexts are accepted by these methods. When
    ``transcript`` is a list, every frame sent and received is appended to it
    as ``(direction, line)``.
    """

    def __init__(self, address: str, token: str | None = None, transcript: list | None = None,
                 timeout: float = 60.0):
        self.address = parse_address(address)
        self.token = token
        self.transcript = transcript
        self.timeout = timeout
        self._sock = None
        self._rfile = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def close(self):
        if self._sock is not None:
            self._rfile.close()
            self._sock.close()
            self._sock = self._rfile = None

    def _connect(self):
        try:
            self._sock = socket.create_connection(self.address, timeout=self.timeout)
        except OSError as exc:
            raise ConnectionFailure(f"cannot reach {self.address[0]}:{self.address[1]}: {exc}") from None
        self._rfile = self._sock.makefile("rb")

    def request(self, kind: str, **payload) -> dict:
        if self._sock is None:
            self._connect()
        doc = {"v": WIRE_VERSION, "type": kind}
        if self.token is not None:
            doc["token"] = self.token
        doc.update(payload)
        line = codec.dumps(doc)
        try:
            self._sock.sendall(line.encode("utf-8") + b"\n")
            reply = self._rfile.readline()
        except OSError as exc:
            self.close()
            raise ConnectionFailure(str(exc)) from None
        if not reply:
            self.close()
            raise ConnectionFailure("provider closed the connection")
        if self.transcript is not None:
            self.transcript.append((">", line))
            self.transcript.append(("<", reply.decode("utf-8").rstrip("\n")))
        response = codec.loads(reply)
        if response.get("type") == "ERROR":
            raise RemoteError(response.get("code", "Error"), response.get("detail", ""))
        if self.token is None:
            self.token = response.get("token")
        return response

    def register_key(self, public_key) -> str:
        return self.request("REGISTER_KEY", key=public_key_to_doc(public_key))["fingerprint"]

    def put(self, blob_id: str, ct: Ciphertext | dict) -> str:
        doc = codec.loads(dump_ciphertext(ct)) if isinstance(ct, Ciphertext) else ct
        return self.request("PUT", blob_id=blob_id, ciphertext=doc)["blob_id"]

    def get_document(self, blob_id: str) -> str:
        """The stored ciphertext as its canonical single-line document."""
        return codec.dumps(self.request("GET", blob_id=blob_id)["ciphertext"])

    def get(self, blob_id: str) -> Ciphertext:
        return ciphertext_from_doc(self.request("GET", blob_id=blob_id)["ciphertext"])

    def list(self) -> list[dict]:
        return self.request("LIST")["blobs"]

    def compute(self, op: str, input_ids: list[str], output_id: str) -> str:
        return self.request("COMPUTE", op=str(op), input_ids=list(input_ids), output_id=output_id)["blob_id"]
