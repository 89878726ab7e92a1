"""TCP transport: newline-delimited UTF-8 JSON frames, one request per line."""

from __future__ import annotations

import argparse
import logging
import socketserver
import sys
import threading

from .. import codec
from ..errors import BadRequest
from .service import VaultService, error_doc
from .store import BlobStore

log = logging.getLogger(__name__)

MAX_LINE = 1 << 20
DEFAULT_PORT = 7878


class _Handler(socketserver.StreamRequestHandler):
    server: "VaultServer"

    def handle(self):
        peer = "%s:%s" % self.client_address[:2]
        log.debug("session open %s", peer)
        while True:
            line = self.rfile.readline(MAX_LINE + 1)
            if not line:
                break
            if len(line) > MAX_LINE and not line.endswith(b"\n"):
                self._send(codec.dumps(error_doc(BadRequest.code, "frame too long")))
                break
            line = line.strip()
            if not line:
                continue
            self.server.record("<", line.decode("utf-8", "replace"))
            self._send(self.server.service.handle_line(line))
        log.debug("session closed %s", peer)

    def _send(self, text: str):
        self.server.record(">", text)
        self.wfile.write(text.encode("utf-8") + b"\n")
        self.wfile.flush()


class VaultServer(socketserver.ThreadingTCPServer):
    daemon_threads = True
    allow_reuse_address = True

    def __init__(self, address, service: VaultService, transcript_path=None):
        super().__init__(address, _Handler)
        self.service = service
        self._transcript = open(transcript_path, "a", encoding="utf-8") if transcript_path else None
        self._transcript_lock = threading.Lock()

    @property
    def address(self) -> str:
        host, port = self.server_address[:2]
        return f"{host}:{port}"

    def record(self, direction: str, text: str) -> None:
        if self._transcript is None:
            return
        with self._transcript_lock:
            self._transcript.write(f"{direction} {text}\n")
            self._transcript.flush()

    def server_close(self):
        super().server_close()
        if self._transcript is not None:
            self._transcript.close()


def serve_in_thread(data_dir, host="127.0.0.1", port=0, transcript_path=None) -> VaultServer:
    """Start a server on a background thread; call ``shutdown()`` and ``server_close()`` to stop."""
    server = VaultServer((host, port), VaultService(BlobStore(data_dir)), transcript_path)
    threading.Thread(target=server.serve_forever, name="vaultd", daemon=True).start()
    return server


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="vaultd", description="Key-blind ciphertext vault.")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=DEFAULT_PORT, help="0 picks a free port")
    parser.add_argument("--data", default="vault-data", help="directory holding the journal")
    parser.add_argument("--transcript", help="append every wire frame to this file")
    parser.add_argument("-v", "--verbose", action="store_true")
    args = parser.parse_args(argv)

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    store = BlobStore(args.data)
    with VaultServer((args.host, args.port), VaultService(store), args.transcript) as server:
        print(f"vaultd listening on {server.address}", flush=True)
        try:
            server.serve_forever()
        except KeyboardInterrupt:
            pass
    store.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
