"""The provider daemon: stores ciphertexts and evaluates on them, never holding a private key."""

from .server import VaultServer, serve_in_thread
from .service import VaultService
from .store import BlobRecord, BlobStore

__all__ = ["BlobRecord", "BlobStore", "VaultServer", "VaultService", "serve_in_thread"]
