from __future__ import annotations

import os
from pathlib import Path

from .. import codec
from ..documents import key_from_keyfile_doc, keyfile_to_doc
from ..errors import IoFailure


def write_keypair(key, prefix) -> tuple[Path, Path]:
    """Write ``<prefix>.pub`` and ``<prefix>.key`` (the latter mode 0600)."""
    pub_path = Path(f"{prefix}.pub")
    key_path = Path(f"{prefix}.key")
    try:
        pub_path.write_text(codec.dumps(keyfile_to_doc(key, include_private=False)) + "\n")
        fd = os.open(key_path, os.O_WRONLY | os.O_CREAT | os.O_TRUNC, 0o600)
        with os.fdopen(fd, "w") as fh:
            fh.write(codec.dumps(keyfile_to_doc(key, include_private=True)) + "\n")
        os.chmod(key_path, 0o600)
    except OSError as exc:
        raise IoFailure(str(exc)) from None
    return pub_path, key_path


def read_document(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise IoFailure(str(exc)) from None
    try:
        return codec.loads(text)
    except ValueError as exc:
        raise IoFailure(f"{path}: not a key document ({exc})") from None


def load_key(path):
    """Keypair for a ``.key`` file, public key for a ``.pub`` file."""
    return key_from_keyfile_doc(read_document(path))
