"""vaultctl: the client side. Owns every private key; talks to vaultd.

Exit status: 0 success/PASS, 1 usage, 2 crypto error, 3 network or server
error, 4 verification FAIL.
"""

from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path

from ..cryptosystems import (
    KEYPAIR_TYPES,
    ElGamalKeypair,
    GmKeypair,
    PaillierKeypair,
    RsaKeypair,
    SchemeId,
    Variant,
    decrypt,
    encrypt,
    keygen,
)
from ..cryptosystems.elgamal import DEFAULT_ADD_BOUND
from ..documents import dump_ciphertext, load_ciphertext, public_key_from_doc
from ..errors import CryptoError, IoFailure, SchemaViolation, UnsupportedBits, VaultError
from ..evaluator import HomomorphicOp
from .client import VaultClient
from .keyfiles import load_key, read_document, write_keypair

EXIT_OK, EXIT_USAGE, EXIT_CRYPTO, EXIT_REMOTE, EXIT_FAIL = 0, 1, 2, 3, 4
PRODUCTION_BITS = (512, 1024, 2048)
DEFAULT_SERVER = "127.0.0.1:7878"
_DECIMAL = re.compile(r"[0-9]+\Z")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _decimal(text: str) -> int:
    if not _DECIMAL.match(text):
        raise UsageError(f"plaintext must be an unsigned decimal integer, got {text!r}")
    return int(text)


def _bits_list(text: str) -> list[int]:
    try:
        return [int(b) for b in text.split(",")]
    except ValueError:
        raise UsageError(f"bad bit-size list {text!r}") from None


def _schemes(text: str) -> list[SchemeId]:
    try:
        return [SchemeId(s.strip().upper()) for s in text.split(",")]
    except ValueError:
        raise UsageError(f"unknown scheme in {text!r}; choose from {[s.value for s in SchemeId]}") from None


def _check_bits(bits: int, toy: bool) -> None:
    if toy:
        if bits < 16:
            raise UnsupportedBits("even toy keys need at least 16 bits")
    elif bits not in PRODUCTION_BITS:
        raise UnsupportedBits(f"bits must be one of {PRODUCTION_BITS} (or pass --insecure-toy)")


def _toy_key(scheme: SchemeId, text: str, add_bound):
    try:
        params = {k.strip(): int(v) for k, v in (item.split("=") for item in text.split(","))}
    except ValueError:
        raise UsageError(f"--toy-params expects k=v,k=v; got {text!r}") from None
    try:
        if scheme is SchemeId.RSA:
            return RsaKeypair.from_primes(params["p"], params["q"], params.get("b", 65537))
        if scheme is SchemeId.PAILLIER:
            return PaillierKeypair.from_primes(params["p"], params["q"], params.get("g"))
        if scheme is SchemeId.GM:
            return GmKeypair.from_primes(params["p"], params["q"], params["g"])
        variant = Variant.ADD if scheme is SchemeId.ELGAMAL_ADD else Variant.MUL
        return ElGamalKeypair.from_params(params["p"], params["alpha"], params["a"], variant, add_bound)
    except KeyError as exc:
        raise UsageError(f"--toy-params for {scheme} is missing {exc}") from None


def _client(args) -> VaultClient:
    try:
        return VaultClient(args.server, args.token)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _announce_token(client: VaultClient, args) -> None:
    if args.token is None and client.token is not None:
        print(f"issued token: {client.token}", file=sys.stderr)


def _read_input(path) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise IoFailure(str(exc)) from None


def _emit(text: str, out) -> None:
    if out:
        try:
            Path(out).write_text(text + "\n")
        except OSError as exc:
            raise IoFailure(str(exc)) from None
    else:
        print(text)


# commands

def cmd_keygen(args) -> int:
    scheme = SchemeId(args.scheme)
    if scheme is SchemeId.ELGAMAL_ADD and args.add_bound is None:
        raise UsageError("ELGAMAL_ADD keys need --add-bound")
    if args.toy_params:
        if not args.insecure_toy:
            raise UsageError("--toy-params requires --insecure-toy")
        key = _toy_key(scheme, args.toy_params, args.add_bound)
    else:
        if args.bits is None:
            raise UsageError("--bits is required")
        _check_bits(args.bits, args.insecure_toy)
        key = keygen(scheme, args.bits, add_bound=args.add_bound)
    pub_path, key_path = write_keypair(key, args.out)
    print(key.public.fingerprint.hex())
    print(f"wrote {pub_path} and {key_path}", file=sys.stderr)
    return EXIT_OK


def cmd_encrypt(args) -> int:
    key = load_key(args.keyfile)
    _emit(dump_ciphertext(encrypt(key, _decimal(args.value))), args.out)
    return EXIT_OK


def cmd_decrypt(args) -> int:
    key = load_key(args.keyfile)
    if not isinstance(key, KEYPAIR_TYPES):
        raise UsageError("decrypt needs the private .key file")
    print(decrypt(key, load_ciphertext(_read_input(args.ciphertext))))
    return EXIT_OK


def cmd_register(args) -> int:
    doc = read_document(args.keyfile)
    if "private" in doc:
        raise SchemaViolation("refusing to send a private key file; register the .pub file")
    pk = public_key_from_doc({k: v for k, v in doc.items() if k not in ("format_version", "add_bound")})
    with _client(args) as client:
        print(client.register_key(pk))
        _announce_token(client, args)
    return EXIT_OK


def cmd_put(args) -> int:
    ct = load_ciphertext(_read_input(args.ciphertext))
    with _client(args) as client:
        print(client.put(args.blob_id, ct))
        _announce_token(client, args)
    return EXIT_OK


def cmd_get(args) -> int:
    with _client(args) as client:
        _emit(client.get_document(args.blob_id), args.out)
    return EXIT_OK


def cmd_list(args) -> int:
    with _client(args) as client:
        for entry in client.list():
            print(f"{entry['blob_id']}\t{entry['scheme']}\t{entry['created_at']}")
        _announce_token(client, args)
    return EXIT_OK


def cmd_compute(args) -> int:
    if len(args.inputs) < 2:
        raise UsageError("compute needs at least two input blob ids")
    with _client(args) as client:
        print(client.compute(args.op, args.inputs, args.output_id))
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_verify

    if len(args.values) < 2:
        raise UsageError("verify needs at least two plaintext inputs")
    values = [_decimal(v) for v in args.values]
    key = load_key(args.keyfile)
    if not isinstance(key, KEYPAIR_TYPES):
        raise UsageError("verify needs the private .key file")
    op = HomomorphicOp(args.op)
    with _client(args) as client:
        result = run_verify(key, op, values, client)
        _announce_token(client, args)
    print(result.report(op, key.scheme))
    return EXIT_OK if result.passed else EXIT_FAIL


def cmd_bench(args) -> int:
    from .bench import run_bench, write_csv

    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    rows = run_bench(_schemes(args.scheme), _bits_list(args.bits), args.trials)
    out = Path(args.out)
    try:
        write_csv(rows, out)
    except OSError as exc:
        raise IoFailure(str(exc)) from None
    print(f"wrote {len(rows)} rows to {out}", file=sys.stderr)
    if not args.no_plot:
        from .plot import render_bench_figure

        figure = out.with_suffix(".png")
        render_bench_figure(rows, figure)
        print(f"wrote {figure}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="vaultctl", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def remote(p):
        p.add_argument("--server", default=DEFAULT_SERVER, help="HOST:PORT of vaultd")
        p.add_argument("--token", help="bearer token; omitted means request a new one")

    schemes = [s.value for s in SchemeId]
    ops = [o.value for o in HomomorphicOp]

    p = sub.add_parser("keygen", help="generate <out>.pub and <out>.key")
    p.add_argument("--scheme", required=True, choices=schemes)
    p.add_argument("--bits", type=int)
    p.add_argument("--out", required=True, help="output path prefix")
    p.add_argument("--add-bound", type=int, help=f"ELGAMAL_ADD plaintext bound (e.g. {DEFAULT_ADD_BOUND})")
    p.add_argument("--insecure-toy", action="store_true", help="allow key sizes below 512 bits")
    p.add_argument("--toy-params", help="fixed parameters, e.g. p=61,q=53,b=17 (needs --insecure-toy)")
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("encrypt", help="print a ciphertext document")
    p.add_argument("keyfile")
    p.add_argument("value")
    p.add_argument("--out")
    p.set_defaults(func=cmd_encrypt)

    p = sub.add_parser("decrypt", help="print the plaintext of a ciphertext document")
    p.add_argument("keyfile")
    p.add_argument("ciphertext", nargs="?", help="file, or - / omitted for stdin")
    p.set_defaults(func=cmd_decrypt)

    p = sub.add_parser("register", help="register a public key with the provider")
    p.add_argument("keyfile")
    remote(p)
    p.set_defaults(func=cmd_register)

    p = sub.add_parser("put", help="upload a ciphertext document")
    p.add_argument("blob_id")
    p.add_argument("ciphertext", nargs="?")
    remote(p)
    p.set_defaults(func=cmd_put)

    p = sub.add_parser("get", help="download a ciphertext document")
    p.add_argument("blob_id")
    p.add_argument("--out")
    remote(p)
    p.set_defaults(func=cmd_get)

    p = sub.add_parser("list", help="list stored blobs")
    remote(p)
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("compute", help="evaluate OP over stored blobs")
    p.add_argument("op", choices=ops)
    p.add_argument("inputs", nargs="+", metavar="INPUT_ID")
    p.add_argument("--output-id", required=True)
    remote(p)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", help="end-to-end homomorphism check against the provider")
    p.add_argument("keyfile", help="private .key file")
    p.add_argument("op", choices=ops)
    p.add_argument("values", nargs="+", metavar="VALUE")
    remote(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="latency / ciphertext-size benchmark to CSV (+ PNG)")
    p.add_argument("--scheme", default="RSA,PAILLIER,ELGAMAL_MUL,ELGAMAL_ADD,GM", help="comma list")
    p.add_argument("--bits", default="512,1024,2048", help="comma list")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--out", default="bench.csv")
    p.add_argument("--no-plot", action="store_true", help="skip the PNG figure")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"vaultctl: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnsupportedBits as exc:
        print(f"vaultctl: {exc.code}: {exc.detail}", file=sys.stderr)
        return EXIT_USAGE
    except (CryptoError, IoFailure) as exc:
        print(f"vaultctl: {exc.code}: {exc.detail}", file=sys.stderr)
        return EXIT_CRYPTO
    except VaultError as exc:
        print(f"vaultctl: {exc.code}: {exc.detail}", file=sys.stderr)
        return EXIT_REMOTE


if __name__ == "__main__":
    sys.exit(main())

