"""Latency and ciphertext-size benchmark across schemes and key sizes."""

from __future__ import annotations

import csv
import math
import random
import statistics
import time
from dataclasses import astuple, dataclass, fields
from math import gcd

from ..cryptosystems import SchemeId, decrypt, encrypt, keygen
from ..evaluator import CAPABILITIES, evaluate
from ..numtheory import default_rng

OPERATIONS = ("keygen", "encrypt", "decrypt", "evaluate")


@dataclass(frozen=True)
class BenchRow:
    scheme: str
    key_bits: int
    operation: str
    trials: int
    median_us: float
    p90_us: float
    ciphertext_bits: int
    plaintext_bits: int


CSV_HEADER = tuple(f.name for f in fields(BenchRow))


def p90(samples: list[float]) -> float:
    """Nearest-rank 90th percentile."""
    ordered = sorted(samples)
    return ordered[max(0, math.ceil(0.9 * len(ordered)) - 1)]


def plaintext_bits(pk) -> int:
    """Bit length of the plaintexts the bench encrypts under ``pk``."""
    scheme = pk.scheme
    if scheme is SchemeId.GM:
        return 1
    if scheme is SchemeId.ELGAMAL_ADD:
        return pk.add_bound.bit_length()
    modulus = pk.p if scheme is SchemeId.ELGAMAL_MUL else pk.n
    return modulus.bit_length() - 1


def ciphertext_bits(pk) -> int:
    """Encoded size of one ciphertext: modulus width times component count."""
    components = 2 if pk.scheme in (SchemeId.ELGAMAL_MUL, SchemeId.ELGAMAL_ADD) else 1
    return pk.ciphertext_modulus.bit_length() * components


def _sample_plaintext(pk, rng: random.Random) -> int:
    scheme = pk.scheme
    if scheme is SchemeId.GM:
        return rng.randrange(2)
    if scheme is SchemeId.ELGAMAL_ADD:
        return rng.randrange(pk.add_bound + 1)
    bits = plaintext_bits(pk)
    modulus = pk.p if scheme is SchemeId.ELGAMAL_MUL else pk.n
    while True:
        x = rng.randrange(1 << (bits - 1), 1 << bits)
        if gcd(x, modulus) == 1:
            return x


def _timed(fn, *args):
    start = time.perf_counter_ns()
    result = fn(*args)
    return result, max(time.perf_counter_ns() - start, 1) / 1000.0


def bench_one(scheme: SchemeId, bits: int, trials: int, rng: random.Random) -> list[BenchRow]:
    timings = {op: [] for op in OPERATIONS}
    for _ in range(trials):
        key, us = _timed(keygen, scheme, bits, rng)
        timings["keygen"].append(us)
    pk = key.public
    cts = []
    for _ in range(trials + 1):
        ct, us = _timed(encrypt, pk, _sample_plaintext(pk, rng), rng)
        cts.append(ct)
        timings["encrypt"].append(us)
    timings["encrypt"].pop()
    for ct in cts[:trials]:
        timings["decrypt"].append(_timed(decrypt, key, ct)[1])
    (op,) = CAPABILITIES[scheme]
    for i in range(trials):
        timings["evaluate"].append(_timed(evaluate, op, [cts[i], cts[i + 1]], pk)[1])

    ct_bits, pt_bits = ciphertext_bits(pk), plaintext_bits(pk)
    return [
        BenchRow(scheme.value, bits, op_name, trials,
                 round(statistics.median(timings[op_name]), 3), round(p90(timings[op_name]), 3),
                 ct_bits, pt_bits)
        for op_name in OPERATIONS
    ]


def run_bench(schemes, bit_sizes, trials: int, rng: random.Random | None = None) -> list[BenchRow]:
    """One row per scheme x key size x operation, in argument order."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = rng or default_rng()
    rows = []
    for scheme in schemes:
        for bits in bit_sizes:
            rows.extend(bench_one(SchemeId(scheme), bits, trials, rng))
    return rows


def write_csv(rows: list[BenchRow], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        writer.writerows(astuple(row) for row in rows)
