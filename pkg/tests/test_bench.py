import random

import pytest

from phevault.cryptosystems import SchemeId
from phevault.vaultctl.bench import CSV_HEADER, OPERATIONS, p90, run_bench, write_csv


def test_p90_nearest_rank():
    assert p90([5.0]) == 5.0
    assert p90(list(map(float, range(1, 11)))) == 9.0
    assert p90(list(map(float, range(1, 21)))) == 18.0


def test_run_bench_shape_and_bounds(tmp_path):
    rows = run_bench(list(SchemeId), [64], 2, random.Random(0))
    assert len(rows) == len(SchemeId) * len(OPERATIONS)
    for row in rows:
        assert row.median_us > 0 and row.p90_us >= row.median_us
        assert row.ciphertext_bits >= row.plaintext_bits
        if row.scheme == "PAILLIER":
            assert row.ciphertext_bits <= 2 * row.key_bits
    gm = [r for r in rows if r.scheme == "GM"]
    assert {r.plaintext_bits for r in gm} == {1}
    write_csv(rows, tmp_path / "b.csv")
    lines = (tmp_path / "b.csv").read_text().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert len(lines) == 1 + len(rows)


def test_run_bench_rejects_zero_trials():
    with pytest.raises(ValueError):
        run_bench([SchemeId.RSA], [64], 0)
