import random

import pytest

from phevault.cryptosystems import (
    ElGamalKeypair,
    GmKeypair,
    PaillierKeypair,
    RsaKeypair,
    SchemeId,
    Variant,
    keygen,
)
from phevault.vaultd import serve_in_thread


@pytest.fixture
def rng():
    return random.Random(20240601)


@pytest.fixture(scope="session")
def toy_rsa():
    return RsaKeypair.from_primes(61, 53, b=17)


@pytest.fixture(scope="session")
def toy_paillier():
    return PaillierKeypair.from_primes(3, 5)


@pytest.fixture(scope="session")
def toy_elgamal_mul():
    return ElGamalKeypair.from_params(23, 5, 6, Variant.MUL)


@pytest.fixture(scope="session")
def toy_elgamal_add():
    return ElGamalKeypair.from_params(23, 5, 6, Variant.ADD, add_bound=10)


@pytest.fixture(scope="session")
def toy_gm():
    return GmKeypair.from_primes(7, 11, 6)


@pytest.fixture(scope="session")
def keys256():
    """One moderately sized keypair per scheme, shared across the session."""
    r = random.Random(256)
    return {s: keygen(s, 256, r, add_bound=1 << 16) for s in SchemeId}


@pytest.fixture(scope="session")
def keys512():
    r = random.Random(512)
    return {s: keygen(s, 512, r, add_bound=1 << 20) for s in SchemeId}


@pytest.fixture
def server(tmp_path):
    srv = serve_in_thread(tmp_path / "vault")
    yield srv
    srv.shutdown()
    srv.server_close()
    srv.service.store.close()


_criteria: list[tuple[str, str, str]] = []


def pytest_runtest_logreport(report):
    label = dict(report.user_properties).get("criterion")
    if label is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _criteria.append((label, "PASS" if report.passed else "FAIL", report.nodeid))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label, verdict, nodeid in _criteria:
        terminalreporter.write_line(f"{verdict}  {label}  ({nodeid.rsplit('::', 1)[-1]})")
