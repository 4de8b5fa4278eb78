import pytest

from threshold_ecdsa.algebra import SECP256K1
from threshold_ecdsa.numtheory import seeded_rng
from threshold_ecdsa.paillier import keygen as paillier_keygen
from threshold_ecdsa.protocol import TEST, setup_p3
from threshold_ecdsa.zkp.range_proofs import generate_aux_params

from helpers import run_keygen

CURVE = SECP256K1
Q = CURVE.q


@pytest.fixture(scope="session")
def config():
    return TEST


@pytest.fixture(scope="session")
def recovery_pair():
    return setup_p3(seeded_rng("p3"))


@pytest.fixture(scope="session")
def keyset(config, recovery_pair):
    """One seeded key generation shared by the protocol tests: ``(pair, rec1, rec2)``."""
    rec1, rec2 = run_keygen(recovery_pair, config, seed="shared")
    return recovery_pair, rec1, rec2


@pytest.fixture(scope="session")
def paillier_1024():
    return paillier_keygen(1024, seeded_rng("paillier-1024"))


@pytest.fixture(scope="session")
def aux_pair():
    """Auxiliary parameters for two parties (initiator, respondent)."""
    rng = seeded_rng("aux")
    return generate_aux_params(1024, rng), generate_aux_params(1024, rng)


def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE

    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
