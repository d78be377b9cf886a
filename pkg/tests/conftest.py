import pathlib

import pytest

from memtax import (DigestParams, GenomeCollection, KernelParams,
                    build_index, build_katka_kernel, digest_collection,
                    separate)

DATA = pathlib.Path(__file__).parent / "data"

# the worked-example toy collection and the larger 16-genome toy collection
TOY_GENOMES = ["GATTACAT", "AGATACAT", "GATACAT", "GATTAGAT", "GATTAGATA"]
P = "GGATGGGCTAGACGATCTTCTGTG"


@pytest.fixture(scope="session")
def golden_genomes() -> list[str]:
    return DATA.joinpath("golden_genomes.txt").read_text().split()


@pytest.fixture(scope="session")
def golden_kernel_text() -> str:
    return DATA.joinpath("golden_kernel_k4.txt").read_text().strip()


@pytest.fixture(scope="session")
def golden_digest_text() -> str:
    return DATA.joinpath("golden_digest.txt").read_text().strip()


@pytest.fixture(scope="session")
def golden_digest_kernel_text() -> str:
    return DATA.joinpath("golden_digest_kernel_k2.txt").read_text().strip()


@pytest.fixture(scope="session")
def toy_collection() -> GenomeCollection:
    return GenomeCollection(genomes=list(TOY_GENOMES))


@pytest.fixture(scope="session")
def toy_index(toy_collection):
    return build_index(separate(toy_collection))


@pytest.fixture(scope="session")
def golden_collection(golden_genomes) -> GenomeCollection:
    return GenomeCollection(genomes=list(golden_genomes))


@pytest.fixture(scope="session")
def golden_raw_index(golden_collection):
    return build_index(separate(golden_collection))


@pytest.fixture(scope="session")
def golden_kernel4(golden_collection):
    return build_katka_kernel(separate(golden_collection), KernelParams(4))


@pytest.fixture(scope="session")
def golden_kernel4_index(golden_kernel4):
    return build_index(golden_kernel4)


@pytest.fixture(scope="session")
def golden_digest(golden_collection):
    return digest_collection(golden_collection, DigestParams())


@pytest.fixture(scope="session")
def golden_digest_index(golden_digest):
    return build_index(golden_digest)
