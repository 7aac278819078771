import numpy as np
import pytest
import scipy.sparse as sp

from docclf.harness.synthetic import SyntheticSpec, make_corpus


@pytest.fixture(scope="session")
def small_corpus():
    """Three well separated classes, 20 to 40 documents each."""
    return make_corpus(
        SyntheticSpec(
            class_names=("alpha", "beta", "gamma"),
            class_sizes=(40, 30, 20),
            keywords_per_class=15,
            noise_pool_size=40,
            doc_length=(15, 30),
            noise_fraction=0.4,
            seed=3,
        )
    )


def random_tfidf(rng, n_rows, n_cols, density=0.3):
    X = sp.random(n_rows, n_cols, density=density, format="csr", random_state=rng)
    X.data = np.abs(X.data) + 0.01
    norms = np.sqrt(np.asarray(X.multiply(X).sum(axis=1)).ravel())
    norms[norms == 0] = 1.0
    return sp.csr_matrix(X.multiply(1.0 / norms[:, None]))


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[n])
