import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from convwalk.classify import default_corpus, verify_corpus
from convwalk.group import build_group
from convwalk.measure import ProbabilityMeasure

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

CORPUS_SEED = 42
ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def corpus():
    return default_corpus()


@pytest.fixture(scope="session")
def corpus_instances(corpus):
    return corpus.instances(CORPUS_SEED)


@pytest.fixture(scope="session")
def corpus_measures(corpus_instances):
    groups = {}
    out = []
    for inst in corpus_instances:
        G = groups.setdefault(inst.group, build_group(inst.group))
        out.append((inst.id, ProbabilityMeasure(G, np.asarray(inst.weights))))
    return out


@pytest.fixture(scope="session")
def corpus_run(corpus):
    jobs = max(1, min(8, os.cpu_count() or 1))
    return verify_corpus(corpus, seed=CORPUS_SEED, jobs=jobs, keep_reports=True)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
