import numpy as np
import pytest

# Coefficients of the worked examples.
AR1 = (0.599419,)
IPC_AR2 = (0.584, 0.203494)
ARCH_AR4 = (0.128940, 0.116899, 0.153156, 0.169289)
COUNTEREXAMPLE = (2.0, -3.0)

IN_CLASS_FIXTURES = [AR1, IPC_AR2, ARCH_AR4, (0.5,), (0.95,), (0.267728, -0.143342)]
ALL_FIXTURES = IN_CLASS_FIXTURES + [COUNTEREXAMPLE]


@pytest.fixture
def rng():
    return np.random.default_rng(20190710)


def random_class_alpha(rng, n):
    """Coefficients with sum |alpha_j| < 1 and alpha_n != 0."""
    w = rng.dirichlet(np.ones(n)) if n > 1 else np.ones(1)
    a = rng.uniform(0.01, 0.99) * w * rng.choice([-1.0, 1.0], n)
    a[-1] = a[-1] if a[-1] != 0 else 1e-3
    return a
