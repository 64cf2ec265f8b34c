"""Shared test utilities."""

import numpy as np
from scipy.stats import unitary_group

from specgate.metrics import GateTarget

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def haar_target(rng: np.random.Generator) -> GateTarget:
    U = unitary_group.rvs(2, random_state=rng)
    return GateTarget.from_matrix(U)


def same_up_to_phase(A, B, tol=1e-10) -> bool:
    A, B = np.asarray(A, complex), np.asarray(B, complex)
    ov = np.vdot(A.ravel(), B.ravel())
    if abs(ov) < 1e-14:
        return False
    return bool(np.max(np.abs(A * (ov / abs(ov)) - B)) < tol)
