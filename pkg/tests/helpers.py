"""Shared test utilities: generators, comparison helpers, and a findings log.

Findings are observations worth surfacing in the run output (measured
fractions, probe outcomes) that are reported rather than asserted; the
conftest terminal hook prints them after the test summary.
"""

import numpy as np

from tubal_spectra.tensor3 import transpose

#: Messages printed at the end of the run (populated by tests).
FINDINGS = []

#: One line per acceptance check, printed at the end of the run.
ACCEPTANCE_LINES = []

#: Acceptance wall times by name, summed by the runtime budget test.
ACCEPTANCE_TIMES = {}


def record_finding(message):
    FINDINGS.append(message)
    print(f"[finding] {message}")


def record_acceptance(name, passed, detail):
    status = "PASS" if passed else "FAIL"
    line = f"[acceptance] {name}: {status} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)


def random_tensor(rng, m, n, p):
    return rng.standard_normal((m, n, p))


def random_tsym(rng, n, p):
    A = rng.standard_normal((n, n, p))
    return 0.5 * (A + transpose(A))


def rel_err(found, expected):
    scale = max(float(np.linalg.norm(found)),
                float(np.linalg.norm(expected)), 1.0)
    return float(np.linalg.norm(np.asarray(found) - np.asarray(expected))) / scale
