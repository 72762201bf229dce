"""Regenerate the serialized fixture documents from their builders."""

from __future__ import annotations

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from hacgov import fixtures
from hacgov.fileio import serialize_hac_document

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), "..", "fixtures")

SCM_DOC = """\
version: 1
model: linear
agents: [h, m1, m2]
coefficients:
  m1: {h: 0.5}
  m2: {m1: 0.5}
  h: {m2: 0.5}
noise_gain: {h: 1.0, m1: 1.0, m2: 1.0}
noise:
  h: {kind: normal}
  m1: {kind: normal}
  m2: {kind: normal}
outcome:
  coeffs: {h: 1.0, m1: 1.0, m2: 1.0}
  threshold: 0.0
lambda_hat: 0.64
mixed_cycle_count: 1
"""

MIXTURE_DOC = """\
version: 1
model: mixture_cycle
order: [h1, m1, m2]
kinds: {h1: human, m1: artificial, m2: artificial}
alphabet_size: 32
drift_target: 0
agents:
  m1: {executive: 0.8, revealed_bits: 1}
  m2: {executive: 0.9, revealed_bits: 1}
"""

TABLE_DOC = """\
version: 1
outcome_types:
  critical:
    a1: {epistemic_access: 0.3, causal_effect: 0.5}
    a2: {epistemic_access: 0.3, causal_effect: 0.5}
    a3: {epistemic_access: 0.3, causal_effect: 0.5}
kinds: {a1: human, a2: artificial, a3: artificial}
"""

ATTR_DOC = """\
version: 1
shares:
  critical:
    a1: 0.4
    a2: 0.3
    a3: 0.3
"""


def main():
    os.makedirs(FIXTURE_DIR, exist_ok=True)
    for name, builder in (
        ("h1.hac", fixtures.clinical_hac),
        ("h2.hac", fixtures.trading_hac),
        ("h3.hac", fixtures.governance_hac),
    ):
        path = os.path.join(FIXTURE_DIR, name)
        with open(path, "w") as fh:
            fh.write(serialize_hac_document(builder()))
        print(f"wrote {path}")
    for name, text in (
        ("three_cycle.scm", SCM_DOC),
        ("mixture_cycle.scm", MIXTURE_DOC),
        ("above_horizon_table.yaml", TABLE_DOC),
        ("above_horizon_attr.yaml", ATTR_DOC),
    ):
        path = os.path.join(FIXTURE_DIR, name)
        with open(path, "w") as fh:
            fh.write(text)
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
