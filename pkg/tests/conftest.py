"""Prints one summary line per acceptance criterion at the end of a run."""

import re

CRITERIA = {
    1: "octonion norm multiplicativity and Albert Jordan identities",
    2: "order-5 Albert automorphism and its golden unipotent factor",
    3: "the (6|4) Kac superalgebra checks",
    4: "derivation algebra and its action isomorphism",
    5: "the 248-dimensional algebra and its (55|32) semisimplification",
    6: "the Tits chain 133 / 78 / 52",
    7: "recipe coherence for p in {3, 5, 7}",
    8: "the derivation-operator variant",
}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    outcomes = {}
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            nodeid = getattr(rep, "nodeid", "")
            m = re.search(r"test_acceptance\.py::test_criterion_(\d+)", nodeid)
            if m:
                n = int(m.group(1))
                if status != "passed" or n not in outcomes:
                    outcomes[n] = "PASS" if status == "passed" else "FAIL"
    if outcomes:
        terminalreporter.write_sep("-", "acceptance criteria")
        for n in sorted(outcomes):
            terminalreporter.write_line(f"criterion {n}: {outcomes[n]} - {CRITERIA[n]}")
