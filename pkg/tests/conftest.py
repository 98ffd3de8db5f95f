"""Shared pytest hooks: per-criterion summary lines for the acceptance run."""

CRITERIA_TITLES = {
    1: "three-good bundle comparisons",
    2: "discretized sphere likelihood (m=10)",
    3: "opposed-pair suite (axioms, synthesis, affine caveats)",
    4: "synthesis round trip on generated profiles",
    5: "affine recovery of planted decompositions",
    6: "weighted-sum recovery on lottery simplices",
    7: "pooling weight recovery and the urn failure",
    8: "uniqueness: isos, factorizations, richness guard",
    9: "cone engine: membership, certificates, conversions",
    10: "range-convexity gap on uniform discretizations",
}


def _criterion_of(nodeid: str):
    if "test_acceptance" not in nodeid:
        return None
    name = nodeid.split("::")[-1]
    if not name.startswith("test_criterion_"):
        return None
    try:
        return int(name.split("_")[2])
    except (IndexError, ValueError):
        return None


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    outcomes = {}
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            if getattr(rep, "when", "call") != "call":
                continue
            num = _criterion_of(rep.nodeid)
            if num is not None:
                worst = outcomes.get(num, "passed")
                outcomes[num] = status if status != "passed" else worst
    if not outcomes:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for num in sorted(outcomes):
        verdict = "PASS" if outcomes[num] == "passed" else "FAIL"
        title = CRITERIA_TITLES.get(num, "")
        terminalreporter.write_line(f"criterion {num:2d}: {verdict} - {title}")
