"""Terminal summary: one PASS/FAIL line per acceptance criterion."""

ACCEPTANCE_LABELS = {
    "test_posterior_correctness": "posterior correctness",
    "test_thompson_selection_fidelity": "thompson selection fidelity",
    "test_duplicate_freedom_and_rank_minimality": "duplicate freedom and rank minimality",
    "test_feedback_accounting": "feedback accounting",
    "test_convergence_dominant_engine": "convergence to dominant engine",
    "test_mixture_beats_single_engine": "mixture beats single engine",
    "test_explicit_vs_non_explicit": "explicit vs non-explicit",
    "test_enumeration_oracle": "enumeration oracle",
    "test_logged_policy_bias": "logged-policy bias demonstration",
    "test_determinism_bit_identical": "determinism",
}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = {}
    for outcome, verdict in (("passed", "PASS"), ("failed", "FAIL"), ("error", "FAIL")):
        for report in terminalreporter.stats.get(outcome, []):
            if getattr(report, "when", "call") != "call":
                continue
            name = report.nodeid.split("::")[-1].split("[")[0]
            if "test_acceptance" in report.nodeid and name in ACCEPTANCE_LABELS:
                # A FAIL verdict sticks even if another phase passed.
                if lines.get(name) != "FAIL":
                    lines[name] = verdict
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for name, label in ACCEPTANCE_LABELS.items():
        if name in lines:
            terminalreporter.write_line(f"[{lines[name]}] {label}")
