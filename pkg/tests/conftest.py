import pytest


def pytest_addoption(parser):
    parser.addoption("--long", action="store_true", default=False, help="run the long verification suite")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--long"):
        return
    skip = pytest.mark.skip(reason="long suite, enable with --long")
    for item in items:
        if "long" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = next((m for m in list(sys.modules.values()) if hasattr(m, "ACCEPTANCE_RESULTS")), None)
    if mod is None or not mod.ACCEPTANCE_RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for crit in sorted(mod.ACCEPTANCE_RESULTS):
        parts = mod.ACCEPTANCE_RESULTS[crit]
        verdict = "PASS" if all(ok for _, ok, _, _ in parts) else "FAIL"
        secs = max(s for _, _, s, _ in parts)
        tr.write_line(f"criterion {crit} ({mod.TITLES[crit]}): {verdict}  [{secs:.2f}s]")
        for part, ok, s, note in parts:
            tr.write_line(f"    {'ok  ' if ok else 'FAIL'} {part}" + (f"  ({note})" if note else ""))
