import pytest

from umichan.dataset import load_bundled

_criteria: dict[str, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(cid, text): acceptance criterion a test belongs to")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    for name in getattr(report, "criterion", ()):
        _criteria.setdefault(name, []).append(report.outcome)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    rep.criterion = [f"{m.args[0]} {m.args[1]}" for m in item.iter_markers("criterion")]


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria, key=lambda s: int(s.split()[0][1:])):
        outcomes = _criteria[name]
        ok = all(o == "passed" for o in outcomes)
        failed = sum(o != "passed" for o in outcomes)
        detail = f"{len(outcomes)} checks" if ok else f"{failed}/{len(outcomes)} checks failed"
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  ({detail})")


@pytest.fixture(scope="session")
def bundled():
    return load_bundled()
