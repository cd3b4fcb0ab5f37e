from pathlib import Path

import pytest

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "schema_forge" / "fixtures"


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


@pytest.fixture
def medio_text() -> str:
    return (FIXTURES / "medio_real_estate.txt").read_text(encoding="utf-8")


@pytest.fixture
def avanzato_text() -> str:
    return (FIXTURES / "avanzato_product_campaign.txt").read_text(encoding="utf-8")


# -- acceptance summary -----------------------------------------------------

_ACCEPTANCE = pytest.StashKey[dict]()
_STARTED = pytest.StashKey[float]()


def pytest_configure(config):
    import time

    config.stash[_ACCEPTANCE] = {}
    config.stash[_STARTED] = time.perf_counter()


@pytest.fixture
def criterion(request):
    """Context manager recording one acceptance criterion as PASS or FAIL."""
    from contextlib import contextmanager

    results = request.config.stash[_ACCEPTANCE]

    @contextmanager
    def record(number: int, title: str):
        detail: dict = {}
        try:
            yield detail
        except BaseException as exc:
            results[number] = (title, False, detail, f"{type(exc).__name__}: {exc}".splitlines()[0])
            raise
        results[number] = (title, True, detail, "")

    return record


def pytest_terminal_summary(terminalreporter, config):
    import time

    results = config.stash[_ACCEPTANCE]
    if not results:
        return
    elapsed = time.perf_counter() - config.stash[_STARTED]
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(results):
        title, passed, detail, error = results[number]
        if number == 8:
            detail = dict(detail, suite_s=round(elapsed, 2))
            passed = passed and elapsed < 30.0
        facts = ", ".join(f"{k}={v}" for k, v in detail.items())
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {title}"
        if facts:
            line += f"  [{facts}]"
        if error:
            line += f"  ({error})"
        tr.write_line(line)
