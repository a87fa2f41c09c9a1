import pytest


@pytest.fixture
def verdict(capsys):
    """Print a criterion verdict line straight to the terminal."""
    def emit(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        with capsys.disabled():
            print(f"\n{line}")
        return ok
    return emit

