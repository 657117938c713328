"""One test per acceptance criterion; each prints a PASS/FAIL line with its runtime."""

import pytest
from conftest import ACCEPTANCE_LINES

from combtopo.suites import FAIL, run_check

CRITERIA = [
    (1, "subdivision-shadow"),
    (2, "product-count"),
    (3, "ex-shadow"),
    (4, "straightening-iso"),
    (5, "interpolation-validity"),
    (6, "transition-poset-contractible"),
    (7, "path-models"),
    (8, "fiber-controls"),
    (9, "chamber-truncations"),
    (10, "mapping-space-and-replacement"),
    (11, "typed-gallery-counts"),
]

# Both are genuine negative results at desk scale; the checks stay literal.
KNOWN_FAILURES = {
    "straightening-iso": "over the 1-simplex the two sides differ in size from degree 1 on",
    "path-models": "boundary-delta-3 gives H_1 = Z^2 at four chambers and six-cycle components do not grow below seven chambers",
}


def _case(number, name):
    marks = [pytest.mark.xfail(strict=True, reason=KNOWN_FAILURES[name])] if name in KNOWN_FAILURES else []
    return pytest.param(number, name, marks=marks, id=f"{number:02d}-{name}")


@pytest.mark.parametrize("number,name", [_case(n, c) for n, c in CRITERIA])
def test_criterion(number, name):
    rec = run_check(name)
    word = "FAIL" if rec.status == FAIL else "PASS"
    line = f"{word} {number:2d} {name:32s} {rec.status:15s} {rec.runtime:7.2f}s (budget {rec.budget:g}s)"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert rec.status != FAIL, rec.data
