import itertools

import pytest


def brute_span(gens):
    """All XOR combinations of gens, by direct enumeration."""
    gens = list(gens)
    out = set()
    for mask in range(1 << len(gens)):
        v = 0
        for j, g in enumerate(gens):
            if (mask >> j) & 1:
                v ^= g
        out.add(v)
    return frozenset(out)


def brute_subspaces(n):
    """Every subspace of GF(2)^n as a frozenset, found by closing vector sets."""
    found = {frozenset([0])}
    frontier = [frozenset([0])]
    while frontier:
        nxt = []
        for S in frontier:
            for v in range(1, 1 << n):
                if v not in S:
                    T = frozenset(S | {x ^ v for x in S})
                    if T not in found:
                        found.add(T)
                        nxt.append(T)
        frontier = nxt
    return found


def brute_dot(a, b):
    return bin(a & b).count("1") & 1


@pytest.fixture(scope="session")
def subspaces_of_4():
    return brute_subspaces(4)


_CRITERIA = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance line; the test body fills in ``detail``."""
    number = request.node.get_closest_marker("criterion").args[0]
    record = {"detail": ""}
    yield record
    _CRITERIA[number] = (request.node.name, record)


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is not None and call.when == "call":
        item.config._criterion_outcomes = getattr(item.config, "_criterion_outcomes", {})
        item.config._criterion_outcomes[marker.args[0]] = call.excinfo is None


def pytest_terminal_summary(terminalreporter, config):
    outcomes = getattr(config, "_criterion_outcomes", {})
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(outcomes):
        name, record = _CRITERIA.get(number, ("?", {"detail": ""}))
        status = "PASS" if outcomes[number] else "FAIL"
        terminalreporter.write_line(f"criterion {number:>2}: {status}  {name}  {record['detail']}")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")
