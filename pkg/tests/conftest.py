"""Shared fixtures: the corpus of small groups used across the suite."""

import pytest

from centralizers import builtin_group, verify_subgroup

# (family name, subgroup specs as comma-separated words)
CORPUS = [
    ("F2", [""]),
    ("F2xZ2", ["t"]),
    ("F2xZ3", ["u,u*u"]),
    ("Z2*Z2", ["r", "s", "r*s*r"]),
    ("Z2*Z3", ["r", "s,s*s", "s*r*s*s"]),
]


def make_subgroup(oracle, spec: str):
    """Finite subgroup from comma-separated words; identity is implied."""
    words = [w for w in spec.split(",") if w]
    return verify_subgroup(oracle, {oracle.identity, *(oracle.parse(w) for w in words)})


@pytest.fixture(scope="session")
def f2():
    return builtin_group("F2")


@pytest.fixture(scope="session")
def f2xz2():
    return builtin_group("F2xZ2")


@pytest.fixture(scope="session")
def f2xz3():
    return builtin_group("F2xZ3")


@pytest.fixture(scope="session")
def z2z2():
    return builtin_group("Z2*Z2")


@pytest.fixture(scope="session")
def z2z3():
    return builtin_group("Z2*Z3")


@pytest.fixture(scope="session")
def corpus():
    out = []
    for name, specs in CORPUS:
        oracle = builtin_group(name)
        subgroups = [make_subgroup(oracle, spec) for spec in specs]
        out.append((name, oracle, subgroups))
    return out
