"""Exact semidirect-product model of a multitwist commuting with H.

A finite group H permutes a finite curve family A.  Twists about the curves
generate a free abelian group Z^A, and conjugation by h permutes twist
coordinates: h * t_alpha * h^-1 = t_{h.alpha}.  The model is therefore the
semidirect product Z^A x| H with multiplication

    (v, h) * (w, k) = (v + h.w, h*k),      (h.w)[h(i)] = w[i].

The full multitwist T is the all-ones vector; its coordinate vector is
invariant under every permutation, so T commutes with all of H, and the
pure twists commuting with all of H are exactly the H-invariant vectors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import InputError, ParseError
from .groups import MultiplicationTable


@dataclass(frozen=True, eq=False)
class PermutationAction:
    """A finite group (by table) acting on curve labels by permutations."""

    labels: tuple[str, ...]
    table: MultiplicationTable
    perms: tuple[tuple[int, ...], ...]  # perms[e][i] = image of label i under e

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise InputError("curve labels must be distinct")
        if not self.labels:
            raise InputError("curve family must be nonempty")
        n = len(self.labels)
        if len(self.perms) != self.table.order:
            raise InputError("one permutation per group element is required")
        for name, perm in zip(self.table.names, self.perms):
            if sorted(perm) != list(range(n)):
                raise InputError(f"images of {name!r} are not a permutation")
        if self.perms[0] != tuple(range(n)):
            raise InputError("the identity must act trivially")
        for g in range(self.table.order):
            for h in range(self.table.order):
                composed = tuple(self.perms[g][self.perms[h][i]] for i in range(n))
                if composed != self.perms[self.table.mult(g, h)]:
                    raise InputError(
                        "not a homomorphism: perm(g*h) != perm(g) o perm(h) at "
                        f"({self.table.names[g]}, {self.table.names[h]})"
                    )

    @property
    def family_size(self) -> int:
        return len(self.labels)

    def element_index(self, name: str) -> int:
        try:
            return self.table.names.index(name)
        except ValueError:
            raise InputError(f"unknown group element {name!r}")


def cycle_decomposition(action: PermutationAction, element: int) -> list[tuple[int, ...]]:
    """Disjoint cycles covering the family, each starting at its least label."""
    perm = action.perms[element]
    seen = set()
    cycles = []
    for start in range(action.family_size):
        if start in seen:
            continue
        cycle = [start]
        seen.add(start)
        cur = perm[start]
        while cur != start:
            cycle.append(cur)
            seen.add(cur)
            cur = perm[cur]
        cycles.append(tuple(cycle))
    return cycles


@dataclass(frozen=True)
class SemidirectElement:
    """(exponent vector, group part) with exact integer arithmetic."""

    action: PermutationAction
    vector: tuple[int, ...]
    part: int  # index into the group table

    def __post_init__(self):
        if len(self.vector) != self.action.family_size:
            raise InputError("exponent vector length must match the curve family")
        if not 0 <= self.part < self.action.table.order:
            raise InputError("group part out of range")

    def __mul__(self, other: "SemidirectElement") -> "SemidirectElement":
        if other.action is not self.action:
            raise InputError("elements belong to different actions")
        moved = _permute(self.action.perms[self.part], other.vector)
        vector = tuple(a + b for a, b in zip(self.vector, moved))
        return SemidirectElement(self.action, vector, self.action.table.mult(self.part, other.part))

    def inverse(self) -> "SemidirectElement":
        inv = self.action.table.inverse_index[self.part]
        moved = _permute(self.action.perms[inv], self.vector)
        return SemidirectElement(self.action, tuple(-a for a in moved), inv)

    def is_identity(self) -> bool:
        return self.part == 0 and not any(self.vector)

    def __str__(self) -> str:
        return f"({','.join(map(str, self.vector))}; {self.action.table.names[self.part]})"


def _permute(perm: tuple[int, ...], vector: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(vector)
    for i, v in enumerate(vector):
        out[perm[i]] = v
    return tuple(out)


def identity_element(action: PermutationAction) -> SemidirectElement:
    return SemidirectElement(action, (0,) * action.family_size, 0)


def group_part(action: PermutationAction, element: int) -> SemidirectElement:
    return SemidirectElement(action, (0,) * action.family_size, element)


def pure_twist(action: PermutationAction, vector: Iterable[int]) -> SemidirectElement:
    return SemidirectElement(action, tuple(vector), 0)


def build_T(action: PermutationAction) -> SemidirectElement:
    """The full multitwist: one right twist about every curve of the family."""
    return pure_twist(action, (1,) * action.family_size)


def commutes(x: SemidirectElement, y: SemidirectElement) -> bool:
    return x * y == y * x


def is_invariant_vector(action: PermutationAction, vector: tuple[int, ...]) -> bool:
    return all(
        _permute(perm, vector) == tuple(vector) for perm in action.perms
    )


@dataclass(frozen=True)
class Lemma59Report:
    family_size: int
    group_order: int
    multitwist_central: bool
    multitwist_failures: tuple[str, ...]
    characterization_holds: bool
    characterization_witness: Optional[tuple[tuple[int, ...], str]]
    vectors_checked: int

    @property
    def ok(self) -> bool:
        return self.multitwist_central and self.characterization_holds

    def to_record(self) -> dict:
        return {
            "family_size": self.family_size,
            "group_order": self.group_order,
            "multitwist_central": self.multitwist_central,
            "multitwist_failures": list(self.multitwist_failures),
            "characterization_holds": self.characterization_holds,
            "characterization_witness": (
                [list(self.characterization_witness[0]), self.characterization_witness[1]]
                if self.characterization_witness
                else None
            ),
            "vectors_checked": self.vectors_checked,
        }


def verify_multitwist_commutation(action: PermutationAction,
                                  exponent_range: int = 2) -> Lemma59Report:
    """Check that the full multitwist is central over H, and the converse
    characterization: a pure twist commutes with all of H iff its vector is
    H-invariant (exhausted over exponents in [-range, range])."""
    T = build_T(action)
    failures = []
    for e in range(action.table.order):
        if not commutes(T, group_part(action, e)):
            failures.append(action.table.names[e])

    witness = None
    checked = 0
    n = action.family_size
    for vec in itertools.product(range(-exponent_range, exponent_range + 1), repeat=n):
        checked += 1
        twist = pure_twist(action, vec)
        commutes_all = all(
            commutes(twist, group_part(action, e)) for e in range(action.table.order)
        )
        if commutes_all != is_invariant_vector(action, vec):
            kind = "commutes-but-not-invariant" if commutes_all else "invariant-but-not-central"
            witness = (vec, kind)
            break
    return Lemma59Report(
        family_size=n,
        group_order=action.table.order,
        multitwist_central=not failures,
        multitwist_failures=tuple(failures),
        characterization_holds=witness is None,
        characterization_witness=witness,
        vectors_checked=checked,
    )


# built-in demonstration actions

def cyclic_rotation_action(cycle_length: int, fixed: int = 0) -> PermutationAction:
    """Z/n rotating n curve labels, optionally with extra fixed labels."""
    table = MultiplicationTable.cyclic(cycle_length, "g")
    labels = tuple(f"a{i}" for i in range(cycle_length)) + tuple(
        f"f{i}" for i in range(fixed)
    )
    n = len(labels)
    perms = []
    for k in range(cycle_length):
        perm = [(i + k) % cycle_length for i in range(cycle_length)]
        perm += list(range(cycle_length, n))
        perms.append(tuple(perm))
    return PermutationAction(labels=labels, table=table, perms=tuple(perms))


def symmetric3_action() -> PermutationAction:
    """S_3 permuting three curves naturally."""
    perms3 = sorted(itertools.permutations(range(3)))
    names = ["".join(str(i) for i in p) for p in perms3]
    names[names.index("012")] = "id"
    compose = {}
    idx = {p: i for i, p in enumerate(perms3)}
    rows = []
    for p in perms3:
        row = []
        for q in perms3:
            pq = tuple(p[q[i]] for i in range(3))
            row.append(idx[pq])
        rows.append(row)
    # reorder so the identity comes first
    order = [idx[(0, 1, 2)]] + [i for i in range(6) if i != idx[(0, 1, 2)]]
    pos = {old: new for new, old in enumerate(order)}
    names2 = [names[i] for i in order]
    rows2 = [[names2[pos[rows[i][j]]] for j in order] for i in order]
    table = MultiplicationTable(names2, rows2)
    perms = tuple(perms3[i] for i in order)
    return PermutationAction(labels=("x", "y", "z"), table=table, perms=perms)


def parse_action(text: str) -> PermutationAction:
    """Parse the curve-family action format:

        labels x y z
        elements 1 g g2      # first name is the identity
        table
        1 g g2
        g g2 1
        g2 1 g
        end
        perm g x->y y->z z->x
        perm g2 x->z y->x z->y
    """
    labels: Optional[tuple[str, ...]] = None
    names: Optional[list[str]] = None
    rows: list[list[str]] = []
    perm_lines: dict[str, dict[str, str]] = {}
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        line = lines[i].split("#", 1)[0].strip()
        i += 1
        if not line:
            continue
        parts = line.split()
        if parts[0] == "labels":
            labels = tuple(parts[1:])
        elif parts[0] == "elements":
            names = parts[1:]
        elif parts[0] == "table":
            if names is None:
                raise ParseError("table before elements", line=i)
            while i < len(lines):
                row_line = lines[i].split("#", 1)[0].strip()
                i += 1
                if row_line == "end":
                    break
                if row_line:
                    rows.append(row_line.split())
            else:
                raise ParseError("unterminated table (missing 'end')", line=i)
        elif parts[0] == "perm":
            if len(parts) < 2:
                raise ParseError("perm needs a group element name", line=i)
            images = {}
            for chunk in parts[2:]:
                if "->" not in chunk:
                    raise ParseError(f"bad mapping {chunk!r}", line=i)
                src, dst = chunk.split("->", 1)
                images[src] = dst
            perm_lines[parts[1]] = images
        else:
            raise ParseError(f"unknown directive {parts[0]!r}", line=i)
    if labels is None or names is None or not rows:
        raise ParseError("action file needs labels, elements and a table")
    table = MultiplicationTable(names, rows)
    label_idx = {name: j for j, name in enumerate(labels)}
    perms = [tuple(range(len(labels)))]
    for name in names[1:]:
        if name not in perm_lines:
            raise ParseError(f"missing perm line for element {name!r}")
        images = perm_lines[name]
        perm = [None] * len(labels)
        for src, dst in images.items():
            if src not in label_idx or dst not in label_idx:
                raise ParseError(f"unknown label in {src}->{dst}")
            perm[label_idx[src]] = label_idx[dst]
        for j, img in enumerate(perm):
            if img is None:
                perm[j] = j  # unmentioned labels are fixed
        perms.append(tuple(perm))
    extra = set(perm_lines) - set(names[1:])
    if extra:
        raise ParseError(f"perm lines for unknown elements: {sorted(extra)}")
    return PermutationAction(labels=labels, table=table, perms=tuple(perms))
