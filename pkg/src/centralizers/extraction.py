"""Pigeonhole extraction of centralizing elements, with explicit constants.

The quantitative threshold is N = ((C0+1) * C3^C0 + 1) * C1 * C2^C0, where
C0 bounds finite-subgroup orders, C1 counts vertex orbits of the action,
C2 bounds vertex counts of a-balls and C3 bounds vertex stabilizers.  Once
an almost-fixed set reaches cardinality N, refining it by pigeonhole yields
at least C0+1 elements commuting with every element of H, hence an infinite
centralizer.  The extraction below realizes that refinement exactly and
emits each element with a full commutation transcript.

Convention note: the group acts on its Cayley graph by right multiplication
(see groups module), so the transporter taking p_1 to p_i is g_i = p_1^-1 *
p_i, the pigeonhole key for h is the vertex p_i * h * g_i^-1 (equivalently
the conjugate p_i * h * p_i^-1), and certificates take the form g_i^-1 * g_c
= p_i^-1 * p_c.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import BudgetError, InputError
from .fixpoints import ActionContext, AlmostFixedSet, CayleyContext
from .graphs import bfs_distances
from .groups import DirectProductOracle, FiniteSubgroup, GroupElement, GroupOracle


@dataclass(frozen=True)
class ConstantsReport:
    c0: int
    c1: int
    c2: int
    c3: int
    a: int
    delta: Fraction
    n: int
    d: Fraction
    formula: str  # "cayley" (D = N + 12*delta + 4) or "surface" (+ 10)

    def to_record(self) -> dict:
        return {
            "C0": self.c0,
            "C1": self.c1,
            "C2": self.c2,
            "C3": self.c3,
            "a": self.a,
            "delta": str(self.delta),
            "N": self.n,
            "D": str(self.d),
            "formula": self.formula,
        }


def compute_constants(c0: int, c1: int, c2: int, c3: int, delta,
                      a: int = 0, formula: str = "cayley") -> ConstantsReport:
    """Exact N = ((C0+1)*C3^C0 + 1)*C1*C2^C0 and D = N + 12*delta + offset."""
    for name, value in (("C0", c0), ("C1", c1), ("C2", c2), ("C3", c3)):
        if not isinstance(value, int) or value < 1:
            raise InputError(f"{name} must be a positive integer, got {value!r}")
    delta = Fraction(delta)
    if delta < 0:
        raise InputError("delta must be >= 0")
    if formula not in ("cayley", "surface"):
        raise InputError(f"unknown D formula {formula!r}")
    n = ((c0 + 1) * c3 ** c0 + 1) * c1 * c2 ** c0
    offset = 4 if formula == "cayley" else 10
    return ConstantsReport(
        c0=c0, c1=c1, c2=c2, c3=c3, a=a, delta=delta,
        n=n, d=n + 12 * delta + offset, formula=formula,
    )


def measure_constants(ctx: ActionContext, a: int) -> tuple[int, int, int]:
    """(C1, C2, C3) for the window's action.

    C2 is measured as the largest vertex count of an a-ball around a core
    vertex (one whose a-ball provably stays inside the window).  For Cayley
    contexts the action is simply transitive, so C1 = C3 = 1 structurally.
    """
    if a < 0:
        raise InputError("a must be >= 0")
    if not isinstance(ctx, CayleyContext):
        raise InputError(
            "measure_constants supports Cayley contexts only; the Farey window's "
            "matrix action has infinite vertex stabilizers"
        )
    ball = ctx.ball
    core = [v for v in range(ball.size) if ball.lengths[v] + a <= ball.radius]
    if not core:
        raise BudgetError(
            f"window radius {ball.radius} too small to measure a={a} balls",
            radius_reached=ball.radius,
        )
    c2 = 0
    for p in core:
        dist = bfs_distances(ctx.graph, p)
        c2 = max(c2, sum(1 for d in dist if 0 <= d <= a))
    return 1, c2, 1


@dataclass(frozen=True)
class OrderReport:
    kind: str  # "finite" | "exceeds" | "infinite"
    value: Optional[int]

    def to_record(self) -> dict:
        return {"kind": self.kind, "value": self.value}


def order_lower_bound(oracle: GroupOracle, z: GroupElement, m: int = 64) -> OrderReport:
    """Least k <= m with z^k = 1, else "exceeds m"; exact infinitude when the
    free projection of a direct-product element is nontrivial."""
    if m < 1:
        raise InputError("order-check bound must be >= 1")
    if isinstance(oracle, DirectProductOracle):
        if not oracle.free_projection(z).is_identity():
            return OrderReport("infinite", None)
    power = z
    for k in range(1, m + 1):
        if power.is_identity():
            return OrderReport("finite", k)
        power = oracle.multiply(power, z)
    return OrderReport("exceeds", m)


@dataclass(frozen=True)
class Transcript:
    entries: tuple[tuple[GroupElement, GroupElement, GroupElement, bool], ...]

    @property
    def ok(self) -> bool:
        return all(e[3] for e in self.entries)

    def to_record(self) -> dict:
        return {
            "entries": [
                {"h": str(h), "zh": str(zh), "hz": str(hz), "equal": eq}
                for h, zh, hz, eq in self.entries
            ],
            "ok": self.ok,
        }


def verify_centralizer(oracle: GroupOracle, z: GroupElement,
                       subgroup: FiniteSubgroup) -> Transcript:
    """Per-h commutation check by canonical forms; all-pass means z centralizes H."""
    entries = []
    for h in subgroup:
        zh = oracle.multiply(z, h)
        hz = oracle.multiply(h, z)
        entries.append((h, zh, hz, zh == hz))
    return Transcript(tuple(entries))


@dataclass(frozen=True)
class CentralizerCertificate:
    element: GroupElement
    provenance: tuple[GroupElement, GroupElement]  # (p_i, p_c)
    transcript: Transcript
    order: OrderReport
    trivial: bool

    def to_record(self) -> dict:
        return {
            "element": str(self.element),
            "provenance": [str(p) for p in self.provenance],
            "verified": self.transcript.ok,
            "order": self.order.to_record(),
            "trivial": self.trivial,
        }


@dataclass(frozen=True)
class ExtractionResult:
    certificates: tuple[CentralizerCertificate, ...]
    class_size: int
    paths_agree: Optional[bool]

    @property
    def nontrivial(self) -> tuple[CentralizerCertificate, ...]:
        return tuple(c for c in self.certificates if not c.trivial)


def _largest_class(groups: dict, member_key) -> list:
    """Largest class; ties broken by the class holding the least member."""
    return min(groups.values(), key=lambda idxs: (-len(idxs), min(member_key(i) for i in idxs)))


def _general_path(ctx: CayleyContext, subgroup: FiniteSubgroup,
                  members: list[int]) -> tuple[list[GroupElement], GroupElement]:
    """Full refinement: orbit class, transporter pigeonhole, stabilizer cosets."""
    oracle = ctx.oracle
    verts = ctx.ball.vertices
    mkey = lambda i: oracle.key(verts[i])

    # (1) partition by G-orbit: right multiplication is transitive, one class.
    cls = sorted(members, key=mkey)
    p1 = verts[cls[0]]
    p1_inv = oracle.invert(p1)
    transporter = {i: oracle.multiply(p1_inv, verts[i]) for i in cls}  # g_i

    # (2)-(3) refine by the pigeonhole value p_i * h_t * g_i^-1 in B(p_1, a)
    current = cls
    for h in subgroup:
        groups: dict = {}
        for i in current:
            value = oracle.multiply(
                oracle.multiply(verts[i], h), oracle.invert(transporter[i])
            )
            groups.setdefault(oracle.key(value), []).append(i)
        current = _largest_class(groups, mkey)

    # (4) refine by stabilizer cosets at the base point b.
    b = min(current, key=mkey)
    gb = transporter[b]
    gb_inv = oracle.invert(gb)
    for h in subgroup:
        h_inv = oracle.invert(h)
        groups = {}
        for i in current:
            gi = transporter[i]
            w = oracle.multiply(
                oracle.multiply(
                    oracle.multiply(gb_inv, oracle.multiply(gi, h)),
                    oracle.invert(gi),
                ),
                oracle.multiply(gb, h_inv),
            )
            groups.setdefault(oracle.key(w), []).append(i)
        current = _largest_class(groups, mkey)

    # (5) emit g_i^-1 * g_c over the final class.
    c = min(current, key=mkey)
    gc = transporter[c]
    out = []
    for i in sorted(current, key=mkey):
        out.append((oracle.multiply(oracle.invert(transporter[i]), gc), verts[i]))
    return out, verts[c]


def _specialized_path(ctx: CayleyContext, subgroup: FiniteSubgroup,
                      members: list[int]) -> tuple[list[GroupElement], GroupElement]:
    """Free Cayley shortcut: group by the conjugation vector (p*h*p^-1)_h.

    Refinement is greedy per coordinate with the same tie-breaks as the
    general path, so the two must select the same pigeonhole class.
    """
    oracle = ctx.oracle
    verts = ctx.ball.vertices
    mkey = lambda i: oracle.key(verts[i])
    conj = {
        i: {
            h: oracle.multiply(oracle.multiply(verts[i], h), oracle.invert(verts[i]))
            for h in subgroup
        }
        for i in members
    }
    cls = sorted(members, key=mkey)
    for h in subgroup:
        groups: dict = {}
        for i in cls:
            groups.setdefault(oracle.key(conj[i][h]), []).append(i)
        cls = _largest_class(groups, mkey)
    c = min(cls, key=mkey)
    pc = verts[c]
    out = []
    for i in sorted(cls, key=mkey):
        out.append((oracle.multiply(oracle.invert(verts[i]), pc), verts[i]))
    return out, pc


def extract_centralizers(ctx: ActionContext, subgroup: FiniteSubgroup,
                         afp: AlmostFixedSet, m: int = 64) -> ExtractionResult:
    """Run both refinement paths, assert agreement, verify every certificate.

    An empty result (final class a singleton) is a valid outcome: the window
    simply did not contain enough coherent almost-fixed points.
    """
    if not isinstance(ctx, CayleyContext):
        raise InputError("extraction is defined for Cayley contexts")
    if not afp.members:
        raise InputError("the almost-fixed set is empty")
    oracle = ctx.oracle
    members = list(afp.members)

    general, pc_general = _general_path(ctx, subgroup, members)
    special, pc_special = _specialized_path(ctx, subgroup, members)
    agree = (
        sorted(oracle.key(z) for z, _ in general)
        == sorted(oracle.key(z) for z, _ in special)
        and pc_general == pc_special
    )
    if not agree:
        raise AssertionError(
            "general and specialized extraction paths disagree on a Cayley input"
        )

    if len(general) <= 1:
        return ExtractionResult(certificates=(), class_size=len(general), paths_agree=agree)

    seen = set()
    certificates = []
    for z, origin in general:
        k = oracle.key(z)
        if k in seen:
            continue
        seen.add(k)
        transcript = verify_centralizer(oracle, z, subgroup)
        if not transcript.ok:
            raise AssertionError(
                f"extracted element {z} failed commutation verification"
            )
        certificates.append(
            CentralizerCertificate(
                element=z,
                provenance=(origin, pc_general),
                transcript=transcript,
                order=order_lower_bound(oracle, z, m),
                trivial=z.is_identity(),
            )
        )
    certificates.sort(key=lambda c: oracle.key(c.element))
    return ExtractionResult(
        certificates=tuple(certificates),
        class_size=len(general),
        paths_agree=agree,
    )
