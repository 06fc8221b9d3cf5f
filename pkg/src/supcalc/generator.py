"""Seeded random instance generator with audited structural flags.

Instances are drawn from small rational coefficients so downstream
exact arithmetic stays cheap.  Every requested flag is verified on the
generated family by the same audits the checkers use; a draw that
misses any flag is retried with the advancing generator state, and
exhaustion raises naming the unsatisfied flags.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .calculus import check_qc1, check_qc2
from .errors import GenerationError, InvalidParameterError
from .family import FunctionFamily
from .functions import PolyhedralFunction
from .polyhedron import Polyhedron, interior_point
from .rationals import Vec, zeros

RETRY_BOUND = 32

DOMAIN_KINDS = ("box", "halfspaces", "full-space")
FLAG_NAMES = (
    "force_epi_pointed",
    "force_increasing",
    "force_qc1",
    "force_qc2",
    "break_qc2",
)


@dataclass(frozen=True)
class GeneratorParams:
    dim: int = 1
    member_count: int = 2
    pieces_per_member: int = 2
    domain_kind: str = "box"
    force_epi_pointed: bool = False
    force_increasing: bool = False
    force_qc1: bool = False
    force_qc2: bool = False
    break_qc2: bool = False
    seed: int = 0

    def __post_init__(self) -> None:
        if not 1 <= self.dim <= 4:
            raise InvalidParameterError("dim must be between 1 and 4")
        if not 1 <= self.member_count <= 6:
            raise InvalidParameterError("member_count must be between 1 and 6")
        if not 1 <= self.pieces_per_member <= 5:
            raise InvalidParameterError("pieces_per_member must be between 1 and 5")
        if self.domain_kind not in DOMAIN_KINDS:
            raise InvalidParameterError(f"unknown domain kind {self.domain_kind!r}")
        if not 0 <= self.seed < 2**64:
            raise InvalidParameterError("seed must fit in 64 bits")

    @property
    def flags(self) -> tuple[str, ...]:
        return tuple(name for name in FLAG_NAMES if getattr(self, name))


def _q(rng: random.Random, lo: int, hi: int) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.choice((1, 1, 2)))


def _qvec(rng: random.Random, n: int, lo: int = -3, hi: int = 3) -> Vec:
    return tuple(_q(rng, lo, hi) for _ in range(n))


def _draw_domain(rng: random.Random, params: GeneratorParams) -> Polyhedron:
    n = params.dim
    if params.domain_kind == "full-space":
        return Polyhedron.from_hrep(n, ())
    if params.domain_kind == "box":
        lo = tuple(Fraction(-rng.randint(1, 3)) for _ in range(n))
        hi = tuple(Fraction(rng.randint(1, 3)) for _ in range(n))
        return Polyhedron.box(lo, hi)
    # random halfspaces, kept full-dimensional around a feasible center
    center = _qvec(rng, n, -1, 1)
    rows = []
    for _ in range(n + 2):
        a = _qvec(rng, n)
        while all(c == 0 for c in a):
            a = _qvec(rng, n)
        slack = Fraction(rng.randint(1, 2))
        rows.append((a, sum(x * y for x, y in zip(a, center)) + slack))
    return Polyhedron.from_hrep(n, rows)


def _draw_pieces(rng: random.Random, params: GeneratorParams) -> list[tuple[Vec, Fraction]]:
    count = rng.randint(1, params.pieces_per_member)
    pieces: dict[Vec, Fraction] = {}
    for _ in range(count):
        a = _qvec(rng, params.dim)
        b = _q(rng, -2, 2)
        # keep the higher intercept when slopes repeat
        if a not in pieces or pieces[a] < b:
            pieces[a] = b
    return list(pieces.items())


def _ell1_pieces(rng: random.Random, n: int) -> list[tuple[Vec, Fraction]]:
    # a scaled l1 cone under the graph puts a full box inside dom f*
    scale = Fraction(1, rng.randint(2, 4))
    return [
        (tuple(scale * s for s in signs), Fraction(0))
        for signs in product((-1, 1), repeat=n)
    ]


def _seam(domain: Polyhedron, anchor: Vec) -> Polyhedron:
    row = zeros(domain.dim - 1)
    normal = (Fraction(1),) + row
    return Polyhedron.from_hrep(
        domain.dim, domain.ineqs, list(domain.eqs) + [(normal, anchor[0])]
    )


def _draw(rng: random.Random, params: GeneratorParams) -> FunctionFamily:
    n = params.dim
    domain = _draw_domain(rng, params)
    anchor = interior_point(domain)
    if anchor is None:
        anchor = zeros(n)
    extra = _ell1_pieces(rng, n) if params.force_epi_pointed else []

    members: list[tuple[str, PolyhedralFunction]] = []
    if params.force_increasing:
        base = _draw_pieces(rng, params) + [(zeros(n), Fraction(0))] + extra
        alpha = Fraction(rng.randint(1, 2), rng.choice((1, 2)))
        shift = _q(rng, -2, 2)
        for i in range(params.member_count):
            pieces = [(tuple(alpha * c for c in a), alpha * b + shift)
                      for a, b in base]
            members.append((f"f{i + 1}", PolyhedralFunction.make(n, pieces, domain)))
            alpha += Fraction(rng.randint(1, 2), rng.choice((1, 2)))
            shift += Fraction(rng.randint(0, 2))
        edges = [(f"f{i + 1}", f"f{i + 2}") for i in range(params.member_count - 1)]
    else:
        for i in range(params.member_count):
            pieces = _draw_pieces(rng, params) + extra
            members.append((f"f{i + 1}", PolyhedralFunction.make(n, pieces, domain)))
        edges = []

    if params.break_qc2:
        seam = _seam(domain, anchor)
        for idx in (-2, -1):
            label, fn = members[idx]
            members[idx] = (label, PolyhedralFunction.make(n, list(fn.pieces), seam))

    return FunctionFamily.make(members, order_edges=edges,
                               increasing=params.force_increasing)


def _sample_point(domain: Polyhedron) -> Vec | None:
    if domain.is_empty:
        return None
    if domain.vertices:
        return domain.vertices[0]
    return interior_point(domain)


def _audit(family: FunctionFamily, params: GeneratorParams) -> list[str]:
    failed: list[str] = []
    sup = family.sup
    if params.force_increasing and not family.verify_increasing():
        failed.append("force_increasing")
    if params.force_epi_pointed and any(
        f.is_epi_pointed() is None for _, f in family.members
    ):
        failed.append("force_epi_pointed")
    point = _sample_point(sup.domain) if sup.is_proper else None
    if params.force_qc1 and (point is None or not check_qc1(family, point)):
        failed.append("force_qc1")
    if params.force_qc2 and (point is None or not check_qc2(family, point)):
        failed.append("force_qc2")
    if params.break_qc2 and (point is None or check_qc2(family, point)):
        failed.append("break_qc2")
    return failed


def generate(params: GeneratorParams) -> FunctionFamily:
    """Deterministic draw satisfying the audited flags, or an error."""
    if params.force_qc2 and params.break_qc2:
        raise GenerationError("force_qc2 and break_qc2 are mutually exclusive")
    if params.break_qc2 and params.member_count < 2:
        raise GenerationError("break_qc2 needs at least two members")
    rng = random.Random(params.seed)
    failed: list[str] = []
    for _ in range(RETRY_BOUND):
        family = _draw(rng, params)
        failed = _audit(family, params)
        if not failed:
            return family
    raise GenerationError(
        "generation exhausted retries; unsatisfied flags: " + ", ".join(failed)
    )
