"""The dual 2-complex of an ordered triangulation.

One vertex per tetrahedron, one oriented edge (generator) per glued face
pair, one 2-cell per edge class.  Winding around an edge class spells the
relator word ``r_i``; interleaving the shape letters passed on the way gives
``R_i``.  Smoothing the dual 1-skeleton inside every tetrahedron along a
pair of opposite edges gives the Z, Z' and Z'' curves.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import NZError
from .group_algebra import AlphaMap, Word, eliminate
from .triangulation import (EDGES, KIND_NAMES, SHAPE_SUFFIX, Triangulation,
                            _require_ordered, edge_shape_kind)


@dataclass(frozen=True)
class Generator:
    index: int          # 1-based enumeration index
    name: str
    source: tuple[int, int]   # (tet, face) the dual edge leaves
    target: tuple[int, int]   # (tet, face) the dual edge enters


@dataclass(frozen=True)
class DualComplex:
    num_tets: int
    generators: tuple[Generator, ...]
    tree: frozenset[str]
    face_gen: dict = field(compare=False, hash=False, repr=False)  # (tet, face) -> (name, +1 if leaving)

    @property
    def names(self) -> list[str]:
        return [g.name for g in self.generators]

    @property
    def surviving(self) -> list[str]:
        return [g.name for g in self.generators if g.name not in self.tree]

    def generator(self, name: str) -> Generator:
        return next(g for g in self.generators if g.name == name)

    def inward(self, tet: int) -> list[str]:
        return [g.name for g in self.generators if g.target[0] == tet]

    def crossing(self, tet: int, face: int) -> tuple[str, int]:
        """Letter for leaving ``tet`` through ``face``."""
        name, leaving = self.face_gen[(tet, face)]
        return name, 1 if leaving else -1


def leaves_through(tri: Triangulation, tet: int, face: int) -> bool:
    """Dual edges leave a positive tet through odd faces, a negative one through even faces."""
    return (-1) ** face * tri.orientations[tet] == -1


def build_dual(tri: Triangulation, names: list[str] | None = None) -> DualComplex:
    _require_ordered(tri)
    n = tri.num_tets
    pairs = []
    seen = set()
    for j in range(n):
        for k in range(4):
            if (j, k) in seen:
                continue
            nb, p = tri.glue(j, k)
            seen.update({(j, k), (nb, p[k])})
            pairs.append(((j, k), (nb, p[k])))
    if names is None:
        names = tri.gen_names
    if names is None:
        names = [f"g{i + 1}" for i in range(len(pairs))]
    if len(names) != len(pairs) or len(set(names)) != len(names):
        raise NZError(f"need {len(pairs)} distinct generator names, got {names}")
    gens = []
    face_gen = {}
    for i, ((a, b), name) in enumerate(zip(pairs, names)):
        if leaves_through(tri, *a):
            src, tgt = a, b
        else:
            src, tgt = b, a
        if not leaves_through(tri, *src) or leaves_through(tri, *tgt):
            raise NZError(f"face pair {a} ~ {b} has inconsistent orientation")
        gens.append(Generator(i + 1, name, src, tgt))
        face_gen[src] = (name, True)
        face_gen[tgt] = (name, False)
    # BFS spanning tree from tet 0, lowest-indexed generator first
    visited = {0}
    tree = []
    queue = deque([0])
    while queue:
        j = queue.popleft()
        for g in gens:
            ends = (g.source[0], g.target[0])
            if j in ends:
                other = ends[1] if ends[0] == j else ends[0]
                if other not in visited:
                    visited.add(other)
                    tree.append(g.name)
                    queue.append(other)
    return DualComplex(n, tuple(gens), frozenset(tree), face_gen)


def shape_letter(tet: int, kind: int) -> str:
    return f"z{tet + 1}{SHAPE_SUFFIX[kind]}"


def shape_letters(num_tets: int, kind: int) -> list[str]:
    return [shape_letter(j, kind) for j in range(num_tets)]


@dataclass(frozen=True)
class EdgeWord:
    index: int
    r: Word
    R: Word


def edge_words(tri: Triangulation, dual: DualComplex) -> list[EdgeWord]:
    out = []
    eps = tri.orientations
    for ec in tri.edge_classes:
        r, R = [], []
        for tet, edge, exit_face in ec.members:
            letter = dual.crossing(tet, exit_face)
            R.append((shape_letter(tet, edge_shape_kind(edge, eps[tet])), 1))
            R.append(letter)
            r.append(letter)
        out.append(EdgeWord(ec.index, tuple(r), tuple(R)))
    return out


def kind_edges(kind: int, orientation: int) -> list[tuple[int, int]]:
    return [e for e in EDGES if edge_shape_kind(e, orientation) == kind]


def smoothing_pairs(tri: Triangulation, kind: int) -> list[list[tuple[tuple[int, int], tuple[int, int]]]]:
    """Per tet, the two face pairs joined by the smoothing of ``kind``.

    Each entry is ``((f, f'), edge)``: the two faces containing ``edge``.
    """
    out = []
    for j in range(tri.num_tets):
        pairs = []
        for edge in kind_edges(kind, tri.orientations[j]):
            f0, f1 = (v for v in range(4) if v not in edge)
            pairs.append(((f0, f1), edge))
        out.append(pairs)
    return out


def z_adjacent_pairs(tri: Triangulation, dual: DualComplex | None = None):
    """Per tet, its two Z-adjacent face pairs tagged with (01) or (23)."""
    _require_ordered(tri)
    return smoothing_pairs(tri, 0)


@dataclass
class CurveSystem:
    kind: str
    components: list[Word]
    alphas: list[int] | None = None

    def with_alpha(self, alpha: AlphaMap) -> "CurveSystem":
        return CurveSystem(self.kind, self.components, [alpha(c) for c in self.components])


def smoothing_curves(tri: Triangulation, dual: DualComplex, kind: int | str) -> CurveSystem:
    _require_ordered(tri)
    if isinstance(kind, str):
        kind = KIND_NAMES.index(kind)
    partner = {}
    for j, pairs in enumerate(smoothing_pairs(tri, kind)):
        for (f0, f1), _ in pairs:
            partner[(j, f0)] = f1
            partner[(j, f1)] = f0
    used: dict[str, int] = {}
    components = []
    for g in dual.generators:
        if g.name in used:
            continue
        letters = []
        # cross g forwards, then keep leaving through the partner face
        tet, face = g.target
        letters.append((g.name, 1))
        used[g.name] = 1
        while True:
            out_face = partner[(tet, face)]
            name, sign = dual.crossing(tet, out_face)
            if name == g.name and sign == 1:
                break
            if name in used:
                raise NZError(f"generator {name} met twice by the {KIND_NAMES[kind]}-curves")
            used[name] = 1
            letters.append((name, sign))
            gen = dual.generator(name)
            tet, face = gen.target if sign == 1 else gen.source
        components.append(tuple(letters))
    return CurveSystem(KIND_NAMES[kind], components)


def presentation(tri: Triangulation, dual: DualComplex) -> tuple[list[str], list[Word]]:
    """Surviving generators and relators ``p(r_i)`` of the fundamental group."""
    words = edge_words(tri, dual)
    return dual.surviving, [eliminate(w.r, dual.tree) for w in words]


def check_local_patterns(tri: Triangulation, dual: DualComplex, words: list[EdgeWord] | None = None) -> list[str]:
    """Check the letter patterns around each Z-adjacent face pair.

    With ``a`` the generator entering tet j and ``b`` the one leaving it
    through the pair adjacent to (23), the cyclic words R contain
    ``a z b``, ``z'' b``, ``b^-1 z'``, ``a z'`` and ``z'' a^-1`` (shape letters
    of tet j), and neither ``a``, ``b``, ``z'`` nor ``z''`` of that tet occur
    next to each other in any other way.  The pair adjacent to (01) shows the
    same patterns with z' and z'' exchanged.  Returns failure messages.
    """
    if words is None:
        words = edge_words(tri, dual)
    seen: set = set()
    for w in words:
        n = len(w.R)
        for i in range(n):
            seen.add((w.R[i], w.R[(i + 1) % n]))
            seen.add((w.R[i], w.R[(i + 1) % n], w.R[(i + 2) % n]))
    failures = []
    for j, pairs in enumerate(smoothing_pairs(tri, 0)):
        for (f0, f1), edge in pairs:
            (n0, s0), (n1, s1) = dual.crossing(j, f0), dual.crossing(j, f1)
            if s0 == s1:
                failures.append(f"tet {j} pair {edge}: both faces point the same way")
                continue
            a, b = (n0, n1) if s0 == -1 else (n1, n0)
            z = (shape_letter(j, 0), 1)
            zp, zpp = (shape_letter(j, 1), 1), (shape_letter(j, 2), 1)
            if edge == (0, 1):
                zp, zpp = zpp, zp
            patterns = [((a, 1), z, (b, 1)), (zpp, (b, 1)), ((b, -1), zp), ((a, 1), zp), (zpp, (a, -1))]
            for pat in patterns:
                if pat not in seen:
                    failures.append(f"tet {j} pair {edge}: pattern {pat} missing")
    return failures
