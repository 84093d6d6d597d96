"""Ideal triangulations: parsing, validation, edge classes and orderings.

A triangulation with N tetrahedra stores, for every tetrahedron ``j`` and
face ``k`` (the face opposite vertex ``k``), the neighbouring tetrahedron and
a permutation ``p`` of ``{0,1,2,3}``.  Vertex ``v`` of tetrahedron ``j`` is
identified with vertex ``p[v]`` of the neighbour, so face ``k`` is glued to
face ``p[k]``.  This is the usual neighbour/permutation table format.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property

from .errors import (BadGluing, MalformedInput, NotOrderable, NotOrdered,
                     NotOrientable, NotTorusBoundary)

Perm = tuple[int, int, int, int]

EDGES: tuple[tuple[int, int], ...] = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
IDENTITY: Perm = (0, 1, 2, 3)

# shape kinds: 0 -> z, 1 -> z', 2 -> z''
SHAPE_SUFFIX = ("", "'", "''")
KIND_NAMES = ("Z", "Zp", "Zpp")


def perm_inverse(p: Perm) -> Perm:
    inv = [0] * 4
    for i, v in enumerate(p):
        inv[v] = i
    return tuple(inv)


def perm_compose(p: Perm, q: Perm) -> Perm:
    """Return ``p o q`` (apply ``q`` first)."""
    return tuple(p[q[i]] for i in range(4))


def perm_sign(p: Perm) -> int:
    sign = 1
    for i in range(4):
        for j in range(i + 1, 4):
            if p[i] > p[j]:
                sign = -sign
    return sign


def perm_str(p: Perm) -> str:
    return "".join(str(v) for v in p)


def _parse_perm(s: str) -> Perm:
    if len(s) != 4 or not s.isdigit():
        raise MalformedInput(f"bad permutation {s!r}")
    p = tuple(int(c) for c in s)
    if sorted(p) != [0, 1, 2, 3]:
        raise BadGluing(f"{s!r} is not a permutation of 0123")
    return p


def face_vertices(k: int) -> tuple[int, int, int]:
    return tuple(v for v in range(4) if v != k)


@dataclass(frozen=True)
class EdgeClass:
    """An edge of the triangulation with its cyclic winding.

    ``members[m] = (tet, edge, exit_face)``: the m-th tetrahedron met while
    winding, which of its edges sits on this edge class, and the face through
    which the winding leaves it.
    """
    index: int
    members: tuple[tuple[int, tuple[int, int], int], ...]

    @property
    def valence(self) -> int:
        return len(self.members)


class Triangulation:
    """Face-pairing data of an ideal triangulation, validated on construction."""

    def __init__(self, neighbors, gluings, gen_names=None):
        self.gen_names: tuple[str, ...] | None = tuple(gen_names) if gen_names else None
        self.neighbors: tuple[tuple[int, ...], ...] = tuple(tuple(int(n) for n in row) for row in neighbors)
        self.gluings: tuple[tuple[Perm, ...], ...] = tuple(tuple(tuple(p) for p in row) for row in gluings)
        self._validate()

    # -- construction -----------------------------------------------------

    @property
    def num_tets(self) -> int:
        return len(self.neighbors)

    def _validate(self) -> None:
        n = self.num_tets
        if n == 0:
            raise MalformedInput("triangulation has no tetrahedra")
        if len(self.gluings) != n or any(len(r) != 4 for r in self.neighbors) or any(len(r) != 4 for r in self.gluings):
            raise MalformedInput("every tetrahedron needs 4 neighbours and 4 gluings")
        for j in range(n):
            for k in range(4):
                nb, p = self.neighbors[j][k], self.gluings[j][k]
                if not 0 <= nb < n:
                    raise BadGluing(f"tet {j} face {k}: neighbour {nb} out of range")
                if sorted(p) != [0, 1, 2, 3]:
                    raise BadGluing(f"tet {j} face {k}: {p} is not a permutation")
                if nb == j and p[k] == k and p == IDENTITY:
                    raise BadGluing(f"tet {j} face {k} glued to itself by the identity")
                back_nb = self.neighbors[nb][p[k]]
                back_p = self.gluings[nb][p[k]]
                if back_nb != j or back_p != perm_inverse(p):
                    raise BadGluing(f"gluing of tet {j} face {k} is not an involution")
        if len(self.edge_classes) != n:
            raise NotTorusBoundary(f"{len(self.edge_classes)} edge classes for {n} tetrahedra")
        for chi in self.vertex_link_euler_characteristics:
            if chi != 0:
                raise NotTorusBoundary(f"vertex link has Euler characteristic {chi}")
        if self.gen_names is not None and (len(self.gen_names) != 2 * n
                                           or len(set(self.gen_names)) != 2 * n):
            raise MalformedInput(f"'gens' must list {2 * n} distinct names")

    def glue(self, tet: int, face: int) -> tuple[int, Perm]:
        return self.neighbors[tet][face], self.gluings[tet][face]

    def __eq__(self, other):
        return (isinstance(other, Triangulation) and self.neighbors == other.neighbors
                and self.gluings == other.gluings)

    def __hash__(self):
        return hash((self.neighbors, self.gluings))

    def __repr__(self):
        return f"Triangulation(num_tets={self.num_tets}, ordered={self.ordered})"

    # -- combinatorics ----------------------------------------------------

    @property
    def ordered(self) -> bool:
        return is_ordered(self)

    @cached_property
    def orientations(self) -> tuple[int, ...] | None:
        """Relative orientation sign of each tetrahedron, tet 0 being +1.

        ``None`` for a non-orientable triangulation.  A gluing is orientation
        reversing iff ``eps[j] * eps[j'] == -sign(p)``.
        """
        eps = [0] * self.num_tets
        eps[0] = 1
        stack = [0]
        while stack:
            j = stack.pop()
            for k in range(4):
                nb, p = self.glue(j, k)
                want = -perm_sign(p) * eps[j]
                if eps[nb] == 0:
                    eps[nb] = want
                    stack.append(nb)
                elif eps[nb] != want:
                    return None
        if 0 in eps:
            raise MalformedInput("triangulation is not connected")
        return tuple(eps)

    @cached_property
    def edge_classes(self) -> tuple[EdgeClass, ...]:
        return tuple(_compute_edge_classes(self))

    @cached_property
    def edge_class_of(self) -> dict[tuple[int, tuple[int, int]], int]:
        return {(tet, edge): ec.index for ec in self.edge_classes for tet, edge, _ in ec.members}

    @cached_property
    def vertex_link_euler_characteristics(self) -> tuple[int, ...]:
        return tuple(_vertex_links(self))

    @property
    def num_cusps(self) -> int:
        return len(self.vertex_link_euler_characteristics)

    # -- serialization ----------------------------------------------------

    def to_text(self) -> str:
        lines = [f"tets {self.num_tets}"]
        for j in range(self.num_tets):
            nbrs = " ".join(str(n) for n in self.neighbors[j])
            perms = " ".join(perm_str(p) for p in self.gluings[j])
            lines.append(f"tet {j}: nbrs {nbrs} glue {perms}")
        if self.gen_names:
            lines.append("gens " + " ".join(self.gen_names))
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        data = {"tets": self.num_tets,
                "gluings": [[[self.neighbors[j][k], perm_str(self.gluings[j][k])] for k in range(4)]
                            for j in range(self.num_tets)]}
        if self.gen_names:
            data["gens"] = list(self.gen_names)
        return data


def _exit_face(tri: Triangulation, tet: int, edge: tuple[int, int]) -> int:
    """Face through which the winding around ``edge`` leaves ``tet``.

    For the oriented edge a -> b (a < b) with remaining vertices c, d the
    winding crosses face d (spanned by a, b, c) when ``(a, b, c, d)`` has the
    same parity as the tetrahedron's orientation; this fixes one rotation
    sense around every edge of an oriented triangulation.
    """
    a, b = edge
    c, d = (v for v in range(4) if v not in edge)
    eps = tri.orientations
    s = eps[tet] if eps is not None else 1
    return d if perm_sign((a, b, c, d)) == s else c


def _compute_edge_classes(tri: Triangulation) -> list[EdgeClass]:
    seen: set[tuple[int, tuple[int, int]]] = set()
    classes = []
    for tet in range(tri.num_tets):
        for edge in EDGES:
            if (tet, edge) in seen:
                continue
            members = []
            j, e = tet, edge
            exit_face = _exit_face(tri, j, e)
            # the walk may enter an edge with reversed vertex order only for
            # unordered input; track the actual (unsorted) images
            a, b = e
            while True:
                key = (j, tuple(sorted((a, b))))
                if key in seen:
                    if key != (tet, edge):
                        raise BadGluing("edge winding does not close up")
                    break
                seen.add(key)
                members.append((j, key[1], exit_face))
                other = next(v for v in range(4) if v not in (a, b, exit_face))
                nb, p = tri.glue(j, exit_face)
                j, a, b = nb, p[a], p[b]
                exit_face = p[other]
            if (j, tuple(sorted((a, b)))) != (tet, edge):
                raise BadGluing("edge winding does not close up")
            classes.append(EdgeClass(len(classes), tuple(members)))
    return classes


def _vertex_links(tri: Triangulation) -> list[int]:
    """Euler characteristic of each vertex link, in vertex-class order."""
    n = tri.num_tets
    parent: dict = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    # vertices (j, v) and oriented edge ends (j, v, w): end at v of edge vw
    for j in range(n):
        for k in range(4):
            nb, p = tri.glue(j, k)
            for v in face_vertices(k):
                union(("v", j, v), ("v", nb, p[v]))
                for w in face_vertices(k):
                    if w != v:
                        union(("e", j, v, w), ("e", nb, p[v], p[w]))
    chis: dict = {}
    for j in range(n):
        for v in range(4):
            root = find(("v", j, v))
            chis.setdefault(root, {"F": 0, "V": set()})
            chis[root]["F"] += 1
            for w in range(4):
                if w != v:
                    chis[root]["V"].add(find(("e", j, v, w)))
    out = []
    for root in sorted(chis, key=lambda r: (r[1], r[2])):
        F = chis[root]["F"]
        out.append(len(chis[root]["V"]) - 3 * F // 2 + F)
    return out


# -- parsing -------------------------------------------------------------

def parse_triangulation(text: str) -> Triangulation:
    """Parse the plain-text table format or its JSON twin."""
    stripped = text.strip()
    if not stripped:
        raise MalformedInput("empty triangulation file")
    if stripped.startswith("{"):
        return _parse_json(stripped)
    return _parse_text(stripped)


def _parse_json(text: str) -> Triangulation:
    try:
        data = json.loads(text)
        n = int(data["tets"])
        rows = data["gluings"]
        if len(rows) != n:
            raise MalformedInput(f"expected {n} gluing rows, got {len(rows)}")
        neighbors = [[int(entry[0]) for entry in row] for row in rows]
        gluings = [[_parse_perm(str(entry[1])) for entry in row] for row in rows]
        names = data.get("gens")
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise MalformedInput(f"bad JSON triangulation: {exc}") from exc
    return Triangulation(neighbors, gluings, names)


def _parse_text(text: str) -> Triangulation:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    head = lines[0].split()
    if len(head) != 2 or head[0] != "tets" or not head[1].isdigit():
        raise MalformedInput(f"expected 'tets <N>', got {lines[0]!r}")
    n = int(head[1])
    if n == 0:
        raise MalformedInput("triangulation has no tetrahedra")
    rows: dict[int, tuple[list[int], list[Perm]]] = {}
    names = None
    for ln in lines[1:]:
        if ln.startswith("gens"):
            names = ln.split()[1:]
            continue
        toks = ln.replace(":", " : ").split()
        try:
            if toks[0] != "tet" or toks[2] != ":" or toks[3] != "nbrs" or toks[8] != "glue" or len(toks) != 13:
                raise ValueError
            j = int(toks[1])
            nbrs = [int(t) for t in toks[4:8]]
        except (ValueError, IndexError):
            raise MalformedInput(f"cannot parse line {ln!r}") from None
        if j in rows or not 0 <= j < n:
            raise MalformedInput(f"bad or repeated tetrahedron index {j}")
        rows[j] = (nbrs, [_parse_perm(t) for t in toks[9:13]])
    if len(rows) != n:
        raise MalformedInput(f"expected {n} tetrahedra, got {len(rows)}")
    return Triangulation([rows[j][0] for j in range(n)], [rows[j][1] for j in range(n)], names)


def load_triangulation(path) -> Triangulation:
    try:
        with open(path) as fh:
            text = fh.read()
    except UnicodeDecodeError as exc:
        raise MalformedInput(str(exc)) from exc
    return parse_triangulation(text)


# -- orderings -----------------------------------------------------------

def _monotone_on_face(p: Perm, k: int) -> bool:
    a, b, c = face_vertices(k)
    return p[a] < p[b] < p[c]


def is_ordered(tri: Triangulation) -> bool:
    return all(_monotone_on_face(tri.gluings[j][k], k)
               for j in range(tri.num_tets) for k in range(4))


def relabel(tri: Triangulation, relabelings) -> Triangulation:
    """Apply vertex relabelings: old vertex ``v`` of tet ``j`` becomes ``s_j[v]``."""
    n = tri.num_tets
    neighbors = [[0] * 4 for _ in range(n)]
    gluings = [[IDENTITY] * 4 for _ in range(n)]
    for j in range(n):
        s = relabelings[j]
        for k in range(4):
            nb, p = tri.glue(j, k)
            neighbors[j][s[k]] = nb
            gluings[j][s[k]] = perm_compose(relabelings[nb], perm_compose(p, perm_inverse(s)))
    return Triangulation(neighbors, gluings)


def renumber(tri: Triangulation, order) -> Triangulation:
    """Reorder tetrahedra: new tet ``i`` is old tet ``order[i]``."""
    new_index = {old: new for new, old in enumerate(order)}
    neighbors = [[new_index[tri.neighbors[old][k]] for k in range(4)] for old in order]
    gluings = [list(tri.gluings[old]) for old in order]
    return Triangulation(neighbors, gluings)


def find_ordering(tri: Triangulation) -> Triangulation:
    """Lexicographically first relabeling making every gluing order-preserving."""
    n = tri.num_tets
    perms = list(itertools.permutations(range(4)))
    chosen: list[Perm | None] = [None] * n

    def consistent(j: int) -> bool:
        s = chosen[j]
        for k in range(4):
            nb, p = tri.glue(j, k)
            t = chosen[nb]
            if t is None or nb > j:
                continue
            # new gluing from tet j's face s[k]
            q = perm_compose(t, perm_compose(p, perm_inverse(s)))
            if not _monotone_on_face(q, s[k]):
                return False
        return True

    def search(j: int) -> bool:
        if j == n:
            return True
        for s in perms:
            chosen[j] = s
            if consistent(j) and search(j + 1):
                return True
        chosen[j] = None
        return False

    if not search(0):
        raise NotOrderable("no vertex ordering makes every gluing order-preserving")
    if all(s == IDENTITY for s in chosen):
        return tri
    return relabel(tri, chosen)


# -- shapes and gluing matrices -----------------------------------------

def edge_shape_kind(edge: tuple[int, int], orientation: int = 1) -> int:
    """Shape kind (0, 1, 2 for z, z', z'') carried by an edge of an ordered tet.

    Edges (01), (23) carry z.  On a positively oriented tetrahedron (03), (12)
    carry z' and (02), (13) carry z''; negative tetrahedra swap the last two.
    """
    if edge in ((0, 1), (2, 3)):
        return 0
    primed = 1 if edge in ((0, 3), (1, 2)) else 2
    return primed if orientation > 0 else 3 - primed


def _require_ordered(tri: Triangulation) -> None:
    if not tri.ordered:
        raise NotOrdered("triangulation is not ordered; run find_ordering first")
    if tri.orientations is None:
        raise NotOrientable("ordered pipeline needs an orientable triangulation")


def shape_assignment(tri: Triangulation) -> list[dict[tuple[int, int], int]]:
    _require_ordered(tri)
    return [{e: edge_shape_kind(e, tri.orientations[j]) for e in EDGES} for j in range(tri.num_tets)]


@dataclass(frozen=True)
class GluingMatrices:
    G: list[list[int]]
    Gp: list[list[int]]
    Gpp: list[list[int]]

    @property
    def A(self) -> list[list[int]]:
        return [[g - gp for g, gp in zip(r, rp)] for r, rp in zip(self.G, self.Gp)]

    @property
    def B(self) -> list[list[int]]:
        return [[gpp - gp for gpp, gp in zip(r, rp)] for r, rp in zip(self.Gpp, self.Gp)]

    def by_kind(self, kind: int) -> list[list[int]]:
        return (self.G, self.Gp, self.Gpp)[kind]


def classical_gluing_matrices(tri: Triangulation) -> GluingMatrices:
    shapes = shape_assignment(tri)
    n = tri.num_tets
    mats = [[[0] * n for _ in range(n)] for _ in range(3)]
    for (tet, edge), i in tri.edge_class_of.items():
        mats[shapes[tet][edge]][i][tet] += 1
    return GluingMatrices(*mats)
