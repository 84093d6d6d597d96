"""Free groups, integral group rings, Fox calculus and abelianization.

Words are tuples of ``(generator, exponent)`` letters with exponent +1 or
-1; generators are plain strings such as ``"g3"`` or ``"z1''"``.  Group ring
elements keep a canonical ``{word: coefficient}`` map with no zero terms.
"""
from __future__ import annotations

from math import gcd
from typing import Iterable, Mapping

from .errors import NoKernel, RankDeficient

Letter = tuple[str, int]
Word = tuple[Letter, ...]

IDENTITY: Word = ()


def reduce_word(letters: Iterable[Letter]) -> Word:
    out: list[Letter] = []
    for g, e in letters:
        if e not in (1, -1):
            raise ValueError(f"exponent {e} is not +-1")
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def word(*tokens: str) -> Word:
    """Build a word from tokens like ``"g3"`` and ``"g4^-1"``."""
    letters = []
    for tok in tokens:
        for piece in tok.split():
            if piece.endswith("^-1"):
                letters.append((piece[:-3], -1))
            else:
                letters.append((piece, 1))
    return reduce_word(letters)


def mul(u: Word, v: Word) -> Word:
    return reduce_word(u + v)


def inv(w: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(w))


def cyclic_reduce(w: Word) -> Word:
    w = reduce_word(w)
    while len(w) >= 2 and w[0][0] == w[-1][0] and w[0][1] == -w[-1][1]:
        w = w[1:-1]
    return w


def word_str(w: Word) -> str:
    if not w:
        return "1"
    return " ".join(g if e == 1 else f"{g}^-1" for g, e in w)


def exponent_sum(w: Word, gen: str) -> int:
    return sum(e for g, e in w if g == gen)


def generators_of(w: Word) -> set[str]:
    return {g for g, _ in w}


class GroupRingElem:
    """Finite integer (or real) combination of free-group words."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Word, int] | None = None):
        clean = {}
        for w, c in (terms or {}).items():
            w = reduce_word(w)
            c = clean.get(w, 0) + c
            if c:
                clean[w] = c
            else:
                clean.pop(w, None)
        self.terms: dict[Word, int] = clean

    @classmethod
    def from_word(cls, w: Word, coeff=1) -> "GroupRingElem":
        return cls({w: coeff})

    @classmethod
    def one(cls) -> "GroupRingElem":
        return cls({IDENTITY: 1})

    @classmethod
    def zero(cls) -> "GroupRingElem":
        return cls()

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = GroupRingElem({IDENTITY: other}) if other else GroupRingElem()
        return isinstance(other, GroupRingElem) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if isinstance(other, int):
            other = GroupRingElem({IDENTITY: other})
        terms = dict(self.terms)
        for w, c in other.terms.items():
            terms[w] = terms.get(w, 0) + c
        return GroupRingElem(terms)

    __radd__ = __add__

    def __neg__(self):
        return GroupRingElem({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, GroupRingElem) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return GroupRingElem({w: c * other for w, c in self.terms.items()})
        terms: dict[Word, int] = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                w = mul(u, v)
                terms[w] = terms.get(w, 0) + a * b
        return GroupRingElem(terms)

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self * other
        return NotImplemented

    def involution(self) -> "GroupRingElem":
        """gamma -> gamma^-1, extended linearly."""
        return GroupRingElem({inv(w): c for w, c in self.terms.items()})

    def augment(self):
        return sum(self.terms.values())

    def map_words(self, f) -> "GroupRingElem":
        terms: dict[Word, int] = {}
        for w, c in self.terms.items():
            w2 = f(w)
            terms[w2] = terms.get(w2, 0) + c
        return GroupRingElem(terms)

    def sorted_terms(self) -> list[tuple[Word, int]]:
        return sorted(self.terms.items(), key=lambda wc: (len(wc[0]), wc[0]))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.sorted_terms():
            ws = word_str(w)
            if ws == "1":
                parts.append(str(c))
            elif c == 1:
                parts.append(ws)
            elif c == -1:
                parts.append(f"-{ws}")
            else:
                parts.append(f"{c}*{ws}")
        return " + ".join(parts).replace("+ -", "- ")


def augment(x: GroupRingElem):
    return x.augment()


def fox_derivative(w: Word, gen: str) -> GroupRingElem:
    """Left Fox derivative: d(uv) = du + u dv, dg/dg = 1, dg^-1/dg = -g^-1."""
    terms: dict[Word, int] = {}
    prefix: list[Letter] = []
    for g, e in w:
        if g == gen:
            if e == 1:
                key = reduce_word(prefix)
                terms[key] = terms.get(key, 0) + 1
            else:
                key = reduce_word(prefix + [(g, -1)])
                terms[key] = terms.get(key, 0) - 1
        prefix.append((g, e))
    return GroupRingElem(terms)


def eliminate(w: Word, killed) -> Word:
    """Set every generator in ``killed`` to the identity and reduce."""
    return reduce_word(l for l in w if l[0] not in killed)


def eliminate_elem(x: GroupRingElem, killed) -> GroupRingElem:
    return x.map_words(lambda w: eliminate(w, killed))


# -- abelianization -----------------------------------------------------

class AlphaMap:
    """Homomorphism to the integers given by values on generators."""

    def __init__(self, values: Mapping[str, int]):
        self.values = dict(values)

    def __call__(self, w: Word) -> int:
        return sum(self.values.get(g, 0) * e for g, e in w)

    def __getitem__(self, gen: str) -> int:
        return self.values.get(gen, 0)

    def __eq__(self, other):
        return isinstance(other, AlphaMap) and {k: v for k, v in self.values.items() if v} == \
            {k: v for k, v in other.values.items() if v}

    def __neg__(self):
        return AlphaMap({g: -v for g, v in self.values.items()})

    def __repr__(self):
        return "AlphaMap(" + ", ".join(f"{g}={v}" for g, v in self.values.items()) + ")"

    def kills(self, relators) -> bool:
        return all(self(r) == 0 for r in relators)

    @classmethod
    def parse(cls, text: str) -> "AlphaMap":
        """Parse ``"g2=0,g3=-1,g4=1"``."""
        values = {}
        for item in text.split(","):
            item = item.strip()
            if not item:
                continue
            name, _, val = item.partition("=")
            values[name.strip()] = int(val)
        return cls(values)


def integer_kernel(rows: list[list[int]], ncols: int) -> list[list[int]]:
    """Basis of the integer kernel of ``rows`` (an m x ncols matrix).

    Column operations by unimodular moves bring the matrix to column echelon
    form; the accumulated transform's columns past the rank span the kernel.
    """
    m = len(rows)
    a = [list(r) for r in rows]
    u = [[int(i == j) for j in range(ncols)] for i in range(ncols)]  # columns of u track ops

    def col_op(dst, src, q):
        # col[dst] -= q * col[src]
        for r in a:
            r[dst] -= q * r[src]
        for r in u:
            r[dst] -= q * r[src]

    def col_swap(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in u:
            r[i], r[j] = r[j], r[i]

    pivot_col = 0
    for row in range(m):
        if pivot_col >= ncols:
            break
        while True:
            nz = [c for c in range(pivot_col, ncols) if a[row][c] != 0]
            if not nz:
                break
            best = min(nz, key=lambda c: abs(a[row][c]))
            col_swap(pivot_col, best)
            done = True
            for c in range(pivot_col + 1, ncols):
                if a[row][c]:
                    col_op(c, pivot_col, a[row][c] // a[row][pivot_col])
                    if a[row][c]:
                        done = False
            if done:
                pivot_col += 1
                break
    return [[u[i][c] for i in range(ncols)] for c in range(pivot_col, ncols)]


def abelianization(relators: list[Word], generators: list[str], meridian: str | None = None) -> AlphaMap:
    """The map to Z killing every relator, normalized to gcd 1.

    Sign: ``alpha(meridian) = +1`` when a meridian is given, otherwise the
    first nonzero value (in generator order) is positive.
    """
    matrix = [[exponent_sum(r, g) for g in generators] for r in relators]
    kernel = integer_kernel(matrix, len(generators))
    if not kernel:
        raise NoKernel("relator matrix has trivial kernel (b1 = 0)")
    if len(kernel) > 1:
        raise RankDeficient(f"first Betti number {len(kernel)} > 1; supply alpha explicitly")
    vec = kernel[0]
    g = 0
    for v in vec:
        g = gcd(g, v)
    vec = [v // g for v in vec]
    if meridian is not None:
        if meridian not in generators:
            raise ValueError(f"unknown meridian generator {meridian!r}")
        mval = vec[generators.index(meridian)]
        if abs(mval) != 1:
            raise ValueError(f"alpha({meridian}) = {mval}; not a meridian")
        vec = [v * mval for v in vec]
    elif next(v for v in vec if v) < 0:
        vec = [-v for v in vec]
    return AlphaMap(dict(zip(generators, vec)))
