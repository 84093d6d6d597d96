"""Representations into SL_n(C) and the twisted Alexander pipeline."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (Indivisible, InternalDivisionFailure, MalformedInput,
                     NotARepresentation, NotSL)
from .group_algebra import AlphaMap, GroupRingElem, Word, word
from .laurent import (LaurentPoly, Matrix, det_float, evaluate_matrix,
                      exact_divide, normalize, polish)
from .nz import NZContext

REP_TOL = 1e-9
DIVIDE_TOL = 1e-6


@dataclass
class Representation:
    """Matrices for generators; generators not listed act trivially."""
    dim: int
    matrices: dict[str, np.ndarray]
    tol: float = REP_TOL
    _inverses: dict[str, np.ndarray] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        for g, m in self.matrices.items():
            m = np.asarray(m, dtype=complex)
            if m.shape != (self.dim, self.dim):
                raise MalformedInput(f"matrix for {g} has shape {m.shape}, expected {(self.dim, self.dim)}")
            self.matrices[g] = m

    def gen(self, name: str, sign: int = 1) -> np.ndarray:
        m = self.matrices.get(name)
        if m is None:
            return np.eye(self.dim, dtype=complex)
        if sign == 1:
            return m
        if name not in self._inverses:
            self._inverses[name] = np.linalg.inv(m)
        return self._inverses[name]

    def __call__(self, w: Word) -> np.ndarray:
        out = np.eye(self.dim, dtype=complex)
        for g, e in w:
            out = out @ self.gen(g, e)
        return out

    def is_trivial(self) -> bool:
        eye = np.eye(self.dim)
        return all(np.linalg.norm(m - eye, 2) <= self.tol for m in self.matrices.values())

    def validate(self, relators: list[Word]) -> None:
        for g, m in self.matrices.items():
            d = np.linalg.det(m)
            if abs(d - 1) > self.tol:
                raise NotSL(f"det rho({g}) = {d:.6g}, not 1")
        eye = np.eye(self.dim)
        for i, r in enumerate(relators):
            err = np.linalg.norm(self(r) - eye, 2)
            if err > self.tol:
                raise NotARepresentation(f"relator {i} maps {err:.3g} away from the identity")

    def to_json(self) -> dict:
        return {"dim": self.dim,
                "generators": {g: [[[float(z.real), float(z.imag)] for z in row] for row in m]
                               for g, m in sorted(self.matrices.items())}}


def trivial_representation(dim: int = 1) -> Representation:
    return Representation(dim, {})


def _parse_entry(x) -> complex:
    if isinstance(x, (int, float)):
        return complex(x)
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return complex(float(x[0]), float(x[1]))
    raise MalformedInput(f"bad matrix entry {x!r}; use a number or [re, im]")


def parse_representation(data: dict) -> Representation:
    try:
        dim = int(data["dim"])
        gens = data["generators"]
        mats = {g: np.array([[_parse_entry(x) for x in row] for row in m], dtype=complex)
                for g, m in gens.items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad representation data: {exc}") from exc
    return Representation(dim, mats)


def load_representation(path, relators: list[Word] | None = None) -> Representation:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path}: {exc}") from exc
    rep = parse_representation(data)
    if relators is not None:
        rep.validate(relators)
    return rep


FIG8_RELATORS = [word("g2 g4 g2^-1 g3"), word("g2 g3^-1 g4^-1 g3 g4")]


def fig8_quartic_root() -> complex:
    """Root of 1 - 3n + 5n^2 - 3n^3 + n^4 with positive imaginary part and
    smallest real part."""
    roots = np.roots([1, -3, 5, -3, 1])
    upper = [r for r in roots if r.imag > 0]
    return complex(min(upper, key=lambda r: (r.real, r.imag)))


def fig8_geometric_rep() -> Representation:
    """Geometric SL_2(C) representation of the figure-eight knot group with
    g4 parabolic; g3 is forced by the relator g2 g4 g2^-1 g3."""
    n = fig8_quartic_root()
    u = -(1 - 4 * n ** 2 + n ** 4) / (3 * n + 3 * n ** 3)
    r4 = np.array([[1, 1], [0, 1]], dtype=complex)
    r2 = np.array([[n, 0], [u, 1 / n]], dtype=complex)
    r3 = r2 @ np.linalg.inv(r4) @ np.linalg.inv(r2)
    rep = Representation(2, {"g2": r2, "g3": r3, "g4": r4})
    rep.validate(FIG8_RELATORS)
    return rep


# -- twisted pipeline -----------------------------------------------------

def block(x: GroupRingElem, alpha: AlphaMap, rho: Representation) -> list[list[LaurentPoly]]:
    """n x n Laurent block of sum c t^alpha(w) rho(w)."""
    n = rho.dim
    acc: list[list[dict[int, complex]]] = [[{} for _ in range(n)] for _ in range(n)]
    for w, c in x.terms.items():
        k = alpha(w)
        m = rho(w) * c
        for a in range(n):
            for b in range(n):
                acc[a][b][k] = acc[a][b].get(k, 0) + m[a, b]
    return [[LaurentPoly(acc[a][b]) for b in range(n)] for a in range(n)]


def block_matrix(m: list[list[GroupRingElem]], alpha: AlphaMap, rho: Representation) -> Matrix:
    n = rho.dim
    size = len(m) * n
    out: Matrix = [[LaurentPoly() for _ in range(size)] for _ in range(size)]
    for i, row in enumerate(m):
        for j, x in enumerate(row):
            b = block(x, alpha, rho)
            for a in range(n):
                for c in range(n):
                    out[i * n + a][j * n + c] = b[a][c]
    return out


def curve_factor(mat: np.ndarray, a: int) -> LaurentPoly:
    """det(M t^a - I) as a Laurent polynomial."""
    n = mat.shape[0]
    if a == 0:
        return LaurentPoly.const(complex(np.linalg.det(mat - np.eye(n))))
    # det(sM - I) = det(M) det(sI - M^-1)
    coeffs = np.poly(np.linalg.inv(mat)) * np.linalg.det(mat)
    return LaurentPoly({a * (n - k): complex(c) for k, c in enumerate(coeffs)}).cleaned(1e-12)


def _scale(mat: Matrix) -> float:
    s = 1.0
    for row in mat:
        s *= max(1.0, sum(sum(abs(c) for c in x.coeffs.values()) for x in row))
    return s


@dataclass
class TwistedResult:
    detB: LaurentPoly
    factors: list[LaurentPoly]
    z_alphas: list[int]
    twisted_alexander: LaurentPoly | None
    degenerate: bool = False
    rational: bool = False      # detB / prod(factors) left as a fraction
    checks: dict = field(default_factory=dict)

    @property
    def divisor(self) -> LaurentPoly:
        out = LaurentPoly.const(1)
        for f in self.factors:
            out = out * f
        return out

    def to_json(self) -> dict:
        def enc(p):
            return None if p is None or p.is_zero else polish(normalize(p)).to_json()
        return {"degenerate": self.degenerate,
                "rational": self.rational,
                "detB": enc(self.detB),
                "divisor": enc(self.divisor),
                "curve_factors": [enc(f) for f in self.factors],
                "twisted_alexander": enc(self.twisted_alexander),
                "z_alphas": self.z_alphas,
                "checks": self.checks}


def twisted_alexander(ctx: NZContext, rho: Representation, sample_points: int = 5,
                      seed: int = 0) -> TwistedResult:
    """detB of the (alpha x rho)-twisted B, divided by the Z-curve factors
    det(rho(Z_i) t^alpha(Z_i) - I), made monic.

    A trivial representation need not give a polynomial quotient; the pair is
    then reported with ``rational`` set.
    """
    rho.validate(ctx.relators)
    bm = block_matrix(ctx.twisted.B, ctx.alpha, rho)
    detB = det_float(bm)
    curves = ctx.curves["Z"]
    factors = [curve_factor(rho(c), a) for c, a in zip(curves.components, curves.alphas)]
    checks = {"interpolation": interpolation_check(bm, detB, sample_points, seed)}
    if detB.norm() <= 1e-9 * _scale(bm):
        return TwistedResult(LaurentPoly(), factors, curves.alphas, None, degenerate=True, checks=checks)
    res = TwistedResult(detB, factors, curves.alphas, None, checks=checks)
    divisor = res.divisor
    if divisor.norm() <= 1e-12:
        raise InternalDivisionFailure(f"nonzero detB but a Z-curve factor vanishes (alpha(Z) = {curves.alphas})")
    try:
        res.twisted_alexander = normalize(exact_divide(detB, divisor, DIVIDE_TOL))
    except Indivisible as exc:
        if not rho.is_trivial():
            raise InternalDivisionFailure(f"detB = {normalize(detB)} not divisible by {normalize(divisor)}") from exc
        res.rational = True
    return res


def interpolation_check(bm: Matrix, detB: LaurentPoly, points: int = 5, seed: int = 0) -> bool:
    """Re-evaluate the interpolated determinant at fresh random points."""
    rng = np.random.default_rng(seed)
    for _ in range(points):
        t = complex(rng.uniform(0.6, 1.6) * np.exp(2j * np.pi * rng.uniform()))
        direct = np.linalg.det(evaluate_matrix(bm, t))
        interp = complex(detB(t))
        if abs(direct - interp) > 1e-8 * max(1.0, abs(direct)):
            return False
    return True


def trivial_consistency(ctx: NZContext, exact_detB: LaurentPoly, dim: int = 1) -> bool:
    """Trivial n-dim representation: detB equals the n-th power of the untwisted
    detB, after clearing float noise."""
    res = twisted_alexander(ctx, trivial_representation(dim))
    if res.degenerate:
        return exact_detB.is_zero
    try:
        rounded = res.detB.rounded(1e-6)
    except ValueError:
        return False
    return rounded == exact_detB ** dim
