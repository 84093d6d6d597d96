"""Fuglede-Kadison determinant estimates through finite permutation quotients.

A quotient pi -> Sym(k) turns an N x N matrix over R[pi] into an Nk x Nk
real matrix; (1/k) log|det| of that matrix is the finite-level estimate.
Cyclic quotients through alpha see only the abelianization, so their limit
is a Mahler measure of the abelianized determinant, not an L2 torsion.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.linalg

from .errors import MalformedInput, NotARepresentation, NotSquare
from .group_algebra import AlphaMap, GroupRingElem, Word

ElemMatrix = list[list[GroupRingElem]]

PIVOT_REL = 1e-10
KERNEL_REL = 1e-9


@dataclass
class FiniteQuotient:
    """Homomorphism pi -> Sym(k); perms are 0-based images of 0..k-1.

    Generators without a permutation map to the identity.
    """
    degree: int
    perms: dict[str, tuple[int, ...]]
    label: str = ""
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        for g, p in self.perms.items():
            if sorted(p) != list(range(self.degree)):
                raise MalformedInput(f"image of {g} is not a permutation of degree {self.degree}")
            self.perms[g] = tuple(p)

    def __call__(self, w: Word) -> np.ndarray:
        """Permutation of w as an index array: w sends i to out[i].

        Words act on the left, so the last letter is applied first.
        """
        if w in self._cache:
            return self._cache[w]
        out = np.arange(self.degree)
        for g, e in reversed(w):
            p = self.perms.get(g)
            if p is None:
                continue
            p = np.asarray(p)
            if e == -1:
                p = np.argsort(p)
            out = p[out]
        self._cache[w] = out
        return out

    def validate(self, relators: list[Word]) -> None:
        ident = np.arange(self.degree)
        for i, r in enumerate(relators):
            if not np.array_equal(self(r), ident):
                raise NotARepresentation(f"relator {i} is not trivial in the quotient {self.label or self.degree}")

    def to_json(self) -> dict:
        return {"degree": self.degree,
                "generators": {g: [x + 1 for x in p] for g, p in sorted(self.perms.items())}}


def cyclic_quotient(alpha: AlphaMap, m: int) -> FiniteQuotient:
    """pi -> Z -> Z/m; g shifts by alpha(g)."""
    if m < 2:
        raise ValueError("cyclic quotient needs m >= 2")
    perms = {g: tuple((i + a) % m for i in range(m)) for g, a in alpha.values.items()}
    return FiniteQuotient(m, perms, f"cyclic-{m}")


def parse_quotient(data: dict) -> FiniteQuotient:
    try:
        k = int(data["degree"])
        perms = {g: tuple(int(x) - 1 for x in p) for g, p in data["generators"].items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad quotient data: {exc}") from exc
    return FiniteQuotient(k, perms, data.get("label", f"quotient-{k}"))


def load_quotient(path, relators: list[Word] | None = None) -> FiniteQuotient:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path}: {exc}") from exc
    q = parse_quotient(data)
    if relators is not None:
        q.validate(relators)
    return q


# -- matrices over R[pi] ---------------------------------------------------

def twist_alpha_t(m: ElemMatrix, alpha: AlphaMap, t: float) -> ElemMatrix:
    """gamma -> t^alpha(gamma) gamma, entrywise."""
    return [[GroupRingElem({w: c * t ** alpha(w) for w, c in x.terms.items()}) for x in row] for row in m]


def elem_mat_mul(a: ElemMatrix, b: ElemMatrix) -> ElemMatrix:
    n, m, p = len(a), len(b), len(b[0]) if b else 0
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = GroupRingElem()
            for k in range(m):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def push_forward(m: ElemMatrix, q: FiniteQuotient) -> np.ndarray:
    """Nk x Nk real matrix: each group element becomes its permutation matrix."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise NotSquare(f"{n} x {len(m[0]) if m else 0} matrix")
    k = q.degree
    out = np.zeros((n * k, n * k))
    cols = np.arange(k)
    for i, row in enumerate(m):
        for j, x in enumerate(row):
            for w, c in x.terms.items():
                out[i * k + q(w), j * k + cols] += c
    return out


@dataclass(frozen=True)
class FKEstimate:
    """(1/k) log of the determinant restricted to the orthogonal complement of
    the kernel; ``kernel_dim`` > 0 flags a singular finite-level matrix.
    ``log_det`` is None only for a numerically zero matrix."""
    log_det: float | None
    kernel_dim: int
    degree: int

    @property
    def singular(self) -> bool:
        return self.kernel_dim > 0

    def to_json(self) -> dict:
        return {"log_det": None if self.log_det is None else round(self.log_det, 12),
                "kernel_dim": self.kernel_dim, "degree": self.degree}


def log_det_estimate(mat: np.ndarray, degree: int) -> FKEstimate:
    size = mat.shape[0]
    if size == 0:
        return FKEstimate(0.0, 0, degree)
    scale = np.abs(mat).max()
    if scale == 0:
        return FKEstimate(None, size, degree)
    with warnings.catch_warnings():
        # exactly singular input is handled by the SVD branch below
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, _ = scipy.linalg.lu_factor(mat, check_finite=False)
    piv = np.abs(np.diag(lu))
    if piv.min() > PIVOT_REL * piv.max():
        return FKEstimate(float(np.log(piv).sum() / degree), 0, degree)
    s = np.linalg.svd(mat, compute_uv=False)
    keep = s > KERNEL_REL * s[0]
    return FKEstimate(float(np.log(s[keep]).sum() / degree), int(size - keep.sum()), degree)


def fk_estimate(m: ElemMatrix, q: FiniteQuotient) -> FKEstimate:
    return log_det_estimate(push_forward(m, q), q.degree)


# -- profiles -----------------------------------------------------------------

@dataclass
class TorsionProfile:
    t_grid: list[float]
    labels: list[str]
    estimates: dict[float, list[FKEstimate]]
    z_alphas: list[int]
    warnings: list[str] = field(default_factory=list)

    @property
    def exponent_abs(self) -> int | None:
        vals = {abs(a) for a in self.z_alphas}
        return vals.pop() if len(vals) == 1 else None

    def max_factor(self, t: float) -> dict:
        """log max{1, t^n} for both sign candidates of n."""
        n = self.exponent_abs
        if n is None:
            return {}
        return {f"n={s * n}": max(0.0, s * n * math.log(t)) for s in (1, -1)}

    def to_json(self) -> dict:
        return {"quotients": self.labels,
                "z_alphas": self.z_alphas,
                "exponent_abs": self.exponent_abs,
                "exponent_candidates": None if self.exponent_abs is None else [self.exponent_abs, -self.exponent_abs],
                "profile": [{"t": t,
                             "log_max_factor": {k: round(v, 12) for k, v in self.max_factor(t).items()},
                             "estimates": [e.to_json() for e in self.estimates[t]]}
                            for t in self.t_grid],
                "warnings": self.warnings}


def detB_profile(ctx, t_grid: list[float], quotients: list[FiniteQuotient]) -> TorsionProfile:
    """Estimates of log det of alpha_t(B) under each quotient, per t.

    Values are estimates under the named quotients only; nothing here is an
    L2 torsion value.
    """
    zs = ctx.z_alphas("Z")
    warnings = []
    if any(a == 0 for a in zs):
        warnings.append("a Z-curve has alpha = 0; the infinite-order hypothesis cannot hold")
    if len({abs(a) for a in zs}) > 1:
        warnings.append(f"|alpha(Z_i)| not constant: {zs}")
    for q in quotients:
        q.validate(ctx.relators)
    B = ctx.twisted.B
    est = {}
    for t in t_grid:
        Bt = twist_alpha_t(B, ctx.alpha, t)
        est[t] = [fk_estimate(Bt, q) for q in quotients]
    return TorsionProfile(list(t_grid), [q.label for q in quotients], est, zs, warnings)


def mahler_measure_log(coeffs_high_first) -> float:
    """log Mahler measure by Jensen: log|a_d| + sum log max(1, |root|)."""
    c = np.trim_zeros(np.asarray(coeffs_high_first, dtype=complex), "f")
    if len(c) == 0:
        raise ValueError("zero polynomial")
    roots = np.roots(c)
    return float(np.log(abs(c[0])) + sum(np.log(max(1.0, abs(r))) for r in roots))
