"""Twisted Neumann-Zagier matrices and the Alexander polynomial pipeline."""
from __future__ import annotations

from dataclasses import dataclass, field

from .dual_complex import (CurveSystem, DualComplex, EdgeWord, build_dual,
                           check_local_patterns, edge_words, shape_letter,
                           smoothing_curves, smoothing_pairs)
from .errors import InternalDivisionFailure, Indivisible, NZError
from .group_algebra import (AlphaMap, GroupRingElem, Word, abelianization,
                            eliminate, eliminate_elem, fox_derivative)
from .laurent import (ONE, ZERO, LaurentPoly, Matrix, adjoint_t, det_exact,
                      equal_up_to_units, exact_divide, is_palindromic, mat_mul,
                      mat_sub, mod2, normalize, normalize_mod2,
                      t_power_minus_one, transpose)
from .triangulation import (KIND_NAMES, Triangulation, _require_ordered,
                            classical_gluing_matrices)

ElemMatrix = list[list[GroupRingElem]]


@dataclass
class TwistedMatrices:
    """Twisted gluing matrices over Z[pi].

    Entries are representatives only: another choice of lifts multiplies
    every matrix on the left by one diagonal matrix of group elements.
    """
    G: ElemMatrix
    Gp: ElemMatrix
    Gpp: ElemMatrix

    @property
    def A(self) -> ElemMatrix:
        return _elem_sub(self.G, self.Gp)

    @property
    def B(self) -> ElemMatrix:
        return _elem_sub(self.Gpp, self.Gp)

    def by_kind(self, kind: int) -> ElemMatrix:
        return (self.G, self.Gp, self.Gpp)[kind]


def _elem_sub(x: ElemMatrix, y: ElemMatrix) -> ElemMatrix:
    return [[a - b for a, b in zip(rx, ry)] for rx, ry in zip(x, y)]


def augment_matrix(m: ElemMatrix) -> list[list[int]]:
    return [[x.augment() for x in row] for row in m]


def specialize(x: GroupRingElem, alpha: AlphaMap) -> LaurentPoly:
    """Image of ``x`` under gamma -> t^alpha(gamma)."""
    out: dict[int, int] = {}
    for w, c in x.terms.items():
        k = alpha(w)
        out[k] = out.get(k, 0) + c
    return LaurentPoly(out)


def specialize_matrix(m: ElemMatrix, alpha: AlphaMap) -> Matrix:
    return [[specialize(x, alpha) for x in row] for row in m]


@dataclass
class NZContext:
    """Everything derived from one ordered triangulation and a choice of alpha."""
    tri: Triangulation
    dual: DualComplex
    words: list[EdgeWord]
    generators: list[str]
    relators: list[Word]
    alpha: AlphaMap
    curves: dict[str, CurveSystem] = field(default_factory=dict)
    _twisted: TwistedMatrices | None = None

    @property
    def twisted(self) -> TwistedMatrices:
        if self._twisted is None:
            self._twisted = twisted_matrices(self.tri, self.dual, self.words)
        return self._twisted

    @property
    def A_alpha(self) -> Matrix:
        return specialize_matrix(self.twisted.A, self.alpha)

    @property
    def B_alpha(self) -> Matrix:
        return specialize_matrix(self.twisted.B, self.alpha)

    def z_alphas(self, kind: str = "Z") -> list[int]:
        return self.curves[kind].alphas


def prepare(tri: Triangulation, meridian: str | None = None, alpha: AlphaMap | None = None,
            names: list[str] | None = None, self_check: bool = True) -> NZContext:
    """Build the dual complex, words, presentation, alpha and curves.

    ``alpha`` defaults to the abelianization; pass it explicitly when the
    first Betti number exceeds one.
    """
    _require_ordered(tri)
    dual = build_dual(tri, names)
    words = edge_words(tri, dual)
    if self_check:
        failures = check_local_patterns(tri, dual, words)
        if failures:
            raise NZError("local pattern self-check failed: " + "; ".join(failures))
    gens = dual.surviving
    rels = [eliminate(w.r, dual.tree) for w in words]
    if alpha is None:
        alpha = abelianization(rels, gens, meridian)
    else:
        alpha = AlphaMap({g: alpha[g] for g in dual.names})
        bad = [i for i, r in enumerate(rels) if alpha(r)]
        if bad:
            raise NZError(f"supplied alpha does not kill relators {bad}")
        if any(alpha[g] for g in dual.tree):
            raise NZError("supplied alpha must vanish on tree generators " + ", ".join(sorted(dual.tree)))
    curves = {k: smoothing_curves(tri, dual, k).with_alpha(alpha) for k in KIND_NAMES}
    return NZContext(tri, dual, words, gens, rels, alpha, curves)


def twisted_matrices(tri: Triangulation, dual: DualComplex | None = None,
                     words: list[EdgeWord] | None = None) -> TwistedMatrices:
    """Entry (i, j) of the kind-k matrix is p(dR_i / dz_j^k)."""
    _require_ordered(tri)
    if dual is None:
        dual = build_dual(tri)
    if words is None:
        words = edge_words(tri, dual)
    n = tri.num_tets
    killed = set(dual.tree) | {shape_letter(j, k) for j in range(n) for k in range(3)}
    mats = []
    for kind in range(3):
        mats.append([[eliminate_elem(fox_derivative(w.R, shape_letter(j, kind)), killed)
                      for j in range(n)] for w in words])
    return TwistedMatrices(*mats)


# -- checks ---------------------------------------------------------------

def check_symplectic(ctx: NZContext, A: Matrix | None = None, B: Matrix | None = None) -> dict:
    """Classical A B^T symmetry and A(t) B(1/t)^T = B(t) A(1/t)^T."""
    cl = classical_gluing_matrices(ctx.tri)
    a, b = cl.A, cl.B
    n = len(a)
    abt = [[sum(a[i][k] * b[j][k] for k in range(n)) for j in range(n)] for i in range(n)]
    classical = all(abt[i][j] == abt[j][i] for i in range(n) for j in range(n))
    A = ctx.A_alpha if A is None else A
    B = ctx.B_alpha if B is None else B
    lhs = mat_mul(A, adjoint_t(B))
    rhs = mat_mul(B, adjoint_t(A))
    twisted = lhs == rhs
    return {"classical_ABt_symmetric": classical, "twisted_identity": twisted, "ok": classical and twisted}


def check_augmentation(ctx: NZContext) -> bool:
    cl = classical_gluing_matrices(ctx.tri)
    tm = ctx.twisted
    return all(augment_matrix(tm.by_kind(k)) == cl.by_kind(k) for k in range(3))


def key_identity_check(ctx: NZContext) -> list[str]:
    """For each Z-adjacent pair of tet j (generator ``a`` entering, ``b``
    leaving) and each relator k, alpha-specialized
    ``dr_k/db - dr_k/da * a = +-(dR_k/dz_j'' - dR_k/dz_j')``, one sign per pair."""
    failures = []
    for j, pairs in enumerate(smoothing_pairs(ctx.tri, 0)):
        for (f0, f1), edge in pairs:
            (n0, s0), (n1, s1) = ctx.dual.crossing(j, f0), ctx.dual.crossing(j, f1)
            a, b = (n0, n1) if s0 == -1 else (n1, n0)
            ta = LaurentPoly.monomial(ctx.alpha[a])
            signs = set()
            for w in ctx.words:
                lhs = specialize(fox_derivative(w.r, b), ctx.alpha) - specialize(fox_derivative(w.r, a), ctx.alpha) * ta
                rhs = (specialize(fox_derivative(w.R, shape_letter(j, 2)), ctx.alpha)
                       - specialize(fox_derivative(w.R, shape_letter(j, 1)), ctx.alpha))
                if lhs == rhs == ZERO:
                    continue
                if lhs == rhs:
                    signs.add(1)
                elif lhs == -rhs:
                    signs.add(-1)
                else:
                    failures.append(f"tet {j} pair {edge} relator {w.index}: {lhs} != +-({rhs})")
            if len(signs) > 1:
                failures.append(f"tet {j} pair {edge}: inconsistent signs")
    return failures


# -- Alexander polynomial ----------------------------------------------------

@dataclass
class AlexanderResult:
    detB: LaurentPoly
    z_alphas: list[int]
    alexander: LaurentPoly | None      # None on the degenerate branch
    degenerate: bool
    checks: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"degenerate": self.degenerate,
                "detB": normalize(self.detB).to_json(),
                "alexander": None if self.alexander is None else self.alexander.to_json(),
                "z_alphas": self.z_alphas,
                "checks": self.checks}


def z_product(alphas: list[int]) -> LaurentPoly:
    out = ONE
    for a in alphas:
        out = out * t_power_minus_one(a)
    return out


def alexander_polynomial(ctx: NZContext, check_knot: bool = False) -> AlexanderResult:
    """Delta = detB (t-1) / prod(t^alpha(Z_i) - 1), normalized.

    A vanishing detB is the degenerate branch and is reported, not raised.
    """
    detB = det_exact(ctx.B_alpha)
    zs = ctx.z_alphas("Z")
    if detB.is_zero:
        return AlexanderResult(detB, zs, None, True, {"degenerate": True})
    denom = z_product(zs)
    if denom.is_zero:
        raise InternalDivisionFailure(f"nonzero detB = {detB} but some alpha(Z_i) = 0 ({zs})")
    try:
        delta = normalize(exact_divide(detB * (LaurentPoly.t() - 1), denom))
    except Indivisible as exc:
        raise InternalDivisionFailure(f"detB (t-1) = {detB * (LaurentPoly.t() - 1)} not divisible by "
                                      f"prod(t^a - 1) = {denom}") from exc
    n_abs = {abs(a) for a in zs}
    checks = {"palindromic_detB": is_palindromic(detB),
              "palindromic_alexander": is_palindromic(delta),
              "z_alpha_abs_constant": len(n_abs) == 1}
    if len(n_abs) == 1:
        n = n_abs.pop()
        # detB (t-1) = Delta (t^n - 1)^m up to units
        checks["factorization_shape"] = equal_up_to_units(detB * (LaurentPoly.t() - 1),
                                                    delta * t_power_minus_one(n) ** len(zs))
    if check_knot:
        checks["delta_at_1_unit"] = delta(1) in (1, -1)
    return AlexanderResult(detB, zs, delta, False, checks)


def mod2_check(A: Matrix, B: Matrix, delta: LaurentPoly, zp_alphas: list[int], zpp_alphas: list[int]) -> dict:
    """Compare det A and det(A - B) with Delta/(t-1) prod(t^a - 1) over F_2.

    Both sides are multiplied by (t - 1) so everything stays polynomial.
    """
    t1 = LaurentPoly.t() - 1
    detA = det_exact(A)
    detAB = det_exact(mat_sub(A, B))
    out = {"detA": normalize(detA).to_json(), "detA_minus_B": normalize(detAB).to_json(),
           "detA_mod2": normalize_mod2(detA).to_json(), "detA_minus_B_mod2": normalize_mod2(detAB).to_json(),
           "zp_alphas": zp_alphas, "zpp_alphas": zpp_alphas}
    left_a = normalize_mod2(detA * t1)
    right_a = normalize_mod2(delta * z_product(zpp_alphas))
    left_ab = normalize_mod2(detAB * t1)
    right_ab = normalize_mod2(delta * z_product(zp_alphas))
    out["detA_ok"] = left_a == right_a
    out["detA_minus_B_ok"] = left_ab == right_ab
    out["ok"] = out["detA_ok"] and out["detA_minus_B_ok"]
    return out


def mod2_report(ctx: NZContext, delta: LaurentPoly | None = None) -> dict:
    if delta is None:
        res = alexander_polynomial(ctx)
        if res.degenerate:
            return {"ok": False, "reason": "degenerate detB"}
        delta = res.alexander
    return mod2_check(ctx.A_alpha, ctx.B_alpha, delta, ctx.z_alphas("Zp"), ctx.z_alphas("Zpp"))


# -- Fox boundary maps ---------------------------------------------------------

def boundary_2(ctx: NZContext) -> Matrix:
    """2N x N: entry (i, k) = alpha(p(dr_k / dg_i))."""
    return [[specialize(eliminate_elem(fox_derivative(w.r, g), ctx.dual.tree), ctx.alpha) for w in ctx.words]
            for g in ctx.dual.names]


def face_vector(ctx: NZContext, tet: int, face: int) -> list[LaurentPoly]:
    """alpha(v_f): t^alpha(g) at g's slot if g enters ``tet`` through ``face``, else -1."""
    names = ctx.dual.names
    name, sign = ctx.dual.crossing(tet, face)
    vec = [ZERO] * len(names)
    vec[names.index(name)] = LaurentPoly.monomial(ctx.alpha[name]) if sign == -1 else -ONE
    return vec


def boundary_1_split(ctx: NZContext) -> tuple[Matrix, Matrix]:
    """Rows of the Z-pair split of the 1-boundary: (01)-pairs and (23)-pairs."""
    first, second = [], []
    for j, pairs in enumerate(smoothing_pairs(ctx.tri, 0)):
        rows = {}
        for (f0, f1), edge in pairs:
            rows[edge] = [x + y for x, y in zip(face_vector(ctx, j, f0), face_vector(ctx, j, f1))]
        first.append(rows[(0, 1)])
        second.append(rows[(2, 3)])
    return first, second


def monomial_diagonal_equivalence(X: Matrix, Y: Matrix) -> tuple[list[LaurentPoly], list[LaurentPoly]] | None:
    """Find unit monomials d_i, e_j with X[i][j] = d_i Y[i][j] e_j, or None."""
    n, m = len(X), len(X[0]) if X else 0
    d: list[LaurentPoly | None] = [None] * n
    e: list[LaurentPoly | None] = [None] * m
    for i in range(n):
        for j in range(m):
            if X[i][j].is_zero != Y[i][j].is_zero:
                return None
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = ONE
        stack = [("r", start)]
        while stack:
            kind, idx = stack.pop()
            if kind == "r":
                for j in range(m):
                    if Y[idx][j].is_zero:
                        continue
                    ratio = _unit_ratio(X[idx][j], d[idx] * Y[idx][j])
                    if ratio is None:
                        return None
                    if e[j] is None:
                        e[j] = ratio
                        stack.append(("c", j))
                    elif e[j] != ratio:
                        return None
            else:
                for i in range(n):
                    if Y[i][idx].is_zero:
                        continue
                    ratio = _unit_ratio(X[i][idx], Y[i][idx] * e[idx])
                    if ratio is None:
                        return None
                    if d[i] is None:
                        d[i] = ratio
                        stack.append(("r", i))
                    elif d[i] != ratio:
                        return None
    e = [x if x is not None else ONE for x in e]
    return d, e


def _unit_ratio(x: LaurentPoly, y: LaurentPoly) -> LaurentPoly | None:
    """The unit +-t^k with x = u * y, if any."""
    if x.is_zero or y.is_zero or len(x.coeffs) != len(y.coeffs):
        return None
    k = x.lo - y.lo
    for sgn in (1, -1):
        u = LaurentPoly.monomial(k, sgn)
        if u * y == x:
            return u
    return None


def fox_boundary_crosscheck(ctx: NZContext) -> dict:
    """d2^T d1B^T against B_alpha, and the cyclic-block determinant against
    prod(t^alpha(Z_i) - 1)."""
    d2 = boundary_2(ctx)
    b01, b23 = boundary_1_split(ctx)
    B = ctx.B_alpha
    out = {}
    for label, d1b in (("pair01", b01), ("pair23", b23)):
        prod = mat_mul(transpose(d2), transpose(d1b))
        eq = monomial_diagonal_equivalence(prod, B)
        out[label] = eq is not None
        if eq is not None:
            out[label + "_diagonals"] = {"left": [str(x) for x in eq[0]], "right": [str(x) for x in eq[1]]}
    block = b01 + b23
    cyc = det_exact(block)
    zprod = z_product(ctx.z_alphas("Z"))
    out["cyclic_block_det"] = normalize(cyc).to_json()
    out["cyclic_block_ok"] = equal_up_to_units(cyc, zprod) if not zprod.is_zero else cyc.is_zero
    out["ok"] = out["pair01"] and out["pair23"] and out["cyclic_block_ok"]
    return out


# -- independent oracle ----------------------------------------------------------

def wada_alexander(generators: list[str], relators: list[Word], alpha: AlphaMap) -> LaurentPoly:
    """Alexander polynomial straight from the presentation.

    Delete the Fox-matrix column of a generator ``g`` with alpha(g) != 0;
    then det = Delta/(t-1) * (t^alpha(g) - 1).
    """
    col = next((g for g in generators if alpha[g] != 0), None)
    if col is None:
        raise NZError("alpha vanishes on every generator")
    keep = [g for g in generators if g != col]
    fox = [[specialize(fox_derivative(r, g), alpha) for g in keep] for r in relators]
    d = det_exact(fox)
    if d.is_zero:
        return d
    return normalize(exact_divide(d * (LaurentPoly.t() - 1), t_power_minus_one(alpha[col])))
