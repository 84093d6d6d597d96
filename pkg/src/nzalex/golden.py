"""Golden checks behind ``nz-alex selftest``.

Each check returns ``(ok, detail)``; fixtures are read from the package data
unless a directory is given.
"""
from __future__ import annotations

import math
import random
from importlib import resources
from pathlib import Path

import numpy as np

from .group_algebra import AlphaMap, GroupRingElem, fox_derivative, reduce_word
from .l2 import cyclic_quotient, detB_profile, elem_mat_mul, fk_estimate
from .laurent import (LaurentPoly, det_exact, exact_divide, is_palindromic,
                      mat_mul, mat_sub, normalize, normalize_mod2, polish)
from .nz import (alexander_polynomial, check_augmentation, check_symplectic,
                 fox_boundary_crosscheck, mod2_report, prepare, wada_alexander)
from .triangulation import load_triangulation
from .twisted import fig8_geometric_rep, twisted_alexander

ORDERED_FIXTURES = ("fig8.tri", "k8_2.tri")


def fixture_path(name: str, directory: str | Path | None = None) -> Path:
    if directory is not None:
        return Path(directory) / name
    return Path(str(resources.files("nzalex") / "fixtures" / name))


def poly(coeffs_low_first, lo=0) -> LaurentPoly:
    return LaurentPoly.from_list(list(coeffs_low_first), lo)


T1 = poly([-1, 1])
FIG8_DELTA = poly([1, -3, 1])
K82_DELTA = poly([1, -3, 3, -3, 3, -3, 1])
K82_DETA_FACTOR = poly([1, 0, 0, 0, 0, 1, -2, 1, 0, 0, 0, 0, 1])
# factorization as displayed for det A mod 2; it has degree 12 while det A
# has degree 13, so it only matches det A / (t - 1)
K82_DETA_MOD2_DISPLAYED = T1 * T1 * poly([1, 1, 1, 1, 1]) * K82_DELTA


def _ctx(name, directory=None, **kw):
    return prepare(load_triangulation(fixture_path(name, directory)), **kw)


def check_fig8_alexander(directory=None):
    res = alexander_polynomial(_ctx("fig8.tri", directory, meridian="g4"))
    ok = (not res.degenerate and normalize(res.detB) == normalize(T1 * FIG8_DELTA)
          and res.alexander == FIG8_DELTA)
    return ok, f"detB = {normalize(res.detB)}, Delta = {res.alexander}"


def check_fig8_curves(directory=None):
    ctx = _ctx("fig8.tri", directory, meridian="g4")
    z, zp, zpp = (ctx.z_alphas(k) for k in ("Z", "Zp", "Zpp"))
    ok = sorted(z) == [-1, 1] and zp == [0] and zpp == [0]
    return ok, f"Z {z}, Z' {zp}, Z'' {zpp}"


def check_fig8_mod2(directory=None):
    ctx = _ctx("fig8.tri", directory, meridian="g4")
    a = normalize_mod2(det_exact(ctx.A_alpha))
    ab = normalize_mod2(det_exact(mat_sub(ctx.A_alpha, ctx.B_alpha)))
    rep = mod2_report(ctx)
    ok = a.is_zero and ab.is_zero and rep["ok"]
    return ok, f"det A mod 2 = {a}, det(A - B) mod 2 = {ab}"


def check_k82(directory=None):
    ctx = _ctx("k8_2.tri", directory)
    res = alexander_polynomial(ctx)
    detA = det_exact(ctx.A_alpha)
    ok = (normalize(res.detB) == normalize(T1 * K82_DELTA) and res.alexander == K82_DELTA
          and normalize(detA) == normalize(T1 * K82_DETA_FACTOR)
          and normalize_mod2(detA) == normalize_mod2(T1 * K82_DETA_MOD2_DISPLAYED)
          and mod2_report(ctx, res.alexander)["ok"])
    return ok, f"detB = {normalize(res.detB)}, det A = {normalize(detA)}"


def check_k82_mod2_displayed(directory=None):
    detA = det_exact(_ctx("k8_2.tri", directory).A_alpha)
    ok = normalize_mod2(detA) == normalize_mod2(K82_DETA_MOD2_DISPLAYED)
    return ok, f"det A mod 2 = {normalize_mod2(detA)}, displayed = {normalize_mod2(K82_DETA_MOD2_DISPLAYED)}"


def check_fig8_twisted(directory=None):
    ctx = _ctx("fig8.tri", directory, meridian="g4")
    res = twisted_alexander(ctx, fig8_geometric_rep())
    target_detB = normalize(T1 ** 4 * poly([1, -4, 1]))
    got = normalize(res.detB)
    ok_detB = got.span == target_detB.span and all(
        abs(complex(got.coeffs.get(k, 0)) - target_detB.coeffs.get(k, 0)) <= 1e-6 for k in range(got.span + 1))
    ta = res.twisted_alexander
    ok_ta = ta is not None and ta.span == 2 and all(
        abs(complex(ta.coeffs.get(k, 0)) - c) <= 1e-6 for k, c in zip(range(3), (1, -4, 1)))
    return ok_detB and ok_ta, f"twisted Alexander = {ta if ta is None else polish(ta)}"


def _random_word(rng, gens, length):
    return reduce_word((rng.choice(gens), rng.choice((1, -1))) for _ in range(length))


def _random_laurent(rng, span=2, coeff=3):
    lo = rng.randint(-span, 0)
    return poly([rng.randint(-coeff, coeff) for _ in range(rng.randint(0, span + 1))], lo)


def _random_matrix(rng, n):
    return [[_random_laurent(rng) for _ in range(n)] for _ in range(n)]


def check_properties(directory=None, cases: int = 200, seed: int = 2024):
    rng = random.Random(seed)
    failures = []
    gens = ["a", "b", "c"]
    for _ in range(cases):
        w = _random_word(rng, gens, rng.randint(0, 40))
        lhs = GroupRingElem.from_word(w) - 1
        rhs = GroupRingElem()
        for g in gens:
            rhs = rhs + fox_derivative(w, g) * (GroupRingElem.from_word(((g, 1),)) - 1)
        if lhs != rhs:
            failures.append("fox fundamental identity")
            break
    for _ in range(cases):
        n = rng.randint(1, 3)
        x, y = _random_matrix(rng, n), _random_matrix(rng, n)
        if det_exact(mat_mul(x, y)) != det_exact(x) * det_exact(y):
            failures.append("det multiplicativity")
            break
    for _ in range(cases):
        p, q = _random_laurent(rng, 4), _random_laurent(rng, 3)
        if q.is_zero:
            continue
        if exact_divide(p * q, q) != p:
            failures.append("exact_divide round trip")
            break
    for name in ORDERED_FIXTURES:
        ctx = _ctx(name, directory)
        detB = det_exact(ctx.B_alpha)
        if not is_palindromic(detB):
            failures.append(f"{name}: palindromic detB")
        if not check_augmentation(ctx):
            failures.append(f"{name}: augmentation")
        if not check_symplectic(ctx)["ok"]:
            failures.append(f"{name}: symplectic")
        if not fox_boundary_crosscheck(ctx)["ok"]:
            failures.append(f"{name}: Fox boundary cross-check")
    return not failures, "; ".join(failures) or f"{cases} cases per suite"


def check_wada(directory=None):
    out = []
    ok = True
    for name, kw in (("fig8.tri", {"meridian": "g4"}), ("k8_2.tri", {})):
        ctx = _ctx(name, directory, **kw)
        w = wada_alexander(ctx.generators, ctx.relators, ctx.alpha)
        a = alexander_polynomial(ctx).alexander
        ok &= a is not None and normalize(w) == a
        out.append(f"{name}: {w}")
    return ok, ", ".join(out)


def check_l2(directory=None):
    alpha = AlphaMap({"g": 1})
    failures = []
    for t in (0.5, 2.0):
        x = [[GroupRingElem({(): 1.0, (("g", -1),): -1.0 / t})]]
        est = fk_estimate(x, cyclic_quotient(alpha, 4096)).log_det
        if abs(est - math.log(max(1.0, 1.0 / t))) >= 0.05:
            failures.append(f"rank-1 Mahler at t={t}: {est}")
    rng = np.random.default_rng(7)
    alpha2 = AlphaMap({"a": 1, "b": 2})
    q = cyclic_quotient(alpha2, 7)

    def rand_elem():
        return GroupRingElem({(): float(rng.normal()), (("a", 1),): float(rng.normal()),
                              (("b", -1),): float(rng.normal())})
    x = [[rand_elem() for _ in range(2)] for _ in range(2)]
    y = [[rand_elem() for _ in range(2)] for _ in range(2)]
    ex, ey, exy = fk_estimate(x, q), fk_estimate(y, q), fk_estimate(elem_mat_mul(x, y), q)
    if abs(exy.log_det - ex.log_det - ey.log_det) > 1e-9:
        failures.append("multiplicativity")
    blk = [[x[0][0], x[0][1], rand_elem()], [x[1][0], x[1][1], rand_elem()],
           [GroupRingElem(), GroupRingElem(), y[0][0]]]
    e11 = fk_estimate([[y[0][0]]], q)
    if abs(fk_estimate(blk, q).log_det - ex.log_det - e11.log_det) > 1e-9:
        failures.append("block-triangular additivity")
    ctx = _ctx("fig8.tri", directory, meridian="g4")
    prof = detB_profile(ctx, [1.0], [cyclic_quotient(ctx.alpha, 1024)])
    est = prof.estimates[1.0][0].log_det
    target = math.log((3 + math.sqrt(5)) / 2)
    if abs(est - target) >= 0.05:
        failures.append(f"fig8 profile at t=1: {est}")
    return not failures, "; ".join(failures) or f"fig8 t=1 estimate {est:.4f} vs {target:.4f}"


# checks whose failure is a documented inconsistency in the reference data
KNOWN_DISCREPANCIES = {"8_2 mod-2 factorization as displayed"}

CHECKS = [
    ("fig8 Alexander polynomial", check_fig8_alexander),
    ("fig8 curve data", check_fig8_curves),
    ("fig8 mod-2 report", check_fig8_mod2),
    ("8_2 determinants", check_k82),
    ("8_2 mod-2 factorization as displayed", check_k82_mod2_displayed),
    ("fig8 twisted Alexander", check_fig8_twisted),
    ("property suites", check_properties),
    ("Wada oracle", check_wada),
    ("L2 estimator", check_l2),
]


def run_all(directory=None) -> list[dict]:
    out = []
    for i, (name, fn) in enumerate(CHECKS, 1):
        try:
            ok, detail = fn(directory)
        except Exception as exc:  # a broken fixture is a named failure
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append({"id": i, "name": name, "ok": bool(ok), "detail": detail,
                    "known_discrepancy": name in KNOWN_DISCREPANCIES})
    return out
