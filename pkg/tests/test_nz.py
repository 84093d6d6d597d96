import numpy as np
import pytest

from nzalex.errors import InternalDivisionFailure, NotOrdered, NZError
from nzalex.group_algebra import AlphaMap, GroupRingElem, word
from nzalex.laurent import LaurentPoly, T, det_exact, normalize
from nzalex.nz import (alexander_polynomial, check_augmentation, check_symplectic,
                       fox_boundary_crosscheck, key_identity_check, mod2_check,
                       monomial_diagonal_equivalence, prepare, specialize_matrix,
                       twisted_matrices, wada_alexander)
from nzalex.triangulation import load_triangulation
from nzalex.twisted import block_matrix, fig8_geometric_rep

from conftest import fixture


def E(*terms):
    """Group ring element from (coefficient, word text) pairs."""
    out = GroupRingElem()
    for c, w in terms:
        out = out + GroupRingElem.from_word(word(w) if w else (), c)
    return out


# reference fig8 matrices, equal to ours only up to a left diagonal matrix over pi
DISPLAY_G = [[E((1, ""), (1, "g3 g4")), E()],
           [E(), E((1, "g2"), (1, "g2 g4 g2^-1 g3"))]]
DISPLAY_B = [[E((-1, "g3 g4 g2 g3^-1")), E((1, "g3"), (-1, "g3 g4 g2"), (-1, "g3 g4 g2 g3^-1 g4^-1"))],
           [E((1, "g2 g4"), (1, "g2 g4 g2^-1"), (-1, "")), E((1, "g2 g4"))]]


def _left_diagonal_equivalent(x, y, ctx, t):
    """x = D y for a block-diagonal D, after applying alpha x rho at t."""
    rho = fig8_geometric_rep()
    n = rho.dim
    bx = np.array([[complex(p(t)) for p in row] for row in block_matrix(x, ctx.alpha, rho)])
    by = np.array([[complex(p(t)) for p in row] for row in block_matrix(y, ctx.alpha, rho)])
    for i in range(len(x)):
        rows = slice(i * n, (i + 1) * n)
        j = next(j for j in range(len(x)) if np.linalg.norm(by[rows, j * n:(j + 1) * n]) > 1e-9)
        d = bx[rows, j * n:(j + 1) * n] @ np.linalg.inv(by[rows, j * n:(j + 1) * n])
        if not np.allclose(bx[rows], d @ by[rows], atol=1e-8):
            return False
        # D_i = t^k rho(gamma), so |det D_i| = |t|^(n k)
        k = np.log(abs(np.linalg.det(d))) / (n * np.log(abs(t)))
        if abs(k - round(k)) > 1e-6:
            return False
    return True


@pytest.mark.parametrize("t", [1.3, 0.7 + 0.4j, -2.1])
def test_fig8_raw_matrices_match_display(fig8, t):
    tm = fig8.twisted
    assert _left_diagonal_equivalent(DISPLAY_G, tm.G, fig8, t)
    assert _left_diagonal_equivalent(DISPLAY_B, tm.B, fig8, t)


def test_fig8_alpha_B_matches_display(fig8):
    display = [[-T, T ** -1 - 2], [2 * T - 1, T]]
    eq = monomial_diagonal_equivalence(display, fig8.B_alpha)
    assert eq is not None
    left, right = eq
    assert all(len(x.coeffs) == 1 for x in left + right)


def test_fig8_alpha_matrices(fig8):
    assert normalize(det_exact(fig8.A_alpha)) == 2 * T - 2
    assert normalize(det_exact(fig8.B_alpha)) == normalize((T - 1) * (T ** 2 - 3 * T + 1))


def test_alexander_fig8(fig8):
    res = alexander_polynomial(fig8, check_knot=True)
    assert res.alexander == T ** 2 - 3 * T + 1
    assert res.z_alphas == [-1, 1]
    assert res.alexander(1) == -1
    assert all(res.checks.values())


def test_alexander_k82(k82):
    res = alexander_polynomial(k82, check_knot=True)
    assert res.alexander == LaurentPoly.from_list([1, -3, 3, -3, 3, -3, 1])
    assert all(res.checks.values())


@pytest.mark.parametrize("name", ["fig8", "k82"])
def test_structural_checks(name, request):
    ctx = request.getfixturevalue(name)
    assert check_augmentation(ctx)
    assert check_symplectic(ctx)["ok"]
    assert key_identity_check(ctx) == []
    assert fox_boundary_crosscheck(ctx)["ok"]


def test_symplectic_negative_control(fig8):
    A = [row[:] for row in fig8.A_alpha]
    A[0][1] = A[0][1] + T
    assert not check_symplectic(fig8, A=A)["twisted_identity"]


def test_mod2_fig8_and_negative_control(fig8):
    delta = T ** 2 - 3 * T + 1
    good = mod2_check(fig8.A_alpha, fig8.B_alpha, delta, [0], [0])
    assert good["ok"]
    A = [row[:] for row in fig8.A_alpha]
    A[0][0] = A[0][0] + 1
    assert not mod2_check(A, fig8.B_alpha, delta, [0], [0])["ok"]


def test_mod2_k82_uses_curve_data(k82):
    from nzalex.nz import mod2_report
    rep = mod2_report(k82)
    assert rep["ok"]
    assert sorted(abs(a) for a in rep["zpp_alphas"]) == [1, 2, 5]


def test_wada_matches_pipeline(fig8, k82):
    for ctx in (fig8, k82):
        assert normalize(wada_alexander(ctx.generators, ctx.relators, ctx.alpha)) == alexander_polynomial(ctx).alexander


def test_order_independent_alexander():
    raw = load_triangulation(fixture("k8_2_unordered.tri"))
    from nzalex.triangulation import find_ordering
    ctx = prepare(find_ordering(raw))
    assert alexander_polynomial(ctx).alexander == LaurentPoly.from_list([1, -3, 3, -3, 3, -3, 1])


def test_unordered_rejected():
    with pytest.raises(NotOrdered):
        twisted_matrices(load_triangulation(fixture("fig8_unordered.tri")))


def test_supplied_alpha_validated():
    tri = load_triangulation(fixture("fig8.tri"))
    ctx = prepare(tri, alpha=AlphaMap({"g3": -1, "g4": 1}))
    assert alexander_polynomial(ctx).alexander == T ** 2 - 3 * T + 1
    with pytest.raises(NZError):
        prepare(tri, alpha=AlphaMap({"g3": 1, "g4": 1}))


class _Stub:
    """Context stand-in with a chosen B and Z data."""

    def __init__(self, B, zs):
        self.B_alpha = B
        self._zs = zs

    def z_alphas(self, kind="Z"):
        return self._zs


def test_degenerate_branch_is_an_outcome():
    res = alexander_polynomial(_Stub([[T - T, T], [T - T, T]], [0, 1]))
    assert res.degenerate and res.alexander is None


def test_division_failure_raises():
    with pytest.raises(InternalDivisionFailure):
        alexander_polynomial(_Stub([[T ** 2 + 1]], [3]))


def test_specialize_matrix_augmentation(fig8):
    ones = specialize_matrix(fig8.twisted.A, AlphaMap({}))
    assert [[int(x(1)) for x in row] for row in ones] == [[1, -2], [-1, 2]]
