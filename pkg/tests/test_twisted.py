import json

import numpy as np
import pytest

from nzalex.errors import MalformedInput, NotARepresentation, NotSL
from nzalex.laurent import T, det_exact, normalize, polish
from nzalex.twisted import (FIG8_RELATORS, Representation, curve_factor, fig8_geometric_rep,
                            fig8_quartic_root, load_representation, parse_representation,
                            trivial_consistency, trivial_representation, twisted_alexander)


def _rep_from_root(n):
    u = -(1 - 4 * n ** 2 + n ** 4) / (3 * n + 3 * n ** 3)
    r4 = np.array([[1, 1], [0, 1]], dtype=complex)
    r2 = np.array([[n, 0], [u, 1 / n]], dtype=complex)
    r3 = r2 @ np.linalg.inv(r4) @ np.linalg.inv(r2)
    return Representation(2, {"g2": r2, "g3": r3, "g4": r4})


def test_geometric_rep_is_valid(fig8):
    rho = fig8_geometric_rep()
    rho.validate(fig8.relators)
    assert abs(np.trace(rho.gen("g4")) - 2) < 1e-12
    assert abs(np.linalg.det(rho.gen("g2")) - 1) < 1e-12
    n = fig8_quartic_root()
    assert abs(1 - 3 * n + 5 * n ** 2 - 3 * n ** 3 + n ** 4) < 1e-12 and n.imag > 0


def test_validation_errors():
    with pytest.raises(NotSL):
        Representation(2, {"g2": 2 * np.eye(2)}).validate(FIG8_RELATORS)
    shear = np.array([[1, 1], [0, 1]])
    with pytest.raises(NotARepresentation):
        Representation(2, {"g4": shear, "g2": shear}).validate(FIG8_RELATORS)
    with pytest.raises(MalformedInput):
        Representation(2, {"g2": np.eye(3)})


def test_fig8_twisted(fig8):
    res = twisted_alexander(fig8, fig8_geometric_rep())
    assert not res.degenerate and not res.rational
    assert polish(res.twisted_alexander) == T ** 2 - 4 * T + 1
    assert all(res.checks.values())


def test_all_quartic_roots(fig8):
    for n in np.roots([1, -3, 5, -3, 1]):
        res = twisted_alexander(fig8, _rep_from_root(complex(n)))
        assert polish(res.twisted_alexander) == T ** 2 - 4 * T + 1


@pytest.mark.parametrize("dim", [1, 2])
def test_trivial_consistency(fig8, dim):
    assert trivial_consistency(fig8, det_exact(fig8.B_alpha), dim)


def test_trivial_rep_is_rational(fig8):
    # detB = (t-1)(t^2-3t+1) over (t^-1 - 1)(t - 1): not a polynomial
    res = twisted_alexander(fig8, trivial_representation())
    assert res.rational and res.twisted_alexander is None
    assert polish(normalize(res.detB)) == normalize((T - 1) * (T ** 2 - 3 * T + 1))


def test_curve_factor():
    m = np.array([[2.0, 0], [0, 0.5]])
    assert polish(curve_factor(m, 1)) == (2 * T - 1) * (0.5 * T - 1)
    assert polish(curve_factor(m, -1)) == (2 * T ** -1 - 1) * (0.5 * T ** -1 - 1)
    assert polish(curve_factor(np.eye(2), 0)).is_zero


def test_load_representation(tmp_path, fig8):
    rho = fig8_geometric_rep()
    path = tmp_path / "rho.json"
    path.write_text(json.dumps(rho.to_json()))
    loaded = load_representation(path, fig8.relators)
    for g in ("g2", "g3", "g4"):
        assert np.allclose(loaded.gen(g), rho.gen(g))
    with pytest.raises(MalformedInput):
        parse_representation({"dim": 2, "generators": {"g2": [["x", 0], [0, 1]]}})
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(MalformedInput):
        load_representation(bad)
