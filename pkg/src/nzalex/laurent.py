"""Laurent polynomials in one variable t and dense matrices of them.

Coefficients are either Python integers (exact) or complex floats.  The
integer determinant is fraction-free Bareiss elimination; the float one
evaluates on a circle and interpolates by FFT.
"""
from __future__ import annotations

import numbers
from typing import Mapping, Sequence

import numpy as np

from .errors import Indivisible, NotSquare

INTERP_RADIUS = 1.2345
CLEANUP_REL = 1e-8


def _is_exact(c) -> bool:
    return isinstance(c, numbers.Integral)


class LaurentPoly:
    """Sparse Laurent polynomial ``sum c_k t^k``; zero coefficients are dropped."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, object] | None = None):
        self.coeffs: dict[int, object] = {int(k): c for k, c in (coeffs or {}).items() if c != 0}

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_list(cls, coeffs: Sequence, lo: int = 0) -> "LaurentPoly":
        return cls({lo + i: c for i, c in enumerate(coeffs)})

    @classmethod
    def monomial(cls, k: int, c=1) -> "LaurentPoly":
        return cls({k: c})

    @classmethod
    def const(cls, c) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def t(cls) -> "LaurentPoly":
        return cls({1: 1})

    @classmethod
    def from_json(cls, data: Mapping) -> "LaurentPoly":
        return cls.from_list(data["coeffs"], data["lo"])

    # -- structure ------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lo(self) -> int:
        return min(self.coeffs) if self.coeffs else 0

    @property
    def hi(self) -> int:
        return max(self.coeffs) if self.coeffs else -1

    @property
    def span(self) -> int:
        return self.hi - self.lo if self.coeffs else -1

    @property
    def exact(self) -> bool:
        return all(_is_exact(c) for c in self.coeffs.values())

    def coeff_list(self) -> list:
        if not self.coeffs:
            return []
        return [self.coeffs.get(k, 0) for k in range(self.lo, self.hi + 1)]

    def to_json(self) -> dict:
        def enc(c):
            if _is_exact(c):
                return int(c)
            c = complex(c)
            return [c.real, c.imag] if c.imag else c.real
        return {"lo": self.lo, "coeffs": [enc(c) for c in self.coeff_list()]}

    # -- arithmetic -----------------------------------------------------

    @staticmethod
    def _coerce(other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        return LaurentPoly({0: other})

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict[int, object] = {}
        for a, ca in self.coeffs.items():
            for b, cb in other.coeffs.items():
                out[a + b] = out.get(a + b, 0) + ca * cb
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self.coeffs) != 1:
                raise ValueError("only monomials have Laurent inverses")
            (k, c), = self.coeffs.items()
            if c not in (1, -1):
                raise ValueError("only unit monomials have Laurent inverses")
            return LaurentPoly({k * n: c if n % 2 else 1})
        out = LaurentPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly({0: other})
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def shift(self, k: int) -> "LaurentPoly":
        return LaurentPoly({e + k: c for e, c in self.coeffs.items()})

    def invert_variable(self) -> "LaurentPoly":
        """p(t) -> p(1/t)."""
        return LaurentPoly({-e: c for e, c in self.coeffs.items()})

    def conj(self) -> "LaurentPoly":
        return LaurentPoly({e: np.conj(c) for e, c in self.coeffs.items()})

    def __call__(self, t):
        return sum(c * t ** k for k, c in self.coeffs.items()) if self.coeffs else 0

    def to_complex(self) -> "LaurentPoly":
        return LaurentPoly({k: complex(c) for k, c in self.coeffs.items()})

    def cleaned(self, rel: float = CLEANUP_REL) -> "LaurentPoly":
        """Drop float coefficients below ``rel`` times the largest one."""
        if not self.coeffs:
            return self
        scale = max(abs(c) for c in self.coeffs.values())
        return LaurentPoly({k: c for k, c in self.coeffs.items() if abs(c) > rel * scale})

    def rounded(self, tol: float = 1e-6) -> "LaurentPoly":
        """Round near-integer float coefficients to exact integers."""
        out = {}
        for k, c in self.coeffs.items():
            c = complex(c)
            r = round(c.real)
            if abs(c - r) > tol * max(1.0, abs(c)):
                raise ValueError(f"coefficient {c} of t^{k} is not near an integer")
            out[k] = r
        return LaurentPoly(out)

    def norm(self) -> float:
        return float(np.sqrt(sum(abs(c) ** 2 for c in self.coeffs.values())))

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs, reverse=True):
            c = self.coeffs[k]
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            z = complex(c)
            if _is_exact(c) or not z.imag:
                real = c if _is_exact(c) else z.real
                sign = "-" if real < 0 else "+"
                a = abs(real)
                text = str(a) if _is_exact(c) else f"{a:.10g}"
                body = text if (a != 1 or not mono) else ""
            else:
                sign, body = "+", f"({z:.10g})"
            if body and mono:
                body = f"{body}*{mono}"
            elif mono:
                body = mono
            parts.append((sign, body))
        s = parts[0][1] if parts[0][0] == "+" else "-" + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s


def polish(p: LaurentPoly, digits: int = 10) -> LaurentPoly:
    """Round float coefficients and drop negligible imaginary parts."""
    if p.exact:
        return p
    scale = max((abs(c) for c in p.coeffs.values()), default=0.0)
    out = {}
    for k, c in p.coeffs.items():
        c = complex(c)
        re = round(c.real, digits) if abs(c.real) > 1e-12 * scale else 0.0
        im = round(c.imag, digits) if abs(c.imag) > 1e-9 * scale else 0.0
        out[k] = complex(re, im) if im else re
    return LaurentPoly(out)


ZERO = LaurentPoly()
ONE = LaurentPoly.const(1)
T = LaurentPoly.t()


def t_power_minus_one(n: int) -> LaurentPoly:
    """``t^n - 1``."""
    return LaurentPoly.monomial(n) - 1


# -- normalization and divisibility ---------------------------------------

def normalize(p: LaurentPoly) -> LaurentPoly:
    """Representative of the class of ``p`` up to units +-t^k.

    Lowest exponent moved to 0; exact polynomials get a positive leading
    coefficient, float ones are made monic.
    """
    if p.is_zero:
        return p
    q = p.shift(-p.lo)
    lead = q.coeffs[q.hi]
    if p.exact:
        return -q if lead < 0 else q
    return LaurentPoly({k: c / lead for k, c in q.coeffs.items()})


def equal_up_to_units(p: LaurentPoly, q: LaurentPoly, tol: float | None = None) -> bool:
    a, b = normalize(p), normalize(q)
    if tol is None and a.exact and b.exact:
        return a == b
    tol = 1e-9 if tol is None else tol
    if a.span != b.span:
        return False
    return all(abs(complex(a.coeffs.get(k, 0)) - complex(b.coeffs.get(k, 0))) <= tol
               for k in range(0, a.span + 1))


def _poly_divmod_exact(num: list[int], den: list[int]) -> tuple[list[int], list[int]] | None:
    """Integer polynomial long division (low -> high lists); None if a quotient
    coefficient is not integral."""
    num = list(num)
    dn = len(den) - 1
    lead = den[-1]
    if len(num) - 1 < dn:
        return [], num
    quot = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c == 0:
            continue
        if c % lead:
            return None
        q = c // lead
        quot[i - dn] = q
        for k in range(dn + 1):
            num[i - dn + k] -= q * den[k]
    return quot, num[:dn]


def exact_divide(p: LaurentPoly, q: LaurentPoly, rel_tol: float = 1e-8) -> LaurentPoly:
    """``p / q`` when the division leaves no remainder, else ``Indivisible``.

    For float input the remainder must be below ``rel_tol * |p|``.
    """
    if q.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    if p.is_zero:
        return p
    shift = p.lo - q.lo
    num = p.shift(-p.lo).coeff_list()
    den = q.shift(-q.lo).coeff_list()
    if p.exact and q.exact:
        res = _poly_divmod_exact(num, den)
        if res is None or any(res[1]):
            raise Indivisible(f"{q} does not divide {p}")
        return LaurentPoly.from_list(res[0], shift)
    num = np.array(num, dtype=complex)
    den = np.array(den, dtype=complex)
    dn = len(den) - 1
    if len(num) - 1 < dn:
        raise Indivisible(f"{q} does not divide {p}")
    quot = np.zeros(len(num) - dn, dtype=complex)
    work = num.copy()
    for i in range(len(num) - 1, dn - 1, -1):
        c = work[i] / den[-1]
        quot[i - dn] = c
        work[i - dn:i + 1] -= c * den
    remainder = np.linalg.norm(work[:dn]) if dn else 0.0
    if remainder > rel_tol * np.linalg.norm(num):
        raise Indivisible(f"remainder {remainder:.3g} dividing {p} by {q}")
    return LaurentPoly.from_list(list(quot), shift).cleaned()


def is_palindromic(p: LaurentPoly, tol: float | None = None) -> bool:
    if p.is_zero:
        return True
    return equal_up_to_units(p, p.invert_variable(), tol)


def mod2(p: LaurentPoly) -> LaurentPoly:
    if not p.exact:
        raise TypeError("mod2 needs integer coefficients")
    return LaurentPoly({k: c % 2 for k, c in p.coeffs.items()})


def normalize_mod2(p: LaurentPoly) -> LaurentPoly:
    q = mod2(p)
    return q.shift(-q.lo) if not q.is_zero else q


def mul_mod2(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return mod2(p * q)


# -- matrices -------------------------------------------------------------

Matrix = list[list[LaurentPoly]]


def as_matrix(rows) -> Matrix:
    return [[x if isinstance(x, LaurentPoly) else LaurentPoly.const(x) for x in row] for row in rows]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, m, p = len(a), len(b), len(b[0]) if b else 0
    return [[sum((a[i][k] * b[k][j] for k in range(m)), ZERO) for j in range(p)] for i in range(n)]


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)] if a else []


def adjoint_t(a: Matrix) -> Matrix:
    """Transpose followed by t -> 1/t."""
    return [[x.invert_variable() for x in row] for row in transpose(a)]


def identity(n: int) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a: list[int], b: list[int]) -> list[int]:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    while out and out[-1] == 0:
        out.pop()
    return out


def _trim(a: list[int]) -> list[int]:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _row_shifts(m: Matrix) -> list[int]:
    shifts = []
    for row in m:
        nz = [x.lo for x in row if not x.is_zero]
        shifts.append(min(nz) if nz else 0)
    return shifts


def det_exact(m: Matrix) -> LaurentPoly:
    """Bareiss elimination over Z[t] after pulling a t-power out of each row."""
    n = len(m)
    if any(len(r) != n for r in m):
        raise NotSquare(f"{n} x {len(m[0]) if m else 0} matrix")
    if n == 0:
        return ONE
    shifts = _row_shifts(m)
    a = [[_trim([0] * (x.lo - s) + x.coeff_list()) if not x.is_zero else [] for x in row]
         for row, s in zip(m, shifts)]
    sign = 1
    prev = [1]
    for k in range(n - 1):
        if not a[k][k]:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return ZERO
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = _poly_sub(_poly_mul(a[i][j], a[k][k]), _poly_mul(a[i][k], a[k][j]))
                if num:
                    q, r = _poly_divmod_exact(num, prev)
                    assert not any(r), "Bareiss division must be exact"
                    a[i][j] = _trim(q)
                else:
                    a[i][j] = []
            a[i][k] = []
        prev = a[k][k]
    det = LaurentPoly.from_list(a[n - 1][n - 1]) * sign
    return det.shift(sum(shifts))


def det_float(m: Matrix, radius: float = INTERP_RADIUS) -> LaurentPoly:
    """Determinant by evaluation at ``d+1`` points on ``|t| = radius`` and
    FFT interpolation, ``d`` bounding the total degree after row shifts."""
    n = len(m)
    if any(len(r) != n for r in m):
        raise NotSquare(f"{n} x {len(m[0]) if m else 0} matrix")
    if n == 0:
        return ONE
    shifts = _row_shifts(m)
    spans = []
    for row, s in zip(m, shifts):
        his = [x.hi for x in row if not x.is_zero]
        spans.append(max(his) - s if his else 0)
    d = sum(spans)
    npts = d + 1
    ts = radius * np.exp(2j * np.pi * np.arange(npts) / npts)
    vals = np.array([np.linalg.det(evaluate_matrix(m, t) * np.array([t ** -s for s in shifts])[:, None])
                     for t in ts])
    coeffs = np.fft.fft(vals) / npts / radius ** np.arange(npts)
    return LaurentPoly.from_list(list(coeffs), sum(shifts)).cleaned()


def det(m: Matrix) -> LaurentPoly:
    if all(x.exact for row in m for x in row):
        return det_exact(m)
    return det_float(m)


def evaluate_matrix(m: Matrix, t) -> np.ndarray:
    return np.array([[complex(x(t)) if not x.is_zero else 0j for x in row] for row in m], dtype=complex)


def mat_to_json(m: Matrix) -> list:
    return [[x.to_json() for x in row] for row in m]


def mat_str(m: Matrix) -> str:
    cells = [[str(x) for x in row] for row in m]
    width = max((len(c) for row in cells for c in row), default=1)
    return "\n".join("[ " + "  ".join(c.rjust(width) for c in row) + " ]" for row in cells)
