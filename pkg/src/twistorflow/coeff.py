"""Exact scalar ring for the moving-frame engine.

A Coeff is a rational Laurent polynomial in the scaling symbol lambda,
tensored with nilpotent jet symbols and formal grade-0 unknowns.  Any
product of jet symbols whose total grade reaches the active cutoff
(default 2) is truncated to zero.
"""

from __future__ import annotations

import threading
from contextlib import contextmanager
from fractions import Fraction

__all__ = [
    "Coeff",
    "JetSymbol",
    "jet_symbol",
    "jet_grade",
    "jet_cutoff",
    "current_cutoff",
    "ZERO",
    "ONE",
    "LAM",
]

# symbol registry: name -> (id, grade); grades indexed by id
_SYM_IDS: dict[str, int] = {}
_SYM_NAMES: list[str] = []
_SYM_GRADES: list[int] = []
_SYM_LOCK = threading.Lock()

_CUTOFF = 2


class JetSymbol:
    """Handle for a registered formal scalar (name plus nilpotency grade)."""

    __slots__ = ("name", "sid", "grade")

    def __init__(self, name: str, sid: int, grade: int):
        self.name = name
        self.sid = sid
        self.grade = grade

    def __repr__(self) -> str:
        return f"JetSymbol({self.name!r}, grade={self.grade})"


def jet_symbol(name: str, grade: int) -> JetSymbol:
    """Register (or fetch) a formal scalar symbol.

    Grade-1 symbols are nilpotent jets; grade-0 symbols are formal
    unknowns treated as constants by differentiation.
    """
    with _SYM_LOCK:
        if name in _SYM_IDS:
            sid = _SYM_IDS[name]
            if _SYM_GRADES[sid] != grade:
                raise ValueError(
                    f"symbol {name} already registered with grade {_SYM_GRADES[sid]}")
            return JetSymbol(name, sid, grade)
        sid = len(_SYM_NAMES)
        _SYM_IDS[name] = sid
        _SYM_NAMES.append(name)
        _SYM_GRADES.append(grade)
        return JetSymbol(name, sid, grade)


def jet_grade(sid: int) -> int:
    return _SYM_GRADES[sid]


def symbol_name(sid: int) -> str:
    return _SYM_NAMES[sid]


@contextmanager
def jet_cutoff(grade: int):
    """Temporarily change the truncation grade (default 2)."""
    global _CUTOFF
    old = _CUTOFF
    _CUTOFF = grade
    try:
        yield
    finally:
        _CUTOFF = old


def current_cutoff() -> int:
    return _CUTOFF


def _monomial_grade(mono: tuple[int, ...]) -> int:
    g = 0
    for sid in mono:
        g += _SYM_GRADES[sid]
    return g


class Coeff:
    """Element of Q[lambda, lambda^-1] (x) jet algebra.

    terms maps (lambda exponent, sorted jet-id tuple) -> Fraction.
    lam2 optionally identifies lambda^2 with a fixed rational, reducing
    exponents to {0, 1}; None keeps lambda fully symbolic.
    """

    __slots__ = ("terms", "lam2")

    def __init__(self, terms: dict[tuple[int, tuple[int, ...]], Fraction] | None = None,
                 lam2: Fraction | None = None):
        self.terms = terms or {}
        self.lam2 = lam2

    # -- constructors -------------------------------------------------
    @staticmethod
    def rational(x, lam2: Fraction | None = None) -> "Coeff":
        x = Fraction(x)
        if x == 0:
            return Coeff({}, lam2)
        return Coeff({(0, ()): x}, lam2)

    @staticmethod
    def lam_power(k: int, coeff=1, lam2: Fraction | None = None) -> "Coeff":
        c = Coeff({(k, ()): Fraction(coeff)}, lam2)
        return c._normal() if lam2 is not None else c

    @staticmethod
    def symbol(sym: JetSymbol, coeff=1, lam2: Fraction | None = None) -> "Coeff":
        return Coeff({(0, (sym.sid,)): Fraction(coeff)}, lam2)

    # -- helpers ------------------------------------------------------
    def _normal(self) -> "Coeff":
        if self.lam2 is None:
            return self
        out: dict = {}
        mu = self.lam2
        for (k, mono), v in self.terms.items():
            q, r = divmod(k, 2)
            vv = v * mu ** q
            key = (r, mono)
            nv = out.get(key, Fraction(0)) + vv
            if nv:
                out[key] = nv
            elif key in out:
                del out[key]
        return Coeff(out, self.lam2)

    def _compat(self, other: "Coeff") -> None:
        if self.lam2 != other.lam2:
            raise ValueError("mixing Coeffs with different lambda^2 specializations")

    def is_zero(self) -> bool:
        return not self.terms

    def copy(self) -> "Coeff":
        return Coeff(dict(self.terms), self.lam2)

    # -- ring operations ----------------------------------------------
    def __add__(self, other: "Coeff") -> "Coeff":
        self._compat(other)
        out = dict(self.terms)
        for key, v in other.terms.items():
            nv = out.get(key, Fraction(0)) + v
            if nv:
                out[key] = nv
            elif key in out:
                del out[key]
        return Coeff(out, self.lam2)

    def __neg__(self) -> "Coeff":
        return Coeff({k: -v for k, v in self.terms.items()}, self.lam2)

    def __sub__(self, other: "Coeff") -> "Coeff":
        return self + (-other)

    def __mul__(self, other: "Coeff") -> "Coeff":
        self._compat(other)
        cutoff = _CUTOFF
        out: dict = {}
        for (k1, m1), v1 in self.terms.items():
            for (k2, m2), v2 in other.terms.items():
                if m1 and m2:
                    mono = tuple(sorted(m1 + m2))
                    if _monomial_grade(mono) >= cutoff:
                        continue
                elif m1:
                    mono = m1
                else:
                    mono = m2
                key = (k1 + k2, mono)
                nv = out.get(key, Fraction(0)) + v1 * v2
                if nv:
                    out[key] = nv
                elif key in out:
                    del out[key]
        c = Coeff(out, self.lam2)
        return c._normal() if self.lam2 is not None else c

    def scale(self, x) -> "Coeff":
        x = Fraction(x)
        if x == 0:
            return Coeff({}, self.lam2)
        return Coeff({k: v * x for k, v in self.terms.items()}, self.lam2)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Coeff):
            return NotImplemented
        return self.lam2 == other.lam2 and self.terms == other.terms

    def __hash__(self):
        return hash((self.lam2, frozenset(self.terms.items())))

    # -- structure queries ---------------------------------------------
    def grade_part(self, grade: int) -> "Coeff":
        return Coeff({k: v for k, v in self.terms.items() if _monomial_grade(k[1]) == grade},
                     self.lam2)

    def max_grade(self) -> int:
        return max((_monomial_grade(m) for (_, m) in self.terms), default=0)

    def symbols(self) -> set[str]:
        out: set[str] = set()
        for (_, mono) in self.terms:
            for sid in mono:
                out.add(_SYM_NAMES[sid])
        return out

    def is_jet_free(self) -> bool:
        return all(not m for (_, m) in self.terms)

    def lam_poly(self) -> dict[int, Fraction]:
        """Laurent coefficients, only valid for jet-free values."""
        out: dict[int, Fraction] = {}
        for (k, mono), v in self.terms.items():
            if mono:
                raise ValueError("jet symbols present; not a pure Laurent polynomial")
            out[k] = out.get(k, Fraction(0)) + v
        return out

    def eval_lambda2(self, mu) -> Fraction:
        """Evaluate a jet-free, even-degree Laurent polynomial at lambda^2 = mu."""
        mu = Fraction(mu)
        total = Fraction(0)
        for k, v in self.lam_poly().items():
            if k % 2:
                raise ValueError("odd lambda power; value depends on sqrt(lambda^2)")
            total += v * mu ** (k // 2)
        return total

    def inverse(self) -> "Coeff":
        """Inverse of u*(1 + nilpotent) where u is a single Laurent monomial unit."""
        unit_terms = {k: v for k, v in self.terms.items() if not k[1]}
        if len(unit_terms) != 1:
            raise ValueError("inverse requires a single jet-free Laurent monomial unit part")
        (k0, _), v0 = next(iter(unit_terms.items()))
        inv_unit = Coeff({(-k0, ()): 1 / v0}, self.lam2)
        if self.lam2 is not None:
            inv_unit = inv_unit._normal()
        rest = (self - Coeff(({(k0, ()): v0}), self.lam2)) * inv_unit
        # Neumann series; nilpotency bounds the iteration by the cutoff
        result = ONE_at(self.lam2)
        power = ONE_at(self.lam2)
        for _ in range(_CUTOFF):
            power = power * rest
            if power.is_zero():
                break
            result = result + (power if _ % 2 == 1 else -power)
        return inv_unit * result

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for (k, mono), v in sorted(self.terms.items(), key=lambda kv: (kv[0][0], kv[0][1])):
            s = str(v)
            if k:
                s += f"*L^{k}"
            for sid in mono:
                s += f"*{_SYM_NAMES[sid]}"
            bits.append(s)
        return " + ".join(bits)


ZERO = Coeff()
ONE = Coeff.rational(1)
LAM = Coeff.lam_power(1)


def ONE_at(lam2: Fraction | None) -> Coeff:
    return Coeff({(0, ()): Fraction(1)}, lam2)


def ZERO_at(lam2: Fraction | None) -> Coeff:
    return Coeff({}, lam2)
