"""Exact multivariate polynomials over Q(i) in the Cartan coordinates of nu.

A NuPolynomial is a sparse map exponent-tuple -> QI with no stored zeros.
The variable count is fixed per polynomial; mixing arities is an error.
These double as the coefficient ring of the enveloping-algebra code and as
plain polynomial values (infinitesimal characters, HC images).
"""

from __future__ import annotations

from fractions import Fraction

from .gaussian import QI, qi_from_json, qi_to_json


class NuPolynomial:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        clean = {}
        if terms:
            for exp, c in terms.items():
                c = QI.of(c)
                if c.is_zero():
                    continue
                if len(exp) != nvars:
                    raise ValueError("exponent arity mismatch")
                clean[tuple(exp)] = c
        self.terms = clean

    # -- constructors ---------------------------------------------------

    @staticmethod
    def const(nvars: int, c) -> "NuPolynomial":
        c = QI.of(c)
        if c.is_zero():
            return NuPolynomial(nvars)
        return NuPolynomial(nvars, {(0,) * nvars: c})

    @staticmethod
    def var(nvars: int, i: int) -> "NuPolynomial":
        exp = [0] * nvars
        exp[i] = 1
        return NuPolynomial(nvars, {tuple(exp): QI(1)})

    @staticmethod
    def zero(nvars: int) -> "NuPolynomial":
        return NuPolynomial(nvars)

    def _coerce(self, other) -> "NuPolynomial":
        if isinstance(other, NuPolynomial):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return NuPolynomial.const(self.nvars, other)

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> QI:
        return self.terms.get((0,) * self.nvars, QI(0))

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        out = dict(self.terms)
        for e, c in o.terms.items():
            s = out.get(e, QI(0)) + c
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        p = NuPolynomial(self.nvars)
        p.terms = out
        return p

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        p = NuPolynomial(self.nvars)
        p.terms = {e: -c for e, c in self.terms.items()}
        return p

    def __mul__(self, other):
        o = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, QI(0)) + c1 * c2
                if s.is_zero():
                    out.pop(e, None)
                else:
                    out[e] = s
        p = NuPolynomial(self.nvars)
        p.terms = out
        return p

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = NuPolynomial.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, NuPolynomial):
            try:
                other = self._coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # -- structure ------------------------------------------------------

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def homogeneous_component(self, k: int) -> "NuPolynomial":
        p = NuPolynomial(self.nvars)
        p.terms = {e: c for e, c in self.terms.items() if sum(e) == k}
        return p

    def derivative(self, i: int) -> "NuPolynomial":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        p = NuPolynomial(self.nvars)
        p.terms = out
        return p

    def conjugate(self) -> "NuPolynomial":
        """Conjugate coefficients (the formal variables are left alone)."""
        p = NuPolynomial(self.nvars)
        p.terms = {e: c.conjugate() for e, c in self.terms.items()}
        return p

    # -- evaluation ---------------------------------------------------------

    def eval(self, values) -> QI:
        values = [QI.of(v) for v in values]
        if len(values) != self.nvars:
            raise ValueError("wrong number of values")
        acc = QI(0)
        for e, c in self.terms.items():
            t = c
            for v, k in zip(values, e):
                for _ in range(k):
                    t = t * v
            acc = acc + t
        return acc

    def substitute(self, polys) -> "NuPolynomial":
        """Compose with polys: variable i is replaced by polys[i]."""
        polys = list(polys)
        if len(polys) != self.nvars:
            raise ValueError("wrong number of substitutions")
        nv = polys[0].nvars if polys else self.nvars
        acc = NuPolynomial.zero(nv)
        for e, c in self.terms.items():
            t = NuPolynomial.const(nv, c)
            for p, k in zip(polys, e):
                if k:
                    t = t * (p ** k)
            acc = acc + t
        return acc

    def compose_linear(self, matrix) -> "NuPolynomial":
        """Substitute variable i by the linear form sum_j matrix[i][j]*var_j."""
        forms = []
        for i in range(self.nvars):
            f = NuPolynomial.zero(self.nvars)
            for j in range(self.nvars):
                c = matrix[i][j]
                if isinstance(c, (int, Fraction)):
                    c = QI.of(c)
                if not c.is_zero():
                    f = f + NuPolynomial.var(self.nvars, j) * c
            forms.append(f)
        return self.substitute(forms)

    # -- io -------------------------------------------------------------

    def to_json(self) -> list:
        items = sorted(self.terms.items(), key=lambda t: t[0])
        return [{"exp": list(e), **qi_to_json(c)} for e, c in items]

    @staticmethod
    def from_json(nvars: int, data: list) -> "NuPolynomial":
        terms = {}
        for item in data:
            terms[tuple(item["exp"])] = qi_from_json(item)
        return NuPolynomial(nvars, terms)

    def __repr__(self):
        return f"NuPolynomial({self.nvars}, {self.pretty()})"

    def pretty(self, names=None) -> str:
        if not self.terms:
            return "0"
        if names is None:
            names = [f"nu{i + 1}" for i in range(self.nvars)]
        parts = []
        for e, c in sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0])):
            mono = "*".join(
                (names[i] if k == 1 else f"{names[i]}^{k}")
                for i, k in enumerate(e) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == QI(1):
                parts.append(mono)
            else:
                parts.append(f"({c})*{mono}")
        return " + ".join(parts)
