"""Exact model of the spherical principal series of PSL2(R) on Fourier modes
of the circle M\\K.

Frozen conventions (the oracle test pins the signs):
  * k(theta) = [[cos t, sin t], [-sin t, cos t]] and exp(s W) = k(s);
  * frequency n stands for e^{2 i n theta}, a function on SO(2)/{+-1};
  * the representation acts by
        (X f)(k) = <nu + rho, H0(Ad(k) X)> f(k) + (D_X f)(k),
    with the coefficient tables below derived once from the matrix Iwasawa
    decomposition of Ad(k(theta)) X:
        H0(Ad(k)H)  = cos(2t) H      D_H  = sin(2t) d/dt
        H0(Ad(k)X+) = sin(2t)/2 H    D_X+ = (1 - cos 2t)/2 d/dt
        H0(Ad(k)X-) = sin(2t)/2 H    D_X- = -(1 + cos 2t)/2 d/dt
        H0(Ad(k)W)  = 0              D_W  = d/dt
  * the evaluation functional delta(f) = f(identity) is stored as a rule,
    never truncated, so annihilation checks carry no approximation.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

from .errors import CertificationFailure, UnknownLetter
from .gaussian import QI
from .lie_core import SpectralParameter
from .nupoly import NuPolynomial
from .uea import UEAElement

_HALF = Fraction(1, 2)
_I = QI(0, 1)


def _poly(c):
    if isinstance(c, NuPolynomial):
        if c.nvars != 1:
            raise ValueError("model coefficients live in one nu variable")
        return c
    return NuPolynomial.const(1, c)


class TrigPolynomial:
    """Finite Fourier expansion sum c_n e^{2 i n theta} with exact
    coefficients (constants or polynomials in the spectral parameter)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        clean = {}
        if coeffs:
            for n, c in coeffs.items():
                c = _poly(c)
                if not c.is_zero():
                    clean[int(n)] = c
        self.coeffs = clean

    @staticmethod
    def mode(n, coeff=1):
        return TrigPolynomial({n: coeff})

    @staticmethod
    def zero():
        return TrigPolynomial()

    def is_zero(self):
        return not self.coeffs

    def coefficient(self, n):
        return self.coeffs.get(n, NuPolynomial.zero(1))

    def __add__(self, other):
        out = dict(self.coeffs)
        for n, c in other.coeffs.items():
            s = out.get(n, NuPolynomial.zero(1)) + c
            if s.is_zero():
                out.pop(n, None)
            else:
                out[n] = s
        return TrigPolynomial(out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return TrigPolynomial({n: -c for n, c in self.coeffs.items()})

    def scale(self, c):
        c = _poly(c)
        return TrigPolynomial({n: t * c for n, t in self.coeffs.items()})

    def __mul__(self, other):
        if not isinstance(other, TrigPolynomial):
            return self.scale(other)
        out = {}
        for n1, c1 in self.coeffs.items():
            for n2, c2 in other.coeffs.items():
                n = n1 + n2
                s = out.get(n, NuPolynomial.zero(1)) + c1 * c2
                if s.is_zero():
                    out.pop(n, None)
                else:
                    out[n] = s
        return TrigPolynomial(out)

    __rmul__ = scale

    def __eq__(self, other):
        return isinstance(other, TrigPolynomial) and self.coeffs == other.coeffs

    def conjugate(self):
        return TrigPolynomial({-n: c.conjugate() for n, c in self.coeffs.items()})

    def derivative(self):
        """d/dtheta: the mode e^{2 i n theta} picks up 2 i n."""
        return TrigPolynomial({n: c * QI(0, 2 * n)
                               for n, c in self.coeffs.items()})

    def coefficient_sum(self):
        """Value at the identity rotation (theta = 0)."""
        acc = NuPolynomial.zero(1)
        for c in self.coeffs.values():
            acc = acc + c
        return acc

    def evaluate(self, theta, nu_value=None):
        """Float evaluation; formal coefficients need nu_value (a complex)."""
        acc = 0j
        for n, c in self.coeffs.items():
            if c.is_constant():
                z = complex(c.constant_value())
            elif nu_value is not None:
                z = sum(complex(q) * nu_value ** e[0]
                        for e, q in c.terms.items())
            else:
                raise ValueError("formal coefficient needs a nu value")
            acc += z * cmath.exp(2j * n * theta)
        return acc

    def to_json(self):
        return {"modes": [{"n": n, "coeff": c.to_json()}
                          for n, c in sorted(self.coeffs.items())]}

    @staticmethod
    def from_json(data):
        return TrigPolynomial({item["n"]: NuPolynomial.from_json(1, item["coeff"])
                               for item in data["modes"]})

    def pretty(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"({c.pretty(['nu'])})*e[{n}]"
                          for n, c in sorted(self.coeffs.items()))

    def __repr__(self):
        return f"TrigPolynomial({self.pretty()})"


def spherical_vector():
    return TrigPolynomial({0: 1})


# ---------------------------------------------------------------------------
# the action
# ---------------------------------------------------------------------------

def _nu_value(nu):
    if nu is None:
        return NuPolynomial.var(1, 0)
    if isinstance(nu, SpectralParameter):
        if nu.is_formal:
            return NuPolynomial.var(1, 0)
        return NuPolynomial.const(1, nu.values[0])
    return NuPolynomial.const(1, nu)


_LETTER_BY_PART = {"a": "H", "n": "X+", "nbar": "X-", "k": "W"}


def _letter_name(algebra, letter):
    if algebra is None:
        return letter
    if algebra.n != 2:
        raise ValueError("the compact model is the PSL2 one (n = 2)")
    return _LETTER_BY_PART[algebra.letter_part(letter)]


def act(letter, f, nu=None, algebra=None):
    """I_nu(X) f for X one of H, X+, X-, W, exactly.

    letter is a name from that alphabet (or an algebra letter id when
    algebra is given); nu may be formal (default) or numeric."""
    name = letter if isinstance(letter, str) else _letter_name(algebra, letter)
    t = _nu_value(nu)
    half = (t + 1) * _HALF
    quarter_i = (t + 1) * QI(0, Fraction(1, 4))
    out = {}

    def add(n, c):
        s = out.get(n, NuPolynomial.zero(1)) + c
        if s.is_zero():
            out.pop(n, None)
        else:
            out[n] = s

    for n, c in f.coeffs.items():
        if name == "H":
            add(n + 1, c * (half + n))
            add(n - 1, c * (half - n))
        elif name == "X+":
            add(n + 1, c * (-quarter_i - QI(0, Fraction(n, 2))))
            add(n, c * QI(0, n))
            add(n - 1, c * (quarter_i - QI(0, Fraction(n, 2))))
        elif name == "X-":
            add(n + 1, c * (-quarter_i - QI(0, Fraction(n, 2))))
            add(n, c * QI(0, -n))
            add(n - 1, c * (quarter_i - QI(0, Fraction(n, 2))))
        elif name == "W":
            add(n, c * QI(0, 2 * n))
        else:
            raise UnknownLetter(f"no action table for {name!r}")
    return TrigPolynomial(out)


def act_word(word, f, nu=None, algebra=None):
    """Compose letter actions; the rightmost letter acts first."""
    for letter in reversed(word):
        f = act(letter, f, nu, algebra)
    return f


def act_element(u, f, nu=None):
    """I_nu(u) f for an enveloping-algebra element over the sl2 letters."""
    alg = u.algebra
    numeric = isinstance(nu, SpectralParameter) and not nu.is_formal
    out = TrigPolynomial()
    for word, coeff in u.terms.items():
        if numeric:
            c = NuPolynomial.const(1, coeff.eval(nu.values))
        else:
            if coeff.nvars != 1:
                raise ValueError("formal action needs rank-one coefficients")
            c = coeff
        out = out + act_word(word, f, nu, alg).scale(c)
    return out


# ---------------------------------------------------------------------------
# the numeric oracle
# ---------------------------------------------------------------------------

def rotation(theta):
    return [[math.cos(theta), math.sin(theta)],
            [-math.sin(theta), math.cos(theta)]]


def letter_exp(name, t):
    """exp(t X) in closed form for the four model letters."""
    if name == "H":
        return [[math.exp(t), 0.0], [0.0, math.exp(-t)]]
    if name == "X+":
        return [[1.0, t], [0.0, 1.0]]
    if name == "X-":
        return [[1.0, 0.0], [t, 1.0]]
    if name == "W":
        return rotation(t)
    raise UnknownLetter(name)


def mat2_mul(a, b):
    return [[a[0][0] * b[0][0] + a[0][1] * b[1][0],
             a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0],
             a[1][0] * b[0][1] + a[1][1] * b[1][1]]]


def evaluate_extension(f, g, nu):
    """Value at g of the extension of f by f(n exp(sH) k) = e^{(nu+rho)(sH)} f(k).

    Numeric Iwasawa by Gram-Schmidt on the bottom row; this is the
    finite-difference oracle for the act tables."""
    det = g[0][0] * g[1][1] - g[0][1] * g[1][0]
    if abs(det - 1.0) > 1e-9:
        raise ValueError("matrix is not unimodular")
    c, d = g[1][0], g[1][1]
    r = math.hypot(c, d)
    if r == 0.0:
        raise ValueError("matrix is singular")
    s = -math.log(r)
    theta = math.atan2(-c, d)
    nuval = complex(nu.values[0]) if isinstance(nu, SpectralParameter) else complex(nu)
    return cmath.exp(s * (nuval + 1.0)) * f.evaluate(theta)


# ---------------------------------------------------------------------------
# functionals and the distribution leg
# ---------------------------------------------------------------------------

class DeltaFunctional:
    """delta(f) = f(identity): the sum of the Fourier coefficients."""

    def apply(self, f):
        return f.coefficient_sum()

    def __repr__(self):
        return "delta"


class RieszFunctional:
    """T(g): f -> <f, g> = sum_n f_n conj(g_n), the conjugate-linear embedding."""

    def __init__(self, g):
        self.g = g

    def apply(self, f):
        acc = NuPolynomial.zero(1)
        for n, c in f.coeffs.items():
            acc = acc + c * self.g.coefficient(n).conjugate()
        return acc

    def __repr__(self):
        return f"T({self.g.pretty()})"


class ActedFunctional:
    """I'_nu(u) Phi, realized exactly through the transpose anti-involution:
    (I'_nu(u) Phi)(f) = Phi(act(u^t, f))."""

    def __init__(self, base, u, nu=None):
        self.base = base
        self.u = u
        self.nu = nu

    def apply(self, f):
        alg = self.u.algebra
        acc = NuPolynomial.zero(1)
        for word, coeff in self.u.terms.items():
            sign = -1 if len(word) % 2 else 1
            if isinstance(self.nu, SpectralParameter) and not self.nu.is_formal:
                c = NuPolynomial.const(1, coeff.eval(self.nu.values)) * sign
            else:
                c = coeff * sign
            moved = act_word(tuple(reversed(word)), f, self.nu, alg)
            acc = acc + self.base.apply(moved) * c
        return acc


class TruncatedFunctional:
    """The N-truncation data of Phi: its values on the modes |n| <= N.

    vector() is the unique Phi_N in V_N with T(Phi_N) - Phi annihilating V_N.
    """

    def __init__(self, values, level):
        self.values = dict(values)
        self.level = level

    @staticmethod
    def of(phi, level):
        return TruncatedFunctional(
            {n: phi.apply(TrigPolynomial.mode(n)) for n in range(-level, level + 1)},
            level)

    def vector(self):
        return TrigPolynomial({n: v.conjugate() for n, v in self.values.items()})


def delta_and_truncate(level):
    """(delta as a rule, delta_N): the vector is sum_{|n|<=N} e^{2 i n theta}."""
    if level < 0:
        raise ValueError("truncation level must be >= 0")
    delta = DeltaFunctional()
    return delta, TruncatedFunctional.of(delta, level).vector()


def dual_act(u, phi, nu, f):
    """(I'_nu(u) Phi)(f), exactly."""
    return ActedFunctional(phi, u, nu).apply(f)


class ModelState:
    """Element of V_K tensor V'_K: pairs (vector, functional rule); pairing
    the second leg against a test vector is exact."""

    def __init__(self, pairs):
        self.pairs = list(pairs)

    def act_by_tensor(self, tensor_pairs, nu=None):
        """Apply sum u' tensor u'' (a coproduct) to every pair."""
        out = []
        for vec, phi in self.pairs:
            for left, right in tensor_pairs:
                out.append((act_element(left, vec, nu),
                            ActedFunctional(phi, right, nu)))
        return ModelState(out)

    def contract(self, f):
        """Pair the second legs against f; an exact element of V_K remains."""
        acc = TrigPolynomial()
        for vec, phi in self.pairs:
            acc = acc + vec.scale(phi.apply(f))
        return acc


# ---------------------------------------------------------------------------
# the end-to-end annihilation check
# ---------------------------------------------------------------------------

class ResidualReport:
    def __init__(self, n_max, per_mode, witness):
        self.n_max = n_max
        self.per_mode = per_mode      # [(mode, residual TrigPolynomial)]
        self.witness = witness        # first nonzero (mode, trig) or None

    @property
    def zero(self):
        return self.witness is None

    def max_abs(self):
        """Float magnitude of the worst coefficient (0.0 when exact zero)."""
        worst = 0.0
        for _, res in self.per_mode:
            for c in res.coeffs.values():
                for q in c.terms.values():
                    worst = max(worst, abs(complex(q)))
        return worst

    def to_json(self):
        return {
            "zero": self.zero,
            "n_max": self.n_max,
            "max_abs": self.max_abs(),
            "per_mode": [
                {"mode": m, "zero": res.is_zero(),
                 "residual": res.to_json()}
                for m, res in self.per_mode
            ],
        }


def apply_operator(omega, n_max, nu=None):
    """Residual of (I tensor I')(omega) on phi_0 tensor delta against all
    test modes |m| <= n_max, with exact polynomial coefficients."""
    from .uea import coproduct
    state = ModelState([(spherical_vector(), DeltaFunctional())])
    moved = state.act_by_tensor(coproduct(omega), nu)
    per_mode = []
    witness = None
    for m in range(-n_max, n_max + 1):
        res = moved.contract(TrigPolynomial.mode(m))
        per_mode.append((m, res))
        if witness is None and not res.is_zero():
            witness = (m, res)
    return ResidualReport(n_max, per_mode, witness)


def apply_annihilator(ann, n_test, nu=None):
    """Exact annihilation check for a certified annihilator over sl2."""
    if not ann.certified:
        raise CertificationFailure("certified",
                                   "refusing an uncertified annihilator")
    if ann.algebra.n != 2:
        raise ValueError("the compact model is the PSL2 one (n = 2)")
    if n_test < ann.degree + 2:
        raise ValueError(f"need n_test >= degree + 2 = {ann.degree + 2}")
    return apply_operator(ann.omega(), n_test, nu)


# ---------------------------------------------------------------------------
# integration-by-parts symbols and delta-sequences
# ---------------------------------------------------------------------------

_H0_TABLE = {
    # H0(Ad(k(t)) X) as a multiple of H: {mode: coefficient} of the symbol
    "H": {1: QI(Fraction(1, 2)), -1: QI(Fraction(1, 2))},          # cos 2t
    "X+": {1: QI(0, Fraction(-1, 4)), -1: QI(0, Fraction(1, 4))},  # sin(2t)/2
    "X-": {1: QI(0, Fraction(-1, 4)), -1: QI(0, Fraction(1, 4))},
    "W": {},
}


def p_function(letter, nutilde):
    """p_X(k) = (1/i) <nutilde, Ad(k) X> with nutilde extended by the Iwasawa
    decomposition; real-valued for nutilde in i a*."""
    if letter not in _H0_TABLE:
        raise UnknownLetter(letter)
    if nutilde.is_formal:
        raise ValueError("p_X needs a numeric parameter")
    val = nutilde.values[0]
    if val.re:
        raise ValueError("p_X is defined for purely imaginary parameters")
    scale = val / _I
    return TrigPolynomial({n: NuPolynomial.const(1, c * scale)
                           for n, c in _H0_TABLE[letter].items()})


class FejerSqrt:
    """f_j = (sum_{m=0}^{j} e^{2 i m theta}) / sqrt(j+1), stored exactly as
    the integer-coefficient numerator plus the rational norm square, since
    1/sqrt(j+1) is not a Gaussian rational.  density() = |f_j|^2 is exact."""

    def __init__(self, j):
        if j < 1:
            raise ValueError("need j >= 1")
        self.j = j
        self.numerator = TrigPolynomial({m: 1 for m in range(j + 1)})
        self.norm_sq = Fraction(j + 1)

    def density(self):
        """|f_j|^2: the Fejer kernel of order j, unit mass, exact."""
        prod = self.numerator * self.numerator.conjugate()
        return prod.scale(Fraction(1, self.j + 1))

    def evaluate(self, theta):
        return self.numerator.evaluate(theta) / math.sqrt(self.j + 1)


def fejer_sqrt(j):
    return FejerSqrt(j)
