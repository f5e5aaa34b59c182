"""The annihilator pipeline: projection of center elements to U(a), the
Harish-Chandra image and its infinitesimal character, the correction term
b(z), and the certified (H-part, J) operator pair whose sum kills the
spherical vector tensored with evaluation-at-identity.

Everything is computed with a fully formal spectral parameter, so every
certificate below is a polynomial identity checked literally, coefficient
by coefficient.
"""

from __future__ import annotations

import random

from .errors import (
    CertificationFailure,
    DegenerateDegree,
    InvarianceViolation,
    NotCentral,
)
from .gaussian import QI
from . import linalg
from .lie_core import is_regular, weyl_group
from .nupoly import NuPolynomial
from .uea import (
    UEAElement,
    b_order,
    normal_form,
    pr_order,
    rho_shift,
    nu_plus_rho_shift,
    tau_translate,
    verify_central,
)

CERT_FLAGS = ("central_ok", "pr_ok", "b_ok", "degree_ok",
              "gradient_match", "top_cancel")


def _reorder(u, order):
    return normal_form(order, list(u.terms.items()))


def _split_pr(z):
    """(pure-cartan part, rest) of the (n, a, nbar) normal form of z."""
    alg = z.algebra
    nf = _reorder(z, pr_order(alg))
    pure, rest = {}, {}
    for w, c in nf.terms.items():
        if all(alg.letter_part(x) == "a" for x in w):
            pure[w] = c
        else:
            rest[w] = c
    order = pr_order(alg)
    return UEAElement(order, pure), UEAElement(order, rest), nf


def pr_projection(z):
    """Project onto U(a) along nU(g) + U(g)nbar.

    The result is certified: an independently randomized reduction strategy
    must reproduce the normal form, and the complement must contain no
    pure-cartan monomial.
    """
    pure, rest, nf = _split_pr(z)
    if not _pr_certificate(z, pure, rest, nf):
        raise CertificationFailure("pr_ok")
    return pure


def _pr_certificate(z, pure, rest, nf):
    alg = z.algebra
    rng = random.Random(0xC0FFEE)
    again = normal_form(pr_order(alg), list(z.terms.items()), rng=rng)
    if again.terms != nf.terms:
        return False
    return not any(
        all(alg.letter_part(x) == "a" for x in w) for w in rest.terms)


def cartan_polynomial(u):
    """Identify an element of U(a) with a polynomial on a*."""
    alg = u.algebra
    var_of = {h: i for i, h in enumerate(alg.cartan_indices)}
    poly = NuPolynomial.zero(alg.rank)
    for word, c in u.terms.items():
        exp = [0] * alg.rank
        for letter in word:
            if letter not in var_of:
                raise ValueError("element is not supported on U(a)")
            exp[var_of[letter]] += 1
        poly = poly + NuPolynomial(alg.rank, {tuple(exp): QI(1)}) * c
    return poly


def polynomial_to_cartan(algebra, poly, order=None):
    """Inverse of cartan_polynomial: monomials become sorted cartan words."""
    order = order or pr_order(algebra)
    terms = {}
    for exp, c in poly.terms.items():
        word = []
        for i, k in enumerate(exp):
            word.extend([algebra.cartan_indices[i]] * k)
        terms[tuple(word)] = NuPolynomial.const(algebra.rank, c)
    return UEAElement(order, terms)


def hc_image(z):
    """gamma_HC(z) = tau_rho(pr(z)) as a W-invariant polynomial on a*."""
    ok, witness = verify_central(z.algebra, z)
    if not ok:
        raise NotCentral(f"[z, {witness}] != 0")
    shifted = tau_translate(pr_projection(z), rho_shift(z.algebra))
    return cartan_polynomial(shifted)


def infinitesimal_character(z, nu=None):
    """chi_nu(z): evaluation of the HC image at nu (rho-shifts cancel in the
    split scope).  Formal nu returns the polynomial itself."""
    p = hc_image(z)
    if nu is None or nu.is_formal:
        return p
    return p.eval(nu.values)


def _b_data(z):
    """Normal form of z - pr(z) in the (n, a, k) order, split into the
    k-free part (minus b) and the k-tail, plus the membership certificates."""
    alg = z.algebra
    d = z.degree()
    pure, rest, _ = _split_pr(z)
    nf = _reorder(rest, b_order(alg))
    k_free, k_tail = {}, {}
    for w, c in nf.terms.items():
        if any(alg.letter_part(x) == "k" for x in w):
            k_tail[w] = c
        else:
            k_free[w] = c
    adeg_ok = all(
        sum(1 for x in w if alg.letter_part(x) == "a") <= d - 2
        for w in nf.terms)
    ends_in_k = all(alg.letter_part(w[-1]) == "k" for w in k_tail)
    border = b_order(alg)
    b = UEAElement(border, {w: -c for w, c in k_free.items()})
    return b, UEAElement(border, k_tail), adeg_ok and ends_in_k


def b_correction(z):
    """b(z) in U(n)U(a) with a-degree <= deg(z) - 2, such that
    z - pr(z) + b(z) lies in U(g)k.  Raises if a membership certificate
    fails (which signals a non-central input or an ordering bug)."""
    b, _tail, ok = _b_data(z)
    if not ok:
        raise CertificationFailure("b_ok")
    return b


class Annihilator:
    """Certified operator pair: Omega = H_part + J annihilates the spherical
    vector tensored with the evaluation functional, H_part is the gradient
    of the top part of the HC image, and J has nu-degree <= d - 2."""

    def __init__(self, algebra, degree, h_part, j, p, source, certificates):
        self.algebra = algebra
        self.degree = degree
        self.H_part = h_part          # {cartan slot: NuPolynomial}, homog d-1
        self.J = j                    # UEAElement with polynomial coeffs
        self.P = p                    # HC image
        self.source = source          # the center element z
        self.certificates = dict(certificates)

    @property
    def certified(self):
        return all(self.certificates.get(f, False) for f in CERT_FLAGS)

    def h_part_element(self, order=None):
        alg = self.algebra
        order = order or self.J.order
        terms = {}
        for slot, coeff in self.H_part.items():
            if not coeff.is_zero():
                terms[(alg.cartan_indices[slot],)] = coeff
        return UEAElement(order, terms)

    def omega(self):
        return self.h_part_element() + self.J

    def to_json(self):
        return {
            "degree": self.degree,
            "H_part": [{"cartan": slot, "coeff": c.to_json()}
                       for slot, c in sorted(self.H_part.items())],
            "J": self.J.to_json(),
            "P": self.P.to_json(),
            "source": self.source.to_json(),
            "certificates": {f: bool(self.certificates[f]) for f in CERT_FLAGS},
        }


def construct_annihilator(z):
    """Run the full pipeline on a central element of degree >= 2.

    Omega = tau_{nu+rho}(pr z) - tau_{nu+rho}(b z) - chi_nu(z) with formal nu
    is split into its nu-degree-(d-1) part (the H-part, which must be a
    cartan vector matching the gradient of the HC image's top part) and the
    rest J.  All six certificates are computed; any failure raises."""
    alg = z.algebra
    d = z.degree()
    if d <= 1:
        raise DegenerateDegree(f"degree {d} center element has no H-part")
    central_ok, witness = verify_central(alg, z)
    if not central_ok:
        raise NotCentral(f"[z, {witness}] != 0")

    pure, rest, nf = _split_pr(z)
    pr_ok = _pr_certificate(z, pure, rest, nf)
    b, _tail, b_ok = _b_data(z)
    p = cartan_polynomial(tau_translate(pure, rho_shift(alg)))
    chi = p  # evaluation at nu + rho - rho_h = nu in the split scope

    shift = nu_plus_rho_shift(alg)
    border = b_order(alg)
    omega = (tau_translate(_reorder(pure, border), shift)
             - tau_translate(b, shift)
             - UEAElement.one(border, chi))

    top_cancel = all(
        omega.nu_component(k).is_zero()
        for k in range(d, omega.nu_degree() + 1)) and omega.nu_degree() < d

    h_elem = omega.nu_component(d - 1)
    slot_of = {h: i for i, h in enumerate(alg.cartan_indices)}
    h_part = {}
    in_cartan = True
    for w, c in h_elem.terms.items():
        if len(w) == 1 and w[0] in slot_of:
            h_part[slot_of[w[0]]] = h_part.get(slot_of[w[0]],
                                               NuPolynomial.zero(alg.rank)) + c
        else:
            in_cartan = False

    p_top = p.homogeneous_component(d)
    gradient_match = in_cartan and all(
        h_part.get(i, NuPolynomial.zero(alg.rank)) == p_top.derivative(i)
        for i in range(alg.rank))

    j = omega - h_elem
    degree_ok = j.nu_degree() <= d - 2

    certificates = {
        "central_ok": central_ok,
        "pr_ok": pr_ok,
        "b_ok": b_ok,
        "degree_ok": degree_ok,
        "gradient_match": gradient_match,
        "top_cancel": top_cancel,
    }
    ann = Annihilator(alg, d, h_part, j, p, _reorder(z, pr_order(alg)),
                      certificates)
    for flag in CERT_FLAGS:
        if not certificates[flag]:
            raise CertificationFailure(flag)
    return ann, certificates


def gradient(p, nu=None):
    """P'(nu) on the cartan basis via the canonical identification of
    (a*)^* with a.  Formal nu gives polynomials, numeric gives scalars."""
    parts = [p.derivative(i) for i in range(p.nvars)]
    if nu is None or nu.is_formal:
        return parts
    return [q.eval(nu.values) for q in parts]


class CartanSpan:
    def __init__(self, dimension, basis, w0_order, fixed_dim, verdict):
        self.dimension = dimension
        self.basis = basis
        self.w0_order = w0_order
        self.fixed_dim = fixed_dim
        self.verdict = verdict


def cartan_span(algebra, ps, nutilde):
    """span{P'(nutilde)} compared against the W0-fixed subspace of a.

    Every input polynomial must be exactly W-invariant; for a regular
    parameter and images of center elements through degree rank+1 the span
    is all of a."""
    w = weyl_group(algebra)
    for p in ps:
        for m in w.elements:
            if p.compose_linear(m) != p:
                raise InvarianceViolation("input polynomial is not W-invariant")
    rows = [gradient(p, nutilde) for p in ps]
    red, pivots = linalg.rref(rows)
    dim = len(pivots)
    basis = [tuple(red[i]) for i in range(dim)]
    _, w0 = is_regular(algebra, nutilde)
    r = algebra.rank
    stack = []
    for m in w0.elements:
        for i in range(r):
            stack.append([QI.of(m[i][j]) - QI(1 if i == j else 0)
                          for j in range(r)])
    fixed_dim = len(linalg.kernel_basis(stack)) if stack else r
    if dim == r:
        verdict = "full-cartan"
    elif dim == fixed_dim:
        verdict = "matches-stabilizer"
    else:
        verdict = "proper-subspace"
    return CartanSpan(dim, basis, w0.order, fixed_dim, verdict)
