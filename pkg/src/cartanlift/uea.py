"""Exact arithmetic in U(g_C) over Q(i)[nu_1..nu_r].

Elements are sparse maps {word: NuPolynomial} where a word is a tuple of
letter ids sorted for a declared PBW order.  Normal ordering is the rewrite
xy -> yx + [x,y] applied to adjacent out-of-order pairs until none remain;
termination is the usual filtration descent, and confluence is exercised by
the test suite through independent randomized reduction strategies.

Two orders matter:
  * the (n, a, nbar) order, whose pure-cartan monomials realize the
    projection of a center element to U(a);
  * the (n, a, k) order with compact letters w = e - f, which exposes the
    correction term b(z) and the membership of the remainder in U(g)k.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .errors import (
    CertificationFailure,
    DomainViolation,
    InvalidDegree,
    OrderMismatch,
    TooLarge,
    UnknownLetter,
)
from .gaussian import QI
from . import linalg
from .lie_core import SpectralParameter, restricted_roots
from .nupoly import NuPolynomial


class PBWOrder:
    """A letter set partitioned into parts with a frozen total sort order."""

    def __init__(self, algebra, name, letters, part_sequence):
        self.algebra = algebra
        self.name = name
        self.letters = tuple(letters)
        self.part_sequence = part_sequence
        self.rank_of = {x: i for i, x in enumerate(self.letters)}
        self._pair_cache = {}

    def __repr__(self):
        return f"PBWOrder({self.name!r})"

    def __eq__(self, other):
        return (isinstance(other, PBWOrder)
                and other.algebra is self.algebra and other.name == self.name)

    def __hash__(self):
        return hash((id(self.algebra), self.name))

    def express_core(self, vec):
        """Rewrite a core-basis vector over this order's letters."""
        alg = self.algebra
        out = {}
        for i, c in vec.items():
            if i in self.rank_of:
                pieces = {i: Fraction(1)}
            elif alg.basis[i].part == "nbar":
                # f = e - w
                p = alg.partner[i]
                pieces = {p: Fraction(1), alg.k_letter(p): Fraction(-1)}
            else:
                raise UnknownLetter(f"letter {i} has no image in order {self.name}")
            for x, t in pieces.items():
                s = out.get(x, Fraction(0)) + c * t
                if s:
                    out[x] = s
                else:
                    out.pop(x, None)
        return out

    def express_letter(self, letter):
        alg = self.algebra
        if letter < 0 or letter >= alg.dim + alg.npos:
            raise UnknownLetter(f"no letter {letter}")
        if letter in self.rank_of:
            return {letter: Fraction(1)}
        return self.express_core(alg.letter_core(letter))

    def pair_rewrite(self, x, y):
        """Expansion of [x, y] over this order's letters (memoized)."""
        key = (x, y)
        hit = self._pair_cache.get(key)
        if hit is None:
            vec = self.algebra.bracket_letters(x, y)
            hit = tuple(sorted(self.express_core(vec).items()))
            self._pair_cache[key] = hit
        return hit


def pr_order(algebra):
    """(n, a, nbar): positives, cartans, negatives."""
    cached = algebra._caches.get("pr_order")
    if cached is None:
        letters = (algebra.pos_indices + algebra.cartan_indices
                   + algebra.neg_indices)
        cached = PBWOrder(algebra, "nan", letters, ("n", "a", "nbar"))
        algebra._caches["pr_order"] = cached
    return cached


def b_order(algebra):
    """(n, a, k): positives, cartans, compact letters e - f."""
    cached = algebra._caches.get("b_order")
    if cached is None:
        letters = (algebra.pos_indices + algebra.cartan_indices
                   + [algebra.dim + j for j in range(algebra.npos)])
        cached = PBWOrder(algebra, "nak", letters, ("n", "a", "k"))
        algebra._caches["b_order"] = cached
    return cached


# ---------------------------------------------------------------------------
# the rewrite engine
# ---------------------------------------------------------------------------

def _coeff(algebra, c):
    if isinstance(c, NuPolynomial):
        return c
    return NuPolynomial.const(algebra.rank, c)


def _add_term(acc, word, coeff):
    s = acc.get(word)
    s = coeff if s is None else s + coeff
    if s.is_zero():
        acc.pop(word, None)
    else:
        acc[word] = s


def _reduce(order, work, rng=None):
    """Worklist PBW reduction.  rng, if given, picks which inversion to
    rewrite first; the canonical form must not depend on that choice."""
    rank = order.rank_of
    out = {}
    while work:
        word, coeff = work.pop()
        if coeff.is_zero():
            continue
        bad = [i for i in range(len(word) - 1)
               if rank[word[i]] > rank[word[i + 1]]]
        if not bad:
            _add_term(out, word, coeff)
            continue
        i = bad[0] if rng is None else bad[rng.randrange(len(bad))]
        x, y = word[i], word[i + 1]
        head, tail = word[:i], word[i + 2:]
        work.append((head + (y, x) + tail, coeff))
        for z, c in order.pair_rewrite(x, y):
            work.append((head + (z,) + tail, coeff * c))
    return out


def _expand_words(order, word_terms):
    """Re-express arbitrary letters over the order's letter set."""
    alg = order.algebra
    expanded = []
    for word, coeff in word_terms:
        coeff = _coeff(alg, coeff)
        if coeff.is_zero():
            continue
        partial = {(): coeff}
        for letter in word:
            form = order.express_letter(letter)
            nxt = {}
            for w, c in partial.items():
                for x, t in form.items():
                    _add_term(nxt, w + (x,), c * t)
            partial = nxt
        expanded.extend(partial.items())
    return expanded


class UEAElement:
    """Canonical PBW-ordered element; terms map sorted words to coefficients."""

    __slots__ = ("order", "terms")

    def __init__(self, order, terms=None):
        self.order = order
        self.terms = terms or {}

    @property
    def algebra(self):
        return self.order.algebra

    # -- constructors -----------------------------------------------------

    @staticmethod
    def zero(order):
        return UEAElement(order)

    @staticmethod
    def one(order, coeff=1):
        c = _coeff(order.algebra, coeff)
        return UEAElement(order, {} if c.is_zero() else {(): c})

    @staticmethod
    def letter(order, letter, coeff=1):
        return normal_form(order, [((letter,), coeff)])

    # -- ring structure ---------------------------------------------------

    def _check(self, other):
        if self.order != other.order:
            raise OrderMismatch("elements use different PBW orders")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            _add_term(out, w, c)
        return UEAElement(self.order, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return UEAElement(self.order, {w: -c for w, c in self.terms.items()})

    def scale(self, c):
        c = _coeff(self.algebra, c)
        if c.is_zero():
            return UEAElement.zero(self.order)
        return UEAElement(self.order, {w: t * c for w, t in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, UEAElement):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        return (isinstance(other, UEAElement) and self.order == other.order
                and self.terms == other.terms)

    def is_zero(self):
        return not self.terms

    # -- structure --------------------------------------------------------

    def degree(self):
        """Filtered degree: longest word (-1 for zero)."""
        if not self.terms:
            return -1
        return max(len(w) for w in self.terms)

    def nu_degree(self):
        if not self.terms:
            return -1
        return max(c.degree() for c in self.terms.values())

    def nu_component(self, k):
        out = {}
        for w, c in self.terms.items():
            h = c.homogeneous_component(k)
            if not h.is_zero():
                out[w] = h
        return UEAElement(self.order, out)

    def constant_term(self):
        return self.terms.get((), NuPolynomial.zero(self.algebra.rank))

    def word_parts(self, word):
        return tuple(self.algebra.letter_part(x) for x in word)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0]))

    # -- io -----------------------------------------------------------------

    def to_json(self):
        return {
            "order": {"family": self.algebra.family, "n": self.algebra.n,
                      "name": self.order.name},
            "terms": [{"word": list(w), "coeff": c.to_json()}
                      for w, c in self.sorted_terms()],
        }

    @staticmethod
    def from_json(data, algebra=None):
        from .lie_core import build_algebra
        spec = data["order"]
        if algebra is None:
            algebra = build_algebra(spec["family"], spec["n"])
        order = pr_order(algebra) if spec["name"] == "nan" else b_order(algebra)
        terms = {}
        for item in data["terms"]:
            terms[tuple(item["word"])] = NuPolynomial.from_json(
                algebra.rank, item["coeff"])
        # canonicality is part of the wire contract: re-reduce and compare
        elt = normal_form(order, list(terms.items()))
        if elt.terms != terms:
            raise ValueError("serialized element was not in canonical form")
        return elt

    def pretty(self, nu_names=None):
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.sorted_terms():
            mono = _word_str(self.algebra, w)
            cs = c.pretty(nu_names)
            if mono == "1":
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            else:
                parts.append(f"({cs})*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"UEAElement<{self.order.name}>({self.pretty()})"


def _word_str(algebra, word):
    if not word:
        return "1"
    out = []
    for letter, grp in itertools.groupby(word):
        k = len(list(grp))
        lab = algebra.letter_label(letter)
        out.append(lab if k == 1 else f"{lab}^{k}")
    return "*".join(out)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def normal_form(order, word_terms, rng=None):
    """Canonical form of a formal word combination.

    word_terms: iterable of (word, coeff); words may use any algebra letter
    (core or compact) and are re-expressed over the order's letter set first.
    """
    work = _expand_words(order, list(word_terms))
    return UEAElement(order, _reduce(order, work, rng))


def multiply(u, v):
    if u.order != v.order:
        raise OrderMismatch("elements use different PBW orders")
    work = []
    for w1, c1 in u.terms.items():
        for w2, c2 in v.terms.items():
            work.append((w1 + w2, c1 * c2))
    return UEAElement(u.order, _reduce(u.order, work))


def commutator(u, v):
    return multiply(u, v) - multiply(v, u)


def nu_plus_rho_shift(algebra, nu=None):
    """The affine functional nu + rho on a (extended by zero on n), as a map
    cartan letter -> NuPolynomial.  nu=None means the formal parameter."""
    rho = restricted_roots(algebra).rho
    shift = {}
    for i, h in enumerate(algebra.cartan_indices):
        if nu is None:
            val = NuPolynomial.var(algebra.rank, i) \
                + NuPolynomial.const(algebra.rank, rho[i])
        elif isinstance(nu, SpectralParameter):
            if nu.is_formal:
                val = NuPolynomial.var(algebra.rank, i) \
                    + NuPolynomial.const(algebra.rank, rho[i])
            else:
                val = NuPolynomial.const(algebra.rank, nu.values[i] + QI.of(rho[i]))
        else:
            raise TypeError("nu must be a SpectralParameter or None")
        shift[h] = val
    return shift


def rho_shift(algebra):
    rho = restricted_roots(algebra).rho
    return {h: NuPolynomial.const(algebra.rank, rho[i])
            for i, h in enumerate(algebra.cartan_indices)}


def tau_translate(u, shift):
    """Translation automorphism x -> x + lambda(x) on U(a + n).

    shift maps cartan letters to NuPolynomial values; it is extended by zero
    on the nilpotent letters.  Letters outside a + n are a domain violation.
    """
    alg = u.algebra
    for w in u.terms:
        for letter in w:
            if alg.letter_part(letter) not in ("a", "n"):
                raise DomainViolation(
                    f"letter {alg.letter_label(letter)} is outside a + n")
    out = {}
    for word, coeff in u.terms.items():
        a_positions = [i for i, letter in enumerate(word)
                       if alg.letter_part(letter) == "a"]
        for dropped in _subsets(a_positions):
            c = coeff
            for i in dropped:
                c = c * shift.get(word[i], NuPolynomial.zero(alg.rank))
                if c.is_zero():
                    break
            if c.is_zero():
                continue
            kept = tuple(x for i, x in enumerate(word) if i not in dropped)
            _add_term(out, kept, c)
    return UEAElement(u.order, out)


def _subsets(items):
    for r in range(len(items) + 1):
        yield from (set(c) for c in itertools.combinations(items, r))


def coproduct(u):
    """Delta(u) as a finite list of tensor pairs (left, right); primitive on
    letters, extended multiplicatively."""
    pairs = {}
    for word, coeff in u.terms.items():
        n = len(word)
        for mask in range(1 << n):
            left = tuple(word[i] for i in range(n) if mask & (1 << i))
            right = tuple(word[i] for i in range(n) if not mask & (1 << i))
            key = (left, right)
            _add_term(pairs, key, coeff)
    return [(UEAElement(u.order, {left: c}), UEAElement(u.order, {right: _coeff(u.algebra, 1)}))
            for (left, right), c in sorted(pairs.items())]


def counit(u):
    return u.constant_term()


def transpose_antiinvolution(u):
    """The anti-involution with x -> -x on letters: reverse words, sign by
    length, re-reduce."""
    work = []
    for word, coeff in u.terms.items():
        sign = -1 if len(word) % 2 else 1
        work.append((tuple(reversed(word)), coeff * sign))
    return UEAElement(u.order, _reduce(u.order, work))


def casimir(algebra):
    """Dual-basis Casimir sum x_i x^i for the Killing form, degree 2."""
    binv = linalg.inverse(algebra.killing)
    work = []
    for i in range(algebra.dim):
        for j in range(algebra.dim):
            c = binv[j][i]
            if not c.is_zero():
                work.append(((i, j), NuPolynomial.const(algebra.rank, c)))
    return UEAElement(pr_order(algebra), _reduce(pr_order(algebra), work))


def verify_central(algebra, z):
    """True iff [z, x] = 0 for every basis letter x; returns (ok, witness)."""
    for x in range(algebra.dim):
        xe = UEAElement.letter(z.order, x)
        if not commutator(z, xe).is_zero():
            return False, algebra.letter_label(x)
    return True, None


def _word_weight(algebra, word):
    zero = (Fraction(0),) * algebra.rank
    acc = zero
    for letter in word:
        r = algebra.basis[letter].root
        if r is not None:
            acc = tuple(a + b for a, b in zip(acc, r))
    return acc


def center_basis(algebra, d, guard=10_000):
    """Basis of {z in U(g), deg <= d : z central} modulo constants.

    Solved as an exact kernel over the ad-weight-zero words (central elements
    commute with a, so only those can contribute); the size guard is on the
    full dimension of U^{<= d}.
    """
    import math
    full_dim = math.comb(algebra.dim + d, d)
    if full_dim > guard:
        raise TooLarge(f"dim U^<={d} = {full_dim} exceeds guard {guard}")
    order = pr_order(algebra)
    zero = (Fraction(0),) * algebra.rank
    candidates = []
    for length in range(1, d + 1):
        for word in itertools.combinations_with_replacement(order.letters, length):
            if _word_weight(algebra, word) == zero:
                candidates.append(word)
    if not candidates:
        return []
    constraint_letters = algebra.pos_indices + algebra.neg_indices
    rows_index = {}
    columns = []
    for word in candidates:
        col = {}
        for x in constraint_letters:
            lhs = _reduce(order, [(word + (x,), _coeff(algebra, 1)),
                                  ((x,) + word, _coeff(algebra, -1))])
            for w, c in lhs.items():
                key = (x, w)
                if key not in rows_index:
                    rows_index[key] = len(rows_index)
                col[rows_index[key]] = c.constant_value()
        columns.append(col)
    nrows = len(rows_index)
    matrix = [[QI(0)] * len(candidates) for _ in range(nrows)]
    for j, col in enumerate(columns):
        for i, c in col.items():
            matrix[i][j] = c
    out = []
    for vec in linalg.kernel_basis(matrix):
        terms = {}
        for word, c in zip(candidates, vec):
            if not c.is_zero():
                terms[word] = NuPolynomial.const(algebra.rank, c)
        out.append(UEAElement(order, terms))
    out.sort(key=lambda z: (z.degree(), sorted(z.terms)))
    return out


def gelfand_invariant(algebra, k):
    """Degree-k trace invariant of sl_n: expand sum E_{i1 i2}...E_{ik i1} in
    U(gl_n) = U(sl_n)[Z], keep the Z-degree-0 part."""
    if algebra.family != "sl":
        raise InvalidDegree("gelfand invariants are implemented for sl_n")
    if k < 2:
        raise InvalidDegree(f"need k >= 2, got {k}")
    n = algebra.n
    order = pr_order(algebra)
    eij = algebra._eij_letter

    def factor(i, j):
        """E_ij as {z_degree: UEAElement}."""
        if i != j:
            return {0: UEAElement.letter(order, eij[(i, j)])}
        # E_ii = x_ii + Z/n with x_ii = E_ii - (trace)/n
        diag = [Fraction(-1, n)] * n
        diag[i - 1] += 1
        terms = {}
        acc = Fraction(0)
        for t in range(n - 1):
            acc += diag[t]
            if acc:
                terms[(algebra.cartan_indices[t],)] = \
                    NuPolynomial.const(algebra.rank, acc)
        return {0: UEAElement(order, terms),
                1: UEAElement.one(order, Fraction(1, n))}

    total = UEAElement.zero(order)
    for cycle in itertools.product(range(1, n + 1), repeat=k):
        acc = {0: UEAElement.one(order)}
        for t in range(k):
            f = factor(cycle[t], cycle[(t + 1) % k])
            nxt = {}
            for z1, u1 in acc.items():
                for z2, u2 in f.items():
                    prod = multiply(u1, u2)
                    if (z1 + z2) in nxt:
                        nxt[z1 + z2] = nxt[z1 + z2] + prod
                    else:
                        nxt[z1 + z2] = prod
            acc = nxt
        if 0 in acc:
            total = total + acc[0]
    ok, witness = verify_central(algebra, total)
    if not ok:
        raise CertificationFailure("central_ok",
                                   f"gelfand invariant fails at {witness}")
    return total
