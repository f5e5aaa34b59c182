"""Exact structure theory of split sl_n: Chevalley basis with Iwasawa part
tags, Killing form, restricted roots, rho, Weyl group, and the inner-product
geometry of a*.

Conventions frozen here and relied on everywhere downstream:
  * basis order: positive nilpotents e_ij (i<j, sorted by root height then
    (i,j)), then cartans h_i = E_ii - E_{i+1,i+1}, then negative nilpotents
    (mirror order of the positives);
  * vectors in the algebra are sparse dicts {basis index: Fraction};
  * functionals on a are stored by their values on (h_1, ..., h_r);
  * theta(x) = -transpose(x), so theta exchanges e_ij and -e_ji;
  * compact letters w = e - theta_partner(e) span the theta-fixed complement
    of a in g_0-free degrees; they get the letter ids dim, dim+1, ...
    aligned with the positive letters.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InvalidRank
from .gaussian import QI, ExactSqrt
from . import linalg


class BasisVector:
    __slots__ = ("label", "part", "root", "height", "matrix")

    def __init__(self, label, part, root=None, height=0, matrix=None):
        self.label = label
        self.part = part          # 'n' | 'a' | 'nbar'
        self.root = root          # values on the cartan generators, or None
        self.height = height
        self.matrix = matrix      # defining matrix for sl_n, may be None

    def __repr__(self):
        return f"BasisVector({self.label!r}, {self.part!r})"


class LieAlgebra:
    """Split semisimple Lie algebra with exact integer structure constants."""

    def __init__(self, family, n, basis, bracket_table, killing, theta):
        self.family = family
        self.n = n
        self.basis = basis
        self.dim = len(basis)
        self.rank = sum(1 for b in basis if b.part == "a")
        self.bracket_table = bracket_table
        self.killing = killing
        self.theta = theta
        self.pos_indices = [i for i, b in enumerate(basis) if b.part == "n"]
        self.cartan_indices = [i for i, b in enumerate(basis) if b.part == "a"]
        self.neg_indices = [i for i, b in enumerate(basis) if b.part == "nbar"]
        self.npos = len(self.pos_indices)
        # theta partner of each nilpotent letter (the opposite-root one)
        self.partner = {}
        for p in self.pos_indices:
            img = theta[p]
            (q, c), = img.items()
            if c != -1:
                raise ValueError("theta is not -transpose on a nilpotent letter")
            self.partner[p] = q
            self.partner[q] = p
        self._gram_dual = None
        self._eij_letter = None
        self._caches = {}

    # -- letters ------------------------------------------------------------
    # Core letters are 0..dim-1; compact letters w_p = e_p - f_p get the ids
    # dim..dim+npos-1, where p runs over pos_indices in order.

    def k_letter(self, pos_index):
        return self.dim + self.pos_indices.index(pos_index)

    def letter_part(self, letter):
        if letter >= self.dim:
            return "k"
        return self.basis[letter].part

    def letter_label(self, letter):
        if letter >= self.dim:
            p = self.pos_indices[letter - self.dim]
            lab = self.basis[p].label
            return "W" if lab == "X+" else "W" + lab[1:]
        return self.basis[letter].label

    def letter_core(self, letter):
        """Expand a letter as a vector over the core basis."""
        if letter < self.dim:
            return {letter: Fraction(1)}
        p = self.pos_indices[letter - self.dim]
        return {p: Fraction(1), self.partner[p]: Fraction(-1)}

    def letter_by_label(self, label):
        for i, b in enumerate(self.basis):
            if b.label == label:
                return i
        for j in range(self.npos):
            if self.letter_label(self.dim + j) == label:
                return self.dim + j
        raise KeyError(label)

    # -- bracket ----------------------------------------------------------

    def bracket_vec(self, u, v):
        out = {}
        for i, a in u.items():
            for j, b in v.items():
                for k, c in self.bracket_table.get((i, j), {}).items():
                    s = out.get(k, Fraction(0)) + a * b * c
                    if s:
                        out[k] = s
                    else:
                        out.pop(k, None)
        return out

    def bracket_letters(self, x, y):
        return self.bracket_vec(self.letter_core(x), self.letter_core(y))

    def ad_matrix(self, i):
        """Matrix of ad(x_i) on the core basis."""
        mat = [[Fraction(0)] * self.dim for _ in range(self.dim)]
        for j in range(self.dim):
            for k, c in self.bracket_table.get((i, j), {}).items():
                mat[k][j] = c
        return mat

    def theta_vec(self, u):
        out = {}
        for i, a in u.items():
            for j, c in self.theta[i].items():
                s = out.get(j, Fraction(0)) + a * c
                if s:
                    out[j] = s
                else:
                    out.pop(j, None)
        return out

    # -- a* geometry ------------------------------------------------------

    def cartan_gram(self):
        return [[self.killing[i][j] for j in self.cartan_indices]
                for i in self.cartan_indices]

    def gram_dual(self):
        """Inverse Cartan Killing block: the inner product matrix on a*."""
        if self._gram_dual is None:
            self._gram_dual = linalg.inverse(self.cartan_gram())
        return self._gram_dual

    def astar_pairing(self, u, v):
        """<u, v> for functionals given by values on the cartan basis."""
        g = self.gram_dual()
        acc = QI(0)
        for i, gi in enumerate(g):
            for j, gij in enumerate(gi):
                acc = acc + QI.of(u[i]) * gij * QI.of(v[j])
        return acc

    # -- serialization ----------------------------------------------------

    def to_json(self):
        structure = []
        for (i, j), img in sorted(self.bracket_table.items()):
            for k, c in sorted(img.items()):
                if c.denominator != 1:
                    raise ValueError("non-integer structure constant")
                structure.append([i, j, k, c.numerator])
        theta = []
        for i, img in enumerate(self.theta):
            for j, c in sorted(img.items()):
                theta.append([i, j, c.numerator])
        return {
            "family": self.family,
            "n": self.n,
            "rank": self.rank,
            "basis": [
                {"label": b.label, "part": b.part,
                 "root": None if b.root is None else [int(x) for x in b.root],
                 "height": b.height}
                for b in self.basis
            ],
            "structure": structure,
            "killing": [[int(x) for x in row] for row in self.killing],
            "theta": theta,
        }

    @staticmethod
    def from_json(data):
        basis = [
            BasisVector(
                b["label"], b["part"],
                None if b["root"] is None else tuple(Fraction(x) for x in b["root"]),
                b["height"])
            for b in data["basis"]
        ]
        table = {}
        for i, j, k, c in data["structure"]:
            table.setdefault((i, j), {})[k] = Fraction(c)
        theta = [{} for _ in basis]
        for i, j, c in data["theta"]:
            theta[i][j] = Fraction(c)
        killing = [[Fraction(x) for x in row] for row in data["killing"]]
        alg = LieAlgebra(data["family"], data["n"], basis, table, killing, theta)
        if data["family"] == "sl":
            alg._eij_letter = _eij_map(alg)
        return alg


class RootDatum:
    __slots__ = ("roots", "simple_system", "multiplicities", "rho")

    def __init__(self, roots, simple_system, multiplicities, rho):
        self.roots = roots
        self.simple_system = simple_system
        self.multiplicities = multiplicities
        self.rho = rho


class WeylGroup:
    """Finite group of exact orthogonal matrices acting on a*-coordinates."""

    def __init__(self, elements, generators):
        self.elements = elements
        self.generators = generators

    @property
    def order(self):
        return len(self.elements)

    def act(self, m, v):
        return tuple(sum((QI.of(row[j]) * QI.of(v[j]) for j in range(len(v))), QI(0))
                     for row in m)


class SpectralParameter:
    """A point of a*_C: either fully formal or a tuple of exact values."""

    __slots__ = ("rank", "values")

    def __init__(self, rank, values=None):
        self.rank = rank
        if values is not None:
            values = tuple(QI.of(v) for v in values)
            if len(values) != rank:
                raise ValueError("coordinate count mismatch")
        self.values = values

    @staticmethod
    def formal(rank):
        return SpectralParameter(rank)

    @staticmethod
    def numeric(values):
        values = tuple(values)
        return SpectralParameter(len(values), values)

    @property
    def is_formal(self):
        return self.values is None

    def re_coords(self):
        return tuple(v.re for v in self.values)

    def im_coords(self):
        return tuple(v.im for v in self.values)


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

def _diagonal_to_cartan(diag, n):
    """Expand a traceless diagonal (d_1..d_n) over h_t = E_tt - E_{t+1,t+1}."""
    coeffs = []
    acc = Fraction(0)
    for t in range(n - 1):
        acc += diag[t]
        coeffs.append(acc)
    return coeffs


def _express_matrix(mat, n, index):
    """Write an sl_n matrix (dict (i,j)->Fraction, 1-based) over the basis."""
    out = {}
    diag = [mat.get((i, i), Fraction(0)) for i in range(1, n + 1)]
    for t, c in enumerate(_diagonal_to_cartan(diag, n)):
        if c:
            out[index["h", t + 1]] = c
    for (i, j), c in mat.items():
        if i != j and c:
            out[index["e", i, j]] = c
    return out


def _mat_mul(a, b):
    out = {}
    for (i, k), x in a.items():
        for (k2, j), y in b.items():
            if k == k2:
                s = out.get((i, j), Fraction(0)) + x * y
                if s:
                    out[(i, j)] = s
                else:
                    out.pop((i, j), None)
    return out


def _mat_comm(a, b):
    out = dict(_mat_mul(a, b))
    for key, y in _mat_mul(b, a).items():
        s = out.get(key, Fraction(0)) - y
        if s:
            out[key] = s
        else:
            out.pop(key, None)
    return out


def _pair_label(i, j, n):
    return f"{i}{j}" if n <= 9 else f"{i}.{j}"


def _eij_map(alg):
    """(i, j) -> letter id for the off-diagonal sl_n letters, 1-based."""
    out = {}
    n = alg.n
    for idx, b in enumerate(alg.basis):
        if b.part == "a" or b.matrix is None:
            continue
        ((r, c), _), = b.matrix.items()
        out[(r, c)] = idx
    if not out:
        # rebuilt from JSON: recover from labels
        for idx, b in enumerate(alg.basis):
            if b.part == "a":
                continue
            lab = b.label
            if lab == "X+":
                out[(1, 2)] = idx
            elif lab == "X-":
                out[(2, 1)] = idx
            else:
                body = lab[1:]
                if "." in body:
                    i, j = body.split(".")
                else:
                    i, j = body[0], body[1]
                out[(int(i), int(j))] = idx
    return out


def build_algebra(family, n):
    """Chevalley-basis sl_n over Q with Iwasawa part tags.

    For n = 2 the letters carry the classical labels X+, H, X- and the
    compact direction W = X+ - X-.
    """
    if family not in ("sl", "special-linear"):
        raise ValueError(f"unsupported family {family!r}")
    if n < 2:
        raise InvalidRank(f"sl_n needs n >= 2, got {n}")

    pos_pairs = sorted(
        ((i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i < j),
        key=lambda p: (p[1] - p[0], p))

    basis = []
    index = {}

    def add(key, vec):
        index[key] = len(basis)
        basis.append(vec)

    for (i, j) in pos_pairs:
        label = "X+" if n == 2 else f"E{_pair_label(i, j, n)}"
        add(("e", i, j), BasisVector(label, "n", height=j - i,
                                     matrix={(i, j): Fraction(1)}))
    for t in range(1, n):
        label = "H" if n == 2 else f"H{t}"
        add(("h", t), BasisVector(label, "a",
                                  matrix={(t, t): Fraction(1),
                                          (t + 1, t + 1): Fraction(-1)}))
    for (i, j) in pos_pairs:
        label = "X-" if n == 2 else f"E{_pair_label(j, i, n)}"
        add(("e", j, i), BasisVector(label, "nbar", height=j - i,
                                     matrix={(j, i): Fraction(1)}))

    dim = len(basis)
    table = {}
    for a in range(dim):
        for b in range(dim):
            if a == b:
                continue
            comm = _mat_comm(basis[a].matrix, basis[b].matrix)
            expanded = _express_matrix(comm, n, index)
            if expanded:
                table[(a, b)] = expanded

    # restricted roots read off the bracket with the cartan generators
    cartans = [index["h", t] for t in range(1, n)]
    for a, v in enumerate(basis):
        if v.part == "a":
            continue
        v.root = tuple(table.get((h, a), {}).get(a, Fraction(0)) for h in cartans)

    # Killing form taken literally: B(x,y) = trace(ad x . ad y)
    def ad(i):
        mat = [[Fraction(0)] * dim for _ in range(dim)]
        for j in range(dim):
            for k, c in table.get((i, j), {}).items():
                mat[k][j] = c
        return mat

    ads = [ad(i) for i in range(dim)]
    killing = [[Fraction(0)] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(i, dim):
            tr = Fraction(0)
            for r in range(dim):
                row = ads[i][r]
                for s in range(dim):
                    if row[s]:
                        tr += row[s] * ads[j][s][r]
            killing[i][j] = tr
            killing[j][i] = tr

    # theta = -transpose on the defining matrices
    theta = []
    for v in basis:
        tmat = {(j, i): -c for (i, j), c in v.matrix.items()}
        theta.append(_express_matrix(tmat, n, index))

    alg = LieAlgebra(family, n, basis, table, killing, theta)
    alg._eij_letter = _eij_map(alg)
    _validate_build(alg)
    return alg


def _validate_build(alg):
    """Construction-time invariants: theta^2 = 1, theta = -1 on a, theta
    fixes each e - f, and brackets respect the root grading."""
    for i in range(alg.dim):
        sq = alg.theta_vec(alg.theta_vec({i: Fraction(1)}))
        if sq != {i: Fraction(1)}:
            raise ValueError("theta is not an involution")
    for i in alg.cartan_indices:
        if alg.theta_vec({i: Fraction(1)}) != {i: Fraction(-1)}:
            raise ValueError("theta is not -1 on a")
    for p in alg.pos_indices:
        w = alg.letter_core(alg.k_letter(p))
        if alg.theta_vec(w) != w:
            raise ValueError("theta does not fix e - f")
    zero = (Fraction(0),) * alg.rank
    for (i, j), img in alg.bracket_table.items():
        ri = alg.basis[i].root or zero
        rj = alg.basis[j].root or zero
        target = tuple(a + b for a, b in zip(ri, rj))
        for k in img:
            rk = alg.basis[k].root or zero
            if rk != target:
                raise ValueError("bracket violates root grading")


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def killing_form(alg, x, y):
    """B(x, y) for sparse vectors over the basis."""
    acc = Fraction(0)
    for i, a in x.items():
        for j, b in y.items():
            acc += a * b * alg.killing[i][j]
    return acc


def iwasawa_components(alg, x):
    """Split x = x_n + x_a + x_k with x_k in span{e - f}; returns dicts."""
    xn, xa, xk = {}, {}, {}
    for i, c in x.items():
        part = alg.basis[i].part
        if part == "a":
            xa[i] = xa.get(i, Fraction(0)) + c
        elif part == "n":
            xn[i] = xn.get(i, Fraction(0)) + c
        else:
            # f = e - w: a negative letter contributes e to n and -w to k
            p = alg.partner[i]
            xn[p] = xn.get(p, Fraction(0)) + c
            for j, t in alg.letter_core(alg.k_letter(p)).items():
                xk[j] = xk.get(j, Fraction(0)) - c * t
    return ({k: v for k, v in xn.items() if v},
            {k: v for k, v in xa.items() if v},
            {k: v for k, v in xk.items() if v})


def restricted_roots(alg):
    roots = []
    mult = {}
    for i, b in enumerate(alg.basis):
        if b.part == "a":
            continue
        if b.root not in mult:
            roots.append(b.root)
        mult[b.root] = mult.get(b.root, 0) + 1
    positive = []
    simple = []
    for i in alg.pos_indices:
        r = alg.basis[i].root
        if r not in positive:
            positive.append(r)
            if alg.basis[i].height == 1:
                simple.append(r)
    rho = tuple(
        sum((Fraction(mult[r]) * r[t] for r in positive), Fraction(0)) / 2
        for t in range(alg.rank))
    return RootDatum(roots, simple, mult, rho)


def _reflection_matrix(alg, root):
    """s_alpha as a matrix on a*-coordinates (values on the h_i)."""
    r = alg.rank
    g = alg.gram_dual()

    def pair(u, v):
        acc = Fraction(0)
        for i in range(r):
            for j in range(r):
                acc += u[i] * g[i][j].re * v[j]
        return acc

    aa = pair(root, root)
    rows = []
    for i in range(r):
        row = []
        for j in range(r):
            e = [Fraction(1 if t == j else 0) for t in range(r)]
            coeff = 2 * pair(e, root) / aa
            row.append(e[i] - coeff * root[i])
        rows.append(tuple(row))
    return tuple(rows)


def weyl_group(alg):
    datum = restricted_roots(alg)
    gens = [_reflection_matrix(alg, a) for a in datum.simple_system]
    r = alg.rank
    identity = tuple(tuple(Fraction(1 if i == j else 0) for j in range(r))
                     for i in range(r))
    elements = {identity}
    frontier = [identity]
    while frontier:
        new = []
        for m in frontier:
            for g in gens:
                prod = tuple(
                    tuple(sum(g[i][k] * m[k][j] for k in range(r))
                          for j in range(r))
                    for i in range(r))
                if prod not in elements:
                    elements.add(prod)
                    new.append(prod)
        frontier = new
    return WeylGroup(sorted(elements), gens)


def astar_norm(alg, nu):
    """||nu|| as an exact square-root wrapper (radicand is the exact square)."""
    if nu.is_formal:
        raise ValueError("norm needs a numeric parameter")
    re = nu.re_coords()
    im = nu.im_coords()
    sq = alg.astar_pairing(re, re) + alg.astar_pairing(im, im)
    if not sq.is_real():
        raise ValueError("norm square came out non-real")
    return ExactSqrt(sq.re)


def is_regular(alg, nu):
    """(regular?, stabilizer W0) for a numeric parameter."""
    if nu.is_formal:
        raise ValueError("regularity needs a numeric parameter")
    datum = restricted_roots(alg)
    regular = all(
        not alg.astar_pairing(nu.values, root).is_zero()
        for root in datum.roots)
    w = weyl_group(alg)
    stab = [m for m in w.elements
            if w.act(m, nu.values) == tuple(nu.values)]
    gens = [g for g in w.generators if g in stab]
    return regular, WeylGroup(stab, gens)
