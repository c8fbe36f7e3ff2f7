"""Weil-Deligne representations with exact rational matrices.

Everything here is plain linear algebra over Q: a Frobenius lift Phi, a
nilpotent monodromy operator N with Phi N Phi^-1 = q^(+-1) N, an optional
cyclic (tame) inertia generator, the monodromy filtration, and the weight
machinery (purity, quasi-purity, trace-table compatibility of families).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .errors import (IrrationalTrace, NonInvertible, NotNilpotent, NotWeil,
                     PurityFailure)


class FrobeniusKind(enum.Enum):
    ARITHMETIC = "arithmetic"
    GEOMETRIC = "geometric"


def _fracs(M):
    return [[Fraction(x) for x in row] for row in M]


def _prime_power(q: int):
    """(p, f) with q = p^f, or ValueError."""
    if q < 2:
        raise ValueError(f"q = {q} is not a prime power")
    p = None
    for d in range(2, q + 1):
        if q % d == 0:
            p = d
            break
    f = 0
    m = q
    while m % p == 0:
        m //= p
        f += 1
    if m != 1:
        raise ValueError(f"q = {q} is not a prime power")
    return p, f


class WeilDeligneRep:
    """(Phi, N, inertia) on Q^dim; invariants checked at construction."""

    def __init__(self, q: int, phi, N=None, inertia_order: int = 1,
                 inertia_matrix=None,
                 frobenius_kind: FrobeniusKind = FrobeniusKind.GEOMETRIC,
                 label: str = ""):
        self.q = q
        self.p, self.f = _prime_power(q)
        self.phi = _fracs(phi)
        self.dim = len(self.phi)
        self.N = _fracs(N) if N is not None else linalg.zeros(self.dim,
                                                              self.dim)
        self.frobenius_kind = frobenius_kind
        self.inertia_order = inertia_order
        self.inertia_matrix = (_fracs(inertia_matrix)
                               if inertia_matrix is not None else None)
        self.label = label
        self._validate()

    def _validate(self):
        if linalg.mat_inv(self.phi) is None:
            raise NonInvertible("Phi is singular")
        if not linalg.is_nilpotent(self.N):
            raise NotNilpotent("N is not nilpotent")
        eps = -1 if self.frobenius_kind is FrobeniusKind.GEOMETRIC else 1
        lhs = linalg.mat_mul(self.phi,
                             linalg.mat_mul(self.N, linalg.mat_inv(self.phi)))
        rhs = linalg.mat_scale(self.N, Fraction(self.q) ** eps)
        if lhs != rhs:
            raise ValueError("Phi N Phi^-1 != q^eps N for the stated "
                             "convention")
        if self.inertia_matrix is not None:
            T = self.inertia_matrix
            if linalg.mat_pow(T, self.inertia_order) != linalg.identity(
                    self.dim):
                raise ValueError("inertia generator order mismatch")
            if linalg.mat_mul(T, self.N) != linalg.mat_mul(self.N, T):
                raise ValueError("inertia does not commute with N")

    def __repr__(self):
        return (f"WeilDeligneRep(q={self.q}, dim={self.dim}, "
                f"inertia_order={self.inertia_order}, "
                f"{self.frobenius_kind.value})")

    # -- serialization ------------------------------------------------------

    def to_json(self):
        obj = {
            "q": self.q,
            "dim": self.dim,
            "phi": [[str(x) for x in row] for row in self.phi],
            "N": [[str(x) for x in row] for row in self.N],
            "inertia": {"order": self.inertia_order,
                        "matrix": ([[str(x) for x in row]
                                    for row in self.inertia_matrix]
                                   if self.inertia_matrix else None)},
            "convention": self.frobenius_kind.value,
        }
        if self.label:
            obj["label"] = self.label
        return obj

    @classmethod
    def from_json(cls, obj):
        inertia = obj.get("inertia") or {}
        conv = obj.get("convention", "geometric")
        kind = (FrobeniusKind.GEOMETRIC if conv == "geometric"
                else FrobeniusKind.ARITHMETIC)
        parse = lambda M: None if M is None else \
            [[Fraction(str(x)) for x in row] for row in M]
        return cls(obj["q"], parse(obj["phi"]), parse(obj.get("N")),
                   inertia.get("order", 1), parse(inertia.get("matrix")),
                   kind, obj.get("label", ""))


def special_rep(q: int, kind=FrobeniusKind.GEOMETRIC,
                label: str = "sp(2)") -> WeilDeligneRep:
    """The two-dimensional special representation: Phi = diag(1, q) for
    geometric Frobenius, its inverse for arithmetic, N = E_12."""
    c = Fraction(q) if kind is FrobeniusKind.GEOMETRIC else Fraction(1, q)
    phi = [[Fraction(1), Fraction(0)], [Fraction(0), c]]
    N = [[Fraction(0), Fraction(1)], [Fraction(0), Fraction(0)]]
    return WeilDeligneRep(q, phi, N, frobenius_kind=kind, label=label)


def twist(rep: WeilDeligneRep, n: int) -> WeilDeligneRep:
    """Tate twist: Phi scaled by q^-n; geometric weights shift by -2n."""
    c = Fraction(1, rep.q) ** n
    return WeilDeligneRep(rep.q, linalg.mat_scale(rep.phi, c), rep.N,
                          rep.inertia_order, rep.inertia_matrix,
                          rep.frobenius_kind,
                          f"{rep.label}({n})" if rep.label else "")


# ---------------------------------------------------------------------------
# monodromy filtration

@dataclass
class MonodromyFiltration:
    s: int                      # indices run over [-s, s]
    bases: dict                 # k -> list of basis vectors of M_k
    dim: int

    def basis(self, k):
        if k < -self.s:
            return []
        if k > self.s:
            return self.bases[self.s]
        return self.bases[k]

    def rank(self, k):
        return len(self.basis(k))

    def graded_rank(self, k):
        return self.rank(k) - self.rank(k - 1)


def monodromy_filtration(N) -> MonodromyFiltration:
    """The unique filtration with N M_k in M_{k-2} and
    N^k : Gr_k ~ Gr_{-k}, by the kernel/image convolution."""
    N = _fracs(N)
    d = len(N)
    if not linalg.is_nilpotent(N):
        raise NotNilpotent("monodromy filtration needs a nilpotent input")
    powers = [linalg.identity(d)]
    for _ in range(d + 1):
        powers.append(linalg.mat_mul(N, powers[-1]))
    full = linalg.identity(d)

    def ker(m):
        if m <= 0:
            return []
        if m > d:
            return full
        return linalg.span_basis(linalg.nullspace(powers[m]))

    def im(j):
        if j <= 0:
            return full
        if j > d:
            return []
        return linalg.column_space(powers[j])

    bases = {}
    for k in range(-d - 1, d + 1):
        acc = []
        for j in range(max(0, -k), d + 1):
            piece = linalg.intersect_spaces(ker(k + j + 1), im(j))
            acc = linalg.sum_spaces(acc, piece)
        bases[k] = acc
    s = 0
    while not (len(bases.get(-s - 1, [])) == 0
               and len(bases.get(s, [])) == d):
        s += 1
        if s > d:
            raise AssertionError("filtration failed to stabilise")
    out = MonodromyFiltration(s, {k: bases[k] for k in range(-s, s + 1)}, d)
    if not _axioms_hold(N, out):
        raise AssertionError("computed filtration violates the axioms")
    return out


def _graded_complement(fil: MonodromyFiltration, k):
    """Basis vectors of M_k completing a basis of M_{k-1}."""
    prev = list(fil.basis(k - 1))
    out = []
    acc = list(prev)
    for v in fil.basis(k):
        if not linalg.in_span(v, acc):
            out.append(v)
            acc.append(v)
    return out


def _induced_on_graded(mat, fil: MonodromyFiltration, k, target_k=None):
    """Matrix of `mat` from Gr_k to Gr_{target_k} (default k), in the
    complement bases; None if mat does not map M_k into M_{target_k}."""
    if target_k is None:
        target_k = k
    comp_src = _graded_complement(fil, k)
    comp_dst = _graded_complement(fil, target_k)
    prev_dst = list(fil.basis(target_k - 1))
    cols = []
    for v in comp_src:
        w = linalg.mat_vec(mat, v)
        coords = linalg.solve(linalg.transpose(prev_dst + comp_dst), w) \
            if (prev_dst or comp_dst) else ([] if all(x == 0 for x in w)
                                            else None)
        if coords is None:
            return None
        cols.append(coords[len(prev_dst):])
    return linalg.transpose(cols) if cols else []


def _axioms_hold(N, fil: MonodromyFiltration) -> bool:
    d = fil.dim
    for k in range(-fil.s, fil.s + 1):
        # increasing
        for v in fil.basis(k - 1):
            if not linalg.in_span(v, fil.basis(k)):
                return False
        # N M_k subset M_{k-2}
        for v in fil.basis(k):
            if not linalg.in_span(linalg.mat_vec(N, v), fil.basis(k - 2)):
                return False
    for k in range(1, fil.s + 1):
        if fil.graded_rank(k) != fil.graded_rank(-k):
            return False
        Nk = linalg.mat_pow(N, k)
        induced = _induced_on_graded(Nk, fil, k, -k)
        if induced is None:
            return False
        if induced and linalg.mat_inv(induced) is None:
            return False
        if not induced and fil.graded_rank(k) > 0:
            return False
    return True


# ---------------------------------------------------------------------------
# weights

def _weight_from_modulus_squared(c: Fraction, p: int, f: int) -> Fraction:
    """w with c = q^w = p^(f w), for positive rational c; NotWeil else."""
    if c <= 0:
        raise NotWeil(f"modulus squared {c} is not positive")
    num, den = c.numerator, c.denominator
    k = 0
    while num % p == 0:
        num //= p
        k += 1
    while den % p == 0:
        den //= p
        k -= 1
    if num != 1 or den != 1:
        raise NotWeil(f"|alpha|^2 = {c} is not a power of p = {p}")
    return Fraction(k, f)


def _sqrt_fraction(c: Fraction):
    """Exact square root of a non-negative rational, or None."""
    if c < 0:
        return None
    from math import isqrt
    rn, rd = isqrt(c.numerator), isqrt(c.denominator)
    if rn * rn == c.numerator and rd * rd == c.denominator:
        return Fraction(rn, rd)
    return None


def weight_of_eigenvalue(alpha, q: int,
                         frobenius_kind=FrobeniusKind.GEOMETRIC) -> Fraction:
    """Weight w with |iota(alpha)| = q^(w/2) for every embedding iota.

    ``alpha`` is a rational number or a list of rational polynomial
    coefficients (low-to-high) whose roots are the conjugates of alpha.
    Exact for rational and quadratic alpha; degree >= 3 inputs use
    high-precision numerics with an exact norm cross-check.
    Raises NotWeil when embeddings have different absolute values.
    """
    p, f = _prime_power(q)

    def geom_weight(a):
        if isinstance(a, (int, Fraction)):
            a = Fraction(a)
            if a == 0:
                raise NotWeil("zero eigenvalue")
            return _weight_from_modulus_squared(a * a, p, f)
        coeffs = [Fraction(x) for x in a]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        deg = len(coeffs) - 1
        if deg <= 0:
            raise NotWeil("constant polynomial has no roots")
        if deg == 1:
            return geom_weight(-coeffs[0] / coeffs[1])
        if deg == 2:
            b = coeffs[1] / coeffs[2]
            c = coeffs[0] / coeffs[2]
            disc = b * b - 4 * c
            sq = _sqrt_fraction(disc) if disc >= 0 else None
            if sq is not None:
                w1 = geom_weight((-b + sq) / 2)
                w2 = geom_weight((-b - sq) / 2)
                if w1 != w2:
                    raise NotWeil("rational conjugates of different size")
                return w1
            if disc < 0:
                # complex conjugate pair: |alpha|^2 = c
                return _weight_from_modulus_squared(c, p, f)
            # distinct real irrational embeddings: equal size forces b = 0
            if b != 0:
                raise NotWeil("real embeddings of different absolute value")
            return _weight_from_modulus_squared(-c, p, f)
        return _numeric_weight(coeffs, p, f, q)

    w = geom_weight(alpha)
    return w if frobenius_kind is FrobeniusKind.GEOMETRIC else -w


def _numeric_weight(coeffs, p, f, q):
    """Degree >= 3: numeric moduli with a margin, certified by the exact
    norm identity |prod roots| = q^(w deg / 2)."""
    import mpmath

    mpmath.mp.dps = 60
    roots = mpmath.polyroots([mpmath.mpf(c.numerator) / c.denominator
                              for c in reversed(coeffs)], maxsteps=200,
                             extraprec=200)
    moduli = [abs(r) for r in roots]
    lo, hi = min(moduli), max(moduli)
    if hi == 0:
        raise NotWeil("zero eigenvalue")
    if (hi - lo) / hi > mpmath.mpf("1e-30"):
        raise NotWeil("embeddings have different absolute values")
    w2 = 2 * mpmath.log(lo) / mpmath.log(q)  # candidate weight
    w = Fraction(round(float(w2 * f)), f)
    deg = len(coeffs) - 1
    norm = abs(coeffs[0] / coeffs[-1])  # |prod of roots|
    if _weight_from_modulus_squared(norm ** 2, p, f) != w * deg:
        raise NotWeil("norm identity fails for the candidate weight")
    if abs(w2 - mpmath.mpf(w.numerator) / w.denominator) > mpmath.mpf("1e-25"):
        raise NotWeil("candidate weight fails numerical certification")
    return w


def _eigen_factors(M):
    """Irreducible rational factors of the characteristic polynomial,
    as (coeff-list low-to-high, multiplicity)."""
    import sympy

    cp = linalg.charpoly(M)
    T = sympy.Symbol("T")
    poly = sum(sympy.Rational(c.numerator, c.denominator) * T ** i
               for i, c in enumerate(cp))
    content, factors = sympy.factor_list(sympy.Poly(poly, T))
    out = []
    for fac, mult in factors:
        fp = sympy.Poly(fac, T)
        coeffs = [Fraction(str(c)) for c in reversed(fp.all_coeffs())]
        out.append((coeffs, mult))
    return out


@dataclass
class GradedReport:
    index: int
    rank: int
    weights: list           # distinct weights found on this piece
    expected: Fraction | None
    pure: bool
    failure: str | None = None


@dataclass
class PurityReport:
    pure: bool
    weight: Fraction | None
    graded: list = field(default_factory=list)
    failure: str | None = None


def _weights_of(M, q, kind):
    """Distinct weights of the eigenvalues of a rational matrix."""
    out = []
    for coeffs, _mult in _eigen_factors(M):
        w = weight_of_eigenvalue(coeffs, q, kind)
        if w not in out:
            out.append(w)
    return sorted(out)


def purity_check(rep: WeilDeligneRep, i) -> PurityReport:
    """All Phi-eigenvalues of weight i (convention-adjusted)."""
    i = Fraction(i)
    try:
        weights = _weights_of(rep.phi, rep.q, rep.frobenius_kind)
    except NotWeil as exc:
        return PurityReport(False, None, failure=str(exc))
    if weights == [i]:
        return PurityReport(True, i)
    return PurityReport(False, i, failure=f"weights found: {weights}")


def quasi_purity_check(rep: WeilDeligneRep, i) -> PurityReport:
    """Each monodromy-graded piece Gr_k pure of weight i + k."""
    i = Fraction(i)
    fil = monodromy_filtration(rep.N)
    graded = []
    all_pure = True
    for k in range(-fil.s, fil.s + 1):
        r = fil.graded_rank(k)
        if r == 0:
            continue
        Mk = _induced_on_graded(rep.phi, fil, k)
        if Mk is None:
            graded.append(GradedReport(k, r, [], i + k, False,
                                       "Phi does not respect M_*"))
            all_pure = False
            continue
        try:
            weights = _weights_of(Mk, rep.q, rep.frobenius_kind)
        except NotWeil as exc:
            graded.append(GradedReport(k, r, [], i + k, False, str(exc)))
            all_pure = False
            continue
        ok = weights == [i + k]
        graded.append(GradedReport(k, r, weights, i + k, ok,
                                   None if ok else "wrong weight"))
        all_pure = all_pure and ok
    return PurityReport(all_pure, i, graded)


# ---------------------------------------------------------------------------
# family compatibility

@dataclass
class FamilyReport:
    compatible: bool
    tables: list            # one {key: Fraction} per member
    witness: tuple | None   # (member index, key, value, reference value)


def trace_table(rep: WeilDeligneRep, n_max: int) -> dict:
    """(k, n) -> Tr(Phi^n | Gr_k^M), plus inertia traces when present."""
    fil = monodromy_filtration(rep.N)
    table = {}
    for k in range(-fil.s, fil.s + 1):
        if fil.graded_rank(k) == 0:
            continue
        Mk = _induced_on_graded(rep.phi, fil, k)
        if Mk is None:
            raise IrrationalTrace("Phi does not respect the monodromy "
                                  "filtration")
        P = linalg.identity(len(Mk))
        for n in range(1, n_max + 1):
            P = linalg.mat_mul(P, Mk)
            table[(k, n)] = linalg.trace(P)
    if rep.inertia_order > 1 and rep.inertia_matrix is not None:
        T = linalg.identity(rep.dim)
        for j in range(1, rep.inertia_order):
            T = linalg.mat_mul(T, rep.inertia_matrix)
            table[("inertia", j)] = linalg.trace(T)
    return table


def compatibility_family(reps, n_max: int = 6) -> FamilyReport:
    """COMPATIBLE iff every member has the identical trace table."""
    tables = [trace_table(r, n_max) for r in reps]
    if not tables:
        return FamilyReport(True, [], None)
    ref = tables[0]
    for idx, tab in enumerate(tables[1:], start=1):
        keys = sorted(set(ref) | set(tab), key=str)
        for key in keys:
            a, b = ref.get(key), tab.get(key)
            if a != b:
                return FamilyReport(False, tables, (idx, key, b, a))
    return FamilyReport(True, tables, None)
