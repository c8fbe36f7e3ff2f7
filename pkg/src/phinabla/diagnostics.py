"""Arithmetic verdicts: reduction types, rank bookkeeping, weight
filtrations, excision for open curves, and ell-independence.

Conventions: abelian-variety modules are homological (weights -2, -1, 0 on
D(A)); cohomological H^1 data carry weight 1.  Reports always name the
convention in force.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .errors import (DiagnosticConflict, InconsistentRanks, MissingPairing,
                     NotEquivariant, PurityFailure)
from .extraction import wd_extract
from .linalg import field_kernel
from .modules import (PhiNablaModule, SOLVE_WINDOW_CAP, check_compatibility,
                      horizontal_sections, largest_constant_submodule,
                      lmat_add, lmat_ddt, lmat_det, lmat_mul, lmat_sigma,
                      lmat_sub, module_from_json, unipotent_filtration)
from .padic import PadicNumber
from .series import LaurentElement
from .weil_deligne import (FrobeniusKind, WeilDeligneRep,
                           compatibility_family, monodromy_filtration,
                           purity_check, quasi_purity_check, _weights_of)


class ReductionType(enum.Enum):
    GOOD = "GOOD"
    SEMISTABLE_NOT_GOOD = "SEMISTABLE_NOT_GOOD"
    NOT_SEMISTABLE = "NOT_SEMISTABLE"


@dataclass
class AbelianVarietyDatum:
    """D(A) with optional D(A') and Weil pairing into R(1).

    The pairing matrix P encodes <x, y> = x^T P y; when dual_module is
    omitted the datum is treated as self-dual (principal polarization)."""

    module: PhiNablaModule
    dual_module: PhiNablaModule | None = None
    pairing: list | None = None

    def __post_init__(self):
        if self.module.rank % 2 != 0:
            raise InconsistentRanks("D(A) must have even rank")
        if self.pairing is not None:
            self._validate_pairing()

    @property
    def n(self):
        return self.module.rank // 2

    @property
    def dual(self):
        return self.dual_module if self.dual_module is not None \
            else self.module

    def _validate_pairing(self):
        m = self.module
        md = self.dual
        P = self.pairing
        det = lmat_det(P)
        if det is None or det.is_zero() or not det.is_unit():
            raise MissingPairing("pairing is not perfect at precision")
        q = m.params.q
        if m.has_frobenius and md.has_frobenius:
            lhs = lmat_mul(_transpose(m.A), lmat_mul(P, md.A))
            qinv = LaurentElement.constant(m.params, Fraction(1, q))
            rhs = [[x.sigma() * qinv for x in row] for row in P]
            if not _lmat_eq(lhs, rhs):
                raise MissingPairing("pairing fails <phi x, phi y> = "
                                     "q^-1 sigma<x, y>")
        if m.has_connection and md.has_connection:
            lhs = lmat_ddt(P)
            rhs = lmat_add(lmat_mul(_transpose(m.G), P), lmat_mul(P, md.G))
            if not _lmat_eq(lhs, rhs):
                raise MissingPairing("pairing is not horizontal")


def _transpose(M):
    return [list(col) for col in zip(*M)]


def _lmat_eq(A, B):
    return all(x.congruent(y) for ra, rb in zip(A, B)
               for x, y in zip(ra, rb))


@dataclass
class RankProfile:
    n: int
    mu: int       # reductive (toric) rank
    alpha: int    # abelian rank
    lam: int      # unipotent rank

    def __post_init__(self):
        if self.n != self.alpha + self.mu + self.lam:
            raise InconsistentRanks(
                f"n = {self.n} != alpha + mu + lambda = "
                f"{self.alpha + self.mu + self.lam}")


def _fixed_part_kernel(datum: AbelianVarietyDatum, sections, dual_sections,
                       cap=SOLVE_WINDOW_CAP):
    """Constant combinations of `sections` pairing to zero with every dual
    section: coordinates of D^t inside D^f."""
    params = datum.module.params
    P = datum.pairing
    zero = PadicNumber.zero(params)
    one = PadicNumber.from_rational(params, 1)
    rows = []
    for y in dual_sections:
        Py = []
        for i in range(datum.module.rank):
            acc = None
            for j in range(datum.module.rank):
                term = P[i][j] * y[j]
                acc = term if acc is None else acc + term
            Py.append(acc)
        pairings = []
        exps = set()
        for b in sections:
            val = None
            for i in range(datum.module.rank):
                term = b[i] * Py[i]
                val = term if val is None else val + term
            pairings.append(val)
            exps.update(val.coeffs)
        for e in sorted(exps):
            rows.append([v.coefficient(e) for v in pairings])
    if not rows:
        rows = [[zero] * len(sections)]
    return field_kernel(rows, zero, one)


def rank_profile(datum: AbelianVarietyDatum,
                 cap=SOLVE_WINDOW_CAP) -> RankProfile:
    m = datum.module
    n = datum.n
    sections = horizontal_sections(m, cap)
    rk_f = len(sections)
    if rk_f == 0:
        return RankProfile(n, 0, 0, n)
    if datum.pairing is None:
        raise MissingPairing("mu/alpha split requires the Weil pairing")
    dual_sections = horizontal_sections(datum.dual, cap)
    ker = _fixed_part_kernel(datum, sections, dual_sections, cap)
    mu = len(ker)
    if (rk_f - mu) % 2 != 0:
        raise InconsistentRanks(
            f"rk D^f - mu = {rk_f - mu} is odd; invalid datum")
    alpha = (rk_f - mu) // 2
    lam = n - alpha - mu
    if lam < 0:
        raise InconsistentRanks("negative unipotent rank; invalid datum")
    return RankProfile(n, mu, alpha, lam)


def reduction_type(datum: AbelianVarietyDatum,
                   cap=SOLVE_WINDOW_CAP) -> ReductionType:
    """Module-theoretic verdict, cross-checked against the rank profile
    when the pairing permits computing one."""
    m = datum.module
    sections = horizontal_sections(m, cap)
    if len(sections) == m.rank:
        verdict = ReductionType.GOOD
    else:
        fil = unipotent_filtration(m, cap)
        verdict = (ReductionType.SEMISTABLE_NOT_GOOD if fil.unipotent
                   else ReductionType.NOT_SEMISTABLE)
    profile = None
    if datum.pairing is not None or len(sections) == 0:
        try:
            profile = rank_profile(datum, cap)
        except MissingPairing:
            profile = None
    if profile is not None:
        if verdict is ReductionType.GOOD and not (profile.mu == 0
                                                  and profile.lam == 0):
            raise DiagnosticConflict("GOOD but mu or lambda nonzero")
        if verdict is ReductionType.SEMISTABLE_NOT_GOOD and \
                profile.lam != 0:
            raise DiagnosticConflict("semistable but lambda nonzero")
        if verdict is ReductionType.NOT_SEMISTABLE and profile.lam == 0:
            raise DiagnosticConflict("not semistable but lambda zero")
    return verdict


# ---------------------------------------------------------------------------
# semistable weight filtration on D(A)

@dataclass
class WeightGraded:
    index: int          # -2, -1, 0
    rank: int
    weights: list       # geometric-convention weights found
    pure: bool


@dataclass
class WeightFiltration:
    """W_-2 = D^t, W_-1 = D^f, W_0 = D(A); homological convention
    (graded weights -2, -1, 0), geometric mirror printed alongside."""
    ranks: dict
    graded: list
    sections: list              # basis of D^f as horizontal sections
    torus_coordinates: list     # D^t in D^f coordinates (Fraction vectors)
    convention: str = "homological (geometric mirror: w and -w agree)"


def _constant_matrix(M, err="matrix"):
    out = []
    for row in M:
        orow = []
        for x in row:
            if not isinstance(x, PadicNumber):
                if not x.is_constant():
                    raise DiagnosticConflict(f"{err} is not constant")
                x = x.coefficient(0)
            try:
                orow.append(x.to_fraction())
            except ValueError:
                raise DiagnosticConflict(f"{err} fails rational recognition")
        out.append(orow)
    return out


def _restrict_and_quotient(phi, sub):
    """phi restricted to span(sub) and induced on the quotient, where sub
    is a list of coordinate vectors; raises if not invariant."""
    dim = len(phi)
    comp = []
    acc = [list(v) for v in sub]
    for i in range(dim):
        cand = [Fraction(int(i == j)) for j in range(dim)]
        if not linalg.in_span(cand, acc):
            comp.append(cand)
            acc.append(cand)
    B = linalg.transpose(list(sub) + comp)
    Binv = linalg.mat_inv(B)
    conj = linalg.mat_mul(Binv, linalg.mat_mul(phi, B))
    k = len(sub)
    for i in range(k, dim):
        for j in range(k):
            if conj[i][j] != 0:
                raise DiagnosticConflict("subspace is not phi-invariant")
    restr = [row[:k] for row in conj[:k]]
    quot = [row[k:] for row in conj[k:]]
    return restr, quot


def semistable_weight_filtration(datum: AbelianVarietyDatum,
                                 cap=SOLVE_WINDOW_CAP) -> WeightFiltration:
    verdict = reduction_type(datum, cap)
    if verdict is ReductionType.NOT_SEMISTABLE:
        raise DiagnosticConflict("weight filtration needs semistability")
    m = datum.module
    if m.rank == 0:
        return WeightFiltration({-2: 0, -1: 0, 0: 0}, [], [], [])
    q = m.params.q
    cs = largest_constant_submodule(m, cap)
    sections = cs.basis
    rk_f = len(sections)
    if rk_f and datum.pairing is None:
        raise MissingPairing("W_-2 requires the Weil pairing")
    torus = []
    if rk_f:
        dual_sections = horizontal_sections(datum.dual, cap)
        ker = _fixed_part_kernel(datum, sections, dual_sections, cap)
        torus = [_constant_matrix([v], "D^t coordinates")[0] for v in ker]
    mu = len(torus)
    ranks = {-2: mu, -1: rk_f, 0: m.rank}

    graded = []
    phi_f = _constant_matrix(cs.frobenius, "Frobenius on D^f") \
        if rk_f else []
    # split phi_f along D^t
    if mu:
        restr, quot = _restrict_and_quotient(phi_f, torus)
    else:
        restr, quot = [], phi_f

    def report(index, mat):
        rank = len(mat)
        if rank == 0:
            return None
        weights = _weights_of(mat, q, FrobeniusKind.GEOMETRIC)
        pure = weights == [Fraction(index)]
        if not pure:
            raise PurityFailure(
                f"Gr_{index} has weights {weights}, expected {index}",
                eigenvalue=weights)
        return WeightGraded(index, rank, weights, pure)

    r = report(-2, restr)
    if r:
        graded.append(r)
    r = report(-1, quot)
    if r:
        graded.append(r)
    # Gr_0 = D / D^f: constant Frobenius on the top block of the gauged
    # unipotent filtration
    if m.rank > rk_f:
        fil = unipotent_filtration(m, cap)
        g = fil.gauged_module
        top = [[g.A[i][j] for j in range(rk_f, m.rank)]
               for i in range(rk_f, m.rank)]
        r = report(0, _constant_matrix(top, "Frobenius on Gr_0"))
        if r:
            graded.append(r)
    return WeightFiltration(ranks, graded, sections, torus)


def wd_weight_filtration_flags(datum: AbelianVarietyDatum, m_max: int = 24,
                               cap=SOLVE_WINDOW_CAP):
    """Images WD(W_k) of the weight filtration inside the WD space,
    together with the monodromy filtration of the extracted N.

    Returns (flags, fil, rep) where flags maps k in {-2, -1, 0} to a basis
    of WD(W_k) in solution coordinates; Thm-shape expectation is
    WD(W_k) = M_{k+1}."""
    from .extraction import log_solution_basis, _tame_cover_degree
    from .modules import kummer_pullback

    wf = semistable_weight_filtration(datum, cap)
    m = datum.module
    rep, _trace = wd_extract(m, m_max, cap=cap)
    e, _ = _tame_cover_degree(m, m_max)
    pulled = kummer_pullback(m, e)
    sols = log_solution_basis(pulled, e, cap).solutions
    params = m.params

    def sub_flag(section_subset):
        """Solutions lying in the R-span of the given module vectors."""
        if not section_subset:
            return []
        span = [[x.rebase(pulled.params) for x in vec]
                for vec in section_subset]
        # c in Q^r with sum c_b s_b supported in span: solve per coordinate
        # not in the span's column space
        zero = PadicNumber.zero(params)
        one = PadicNumber.from_rational(params, 1)
        rows = []
        coords = set()
        for sol in sols:
            for d, vec in enumerate(sol.components):
                for i, x in enumerate(vec):
                    coords.update((d, i, n) for n in x.coeffs)
        # span membership: residual after eliminating span directions;
        # build combined system [solutions | -span-multiples] and project
        # instead: require combo minus R-linear combination of span = 0.
        # Unknowns: c_b (constants) and, per log degree d, series
        # coefficients a_{w,d,n} for each span vector w.
        r = len(sols)
        nspan = len(span)
        lo = max(params.window_lo, -cap)
        hi = min(params.window_hi, cap)
        exps = list(range(lo, hi + 1))
        pos = {n: t for t, n in enumerate(exps)}
        width = len(exps)
        rmax = max((d for sol in sols
                    for d, vec in enumerate(sol.components)
                    if any(not x.is_zero() for x in vec)), default=0) + 1
        ncols = r + nspan * rmax * width

        def aidx(w, d, n):
            return r + ((w * rmax) + d) * width + pos[n]

        eq = {}
        for b, sol in enumerate(sols):
            for d in range(rmax):
                vec = sol.components[d] if d < len(sol.components) else None
                if vec is None:
                    continue
                for i, x in enumerate(vec):
                    for n, c in x.coeffs.items():
                        eq.setdefault((d, i, n), {})[b] = c
        for w, vec in enumerate(span):
            for i, x in enumerate(vec):
                for k, c in x.coeffs.items():
                    for d in range(rmax):
                        for n in exps:
                            tot = n + k
                            if lo <= tot <= hi:
                                eq.setdefault((d, i, tot), {})[
                                    aidx(w, d, n)] = -c
        keys = sorted(eq)
        rows = []
        for key in keys:
            row = [zero] * ncols
            for col, c in eq[key].items():
                row[col] = row[col] + c
            rows.append(row)
        basis = field_kernel(rows, zero, one)
        out = []
        for v in basis:
            c = v[:r]
            if all(x.is_zero() for x in c):
                continue
            out.append([x.to_fraction() for x in c])
        return linalg.span_basis(out)

    # module vectors of W_-1 = D^f: the sections themselves; W_-2 = D^t
    w_m1 = wf.sections
    w_m2 = []
    for coords_v in wf.torus_coordinates:
        vec = None
        for cb, b in zip(coords_v, wf.sections):
            scaled = tuple(x.scale(cb) for x in b)
            vec = scaled if vec is None else tuple(
                a + bb for a, bb in zip(vec, scaled))
        w_m2.append(list(vec))
    flags = {
        -2: sub_flag(w_m2),
        -1: sub_flag([list(v) for v in w_m1]),
        0: linalg.identity(rep.dim),
    }
    fil = monodromy_filtration(rep.N)
    return flags, fil, rep


# ---------------------------------------------------------------------------
# weight-monodromy for a single module

def check_weight_monodromy(m: PhiNablaModule, i, m_max: int = 24,
                           cap=SOLVE_WINDOW_CAP):
    rep, _trace = wd_extract(m, m_max, cap=cap)
    return quasi_purity_check(rep, i)


# ---------------------------------------------------------------------------
# excision for open curves

@dataclass
class OpenCurveDatum:
    h1_compact: PhiNablaModule
    h0_boundary_twisted: PhiNablaModule   # H^0(D)(-1)
    h2_compact: PhiNablaModule
    boundary_map: list                    # matrix H^0(D)(-1) -> H^2(Xbar)

    def validate_equivariance(self):
        F = self.boundary_map
        src, dst = self.h0_boundary_twisted, self.h2_compact
        if dst.rank == 0 or src.rank == 0:
            return
        if src.has_frobenius and dst.has_frobenius:
            lhs = lmat_mul(F, src.A)
            rhs = lmat_mul(dst.A, lmat_sigma(F))
            if not _lmat_eq(lhs, rhs):
                raise NotEquivariant("boundary map is not phi-equivariant")
        if src.has_connection and dst.has_connection:
            lhs = lmat_add(lmat_ddt(F), lmat_mul(dst.G, F))
            rhs = lmat_mul(F, src.G)
            if not _lmat_eq(lhs, rhs):
                raise NotEquivariant("boundary map is not nabla-equivariant")


@dataclass
class ExcisionReport:
    gr1_rank: int
    gr2_rank: int
    gr1_report: object          # PurityReport (quasi-purity at weight 1)
    gr2_weights: list
    ok: bool
    convention: str = "cohomological, geometric weights"


def excision_weight_filtration(c: OpenCurveDatum, m_max: int = 24,
                               cap=SOLVE_WINDOW_CAP) -> ExcisionReport:
    """^gW_1 = image of H^1(Xbar), ^gW_2 = everything; Gr_2 = ker(boundary)
    inside H^0(D)(-1)."""
    c.validate_equivariance()
    h1 = c.h1_compact
    rep1, _ = wd_extract(h1, m_max, cap=cap) if h1.rank else (None, None)
    gr1 = quasi_purity_check(rep1, 1) if rep1 is not None else None

    # kernel of the boundary map: constant by equivariance at desk scale
    gr2_weights = []
    gr2_rank = 0
    if c.h0_boundary_twisted.rank:
        F = _constant_matrix(c.boundary_map, "boundary map")
        ker = linalg.nullspace(F) if F and F[0] else \
            linalg.identity(c.h0_boundary_twisted.rank)
        ker = linalg.span_basis([list(v) for v in ker]) if ker else []
        gr2_rank = len(ker)
        if gr2_rank:
            A0 = _constant_matrix(c.h0_boundary_twisted.A,
                                  "H^0(D)(-1) Frobenius")
            restr, _ = _restrict_and_quotient(A0, ker)
            gr2_weights = _weights_of(restr, h1.params.q,
                                      FrobeniusKind.GEOMETRIC)
    ok = (gr1 is None or gr1.pure) and \
        (gr2_rank == 0 or gr2_weights == [Fraction(2)])
    if gr2_rank and gr2_weights != [Fraction(2)]:
        raise PurityFailure(f"Gr_2 weights {gr2_weights}, expected 2",
                            eigenvalue=gr2_weights)
    return ExcisionReport(h1.rank, gr2_rank, gr1, gr2_weights, ok)


# ---------------------------------------------------------------------------
# ell-independence

def ell_independence_check(p_adic: WeilDeligneRep, ell_family,
                           n_max: int = 6):
    return compatibility_family([p_adic] + list(ell_family), n_max)


# ---------------------------------------------------------------------------
# JSON ingestion for the CLI

def abelian_datum_from_json(obj, params=None) -> AbelianVarietyDatum:
    module = module_from_json(obj["module"], params)
    dual = module_from_json(obj["dual_module"], module.params) \
        if obj.get("dual_module") else None
    pairing = None
    if obj.get("pairing"):
        pairing = [[LaurentElement.from_json(module.params, x) for x in row]
                   for row in obj["pairing"]]
    return AbelianVarietyDatum(module, dual, pairing)


def open_curve_from_json(obj, params=None) -> OpenCurveDatum:
    h1 = module_from_json(obj["h1_compact"], params)
    h0 = module_from_json(obj["h0_boundary_twisted"], h1.params)
    h2 = module_from_json(obj["h2_compact"], h1.params)
    F = [[LaurentElement.from_json(h1.params, x) for x in row]
         for row in obj["boundary_map"]]
    return OpenCurveDatum(h1, h0, h2, F)
