"""From tame quasi-unipotent (phi, nabla)-modules to Weil-Deligne data.

The pipeline: residue exponents pick the tame cover degree e; after Kummer
pullback the module is unipotent and its log-horizontal solutions
(coefficients in K, finitely many powers of log t) carry a constant
Frobenius, the log-derivative monodromy N, and a mu_e inertia action read
off the t-exponent residue classes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (NonConstantFrobenius, NotLevelTwo, NotTame,
                     WindowTooSmall)
from .linalg import field_kernel, field_solve
from .modules import (GaugeChange, PhiNablaModule, SOLVE_WINDOW_CAP,
                      kummer_pullback, lmat_identity, residue_exponents,
                      unipotent_filtration)
from .padic import PadicNumber, RingMode
from .series import LaurentElement
from .weil_deligne import FrobeniusKind, WeilDeligneRep


@dataclass
class LogSolution:
    """One horizontal section sum_d v_d (log t)^d; v_d are Laurent vectors."""
    components: list        # index d -> tuple of LaurentElement
    residue_class: int      # exponent class mod e (inertia character)

    @property
    def log_degree(self):
        return max((d for d, v in enumerate(self.components)
                    if any(not x.is_zero() for x in v)), default=0)


@dataclass
class LogSolutionBasis:
    solutions: list
    cover_degree: int


@dataclass
class ExtractionTrace:
    """Human-readable derivation record surfaced by the CLI."""
    exponents: list
    cover_degree: int
    log_degrees: list
    residue_classes: list


# ---------------------------------------------------------------------------
# log-horizontal solving

def _log_kernel(m: PhiNablaModule, residue_class: int, e: int,
                lo: int, hi: int):
    """Solutions sum_d v_d (log)^d of D v_d + (tG) v_d + (d+1) v_{d+1} = 0
    with all exponents congruent to residue_class mod e, supported on
    [lo, hi]."""
    params = m.params
    r = m.rank
    exps = [n for n in range(lo, hi + 1) if (n - residue_class) % e == 0]
    if not exps:
        return []
    pos = {n: i for i, n in enumerate(exps)}
    ncols = r * r * len(exps)

    def idx(d, j, n):
        return (d * r + j) * len(exps) + pos[n]

    zero = PadicNumber.zero(params)
    one = PadicNumber.from_rational(params, 1)
    tG = [[g.shift(1) for g in row] for row in m.G]
    tg_exps = [k for row in tG for x in row for k in x.coeffs]
    shift_lo = min([0] + tg_exps)
    shift_hi = max([0] + tg_exps)

    rows = []
    for d in range(r):
        for i in range(r):
            for mexp in range(lo + shift_lo, hi + shift_hi + 1):
                if (mexp - residue_class) % e != 0:
                    continue
                row = [zero] * ncols
                nontrivial = False
                if mexp in pos and mexp != 0:
                    row[idx(d, i, mexp)] = PadicNumber.from_rational(
                        params, mexp)
                    nontrivial = True
                for j in range(r):
                    for k, c in tG[i][j].coeffs.items():
                        n = mexp - k
                        if n in pos:
                            col = idx(d, j, n)
                            row[col] = row[col] + c
                            nontrivial = True
                if d + 1 < r and mexp in pos:
                    row[idx(d + 1, i, mexp)] = PadicNumber.from_rational(
                        params, d + 1)
                    nontrivial = True
                if nontrivial:
                    rows.append(row)
    basis = field_kernel(rows, zero, one)
    out = []
    for v in basis:
        comps = []
        for d in range(r):
            vec = []
            for j in range(r):
                terms = [(n, v[idx(d, j, n)]) for n in exps
                         if not v[idx(d, j, n)].is_zero()]
                vec.append(LaurentElement.from_terms(params, terms))
            comps.append(tuple(vec))
        out.append(LogSolution(comps, residue_class))
    return out


def _log_residual(m: PhiNablaModule, sol: LogSolution):
    """The vector coefficients of D(sol) + (t G)(sol), per log degree."""
    r = m.rank
    tG = [[g.shift(1) for g in row] for row in m.G]
    out = []
    for d in range(r):
        vd = sol.components[d]
        vd1 = sol.components[d + 1] if d + 1 < r else None
        res = []
        for i in range(r):
            acc = vd[i].D()
            for j in range(r):
                acc = acc + tG[i][j] * vd[j]
            if vd1 is not None:
                acc = acc + vd1[i].scale(d + 1)
            res.append(acc)
        out.append(res)
    return out


def _log_verify(m: PhiNablaModule, sol: LogSolution) -> bool:
    return all(x.is_zero() for res in _log_residual(m, sol) for x in res)


def log_solution_basis(m: PhiNablaModule, e: int = 1,
                       cap: int = SOLVE_WINDOW_CAP) -> LogSolutionBasis:
    """Full basis of log-horizontal sections, solved per residue class."""
    m._require(connection=True)
    if any(x.has_tail() for row in m.G for x in row):
        raise WindowTooSmall("connection matrix truncated")
    lo = max(m.params.window_lo, -cap)
    hi = min(m.params.window_hi, cap)
    sols = []
    for rcls in range(e):
        found = _log_kernel(m, rcls, e, lo, hi)
        half = _log_kernel(m, rcls, e, -((-lo) // 2), max(1, hi // 2))
        if len(half) != len(found):
            raise WindowTooSmall("log-solution space is window-sensitive")
        for s in found:
            if not _log_verify(m, s):
                raise WindowTooSmall("log solution fails full-window check")
        sols.extend(found)
    if len(sols) != m.rank:
        raise WindowTooSmall(
            f"found {len(sols)} log solutions, expected {m.rank}")
    # pure (log-free) solutions first, then by residue class
    sols.sort(key=lambda s: (s.log_degree, s.residue_class))
    return LogSolutionBasis(sols, e)


# ---------------------------------------------------------------------------
# expressing vectors in the solution span

def _solution_coordinates(basis, target_components, params):
    coords = set()
    for sol in basis:
        for d, vec in enumerate(sol.components):
            for i, x in enumerate(vec):
                coords.update((d, i, n) for n in x.coeffs)
    for d, vec in enumerate(target_components):
        for i, x in enumerate(vec):
            coords.update((d, i, n) for n in x.coeffs)
    coords = sorted(coords)
    zero = PadicNumber.zero(params)
    rows = []
    rhs = []
    for (d, i, n) in coords:
        rows.append([sol.components[d][i].coefficient(n) for sol in basis])
        rhs.append(target_components[d][i].coefficient(n))
    return field_solve(rows, rhs, zero)


def _frobenius_image(m: PhiNablaModule, sol: LogSolution):
    """phi applied to a log solution: A sigma(v_d) p^d at log degree d,
    since phi(log t) = p log t."""
    p = m.params.p
    r = m.rank
    out = []
    for d in range(r):
        svec = [x.sigma() for x in sol.components[d]]
        vec = []
        for i in range(r):
            acc = None
            for j in range(r):
                term = m.A[i][j] * svec[j]
                acc = term if acc is None else acc + term
            vec.append(acc.scale(Fraction(p) ** d))
        out.append(tuple(vec))
    return out


def _log_derivative(sol: LogSolution, params):
    """d/d(log t) of the solution: degree d picks up (d+1) v_{d+1}."""
    r = len(sol.components)
    out = []
    for d in range(r):
        if d + 1 < r:
            out.append(tuple(x.scale(d + 1) for x in sol.components[d + 1]))
        else:
            out.append(tuple(LaurentElement.zero(params)
                             for _ in sol.components[d]))
    return out


def _rational_vector(xs, error_cls, what):
    out = []
    for x in xs:
        try:
            out.append(x.to_fraction())
        except ValueError:
            raise error_cls(f"{what}: coefficient fails rational "
                            "recognition at precision")
    return out


# ---------------------------------------------------------------------------
# the extraction

def _tame_cover_degree(m: PhiNablaModule, m_max: int) -> tuple:
    from math import gcd, lcm

    report = residue_exponents(m)
    if report.unresolved_factor is not None:
        raise NotTame("residue exponents are not all rational")
    dens = [x.denominator for x in report.exponents]
    for d in dens:
        if d % m.params.p == 0:
            raise NotTame(f"exponent denominator {d} divisible by "
                          f"p = {m.params.p}")
        if d > m_max:
            raise NotTame(f"exponent denominator {d} exceeds m_max={m_max}")
    e = lcm(*dens) if dens else 1
    if e > m_max:
        raise NotTame(f"cover degree {e} exceeds m_max = {m_max}")
    assert gcd(e, m.params.p) == 1
    return e, report.exponents


def _canonical_sp2(phi, N):
    """For dim 2 with N of rank 1 put N into the exact E_12 shape."""
    from . import linalg

    if len(N) != 2 or all(x == 0 for row in N for x in row):
        return phi, N, None
    # u spanning a complement of ker N, w = N u
    for u in ([Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)],
              [Fraction(1), Fraction(1)]):
        w = linalg.mat_vec(N, u)
        if any(w):
            break
    U = linalg.transpose([w, u])
    Ui = linalg.mat_inv(U)
    if Ui is None:
        return phi, N, None
    conj = lambda M: linalg.mat_mul(Ui, linalg.mat_mul(M, U))
    return conj(phi), conj(N), U


def wd_extract(m: PhiNablaModule, m_max: int = 24,
               frobenius_kind=FrobeniusKind.GEOMETRIC,
               cap: int = SOLVE_WINDOW_CAP):
    """Weil-Deligne representation of a tame quasi-unipotent module."""
    from . import linalg

    m._require(frobenius=True, connection=True)
    e, exponents = _tame_cover_degree(m, m_max)
    pulled = kummer_pullback(m, e)
    basis = log_solution_basis(pulled, e, cap)
    sols = basis.solutions
    r = m.rank
    params = m.params

    phi_cols = []
    for sol in sols:
        img = _frobenius_image(pulled, sol)
        x = _solution_coordinates(sols, img, params)
        if x is None:
            raise NonConstantFrobenius(
                "phi image leaves the solution span at precision")
        phi_cols.append(_rational_vector(x, NonConstantFrobenius,
                                         "induced Frobenius"))
    phi = linalg.transpose(phi_cols)

    N_cols = []
    for sol in sols:
        der = _log_derivative(sol, params)
        x = _solution_coordinates(sols, der, params)
        if x is None:
            raise NonConstantFrobenius("log derivative leaves the span")
        N_cols.append(_rational_vector(x, NonConstantFrobenius,
                                       "monodromy operator"))
    N = linalg.transpose(N_cols)

    classes = [s.residue_class for s in sols]
    inertia_matrix = None
    if e == 2:
        inertia_matrix = [[Fraction(-1 if (i == j and classes[i] % 2) else
                                    (1 if i == j else 0))
                           for j in range(r)] for i in range(r)]

    phi_c, N_c, U = _canonical_sp2(phi, N)
    if U is not None and inertia_matrix is not None:
        Ui = linalg.mat_inv(U)
        inertia_matrix = linalg.mat_mul(
            Ui, linalg.mat_mul(inertia_matrix, U))
    if U is not None:
        phi, N = phi_c, N_c

    if frobenius_kind is FrobeniusKind.ARITHMETIC:
        # the solution-space action computed above is that of geometric
        # Frobenius; the arithmetic one is its inverse
        phi = linalg.mat_inv(phi)

    rep = WeilDeligneRep(params.q, phi, N, e, inertia_matrix,
                         frobenius_kind, m.label)
    trace = ExtractionTrace([str(x) for x in exponents], e,
                            [s.log_degree for s in sols], classes)
    return rep, trace


def wd_of_cohomology(m: PhiNablaModule, i: int, m_max: int = 24,
                     frobenius_kind=FrobeniusKind.GEOMETRIC):
    """Extraction for a module carrying H^i of a variety; forces the
    Laurent-window model before extracting and tags the result."""
    laurent = m.params.with_mode(RingMode.LAURENT)
    rep, trace = wd_extract(m.with_params(laurent), m_max, frobenius_kind)
    rep.label = f"H^{i}_p({m.label})" if m.label else f"H^{i}_p"
    return rep, trace


# ---------------------------------------------------------------------------
# level-2 normal form

@dataclass
class NormalForm:
    gauge: GaugeChange
    e_block: list       # basis indices (in the gauged module) with D = 0
    f_block: list       # remaining horizontal basis indices
    g_block: list       # level-2 indices
    constants: list     # matrix C over Q with D(g_k) = sum_i C[i][k] e_i


def key2_normal_form(m: PhiNablaModule, weight_flag_data=None,
                     cap: int = SOLVE_WINDOW_CAP) -> NormalForm:
    """Gauge a level <= 2 unipotent module so that D kills the first two
    basis blocks and maps the third into the constant span of the first."""
    from . import linalg

    fil = unipotent_filtration(m, cap)
    if not fil.unipotent:
        raise NotLevelTwo("module is not unipotent")
    if fil.level is not None and fil.level > 2:
        raise NotLevelTwo(f"unipotence level {fil.level} > 2")
    params = m.params
    gauged = fil.gauged_module
    if fil.level in (0, 1) or fil.level is None:
        return NormalForm(fil.gauge, [], list(range(m.rank)), [], [])
    k1, k2 = fil.block_sizes
    # D(g_k) has coefficients (t G)_{i, k1+k} for i < k1; strip every
    # non-constant term by the termwise primitive (n-th coefficient / n)
    corr = [[LaurentElement.zero(params) for _ in range(k1 + k2)]
            for _ in range(k1 + k2)]
    tG = [[g.shift(1) for g in row] for row in gauged.G]
    C = [[Fraction(0)] * k2 for _ in range(k1)]
    for k in range(k2):
        for i in range(k1):
            x = tG[i][k1 + k]
            const = x.coefficient(0)
            nonconst = {n: c for n, c in x.coeffs.items() if n != 0}
            prim = LaurentElement(
                params, {n: c * Fraction(-1, n)
                         for n, c in nonconst.items()})
            corr[i][k1 + k] = prim
            try:
                C[i][k] = const.to_fraction()
            except ValueError:
                raise NonConstantFrobenius(
                    "normal-form constant fails rational recognition")
    U2 = lmat_identity(params, k1 + k2)
    for i in range(k1 + k2):
        for j in range(k1 + k2):
            if not corr[i][j].is_zero():
                U2[i][j] = U2[i][j] + corr[i][j]
    total = fil.gauge.compose(GaugeChange(U2))
    # rotate the first block so the image span of C comes first
    col_rank = linalg.rank(C) if k1 and k2 else 0
    if 0 < col_rank < k1:
        img = linalg.column_space(C)
        cols = list(img)
        for i in range(k1):
            cand = [Fraction(int(i == j)) for j in range(k1)]
            if not linalg.in_span(cand, cols):
                cols.append(cand)
        E = linalg.transpose(cols)
        U3 = lmat_identity(params, k1 + k2)
        for i in range(k1):
            for j in range(k1):
                U3[i][j] = LaurentElement.constant(params, E[i][j])
        total = total.compose(GaugeChange(U3))
        C = linalg.mat_mul(linalg.mat_inv(E), C)
    e_block = list(range(col_rank))
    f_block = list(range(col_rank, k1))
    g_block = list(range(k1, k1 + k2))
    return NormalForm(total, e_block, f_block, g_block, C)
