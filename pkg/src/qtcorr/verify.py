"""Seeded verification suites.

Each suite returns a list of :class:`Check` records.  Exact checks pass only
at deviation 0; numeric checks pass when the deviation is below the stated
tolerance (plus the reported tail bound where there is one).  Records with
status "info" carry diagnostics and never fail a run.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import correlators as corr
from . import fock
from . import hypergeom as hg
from . import macdonald as mac
from .partitions import (b_hat_stat, b_stat, conjugate, enumerate_partitions, exact, partition_count,
                         partitions_up_to)
from .qseries import (VSeries, exp_series, format_rational, inverse, log_series, pochhammer_fin,
                      pochhammer_inf)

SUITES = ("partitions", "qseries", "hypergeom", "onepoint", "twopoint", "vertex", "macdonald")
DEFAULT_SEED = 7
NUMERIC_TOL = 1e-8


@dataclass
class Check:
    name: str
    status: str
    deviation: str
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "status": self.status, "deviation": self.deviation,
                "details": self.details}


def _fmt(x) -> str:
    if isinstance(x, (Fraction, int)):
        return format_rational(x)
    return f"{float(x):.3e}"


def exact_check(name: str, deviation, **details) -> Check:
    return Check(name, "pass" if deviation == 0 else "fail", _fmt(deviation), details)


def numeric_check(name: str, deviation: float, tol: float, **details) -> Check:
    details.setdefault("tolerance", f"{tol:.1e}")
    return Check(name, "pass" if deviation < tol else "fail", _fmt(deviation), details)


def series_deviation(a: VSeries, b: VSeries) -> Fraction:
    return max((abs(x - y) for x, y in zip(a, b)), default=Fraction(0))


# -- random draws ------------------------------------------------------------------

def draw_rational(rng: random.Random, lo: Fraction, hi: Fraction, max_den: int = 9,
                  avoid=(0, 1)) -> Fraction:
    """Uniform-ish rational in [lo, hi] with denominator <= max_den, not in ``avoid``."""
    while True:
        den = rng.randint(1, max_den)
        num = rng.randint(int(lo * den) - 1, int(hi * den) + 1)
        x = Fraction(num, den)
        if lo <= x <= hi and x not in avoid:
            return x


def draw_float(rng: random.Random, lo: float, hi: float) -> float:
    return rng.uniform(lo, hi)


def _names(values) -> list:
    return [format_rational(exact(x)) if isinstance(x, (int, Fraction)) else repr(x) for x in values]


# -- suites ------------------------------------------------------------------------

def suite_partitions(rng: random.Random, tol: float = NUMERIC_TOL) -> list:
    checks = []
    counts = [len(enumerate_partitions(n)) for n in range(13)]
    checks.append(exact_check("partition_count_matches_enumeration",
                              max(abs(c - partition_count(n)) for n, c in enumerate(counts)),
                              counts=counts))
    parts = partitions_up_to(12)
    for k in range(5):
        q = draw_rational(rng, Fraction(-3), Fraction(3))
        t = draw_rational(rng, Fraction(-3), Fraction(3))
        empty = b_hat_stat((), q, t)
        dev_split = dev_b = dev_hat = Fraction(0)
        for lam in parts:
            hat = b_hat_stat(lam, q, t)
            dev_split = max(dev_split, abs(b_stat(lam, q, t) - (empty - hat)))
            dev_b = max(dev_b, abs(b_stat(lam, q, t) - b_stat(conjugate(lam), t, q)))
            dev_hat = max(dev_hat, abs(hat - b_hat_stat(conjugate(lam), t, q)))
        point = {"q": format_rational(q), "t": format_rational(t), "partitions": len(parts)}
        checks.append(exact_check(f"cell_sum_vs_hat_difference[{k}]", dev_split, **point))
        checks.append(exact_check(f"cell_sum_conjugation[{k}]", dev_b, **point))
        checks.append(exact_check(f"hat_conjugation[{k}]", dev_hat, **point))
    return checks


def suite_qseries(rng: random.Random, tol: float = NUMERIC_TOL) -> list:
    checks = []
    N = 12
    for k in range(3):
        coeffs = [Fraction(1)] + [draw_rational(rng, Fraction(-2), Fraction(2), avoid=()) for _ in range(N)]
        a = VSeries(coeffs, N)
        checks.append(exact_check(f"inverse_roundtrip[{k}]", series_deviation(a * inverse(a), VSeries.one(N))))
        checks.append(exact_check(f"exp_log_roundtrip[{k}]", series_deviation(exp_series(log_series(a)), a)))
        c = draw_rational(rng, Fraction(-2), Fraction(2))
        r = rng.randint(0, 5)
        split = pochhammer_fin(c, r, N) * pochhammer_inf(c, N, shift=r)
        checks.append(exact_check(f"pochhammer_split[{k}]", series_deviation(split, pochhammer_inf(c, N)),
                                  a=format_rational(c), r=r))
    for n in range(6):
        checks.append(exact_check(f"binomial_identity[n={n}]",
                                  series_deviation(fock.binomial_identity_residual(n, N), VSeries.zero(N))))
    return checks


def _hall_hyper_point(rng: random.Random):
    """A two-point admissible parameter set and the 3phi2 parameters of the T_1 form."""
    q1, q2 = draw_float(rng, -0.7, 0.7), draw_float(rng, 0.2, 0.9) * rng.choice((-1, 1))
    t1, t2 = draw_float(rng, -0.7, 0.7), draw_float(rng, -0.7, 0.7)
    v = draw_float(rng, 0.05, 0.3)
    return (q1, t1, q2, t2, v), (t1 * t2, t2, 1 / q2, v * t2, v * q1 * t1 * t2, v)


def suite_hypergeom(rng: random.Random, tol: float = NUMERIC_TOL) -> list:
    worst = {"q_binomial": 0.0, "heine": 0.0, "hall": 0.0, "hall_hyper": 0.0}
    for _ in range(100):
        a, t, v = draw_float(rng, -2, 2), draw_float(rng, -0.9, 0.9), draw_float(rng, -0.8, 0.8)
        worst["q_binomial"] = max(worst["q_binomial"], hg.q_binomial_residual(a, t, v))
    for _ in range(100):
        a = draw_float(rng, 0.5, 2) * rng.choice((-1, 1))
        b = draw_float(rng, 0.1, 0.9) * rng.choice((-1, 1))
        z = draw_float(rng, -0.8, 0.8)
        v = draw_float(rng, -0.7, 0.7)
        worst["heine"] = max(worst["heine"], hg.heine_residual(a, b, z * a * b, v))
    for _ in range(100):
        a, c = draw_float(rng, 0.5, 2), draw_float(rng, 0.5, 2)
        b = draw_float(rng, 0.1, 0.8) * rng.choice((-1, 1))
        d = draw_float(rng, -0.6, 0.6)
        z = draw_float(rng, -0.6, 0.6)
        v = draw_float(rng, -0.5, 0.5)
        e = z * a * b * c / d
        worst["hall"] = max(worst["hall"], hg.hall_residual(a, b, c, d, e, v))
    for _ in range(100):
        _, params = _hall_hyper_point(rng)
        worst["hall_hyper"] = max(worst["hall_hyper"], hg.hall_residual(*params))
    return [numeric_check(f"{name}_residual", dev, tol, draws=100) for name, dev in worst.items()]


def suite_onepoint(rng: random.Random, tol: float = NUMERIC_TOL) -> list:
    checks = []
    N = 12
    points = [(draw_rational(rng, Fraction(-2), Fraction(2)), draw_rational(rng, Fraction(-2), Fraction(2)))
              for _ in range(4)]
    points.append((draw_rational(rng, Fraction(-1), Fraction(1)), draw_rational(rng, Fraction(3, 2), Fraction(4))))
    for k, (q, t) in enumerate(points):
        dev = series_deviation(corr.one_point_closed(q, t, N), corr.trace_brute_hat([(q, t)], N))
        checks.append(exact_check(f"one_point[{k}]", dev, q=format_rational(q), t=format_rational(t), order=N))
    q1 = draw_rational(rng, Fraction(-2), Fraction(2))
    q2 = draw_rational(rng, Fraction(-2), Fraction(2))
    for i in range(1, 4):
        brute = corr.expectation_v(lambda lam: q1 ** (lam[i - 1] if i <= len(lam) else 0), N)
        checks.append(exact_check(f"row_power[i={i}]", series_deviation(corr.row_power_closed(q1, i, N), brute),
                                  q=format_rational(q1)))
        for j in range(i + 1, 5):
            def f(lam, i=i, j=j):
                li = lam[i - 1] if i <= len(lam) else 0
                lj = lam[j - 1] if j <= len(lam) else 0
                return q1 ** li * q2 ** lj
            closed = corr.row_pair_power_closed(q1, q2, i, j, N, check=False)
            second = corr.row_pair_power_split_form(q1, q2, i, j, N)
            brute = corr.expectation_v(f, N)
            checks.append(exact_check(f"row_pair_power[i={i},j={j}]",
                                      max(series_deviation(closed, brute), series_deviation(second, brute)),
                                      q1=format_rational(q1), q2=format_rational(q2)))
    for k in range(3):
        q = draw_rational(rng, Fraction(-3), Fraction(3), avoid=(0, 1, -1))
        dev = series_deviation(corr.one_point_closed(q, 1 / q, N), corr.inverse_pair_one_point(q, N))
        checks.append(exact_check(f"inverse_pair_reduction[{k}]", dev, q=format_rational(q)))
    return checks


SPECIAL_POINTS = [
    (Fraction(1, 2), Fraction(1, 4), Fraction(4), Fraction(2)),
    (Fraction(1, 3), Fraction(1, 4), Fraction(2), Fraction(6)),
    (Fraction(2, 3), Fraction(3, 5), Fraction(5, 4), Fraction(2)),
]


def _draw_two_point(rng: random.Random):
    while True:
        params = tuple(draw_float(rng, -0.6, 0.6) for _ in range(4)) + (draw_float(rng, 0.05, 0.2),)
        try:
            corr._check_two_point_domain(*map(complex, params))
            return params
        except Exception:
            continue


def suite_twopoint(rng: random.Random, tol: float = NUMERIC_TOL) -> list:
    checks = []
    N = 10
    for k, (q1, t1, q2, t2) in enumerate(SPECIAL_POINTS):
        brute = corr.trace_brute_hat([(q1, t1), (q2, t2)], N)
        dev = series_deviation(corr.two_point_closed_special(q1, t1, q2, t2, N), brute)
        checks.append(exact_check(f"two_point_special[{k}]", dev, params=_names((q1, t1, q2, t2)), order=N))
    for k in range(5):
        q1, t1, q2, t2, v = _draw_two_point(rng)
        closed = corr.two_point_closed_general(q1, t1, q2, t2, v)
        brute, bound = corr.trace_brute_hat_numeric([(q1, t1), (q2, t2)], v)
        terms = corr.t_terms_numeric(q1, t1, q2, t2, v)
        point = {"params": [round(x, 12) for x in (q1, t1, q2, t2, v)]}
        checks.append(numeric_check(f"two_point_general[{k}]", abs(closed - brute), tol + bound,
                                    tail_bound=f"{bound:.3e}", brute_size=corr.DEFAULT_BRUTE_SIZE, **point))
        checks.append(numeric_check(f"first_term_hyper_form[{k}]", abs(terms.T1 - terms.routes["T1_hyper"]),
                                    tol, **point))
    q1, t1, q2, t2 = Fraction(1, 2), Fraction(1, 3), Fraction(-2, 3), Fraction(2, 5)
    t = corr.t_terms_exact(q1, t1, q2, t2, 8)
    split = t.total() * (1 / ((1 - q1) * (1 - q2)))
    brute = pochhammer_inf(1, 8, shift=1) * corr.trace_brute_hat([(q1, t1), (q2, t2)], 8)
    checks.append(exact_check("three_term_split", series_deviation(split, brute),
                              params=_names((q1, t1, q2, t2))))
    checks.append(exact_check("diagonal_term_closed", series_deviation(t.T3, t.routes["T3_closed"])))
    for n in (2, 3):
        pairs = [(draw_rational(rng, Fraction(-2), Fraction(2)), draw_rational(rng, Fraction(-2), Fraction(2)))
                 for _ in range(n)]
        rep = corr.symmetry_report(pairs, 8)
        names = [_names(p) for p in pairs]
        # swapping q and t inside a single pair is not a symmetry; kept as a diagnostic
        checks.append(Check(f"hyperoctahedral_symmetry[n={n}]", "info", _fmt(rep["max_deviation"]),
                            {"images": rep["images"], "pairs": names, "order": 8,
                             "note": "independent in-pair swaps change the value"}))
        checks.append(exact_check(f"diagonal_swap_symmetry[n={n}]", rep["diagonal_max_deviation"],
                                  images=rep["diagonal_images"], pairs=names, order=8))
    return checks


def _draw_vertex_params(rng: random.Random, kappa) -> fock.VertexParams:
    vals = [draw_rational(rng, Fraction(-2), Fraction(2), avoid=()) for _ in range(4)]
    return fock.VertexParams.from_qt(*vals, kappa=kappa)


def _param_names(p: fock.VertexParams) -> dict:
    return {"s": format_rational(p.s), "t": format_rational(p.t), "u": format_rational(p.u),
            "w": format_rational(p.w), "kappa": format_rational(p.kappa)}


def suite_vertex(rng: random.Random, tol: float = NUMERIC_TOL, zeta_order: int = 6) -> list:
    checks = []
    N = 8
    for kappa in (Fraction(1), Fraction(2), Fraction(1, 2), Fraction(-1)):
        for k in range(3):
            p = _draw_vertex_params(rng, kappa)
            closed = fock.zero_mode_trace_closed(p.u, p.w, p.s, p.t, kappa, N)
            proj = fock.v0_expectation(p, N)
            matrix = pochhammer_inf(1, N, 1) * fock.v0_trace(p, N, route="matrix")
            checks.append(exact_check(f"zero_mode_trace[kappa={format_rational(kappa)},{k}]",
                                      series_deviation(proj, closed), **_param_names(p)))
            checks.append(exact_check(f"zero_mode_routes[kappa={format_rational(kappa)},{k}]",
                                      series_deviation(proj, matrix), **_param_names(p)))
    for k in range(3):
        kappa = draw_rational(rng, Fraction(-2), Fraction(2))
        a, b = _draw_vertex_params(rng, kappa), _draw_vertex_params(rng, kappa)
        dev = fock.normal_order_check(a, b, zeta_order=6, degree_cap=5)
        checks.append(exact_check(f"normal_ordering[{k}]", dev, first=_param_names(a), second=_param_names(b)))
    a, b = _draw_vertex_params(rng, 1), _draw_vertex_params(rng, 1)
    closed = fock.vertex_product_closed([a, b], N, zeta_order)
    brute = fock.two_vertex_trace(a, b, N, zeta_order) * pochhammer_inf(1, N, 1)
    checks.append(exact_check("two_vertex_trace", closed.max_deviation(brute), order=N,
                              zeta_order=zeta_order, first=_param_names(a), second=_param_names(b)))
    single = fock.vertex_product_closed([a], N, zeta_order).zeta_layer(0)
    checks.append(exact_check("one_vertex_reduction",
                              series_deviation(single, fock.zero_mode_trace_closed(a.u, a.w, a.s, a.t, 1, N))))
    checks.append(Check("literal_product_vacuum_factor", "info",
                        format_rational(fock.literal_product_vacuum_factor(a)),
                        {"note": "v^0 factor if the i = j products start at v^0; the trace starts at 1"}))
    return checks


MACDONALD_POINTS = [(Fraction(1, 2), Fraction(1, 5)), (Fraction(1, 3), Fraction(2, 7))]


def suite_macdonald(rng: random.Random, tol: float = NUMERIC_TOL) -> list:
    checks = []
    for k, (q, t) in enumerate(MACDONALD_POINTS):
        point = {"q": format_rational(q), "t": format_rational(t)}
        dev = max(mac.verify_vo(d, q, t) for d in range(6))
        checks.append(exact_check(f"zero_mode_realization[{k}]", dev, degrees="0..5",
                                  identification="plethystic", **point))
        literal = max(mac.verify_vo(d, q, t, identification="literal") for d in range(6))
        checks.append(Check(f"zero_mode_literal_identification[{k}]", "info", format_rational(literal), point))
        ortho = Fraction(0)
        triangular = True
        relation = Fraction(0)
        for d in range(1, 6):
            basis = enumerate_partitions(d)
            P = {lam: mac.macdonald_P(lam, q, t) for lam in basis}
            for i, lam in enumerate(basis):
                triangular &= mac.is_m_triangular(P[lam], lam) and P[lam].to_m().coefficient(lam) == 1
                for mu in basis[i + 1:]:
                    ortho = max(ortho, abs(mac.qt_inner(P[lam], P[mu], q, t)))
            hat = mac.bhat_spectral_matrix(d, q, t)
            cell = mac.b_operator_matrix(d, q, t)
            empty = b_hat_stat((), q, t)
            relation = max(relation, max(abs(cell[i][j] - ((empty if i == j else 0) - hat[i][j]))
                                         for i in range(len(basis)) for j in range(len(basis))))
        checks.append(exact_check(f"orthogonality[{k}]", ortho, **point))
        checks.append(exact_check(f"triangularity[{k}]", Fraction(0 if triangular else 1), **point))
        checks.append(exact_check(f"cell_operator_relation[{k}]", relation, **point))
    q = Fraction(2, 5)
    schur = Fraction(0)
    for d in range(5):
        for lam in enumerate_partitions(d):
            diff = mac.macdonald_P(lam, q, q) - mac.schur_jacobi_trudi(lam)
            schur = max(schur, max((abs(c) for c in diff.to_p().terms.values()), default=Fraction(0)))
    checks.append(exact_check("schur_degeneration", schur, q=format_rational(q), degrees="0..4"))
    return checks


SUITE_FUNCTIONS = {
    "partitions": suite_partitions,
    "qseries": suite_qseries,
    "hypergeom": suite_hypergeom,
    "onepoint": suite_onepoint,
    "twopoint": suite_twopoint,
    "vertex": suite_vertex,
    "macdonald": suite_macdonald,
}


def run_suite(name: str, seed: int = DEFAULT_SEED, tol: float = NUMERIC_TOL) -> list:
    """Run one suite with its own RNG, seeded from (seed, name)."""
    if name not in SUITE_FUNCTIONS:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    rng = random.Random(f"{seed}:{name}")
    return SUITE_FUNCTIONS[name](rng, tol)


def worker_count(default: int = 1) -> int:
    raw = os.environ.get("QTCORR_THREADS")
    if not raw:
        return default
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"QTCORR_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ValueError("QTCORR_THREADS must be a positive integer")
    return n


def run_suites(names, seed: int = DEFAULT_SEED, tol: float = NUMERIC_TOL, workers: int | None = None) -> dict:
    """{suite: [Check]} in the order given; suites fan out over processes if workers > 1."""
    names = list(SUITES) if names in ("all", ["all"]) else list(names)
    for name in names:
        if name not in SUITE_FUNCTIONS:
            raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(names) == 1:
        return {name: run_suite(name, seed, tol) for name in names}
    with ProcessPoolExecutor(max_workers=min(workers, len(names))) as pool:
        futures = [pool.submit(run_suite, name, seed, tol) for name in names]
        return {name: f.result() for name, f in zip(names, futures)}
