"""
q-TASEP: particles x_1 > x_2 > ... > x_l on Z, particle i jumping right at
rate a_i (1 - q^{x_{i-1} - x_i - 1}) (particle 1 at rate a_1).

Started from the step condition x_i = 1 - i, the positions X_i(n) = lam^i_i - i + 1
read off the q-insertion tableau chain form the discrete-time version, and
Poissonising time gives the continuous-time process.  The law of the last
particle at time t is a Poisson mixture of the shape law nu after k insertions:

    P(X_l(t) = m - l + 1) = sum_k e^{-t} t^k / k! * sum_{lam |- k, lam_l = m} nu(lam).

Each inner sum is at most one (nu is a probability vector for every k), so
cutting the outer sum at k <= N costs at most the Poisson tail P(Pois(t) > N).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from ._parallel import default_threads, run_blocks
from .insertion import STANDARD, seeded_rng
from .qarith import WeightMode
from .shapes import enumerate_partitions
from .tableaux import Tableau
from .whittaker.core import WhittakerContext, nu
from .whittaker.kernels import M_row
from .whittaker.verify import Report, kernel_mutation

__all__ = [
    "ParticleConfig",
    "rates",
    "simulate_ct",
    "last_particle_sample",
    "mc_last_particle",
    "discrete_projection",
    "projection",
    "pi_chain_law",
    "tableau_chain_law",
    "verify_coupling",
    "poisson_cutoff",
    "last_particle_law",
    "last_particle_table",
    "compare_mc_vs_formula",
    "TasepComparison",
    "exact_context",
    "default_threads",
]


class ParticleConfig(tuple):
    """Strictly decreasing integer positions x_1 > ... > x_l."""

    __slots__ = ()

    def __new__(cls, positions: Sequence[int]):
        if isinstance(positions, ParticleConfig):
            return positions
        x = tuple(int(p) for p in positions)
        if any(x[i] <= x[i + 1] for i in range(len(x) - 1)):
            raise ValueError(f"positions {x} are not strictly decreasing")
        return super().__new__(cls, x)

    @classmethod
    def step(cls, l: int) -> "ParticleConfig":
        return cls(tuple(1 - i for i in range(1, l + 1)))

    def jump(self, i: int) -> "ParticleConfig":
        """Move particle i (1-indexed) one site to the right."""
        x = list(self)
        x[i - 1] += 1
        return ParticleConfig(x)

    def __repr__(self):
        return f"ParticleConfig({list(self)})"


def rates(x: Sequence[int], a: Sequence, q) -> list:
    """Jump rates; exact when a and q are Fractions."""
    out = [a[0]]
    for i in range(1, len(x)):
        gap = x[i - 1] - x[i] - 1
        out.append(a[i] * (1 - q ** gap))
    return out


# -- continuous time ----------------------------------------------------------------------

def simulate_ct(a: Sequence[float], q: float, t: float, rng, x0: Optional[Sequence[int]] = None) -> list:
    """
    One Gillespie trajectory up to time t: a list of (time, ParticleConfig),
    starting with (0, x0) and followed by one entry per jump.
    """
    a = [float(v) for v in a]
    q = float(q)
    if not 0 <= q < 1:
        raise ValueError("simulation needs 0 <= q < 1")
    x = ParticleConfig(x0) if x0 is not None else ParticleConfig.step(len(a))
    now = 0.0
    traj = [(now, x)]
    while True:
        r = rates(x, a, q)
        total = sum(r)
        if total <= 0:
            break
        now += rng.exponential(1.0 / total)
        if now > t:
            break
        u = rng.random() * total
        i = 0
        acc = r[0]
        while u >= acc and i < len(r) - 1:
            i += 1
            acc += r[i]
        while r[i] == 0:
            i -= 1
        x = x.jump(i + 1)
        traj.append((now, x))
    return traj


def last_particle_sample(a, q, t, seed: int, run: int) -> int:
    """m = X_l(t) + l - 1 for run ``run`` under ``seed``."""
    x = simulate_ct(a, q, t, seeded_rng(seed, run))[-1][1]
    return x[-1] + len(a) - 1


def _mc_block(args, start, stop):
    a, q, t, seed = args
    return Counter(last_particle_sample(a, q, t, seed, r) for r in range(start, stop))


def mc_last_particle(a, q, t, runs: int, seed: int, threads: int = 1) -> Counter:
    """Histogram of m over ``runs`` independent runs; identical for any thread count."""
    a = tuple(float(v) for v in a)
    return run_blocks(_mc_block, (a, float(q), float(t), seed), runs, threads)


# -- discrete time and the coupling --------------------------------------------------------

def projection(P: Tableau) -> ParticleConfig:
    return ParticleConfig(tuple(P.lam(i, i) - i + 1 for i in range(1, P.l + 1)))


def discrete_projection(chain: Sequence[Tableau]) -> list:
    """X_i(n) = lam^i_i(n) - i + 1 along a tableau chain."""
    return [projection(P) for P in chain]


def _merge(acc, key, w):
    prev = acc.get(key)
    acc[key] = w if prev is None else prev + w


def pi_chain_law(ctx: WhittakerContext, n: int) -> list:
    """
    Laws of the discrete-time particle chain after 0..n steps, from the step
    condition: x -> x + e_i with probability r_i, stay with 1 - sum r_i.
    """
    ctx.require_probability()
    mode, l = ctx.mode, ctx.l
    law = {ParticleConfig.step(l): mode.one}
    out = [law]
    for _ in range(n):
        new = {}
        for x, w in law.items():
            stay = mode.one
            for i in range(1, l + 1):
                r = ctx.apow(i, 1)
                if i > 1:
                    r = r * mode.one_minus_qpow(x[i - 2] - x[i - 1] - 1)
                if r.is_zero():
                    continue
                stay = stay - r
                _merge(new, x.jump(i), w * r)
            if not stay.is_zero():
                _merge(new, x, w * stay)
        law = new
        out.append(law)
    return out


def tableau_chain_law(ctx: WhittakerContext, n: int, variant: str = STANDARD) -> list:
    """Exact laws of the tableau chain M after 0..n steps, from the empty tableau."""
    ctx.require_probability()
    law = {Tableau.empty(ctx.l): ctx.mode.one}
    out = [law]
    for _ in range(n):
        new = {}
        for P, w in law.items():
            for Pt, m in M_row(P, ctx, variant).items():
                _merge(new, Pt, w * m)
        law = new
        out.append(law)
    return out


def verify_coupling(ctx: WhittakerContext, n_max: int, negative_control: bool = False) -> Report:
    """Push the tableau chain law through the projection and compare with the particle chain."""
    mode = ctx.mode
    variant = kernel_mutation(ctx.l) if negative_control else STANDARD
    tab = tableau_chain_law(ctx, n_max, variant)
    pi = pi_chain_law(ctx, n_max)
    checked = failures = 0
    first = None
    for n in range(n_max + 1):
        pushed = {}
        for P, w in tab[n].items():
            _merge(pushed, projection(P), w)
        for x in sorted(set(pushed) | set(pi[n]), reverse=True):
            lhs, rhs = pushed.get(x, mode.zero), pi[n].get(x, mode.zero)
            checked += 1
            if lhs != rhs:
                failures += 1
                if first is None:
                    first = {"n": n, "x": list(x), "projected": lhs.to_json(), "particle_chain": rhs.to_json()}
    params = {"l": ctx.l, "a": [str(v) for v in ctx.a], "n_max": n_max, "kernel": variant}
    return Report("coupling of tableau chain and particle chain", failures == 0, checked, failures,
                  first, params)


# -- last-particle law ---------------------------------------------------------------------

def _poisson_pmf(k: int, t: float) -> float:
    if t == 0:
        return 1.0 if k == 0 else 0.0
    return math.exp(-t + k * math.log(t) - math.lgamma(k + 1))


def _poisson_tail(N: int, t: float) -> float:
    """P(Pois(t) > N), summed directly to avoid cancellation."""
    if t == 0:
        return 0.0
    tail = 0.0
    k = N + 1
    term = _poisson_pmf(k, t)
    while True:
        tail += term
        k += 1
        term *= t / k
        if k > t and term <= 1e-17 * tail:
            break
    return tail


def poisson_cutoff(t: float, eps: float) -> int:
    """Smallest N with P(Pois(t) > N) <= eps."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    N = 0
    while _poisson_tail(N, t) > eps:
        N += 1
    return N


def _shape_mass_by_last_part(ctx: WhittakerContext, k: int) -> dict:
    out = {}
    for lam in enumerate_partitions(k, ctx.l):
        m = lam.part(ctx.l)
        _merge(out, m, nu(lam, ctx))
    return out


def _as_float(w) -> float:
    return float(w)


def last_particle_table(ctx: WhittakerContext, t: float, eps: float = 1e-8, N: Optional[int] = None) -> dict:
    """
    {m: P(X_l(t) = m - l + 1)} from the series cut at |lam| <= N (default:
    the Poisson cutoff for eps).  Every entry is within eps of the full sum.
    """
    ctx.require_probability()
    if t < 0:
        raise ValueError("t must be nonnegative")
    if N is None:
        N = poisson_cutoff(t, eps)
    table = {}
    for k in range(N + 1):
        w = _poisson_pmf(k, t)
        if w == 0.0:
            continue
        for m, mass in _shape_mass_by_last_part(ctx, k).items():
            table[m] = table.get(m, 0.0) + w * _as_float(mass)
    return dict(sorted(table.items()))


def last_particle_law(m: int, t: float, ctx: WhittakerContext, eps: float = 1e-8) -> tuple:
    """(P(X_l(t) = m - l + 1), eps)."""
    return last_particle_table(ctx, t, eps).get(m, 0.0), eps


@dataclass
class TasepComparison:
    rows: list = field(default_factory=list)  # (m, formula, empirical, stderr, judged, ok)
    runs: int = 0
    threshold: float = 0.0

    @property
    def passed(self) -> bool:
        return all(ok for *_, judged, ok in self.rows if judged)

    def to_csv(self) -> str:
        lines = ["m,formula,empirical,stderr,pass"]
        for m, p, e, s, judged, ok in self.rows:
            verdict = ("pass" if ok else "fail") if judged else "skip"
            lines.append(f"{m},{p:.12g},{e:.12g},{s:.6g},{verdict}")
        return "\n".join(lines) + "\n"


def compare_mc_vs_formula(ctx: WhittakerContext, t: float, runs: int, seed: int = 0,
                          eps: float = 1e-8, threshold: Optional[float] = None,
                          threads: int = 1) -> TasepComparison:
    """
    Monte Carlo histogram of the last particle against the series.  Every m
    whose formula mass exceeds ``threshold`` (default 10 eps) must satisfy
    |empirical - formula| <= 4 sqrt(p (1 - p) / runs).
    """
    if ctx.mode.kind == "symbolic":
        raise ValueError("the series needs a numeric q")
    table = last_particle_table(ctx, t, eps)
    q = ctx.mode.q
    counts = mc_last_particle(ctx.a, q, t, runs, seed, threads)
    if threshold is None:
        threshold = 10 * eps
    rows = []
    for m in sorted(set(table) | set(counts)):
        p = table.get(m, 0.0)
        emp = counts.get(m, 0) / runs
        se = math.sqrt(max(p * (1 - p), 0.0) / runs)
        judged = p > threshold
        rows.append((m, p, emp, se, judged, abs(emp - p) <= 4 * se))
    return TasepComparison(rows, runs, threshold)


def exact_context(a: Sequence, q) -> WhittakerContext:
    """Context in exact arithmetic for rational q, float arithmetic otherwise."""
    if isinstance(q, float):
        return WhittakerContext(a, WeightMode.floating(q))
    return WhittakerContext([Fraction(v) for v in a], WeightMode.exact(Fraction(q)))
