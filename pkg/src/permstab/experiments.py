"""Seeded experiment drivers: noise injection, synthetic instances, sweeps.

Every run is determined by its config (seed included); identical configs
produce byte-identical CSV.  Instances are built on the triangulated annulus
with an exact holonomy action, twisted sign lifts, and seeded noise, then
repaired and pushed through the covering-distance experiment.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .actions import AlmostAction, action_distance, normalize_sofic_approx
from .cohomology import F2Cochain, coboundary, zero_cochain
from .complexes import (
    RootedTree,
    SimplicialComplex,
    annulus,
    annulus_winding_cocycle,
    edge_gen,
    spanning_tree,
)
from .covers import ExperimentReport, contradiction_experiment, extension_from_cocycle
from .errors import PermstabError
from .fileio import format_fraction
from .perms import ErrPerm, SignedPerm, compose, signed_encode
from .rng import SplitMix64


def _support_perm(space: int, eps: Fraction, rng: SplitMix64) -> ErrPerm:
    """Uniform permutation of a random floor(eps*space)-subset, identity elsewhere."""
    k = int(eps * space)
    mapping = {i: i for i in range(space)}
    if k >= 2:
        support = sorted(rng.sample(range(space), k))
        shuffled = list(support)
        rng.shuffle(shuffled)
        for a, b in zip(support, shuffled):
            mapping[a] = b
    return ErrPerm.from_mapping(mapping, space)


def noise_injector(
    action: AlmostAction, eps, seed: int, skip: tuple[str, ...] = ()
) -> tuple[AlmostAction, dict[str, Fraction]]:
    """Compose every generator image with seeded noise of support rate ``eps``.

    Declared inverse pairs are perturbed coherently so they stay inverse.
    Returns the noised action and the realized per-generator distances, each
    at most ``eps``.
    """
    eps = Fraction(eps)
    if not 0 <= eps <= 1:
        raise PermstabError("noise rate out of range")
    rng = SplitMix64(seed)
    partner = {a: b for a, b in action.presentation.inverse_pairs}
    partner.update({b: a for a, b in action.presentation.inverse_pairs})
    images = dict(action.images)
    realized: dict[str, Fraction] = {}
    done: set[str] = set()
    for g in action.generators:
        if g in done or g in skip:
            continue
        noise = _support_perm(action.space, eps, rng.spawn(g))
        noised = compose(noise, action.image(g))
        images[g] = noised
        done.add(g)
        if g in partner and partner[g] not in skip:
            images[partner[g]] = noised.inverse()
            done.add(partner[g])
    out = AlmostAction(action.presentation, action.space, images)
    for g in action.generators:
        from .perms import hamming

        realized[g] = hamming(out.image(g), action.image(g))
    return out, realized


def signed_noise_injector(
    action: AlmostAction, eps, seed: int, tau: str = "tau"
) -> tuple[AlmostAction, dict[str, Fraction]]:
    """Noise that commutes with the sign flip, leaving ``tau`` untouched.

    The support is a floor(eps*n)-subset of the unsigned points; a uniform
    permutation acts on it and every supported point may flip sign.
    """
    eps = Fraction(eps)
    if action.space % 2:
        raise PermstabError("need an action on a signed double")
    n = action.space // 2
    rng = SplitMix64(seed)
    partner = {a: b for a, b in action.presentation.inverse_pairs}
    partner.update({b: a for a, b in action.presentation.inverse_pairs})
    images = dict(action.images)
    done = {tau}
    for g in action.generators:
        if g in done:
            continue
        sub = rng.spawn(g)
        k = int(eps * n)
        base = {i: i for i in range(n)}
        signs = {i: 0 for i in range(n)}
        if k >= 1:
            support = sorted(sub.sample(range(n), k))
            shuffled = list(support)
            sub.shuffle(shuffled)
            for a, b in zip(support, shuffled):
                base[a] = b
                signs[a] = sub.below(2)
        table = {}
        for i in range(n):
            for s in (0, 1):
                table[2 * i + s] = 2 * base[i] + (s ^ signs[i])
        noise = ErrPerm.from_mapping(table, 2 * n)
        noised = compose(noise, action.image(g))
        images[g] = noised
        done.add(g)
        if g in partner:
            images[partner[g]] = noised.inverse()
            done.add(partner[g])
    out = AlmostAction(action.presentation, action.space, images)
    from .perms import hamming

    realized = {g: hamming(out.image(g), action.image(g)) for g in action.generators}
    return out, realized


def tree_adjusted_cocycle(
    x: SimplicialComplex, tree: RootedTree, values: dict
) -> dict:
    """Shift an integer edge cocycle by a potential so it vanishes on the tree."""
    potential: dict[int, int] = {}

    def value_on(a: int, b: int) -> int:
        return values[(a, b)] if (a, b) in values else -values[(b, a)]

    for v in tree.parent:
        path = tree.path_to_root(v)
        total = 0
        for b, a in zip(path, path[1:]):
            total += value_on(a, b)
        potential[v] = total
    out = {}
    for (a, b) in x.cells(1):
        out[(a, b)] = value_on(a, b) - (potential[b] - potential[a])
    return out


def integer_cocycle_basis(x: SimplicialComplex, tree: RootedTree) -> list[dict]:
    """Integer edge cocycles vanishing on the tree (winding homomorphisms).

    Unknowns are the non-tree edge values; every triangle contributes one
    linear relation.  The rational kernel is computed by elimination and
    scaled to integers.  An empty list means only the trivial holonomy.
    """
    free = [e for e in x.cells(1) if e not in tree.tree_edges]
    col = {e: i for i, e in enumerate(free)}
    rows = []
    for (a, b, c) in x.cells(2):
        coeffs = [Fraction(0)] * len(free)
        for (u, v), s in (((a, b), 1), ((b, c), 1), ((a, c), -1)):
            if (u, v) in col:
                coeffs[col[(u, v)]] += s
        rows.append(coeffs)
    # rational row reduction
    pivots = []
    for row in rows:
        row = list(row)
        for prow, pcol in pivots:
            if row[pcol]:
                factor = row[pcol]
                row = [r - factor * p for r, p in zip(row, prow)]
        lead = next((j for j, v in enumerate(row) if v), None)
        if lead is not None:
            inv = row[lead]
            pivots.append(([v / inv for v in row], lead))
    pivot_cols = {pcol for _, pcol in pivots}
    basis = []
    for j in range(len(free)):
        if j in pivot_cols:
            continue
        vec = [Fraction(0)] * len(free)
        vec[j] = Fraction(1)
        for prow, pcol in reversed(pivots):
            vec[pcol] = -sum(prow[i] * vec[i] for i in range(len(free)) if i != pcol)
        denom = 1
        for v in vec:
            denom = denom * v.denominator // _gcd(denom, v.denominator)
        entry = {e: 0 for e in x.cells(1)}
        for e, i in col.items():
            entry[e] = int(vec[i] * denom)
        basis.append(entry)
    return basis


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def exact_action_from_int_cocycle(
    x: SimplicialComplex,
    tree: RootedTree,
    cocycle: dict,
    sigma: ErrPerm,
) -> AlmostAction:
    """Action sending each oriented edge to a power of one permutation.

    The exponent is an integer edge cocycle adjusted to vanish on the tree,
    so every relation of the edge presentation holds exactly.
    """
    from .actions import defect
    from .complexes import fundamental_group_presentation
    from .perms import power

    pres = fundamental_group_presentation(x, tree)
    adjusted = tree_adjusted_cocycle(x, tree, cocycle)
    images = {}
    for (a, b), c in adjusted.items():
        images[edge_gen(a, b)] = power(sigma, c)
        images[edge_gen(b, a)] = power(sigma, -c)
    action = AlmostAction(pres, sigma.size, images)
    if defect(action) != 0:
        raise PermstabError("the integer cochain is not a cocycle")
    return action


def sign_twisted_lift(
    f: AlmostAction, edge_signs: F2Cochain, n: int, tau: str = "tau"
) -> AlmostAction:
    """Exact lift of an action to the signed double of its first ``n`` points.

    The oriented edge xy acts on the double of range(n) as f(xy) with an
    overall sign twist given by the edge cochain; tau acts as the sign flip.
    The images of f must preserve range(n).  The lift is an exact action of
    the extension presentation twisted by the coboundary of ``edge_signs``.
    """
    x = edge_signs.complex
    tree_root = min(x.vertices)
    tree = spanning_tree(x, tree_root)
    phi = coboundary(edge_signs) if x.dim >= 2 else None
    if phi is None:
        raise PermstabError("need a complex with triangles")
    pres = extension_from_cocycle(x, tree, phi, tau)
    images = {tau: SignedPerm.sign_flip(n).to_err_perm()}
    for (a, b) in x.cells(1):
        bit = edge_signs((a, b))
        for (u, v) in ((a, b), (b, a)):
            perm = f.image(edge_gen(u, v))
            table = {}
            for star in range(n):
                target = perm.apply(star)
                if not 0 <= target < n:
                    raise PermstabError("the action does not preserve the lifted points")
                for s in (0, 1):
                    table[signed_encode(1 - 2 * s, star)] = 2 * target + (s ^ bit)
            images[edge_gen(u, v)] = ErrPerm.from_mapping(table, 2 * n)
    return AlmostAction(pres, 2 * n, images)


@dataclass(frozen=True)
class ExperimentConfig:
    """One pipeline run; equal configs give byte-identical reports."""

    seed: int
    epsilon: Fraction
    fiber: int = 6
    extra: int = 0
    cocycle_mode: str = "coboundary"  # "coboundary" or "zero"

    def __post_init__(self):
        if self.cocycle_mode not in ("coboundary", "zero"):
            raise PermstabError("cocycle_mode must be 'coboundary' or 'zero'")
        if self.fiber < 2:
            raise PermstabError("fiber must have at least 2 points")


def build_instance(config: ExperimentConfig):
    """Annulus instance: exact holonomy action, cocycle, and a noisy raw lift."""
    x = annulus()
    tree = spanning_tree(x, 0)
    rng = SplitMix64(config.seed)
    n, m = config.fiber, config.fiber + config.extra
    cycle_n = list(range(n))
    rng.spawn("rotate").shuffle(cycle_n)
    sigma_map = {cycle_n[i]: cycle_n[(i + 1) % n] for i in range(n)}
    if m > n:  # extra fiber points cycle among themselves so range(n) stays invariant
        tail = list(range(n, m))
        for i, j in enumerate(tail):
            sigma_map[j] = tail[(i + 1) % len(tail)]
    sigma = ErrPerm.from_mapping(sigma_map, m)
    f = exact_action_from_int_cocycle(x, tree, annulus_winding_cocycle(), sigma)

    if config.cocycle_mode == "zero":
        signs = zero_cochain(x, 1)
    else:
        # sign twists must vanish on the tree: the extension presentation keeps
        # tree-edge lifts as exact identity relations
        sign_rng = rng.spawn("signs")
        bits = 0
        for pos, cell in enumerate(x.cells(1)):
            if cell not in tree.tree_edges and sign_rng.below(2):
                bits |= 1 << pos
        signs = F2Cochain(x, 1, bits)
    phi = coboundary(signs)
    lift = sign_twisted_lift(f, signs, n)
    raw, _ = noise_injector(lift, config.epsilon, config.seed ^ 0xA5A5, skip=("tau",))
    return x, phi, raw, f


@dataclass
class RunRow:
    config: ExperimentConfig
    eps: Fraction
    rho: Fraction
    event1: Fraction
    event2: Fraction
    dw: Fraction
    bound: Fraction
    component: int
    holds: bool


def run_pipeline(config: ExperimentConfig) -> tuple[RunRow, ExperimentReport]:
    """normalize -> quotient -> cover -> sign cochain -> distances."""
    x, phi, raw, f = build_instance(config)
    psi, _stage = normalize_sofic_approx(raw)
    report = contradiction_experiment(x, phi, psi, f)
    row = RunRow(
        config=config,
        eps=report.eps,
        rho=report.rho,
        event1=report.event1,
        event2=report.event2,
        dw=report.dw_best,
        bound=report.bound,
        component=report.best_component,
        holds=report.holds,
    )
    return row, report


CSV_COLUMNS = [
    "epsilon_nominal",
    "seed",
    "epsilon",
    "epsilon_dec",
    "rho",
    "rho_dec",
    "event1",
    "event1_dec",
    "event2",
    "event2_dec",
    "dw",
    "dw_dec",
    "bound",
    "bound_dec",
    "component",
    "holds",
]


def _dec(q: Fraction) -> str:
    return format(float(q), ".12g")


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(
            [
                format_fraction(row.config.epsilon),
                row.config.seed,
                format_fraction(row.eps),
                _dec(row.eps),
                format_fraction(row.rho),
                _dec(row.rho),
                format_fraction(row.event1),
                _dec(row.event1),
                format_fraction(row.event2),
                _dec(row.event2),
                format_fraction(row.dw),
                _dec(row.dw),
                format_fraction(row.bound),
                _dec(row.bound),
                row.component,
                "true" if row.holds else "false",
            ]
        )
    return buf.getvalue()


def sweep(
    epsilons,
    seeds,
    fiber: int = 6,
    extra: int = 0,
    cocycle_mode: str = "coboundary",
    threads: int = 1,
) -> list[RunRow]:
    """One pipeline run per (epsilon, seed), rows ordered by epsilon then seed."""
    configs = [
        ExperimentConfig(seed=s, epsilon=Fraction(e), fiber=fiber, extra=extra, cocycle_mode=cocycle_mode)
        for e in epsilons
        for s in seeds
    ]
    configs.sort(key=lambda c: (c.epsilon, c.seed))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = [row for row, _ in pool.map(run_pipeline, configs)]
    else:
        rows = [run_pipeline(c)[0] for c in configs]
    return rows
