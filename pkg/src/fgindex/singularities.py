"""Discovery of singular orbit classes by sweeping substitution powers.

A singularity is recorded as a label (w, k), meaning the twisted map
u -> w^-1 phi^k(u) w fixes a power of every point in the class, together
with the symbolic points themselves.  Classes found at different powers or
from different matches are merged whenever their labels generate a common
power.
"""

from __future__ import annotations

import dataclasses
import math

from .config import resolved_max_k
from .errors import (
    BudgetExceeded,
    CapExceeded,
    InvariantViolation,
)
from .gamma import all_matches
from .prefix_suffix import (
    complete_for_anchor,
    loops,
    periodic_point,
    point_fixed_by,
    two_factors,
)
from .words import EPSILON, Purity, invert, purity, word_sort_key


@dataclasses.dataclass(frozen=True)
class Label:
    w: tuple
    k: int

    def sort_key(self):
        return (self.k, len(self.w), word_sort_key(self.w))

    def render(self, alphabet):
        return f"({alphabet.format_word(self.w)}, {self.k})"


class Singularity:
    """A labeled set of symbolic points, keyed by canonical point identity."""

    def __init__(self, label, points):
        self.label = label
        self.points = {}
        for p in points:
            self.points.setdefault(p.key(), p)
        self.ident = None
        self._fixing_power = None

    def point_list(self):
        return sorted(self.points.values(), key=lambda p: p.sort_key())

    def __repr__(self):
        return f"Singularity(label=({self.label.w}, {self.label.k}), n={len(self.points)})"


def label_power_compatible(phi, la, lb, budget=None):
    """Whether the two labeled maps share a common power."""
    if la.w == EPSILON or lb.w == EPSILON:
        # Iterating a blank conjugator stays blank; a nonblank one never
        # empties out, so mixed pairs are settled without any expansion.
        return la.w == lb.w
    lk = math.lcm(la.k, lb.k)
    ha, hb = lk // la.k, lk // lb.k
    len_a = sum(phi.word_image_length(la.w, i * la.k) for i in range(ha))
    len_b = sum(phi.word_image_length(lb.w, i * lb.k) for i in range(hb))
    if len_a != len_b:
        return False
    wa = phi.conjugator_power(la.w, la.k, ha, budget)
    wb = phi.conjugator_power(lb.w, lb.k, hb, budget)
    return wa == wb


def singularity_from_match(phi, k, side, tx, ty, m, budget=None):
    """Points forced into a common class by a minimal affix match."""
    return _from_match_groups(phi, k, side, [tx], [ty], m, budget)


def _from_match_groups(phi, k, side, group_x, group_y, m, budget=None):
    i, j, w = m
    if side == "minus":
        dx, dy = -i, -j
    else:
        dx, dy = i + 1, j + 1
    pts = []
    for t in group_x:
        pts.extend(complete_for_anchor(phi, t, dx, budget))
    for t in group_y:
        pts.extend(complete_for_anchor(phi, t, dy, budget))
    return Singularity(Label(w, k), pts)


def merge(phi, registry, sing, budget=None):
    """Fold a new class into the registry, chaining merges to a fixpoint."""
    pool = [sing]
    while pool:
        cur = pool.pop()
        target = None
        for existing in registry:
            if not cur.points.keys().isdisjoint(existing.points.keys()):
                target = existing
                break
            if label_power_compatible(phi, cur.label, existing.label, budget):
                target = existing
                break
        if target is None:
            registry.append(cur)
            continue
        registry.remove(target)
        label = min(cur.label, target.label, key=lambda l: l.sort_key())
        joined = Singularity(label, [])
        joined.points.update(target.points)
        joined.points.update(cur.points)
        pool.append(joined)
    return registry


def fixing_power(phi, sing, cap=512, budget=None):
    """Least h with every point fixed by the h-th power of the labeled map."""
    if sing._fixing_power is not None:
        return sing._fixing_power
    w, k = sing.label.w, sing.label.k
    total = 1
    for p in sing.point_list():
        if p.kind() == "per":
            c, b, n = p.per_data()
            big = math.lcm(
                phi.cycle_letters("last")[c], phi.cycle_letters("first")[b]
            )
            h1 = big // math.gcd(big, k)
            if w == EPSILON and n != 0:
                raise InvariantViolation(
                    "shifted periodic point under an untwisted label"
                )
            candidates = (h1 * t for t in range(1, cap + 1))
        else:
            candidates = range(1, cap + 1)
        for h in candidates:
            if point_fixed_by(phi, p, w, k, h, budget):
                total = math.lcm(total, h)
                break
        else:
            raise CapExceeded(f"no fixing power below cap for {p!r}")
    sing._fixing_power = total
    return total


def h_classes(phi, sing):
    """Count of ray germs at the class: distinct first letters per side."""
    left = set()
    right = set()
    for p in sing.points.values():
        u0, v0 = p.first_letters()
        left.add(u0)
        right.add(v0)
    return len(left) + len(right)


def approx_classes(phi, sing):
    """Points up to agreement of both first letters."""
    return len({p.first_letters() for p in sing.points.values()})


def untwisted_half_count(phi, sing):
    """Distinct half rays at an untwisted (w = 1) class.

    All points sit at shift zero of a two-sided periodic point, so halves
    are pinned by their seed letters alone.
    """
    left = set()
    right = set()
    for p in sing.points.values():
        if p.kind() != "per":
            raise InvariantViolation("untwisted class holds a generic point")
        c, b, n = p.per_data()
        if n != 0:
            raise InvariantViolation("untwisted class holds a shifted point")
        left.add(c)
        right.add(b)
    return len(left) + len(right)


def _is_genuine(phi, sing):
    if len(sing.points) < 2:
        return False
    firsts = {p.first_letters() for p in sing.points.values()}
    return len(firsts) > 1


@dataclasses.dataclass
class SweepResult:
    singularities: list
    complete: bool
    k_target: int
    k_reached: int
    full_levels: list
    partial_levels: list
    early_exited: bool
    max_rho_power: int
    budget_used: int
    dropped: int


def _inverse_length_bounds(phi, k):
    """Upper bounds on reduced inverse image lengths, by unreduced counts."""
    cur = [len(w) for w in phi.inverse_images]
    for _ in range(k - 1):
        cur = [
            sum(cur[abs(x) - 1] for x in phi.inverse_images[c])
            for c in range(phi.rank)
        ]
    return cur


def _level_estimate(phi, k):
    lens = phi.image_lengths(k)
    mat = sum(lens)
    occ = phi.occurrence_matrix(k)
    inv_bounds = _inverse_length_bounds(phi, k)
    gb = sum(
        sum(occ[c][a] for a in range(phi.rank)) * inv_bounds[c]
        for c in range(phi.rank)
    )
    n_loops = sum(occ[a][a] for a in range(phi.rank))
    stream = n_loops * 2 * (max(inv_bounds) + 2) * max(lens)
    return mat + gb + stream


def _eps_level(phi, k, registry, budget):
    """Match only the blank-sided loops: pure cycle arithmetic, no images."""
    heads = phi.cycle_letters("first")
    tails = phi.cycle_letters("last")
    admissible = two_factors(phi)
    starters = sorted(b for b, l in heads.items() if k % l == 0)
    if len(starters) >= 2:
        pts = [
            periodic_point(phi, c, b)
            for b in starters
            for c in sorted(tails)
            if (c, b) in admissible
        ]
        merge(phi, registry, Singularity(Label(EPSILON, k), pts), budget)
    enders = sorted(c for c, l in tails.items() if k % l == 0)
    if len(enders) >= 2:
        pts = [
            periodic_point(phi, c, b)
            for c in enders
            for b in sorted(heads)
            if (c, b) in admissible
        ]
        merge(phi, registry, Singularity(Label(EPSILON, k), pts), budget)


def _full_level(phi, k, registry, budget):
    level_loops = loops(phi, k, budget)
    occ = phi.occurrence_matrix(k)
    if len(level_loops) != sum(occ[a][a] for a in range(phi.rank)):
        raise InvariantViolation("loop census disagrees with the occurrence matrix")
    for side in ("minus", "plus"):
        groups = {}
        for t in level_loops:
            affix = t.p if side == "minus" else t.s
            groups.setdefault(affix, []).append(t)
        eps_group = groups.pop(EPSILON, [])
        if len(eps_group) >= 2:
            m = (0, 0, EPSILON)
            sing = _from_match_groups(
                phi, k, side, eps_group[:1], eps_group[1:], m, budget
            )
            merge(phi, registry, sing, budget)
        for affix, grp in sorted(groups.items()):
            if len(grp) >= 2:
                w = affix if side == "minus" else invert(affix)
                sing = _from_match_groups(
                    phi, k, side, grp[:1], grp[1:], (0, 0, w), budget
                )
                merge(phi, registry, sing, budget)
        affixes = sorted(groups)
        found = all_matches(phi, k, side, affixes, budget)
        for (xi, yi), m in sorted(found.items()):
            sing = _from_match_groups(
                phi, k, side, groups[affixes[xi]], groups[affixes[yi]], m, budget
            )
            merge(phi, registry, sing, budget)


def _doubled_index_now(phi, registry):
    from . import sgraph

    valid = [s for s in registry if _is_genuine(phi, s)]
    if not valid:
        return 0
    snapshot = []
    for s in valid:
        copy = Singularity(s.label, [])
        copy.points.update(s.points)
        snapshot.append(copy)
    for ident, s in enumerate(_sorted_registry(snapshot)):
        s.ident = ident
    graph = sgraph.build_graph(phi, snapshot)
    return sgraph.fo_index(phi, snapshot, graph)


def _sorted_registry(registry):
    return sorted(registry, key=lambda s: s.label.sort_key())


def find_all(phi, config):
    """Sweep substitution powers, collecting and merging all singular classes.

    Levels whose projected cost exceeds the per-level budget slice are
    restricted to blank-sided matches; any such restriction, or running out
    of budget entirely, is reported through the completeness flag.
    """
    budget = config.make_budget()
    k_target = resolved_max_k(config, phi.rank)
    cap = config.level_cap()
    registry = []
    full_levels = []
    partial_levels = []
    early_exited = False
    k_reached = 0
    for k in range(1, k_target + 1):
        estimate = _level_estimate(phi, k)
        if estimate > min(cap, budget.remaining):
            _eps_level(phi, k, registry, None)
            partial_levels.append(k)
            k_reached = k
        else:
            try:
                _full_level(phi, k, registry, budget)
                full_levels.append(k)
                k_reached = k
            except BudgetExceeded:
                _eps_level(phi, k, registry, None)
                partial_levels.append(k)
                k_reached = k
        if config.early_exit:
            doubled = _doubled_index_now(phi, registry)
            if doubled >= 2 * (phi.rank - 1):
                early_exited = True
                break
    final = [s for s in _sorted_registry(registry) if _is_genuine(phi, s)]
    dropped = len(registry) - len(final)
    _check_disjoint(final)
    _check_labels(phi, final)
    max_rho = 0
    for s in final:
        for p in s.points.values():
            r = p.rho_power()
            if r > 4 * phi.rank - 4:
                raise InvariantViolation("development period exceeded its bound")
            max_rho = max(max_rho, r)
    for ident, s in enumerate(final):
        s.ident = ident
    complete = not partial_levels
    if not complete and _doubled_index_now(phi, registry) >= 2 * (phi.rank - 1):
        # The doubled index is capped by 2(N-1), and adding points or classes
        # to a maximal collection can only violate that cap, so a sweep that
        # attains it has nothing left to find.
        complete = True
    return SweepResult(
        singularities=final,
        complete=complete,
        k_target=k_target,
        k_reached=k_reached,
        full_levels=full_levels,
        partial_levels=partial_levels,
        early_exited=early_exited,
        max_rho_power=max_rho,
        budget_used=config.budget - budget.remaining,
        dropped=dropped,
    )


def _check_disjoint(final):
    seen = {}
    for s in final:
        for key in s.points:
            if key in seen:
                raise InvariantViolation("distinct classes share a point")
            seen[key] = s


def _check_labels(phi, final):
    untwisted = [s for s in final if s.label.w == EPSILON]
    if len(untwisted) > 1:
        raise InvariantViolation("multiple untwisted classes survived merging")
    for s in final:
        if s.label.w == EPSILON:
            continue
        kind = purity(s.label.w)
        firsts = [p.first_letters() for p in s.point_list()]
        if kind is Purity.PURE_POSITIVE:
            if len({u for u, _ in firsts}) != 1:
                raise InvariantViolation("positive-label class lacks a shared left germ")
        elif kind is Purity.PURE_NEGATIVE:
            if len({v for _, v in firsts}) != 1:
                raise InvariantViolation("negative-label class lacks a shared right germ")
        else:
            raise InvariantViolation("label word is neither blank nor pure")
