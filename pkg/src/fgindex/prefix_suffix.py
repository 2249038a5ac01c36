"""Prefix-suffix machinery for the attracting subshift of a positive automorphism.

A development is a sequence of triplets (p_i, a_i, s_i) with
phi(a_{i+1}) = p_i * a_i * s_i; it records the desubstitution history of a
marked bi-infinite word.  Points of the subshift are represented symbolically,
either by an eventually periodic development (generic case, where the
development determines the point) or by periodic-ray seed letters when one
side of the development is blank.
"""

from __future__ import annotations

import dataclasses
import math

from .errors import InvariantViolation, UndefinedShift
from .words import EPSILON, Word, concat, invert


@dataclasses.dataclass(frozen=True)
class Triplet:
    """One decomposition phi^level(parent) = p * a * s around the letter a."""

    p: Word
    a: int
    s: Word
    level: int
    parent: int

    def body(self):
        return (self.p, self.a, self.s)

    def render(self, alphabet):
        parts = []
        for w in (self.p, (self.a,), self.s):
            parts.append(alphabet.format_word(tuple(w)) if w else "e")
        return f"({parts[0]}, {parts[1]}, {parts[2]})"


def loops(phi, k, budget=None):
    """All triplets (p, a, s) with phi^k(a) = p*a*s, one per occurrence of a.

    Returned sorted for deterministic downstream iteration.
    """
    out = []
    for a in phi.alphabet.letters():
        image = phi.letter_image(a, k, budget)
        for pos, x in enumerate(image):
            if x == a:
                out.append(
                    Triplet(image[:pos], a, image[pos + 1:], k, a)
                )
    out.sort(key=lambda t: (t.a, t.p, t.s))
    return tuple(out)


def two_factors(phi):
    """Length-2 factors of the subshift language, as ordered letter pairs.

    Closure of "factors of images of current factors", seeded with the
    interior factors of every generator image.  The iteration count is capped
    as a safety net; the set stabilizes far sooner.
    """
    if phi.two_factor_cache is not None:
        return phi.two_factor_cache
    factors = set()
    for a in phi.alphabet.letters():
        img = phi.images[a - 1]
        factors.update(zip(img, img[1:]))
    cap = phi.rank * phi.rank + 2
    for _ in range(cap):
        new = set(factors)
        for (x, y) in factors:
            joined = phi.images[x - 1] + phi.images[y - 1]
            new.update(zip(joined, joined[1:]))
        if new == factors:
            break
        factors = new
    phi.two_factor_cache = frozenset(factors)
    return phi.two_factor_cache


def periodic_seeds(phi, k):
    """Seed pairs (c, b): phi^k(c) ends with c, phi^k(b) starts with b,
    and cb is an admissible factor.  Each pair pins one periodic point."""
    tails = phi.cycle_letters("last")
    heads = phi.cycle_letters("first")
    admissible = two_factors(phi)
    out = [
        (c, b)
        for c, lc in sorted(tails.items())
        if k % lc == 0
        for b, lb in sorted(heads.items())
        if k % lb == 0 and (c, b) in admissible
    ]
    return tuple(out)


def desubstitute(phi, t):
    """Refine a level-k triplet into its chain of k level-1 triplets.

    The chain is returned innermost first: element 0 carries the same marked
    letter as t, element k-1 decomposes phi(t.parent).  Offsets are tracked
    with image lengths only; nothing above level 1 is materialized.
    """
    k = t.level
    if k == 1:
        return [t]
    chain = [None] * k
    pos = len(t.p)
    parent = t.parent
    for i in range(k - 1, 0, -1):
        w = phi.images[parent - 1]
        lens = phi.image_lengths(i)
        cum = 0
        for m, x in enumerate(w):
            step = lens[x - 1]
            if cum + step > pos:
                chain[i] = Triplet(w[:m], x, w[m + 1:], 1, parent)
                parent = x
                pos -= cum
                break
            cum += step
        else:
            raise InvariantViolation("marker fell outside the refined image")
    w = phi.images[parent - 1]
    if w[pos] != t.a:
        raise InvariantViolation("refinement lost the marked letter")
    chain[0] = Triplet(w[:pos], t.a, w[pos + 1:], 1, parent)
    return chain


def recompose(phi, chain, budget=None):
    """Inverse of desubstitute: collapse a level-1 chain to one triplet."""
    k = len(chain)
    p_parts = []
    s_parts = []
    for i in range(k - 1, -1, -1):
        p_parts.append(phi.apply(chain[i].p, i, budget=budget))
    for i in range(k):
        s_parts.append(phi.apply(chain[i].s, i, budget=budget))
    return Triplet(
        concat(*p_parts), chain[0].a, concat(*s_parts), k, chain[-1].parent
    )


@dataclasses.dataclass(frozen=True)
class Development:
    """Eventually periodic development at level 1: pre, then per repeating."""

    pre: tuple
    per: tuple

    def at(self, i):
        if i < len(self.pre):
            return self.pre[i]
        return self.per[(i - len(self.pre)) % len(self.per)]

    def side_classes(self):
        """(True, True) iff the periodic part has blank p / blank s."""
        all_p = all(t.p == EPSILON for t in self.per)
        all_s = all(t.s == EPSILON for t in self.per)
        return all_p, all_s

    def is_generic(self):
        all_p, all_s = self.side_classes()
        return not all_p and not all_s

    def key(self):
        return (
            tuple(t.body() for t in self.pre),
            tuple(t.body() for t in self.per),
        )


def make_development(pre, per):
    return canonicalize(Development(tuple(pre), tuple(per)))


def canonicalize(dev):
    """Primitive period, then absorb matching tail triplets into the cycle."""
    per = list(dev.per)
    n = len(per)
    for d in range(1, n):
        if n % d == 0 and per == per[:d] * (n // d):
            per = per[:d]
            break
    pre = list(dev.pre)
    while pre and pre[-1].body() == per[-1].body():
        per = [per[-1]] + per[:-1]
        pre.pop()
    return Development(tuple(pre), tuple(per))


def constant_development(phi, t):
    """Level-1 development of the point with constant level-k development t*."""
    chain = desubstitute(phi, t)
    return make_development((), chain)


def _aligned_period(dev, n):
    """dev.per rotated so the cycle picks up at level n of the old chain."""
    r = (n - len(dev.pre)) % len(dev.per)
    return dev.per[r:] + dev.per[:r]


def _shift_once_forward(phi, dev):
    horizon = len(dev.pre) + len(dev.per)
    i0 = next(
        (i for i in range(horizon) if dev.at(i).s != EPSILON), None
    )
    if i0 is None:
        raise UndefinedShift("development carries no forward letters")
    n = max(len(dev.pre), i0 + 1)
    work = [dev.at(i) for i in range(n)]
    t = work[i0]
    work[i0] = Triplet(t.p + (t.a,), t.s[0], t.s[1:], 1, t.parent)
    for i in range(i0 - 1, -1, -1):
        w = phi.images[work[i + 1].a - 1]
        work[i] = Triplet(EPSILON, w[0], w[1:], 1, work[i + 1].a)
    return canonicalize(Development(tuple(work), _aligned_period(dev, n)))


def _shift_once_backward(phi, dev):
    horizon = len(dev.pre) + len(dev.per)
    i0 = next(
        (i for i in range(horizon) if dev.at(i).p != EPSILON), None
    )
    if i0 is None:
        raise UndefinedShift("development carries no backward letters")
    n = max(len(dev.pre), i0 + 1)
    work = [dev.at(i) for i in range(n)]
    t = work[i0]
    work[i0] = Triplet(t.p[:-1], t.p[-1], (t.a,) + t.s, 1, t.parent)
    for i in range(i0 - 1, -1, -1):
        w = phi.images[work[i + 1].a - 1]
        work[i] = Triplet(w[:-1], w[-1], EPSILON, 1, work[i + 1].a)
    return canonicalize(Development(tuple(work), _aligned_period(dev, n)))


def shift_dev(phi, dev, n):
    """Development of S^n of any point developing as dev."""
    out = dev
    for _ in range(abs(n)):
        out = (
            _shift_once_forward(phi, out)
            if n > 0
            else _shift_once_backward(phi, out)
        )
    if n != 0:
        check_chain(phi, out)
    return out


def check_chain(phi, dev):
    """Assert the defining relation phi(a_{i+1}) = p_i * a_i * s_i."""
    horizon = len(dev.pre) + len(dev.per) + 1
    for i in range(horizon):
        t = dev.at(i)
        nxt = dev.at(i + 1)
        if t.parent != nxt.a:
            raise InvariantViolation("development chain is broken")
        if phi.images[t.parent - 1] != t.p + (t.a,) + t.s:
            raise InvariantViolation("development triplet mismatch")


class SymbolicPoint:
    """A point of the subshift: S^shift of the point with development anchor*.

    anchor is a level-k triplet.  When the anchor's development leaves one
    side blank, seed names the letter whose periodic ray fills that side;
    otherwise seed is None and the development alone pins the point.
    """

    __slots__ = ("phi", "anchor", "shift", "seed", "_key", "_dev")

    def __init__(self, phi, anchor, shift, seed=None):
        self.phi = phi
        self.anchor = anchor
        self.shift = shift
        self.seed = seed
        self._key = None
        self._dev = None

    @property
    def level(self):
        return self.anchor.level if self.anchor is not None else 0

    def __repr__(self):
        body = self.anchor.body() if self.anchor is not None else None
        return f"SymbolicPoint(anchor={body}, shift={self.shift}, seed={self.seed})"

    # -- canonical identity ---------------------------------------------------

    def key(self):
        """A complete, hashable invariant of the denoted point.

        Blank-sided anchors reduce to ("per", c, b, n): the point S^n of the
        periodic point with left ray from c and right ray from b.  Generic
        anchors reduce to ("dev", ...) holding the canonical level-1
        development with the shift folded in.
        """
        if self._key is not None:
            return self._key
        t = self.anchor
        if t.p == EPSILON and t.s == EPSILON:
            raise InvariantViolation("single-letter image in a primitive map")
        if t.p == EPSILON:
            key = ("per", self.seed, t.a, self.shift)
        elif t.s == EPSILON:
            key = ("per", t.a, self.seed, self.shift - 1)
        else:
            key = ("dev",) + self.dev().key()
        self._key = key
        return key

    def kind(self):
        return self.key()[0]

    def per_data(self):
        kind, c, b, n = self.key()
        if kind != "per":
            raise InvariantViolation("not a periodic-seed point")
        return c, b, n

    def dev(self):
        """Canonical level-1 development of the point itself (generic only)."""
        if self._dev is None:
            base = constant_development(self.phi, self.anchor)
            self._dev = shift_dev(self.phi, base, self.shift)
        return self._dev

    # -- coordinate access ----------------------------------------------------

    def window(self, lo, hi, budget=None):
        """Letters of the underlying bi-infinite word at positions [lo, hi)."""
        if lo >= hi:
            return EPSILON
        if self.kind() == "per":
            c, b, n = self.per_data()
            lo += n
            hi += n
            phi = self.phi
            lc = phi.cycle_letters("last")[c]
            lb = phi.cycle_letters("first")[b]
            left = (
                phi.ray_tail(c, lc, -lo, budget) if lo < 0 else EPSILON
            )
            right = phi.ray_head(b, lb, hi, budget) if hi > 0 else EPSILON
            out = []
            if lo < 0:
                out.extend(left[: min(hi, 0) - lo])
            if hi > 0:
                out.extend(right[max(lo, 0): hi])
            return tuple(out)
        u, v = self.expand(max(hi, 0) + max(-lo, 0) + 1, budget)
        out = []
        for pos in range(lo, hi):
            out.append(v[pos] if pos >= 0 else -u[-pos - 1])
        return tuple(out)

    def expand(self, length, budget=None):
        """First `length` letters of both coordinates of the point."""
        if self.kind() == "per":
            u = invert(self.window(-length, 0, budget))
            v = self.window(0, length, budget)
            return u, v
        dev = self.dev()
        phi = self.phi
        period = len(dev.per)
        cap = len(dev.pre) + period * (length + 2)
        v = [dev.at(0).a]
        i = 0
        while len(v) < length and i < cap:
            v.extend(phi.apply(dev.at(i).s, i, budget=budget))
            i += 1
        u = []
        i = 0
        while len(u) < length and i < cap:
            u.extend(invert(phi.apply(dev.at(i).p, i, budget=budget)))
            i += 1
        if len(v) < length or len(u) < length:
            raise InvariantViolation("development failed to fill its rays")
        return tuple(u[:length]), tuple(v[:length])

    def first_letters(self, budget=None):
        u, v = self.expand(1, budget)
        return u[0], v[0]

    def rho_power(self):
        """Minimal period of the level-1 development."""
        if self.kind() == "per":
            c, b, n = self.per_data()
            side = "first" if n >= 0 else "last"
            letter = b if n >= 0 else c
            return self.phi.cycle_letters(side)[letter]
        return len(self.dev().per)

    def sort_key(self):
        key = self.key()
        if key[0] == "per":
            return (0, key[1], key[2], key[3])
        return (1, key[1], key[2])

    def to_json(self, alphabet):
        key = self.key()
        u0, v0 = self.first_letters()
        out = {
            "U0": alphabet.format_letter(u0),
            "V0": alphabet.format_letter(v0),
        }
        if key[0] == "per":
            c, b, n = key[1], key[2], key[3]
            out["kind"] = "periodic"
            out["seed"] = {
                "left": alphabet.format_letter(c),
                "right": alphabet.format_letter(b),
            }
            out["shift"] = n
        else:
            dev = self.dev()
            out["kind"] = "development"
            out["development"] = {
                "preperiod": [t.render(alphabet) for t in dev.pre],
                "period": [t.render(alphabet) for t in dev.per],
            }
        return out


def points_equal(pa, pb):
    """Whether two symbolic points denote the same subshift point."""
    return pa.key() == pb.key()


def periodic_point(phi, c, b, n=0):
    """The point S^n of the periodic point seeded (c, b), with no anchor.

    Used where the seed letters are already known and materializing an
    anchoring loop would cost an image computation for nothing.
    """
    point = SymbolicPoint(phi, None, n, seed=(c, b))
    point._key = ("per", c, b, n)
    return point


def complete_for_anchor(phi, t, shift, budget=None):
    """All points S^shift(W) over points W developing as the anchor t*.

    A generic anchor pins a single point.  A blank-sided anchor admits one
    point per seed letter on the opposite cycle forming an admissible
    2-factor with the anchor letter.
    """
    admissible = two_factors(phi)
    if t.p == EPSILON and t.s != EPSILON:
        cycles = phi.cycle_letters("last")
        return [
            SymbolicPoint(phi, t, shift, seed=c)
            for c in sorted(cycles)
            if (c, t.a) in admissible
        ]
    if t.s == EPSILON and t.p != EPSILON:
        cycles = phi.cycle_letters("first")
        return [
            SymbolicPoint(phi, t, shift, seed=b)
            for b in sorted(cycles)
            if (t.a, b) in admissible
        ]
    return [SymbolicPoint(phi, t, shift)]


# -- action of the substitution on canonical keys ------------------------------


def _cycle_step(phi, side, letter, m):
    cycles = phi.cycle_letters(side)
    if letter not in cycles:
        raise InvariantViolation("seed letter left its cycle")
    func = (
        phi.first_letter_map() if side == "first" else phi.last_letter_map()
    )
    out = letter
    for _ in range(m % cycles[letter]):
        out = func[out]
    return out


def apply_phi_power_key(phi, key, m, budget=None):
    """Key of the image of a point under m applications of the substitution.

    A shifted periodic point lands at the image length of its offset window;
    a development grows one blank-prefix triplet per step at the front.
    """
    if key[0] == "per":
        _, c, b, n = key
        c2 = _cycle_step(phi, "last", c, m)
        b2 = _cycle_step(phi, "first", b, m)
        if n == 0:
            return ("per", c2, b2, 0)
        lens = phi.image_lengths(m)
        if n > 0:
            lb = phi.cycle_letters("first")[b]
            window = phi.ray_head(b, lb, n, budget)
        else:
            lc = phi.cycle_letters("last")[c]
            window = phi.ray_tail(c, lc, -n, budget)
        total = sum(lens[x - 1] for x in window)
        return ("per", c2, b2, total if n > 0 else -total)
    dev = _dev_from_key(key)
    for _ in range(m):
        front = dev.at(0).a
        w = phi.images[front - 1]
        head = Triplet(EPSILON, w[0], w[1:], 1, front)
        dev = canonicalize(Development((head,) + dev.pre, dev.per))
    return ("dev",) + dev.key()


def _dev_from_key(key):
    dev = Development(
        tuple(Triplet(p, a, s, 1, 0) for (p, a, s) in key[1]),
        tuple(Triplet(p, a, s, 1, 0) for (p, a, s) in key[2]),
    )
    return _with_parents(dev)


def _with_parents(dev):
    n = len(dev.pre)
    T = len(dev.per)
    fixed_pre = tuple(
        dataclasses.replace(dev.pre[i], parent=dev.at(i + 1).a)
        for i in range(n)
    )
    fixed_per = tuple(
        dataclasses.replace(dev.per[j], parent=dev.per[(j + 1) % T].a)
        for j in range(T)
    )
    return Development(fixed_pre, fixed_per)


def shift_key(phi, key, delta):
    if key[0] == "per":
        return ("per", key[1], key[2], key[3] + delta)
    return ("dev",) + shift_dev(phi, _dev_from_key(key), delta).key()


def point_fixed_by(phi, point, w, k, h, budget=None):
    """Whether the point is fixed by the h-th power of conj(w) . phi^k."""
    wh = phi.conjugator_power(w, k, h, budget)
    key = point.key()
    moved = apply_phi_power_key(phi, key, k * h, budget)
    if wh == EPSILON:
        return moved == key
    d = len(wh)
    if wh[0] > 0:
        if moved != shift_key(phi, key, -d):
            return False
        u, _ = point.expand(d, budget)
        return u[:d] == invert(wh)
    if moved != shift_key(phi, key, d):
        return False
    _, v = point.expand(d, budget)
    return v[:d] == invert(wh)


def minimal_phi_power(phi, point, cap=10**6):
    """Smallest m >= 1 with the point fixed by m substitution steps."""
    if point.kind() == "per":
        c, b, n = point.per_data()
        if n != 0:
            return None
        lc = phi.cycle_letters("last")[c]
        lb = phi.cycle_letters("first")[b]
        return math.lcm(lc, lb)
    key = point.key()
    for m in range(1, cap + 1):
        if apply_phi_power_key(phi, key, m) == key:
            return m
    return None
