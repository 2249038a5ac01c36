"""Rotation iteration on loop affixes and the bound that makes it terminate.

gamma rotates one letter out of a pure positive word and substitutes its
image back on the other end.  Two affixes that reach a common rotation value
witness a pair of singular points; the cutoff indices computed here bound how
far the iteration must be pushed before giving up, so the search is finite.
"""

from __future__ import annotations

from collections import deque

from .errors import CapExceeded, InvariantViolation
from .words import EPSILON, invert, require_nonempty

# Fixed hash parameters keep runs byte-for-byte reproducible.
_B1, _M1 = 1_000_003, (1 << 61) - 1
_B2, _M2 = 912_666_049, (1 << 31) - 1

# Safety valve for the cutoff search; the peel condition is always reached
# long before this for a primitive map.
_STAR_CAP = 10_000


def gamma(phi, k, side, u, budget=None):
    """One rotation step at level k on a pure positive word."""
    require_nonempty(tuple(u), "rotation argument")
    if side == "minus":
        return phi.letter_image(u[-1], k, budget) + tuple(u[:-1])
    if side == "plus":
        return tuple(u[1:]) + phi.letter_image(u[0], k, budget)
    raise ValueError(f"bad side {side!r}")


class _SignTracker:
    """Reduced word in a deque plus an orientation-change counter."""

    def __init__(self):
        self.dq = deque()
        self.changes = 0

    def _same_sign(self, x, y):
        return (x > 0) == (y > 0)

    def push_left(self, y):
        if self.dq and self.dq[0] == -y:
            old = self.dq.popleft()
            if self.dq and not self._same_sign(old, self.dq[0]):
                self.changes -= 1
        else:
            if self.dq and not self._same_sign(y, self.dq[0]):
                self.changes += 1
            self.dq.appendleft(y)

    def push_right(self, y):
        if self.dq and self.dq[-1] == -y:
            old = self.dq.pop()
            if self.dq and not self._same_sign(old, self.dq[-1]):
                self.changes -= 1
        else:
            if self.dq and not self._same_sign(y, self.dq[-1]):
                self.changes += 1
            self.dq.append(y)


def gamma_bound(phi, k, side, budget=None):
    """Largest mixed-sign overhang among qualifying affix preimages.

    On the minus side: over all strict nonempty suffixes y of any phi^k(a)
    whose reduced preimage splits as (negatives)(positives+), the maximum
    count of leading negatives.  Plus side mirrors with prefixes and
    (positives+)(negatives).  Zero when no suffix qualifies.
    """
    cached = phi.gamma_bound_cache.get((k, side))
    if cached is not None:
        return cached
    if side not in ("minus", "plus"):
        raise ValueError(f"bad side {side!r}")
    best = 0
    for a in phi.alphabet.letters():
        image = phi.letter_image(a, k, budget)
        tracker = _SignTracker()
        if side == "minus":
            order = range(len(image) - 1, 0, -1)
        else:
            order = range(0, len(image) - 1)
        for pos in order:
            block = phi.inverse_letter_image(image[pos], k, budget)
            if budget is not None:
                budget.charge(len(block))
            if side == "minus":
                for y in reversed(block):
                    tracker.push_left(y)
            else:
                for y in block:
                    tracker.push_right(y)
            dq = tracker.dq
            if not dq:
                raise InvariantViolation("affix preimage reduced to nothing")
            if side == "minus":
                if tracker.changes == 0 and dq[0] > 0:
                    overhang = 0
                elif tracker.changes == 1 and dq[0] < 0:
                    overhang = 0
                    for x in dq:
                        if x > 0:
                            break
                        overhang += 1
                else:
                    continue
            else:
                if tracker.changes == 0 and dq[-1] > 0:
                    overhang = 0
                elif tracker.changes == 1 and dq[0] > 0 and dq[-1] < 0:
                    overhang = 0
                    for x in reversed(dq):
                        if x > 0:
                            break
                        overhang += 1
                else:
                    continue
            best = max(best, overhang)
    phi.gamma_bound_cache[(k, side)] = best
    return best


class Stream:
    """Lazy rotation orbit of one affix, with O(1) window hashes.

    Rotation always consumes at the front of the stored array and appends the
    substituted block at the back; the minus side stores words reversed so
    both sides share this shape.  Window i (the i-th rotation value, in
    stream coordinates) is data[i : i + lens[i]].
    """

    def __init__(self, phi, k, side, start, budget=None):
        require_nonempty(tuple(start), "stream start")
        self.phi = phi
        self.k = k
        self.side = side
        self.budget = budget
        word = tuple(start) if side == "plus" else tuple(reversed(start))
        self.data = []
        self.lens = [len(word)]
        self._blocks = {}
        self._h1 = [0]
        self._h2 = [0]
        self._p1 = [1]
        self._p2 = [1]
        self._extend(word)

    def _extend(self, letters):
        for x in letters:
            self.data.append(x)
            self._h1.append((self._h1[-1] * _B1 + x) % _M1)
            self._h2.append((self._h2[-1] * _B2 + x) % _M2)
            self._p1.append(self._p1[-1] * _B1 % _M1)
            self._p2.append(self._p2[-1] * _B2 % _M2)

    def block(self, c):
        got = self._blocks.get(c)
        if got is None:
            img = self.phi.letter_image(c, self.k, self.budget)
            got = img if self.side == "plus" else tuple(reversed(img))
            self._blocks[c] = got
        return got

    def steps(self):
        return len(self.lens) - 1

    def _advance(self):
        t = self.steps()
        blk = self.block(self.data[t])
        if self.budget is not None:
            self.budget.charge(len(blk))
        self._extend(blk)
        self.lens.append(self.lens[t] - 1 + len(blk))

    def ensure_steps(self, i):
        while self.steps() < i:
            self._advance()

    def ensure_len(self, bound):
        """Grow until the newest window is strictly longer than bound."""
        while self.lens[-1] <= bound:
            self._advance()

    def window_hash(self, i):
        l, r = i, i + self.lens[i]
        h1 = (self._h1[r] - self._h1[l] * self._p1[r - l]) % _M1
        h2 = (self._h2[r] - self._h2[l] * self._p2[r - l]) % _M2
        return (self.lens[i], h1, h2)

    def window_equal(self, i, other, j):
        if self.lens[i] != other.lens[j]:
            return False
        return (
            self.data[i: i + self.lens[i]]
            == other.data[j: j + other.lens[j]]
        )

    def word_at(self, i):
        """The i-th rotation value as an actual word."""
        raw = self.data[i: i + self.lens[i]]
        if self.side == "minus":
            raw = reversed(raw)
        return tuple(raw)


def _peelable(stream, i, depth_needed):
    """Can more than depth_needed full letter images be peeled off the
    substituted end of window i, leaving a pure positive remainder?"""
    lens_i = stream.lens[i]
    end = i + lens_i
    letters = stream.phi.alphabet.letters()
    reached = {0: 0}
    frontier = [0]
    while frontier:
        new_frontier = []
        for off in frontier:
            depth = reached[off]
            for c in letters:
                blk = stream.block(c)
                w = len(blk)
                if off + w > lens_i:
                    continue
                if stream.data[end - off - w: end - off] != list(blk):
                    continue
                nxt = off + w
                if nxt in reached and reached[nxt] >= depth + 1:
                    continue
                reached[nxt] = depth + 1
                if depth + 1 > depth_needed:
                    return True
                new_frontier.append(nxt)
        frontier = new_frontier
    return False


def star_index(phi, k, side, stream, g, budget=None):
    """Smallest positive step whose window peels deeper than g."""
    i = 1
    while i <= _STAR_CAP:
        stream.ensure_steps(i)
        if budget is not None:
            budget.charge(1)
        if _peelable(stream, i, g):
            return i
        i += 1
    raise CapExceeded("rotation never reached the peel condition")


def cutoff_box(phi, k, side, sx, sy, g, budget=None):
    """Cutoff pair (i0, j0): a common rotation value, if any exists, appears
    at or before these indices on the respective streams."""
    istar = star_index(phi, k, side, sx, g, budget)
    jstar = star_index(phi, k, side, sy, g, budget)
    lx = sx.lens[istar]
    ly = sy.lens[jstar]
    if lx > ly:
        i0 = istar
        j0 = _first_longer(sy, lx)
    elif ly > lx:
        i0 = _first_longer(sx, ly)
        j0 = jstar
    else:
        i0 = _first_longer(sx, lx)
        j0 = _first_longer(sy, ly)
    return i0, j0


def _first_longer(stream, bound):
    i = 0
    while True:
        stream.ensure_steps(i)
        if stream.lens[i] > bound:
            return i
        i += 1
        if i > _STAR_CAP:
            raise CapExceeded("rotation lengths failed to grow")


def _root_of(sx, m, sy, n):
    while m > 0 and n > 0 and sx.window_equal(m - 1, sy, n - 1):
        m -= 1
        n -= 1
    return m, n


def match(phi, k, side, x, y, budget=None):
    """Least (i, j) with the i-th rotation of x equal to the j-th of y,
    with the conjugating word, or None.  Arguments are affix words."""
    x = tuple(x)
    y = tuple(y)
    if x == y:
        if x == EPSILON:
            return (0, 0, EPSILON)
        w = x if side == "minus" else invert(x)
        return (0, 0, w)
    if x == EPSILON or y == EPSILON:
        return None
    g = gamma_bound(phi, k, side, budget)
    sx = Stream(phi, k, side, x, budget)
    sy = Stream(phi, k, side, y, budget)
    i0, j0 = cutoff_box(phi, k, side, sx, sy, g, budget)
    sx.ensure_steps(i0)
    sy.ensure_steps(j0)
    by_hash = {}
    for n in range(j0 + 1):
        by_hash.setdefault(sy.window_hash(n), []).append(n)
    for m in range(i0 + 1):
        for n in by_hash.get(sx.window_hash(m), ()):
            if budget is not None:
                budget.charge(1)
            if not sx.window_equal(m, sy, n):
                continue
            i, j = _root_of(sx, m, sy, n)
            if i > i0 or j > j0:
                raise InvariantViolation("match root escaped its cutoff box")
            w = sx.word_at(i)
            if side == "plus":
                w = invert(w)
            return (i, j, w)
    return None


def all_matches(phi, k, side, affixes, budget=None):
    """Minimal matches for every unordered pair of distinct nonempty affixes.

    Shares one stream per affix and one hash join across all windows, so the
    whole level costs little more than growing each stream to the common
    horizon.  Returns {(xi, yi): (i, j, w)} indexed by affix positions.
    """
    affixes = list(affixes)
    if any(a == EPSILON for a in affixes):
        raise ValueError("empty affixes are matched separately")
    if len(affixes) < 2:
        return {}
    g = gamma_bound(phi, k, side, budget)
    streams = [Stream(phi, k, side, a, budget) for a in affixes]
    stars = [star_index(phi, k, side, s, g, budget) for s in streams]
    horizon = max(s.lens[i] for s, i in zip(streams, stars))
    for s in streams:
        s.ensure_len(horizon)
    buckets = {}
    for idx, s in enumerate(streams):
        for i in range(s.steps() + 1):
            buckets.setdefault(s.window_hash(i), []).append((idx, i))
    candidates = {}
    for entries in buckets.values():
        if len(entries) < 2:
            continue
        for pos, (xi, m) in enumerate(entries):
            for (yi, n) in entries[pos + 1:]:
                if xi == yi:
                    continue
                if budget is not None:
                    budget.charge(1)
                pair = (xi, yi) if xi < yi else (yi, xi)
                cand = (m, n) if xi < yi else (n, m)
                old = candidates.get(pair)
                if old is not None and old <= cand:
                    continue
                if streams[pair[0]].window_equal(
                    cand[0], streams[pair[1]], cand[1]
                ):
                    candidates[pair] = cand
    out = {}
    for (xi, yi), (m, n) in sorted(candidates.items()):
        sx, sy = streams[xi], streams[yi]
        i, j = _root_of(sx, m, sy, n)
        lx = sx.lens[stars[xi]]
        ly = sy.lens[stars[yi]]
        if lx > ly:
            i0, j0 = stars[xi], _first_longer(sy, lx)
        elif ly > lx:
            i0, j0 = _first_longer(sx, ly), stars[yi]
        else:
            i0, j0 = _first_longer(sx, lx), _first_longer(sy, ly)
        if i > i0 or j > j0:
            raise InvariantViolation("match root escaped its cutoff box")
        w = sx.word_at(i)
        if side == "plus":
            w = invert(w)
        out[(xi, yi)] = (i, j, w)
    return out
