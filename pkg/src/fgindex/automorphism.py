"""Positive primitive substitutions on a free group, with user-supplied inverse.

An automorphism is given by the images of the generators (all pure positive
words) together with the images of the generators under the inverse
automorphism.  validate() checks positivity, that the two substitutions are
mutually inverse, and primitivity of the incidence matrix via the classical
(N-1)^2 + 1 bound on the power needed for strict positivity.
"""

from __future__ import annotations

from .errors import CapExceeded, NotInverse, NotPositive, NotPrimitive, ParseError
from .words import (
    Alphabet,
    EPSILON,
    Purity,
    concat,
    invert,
    purity,
    require_nonempty,
)


class Automorphism:
    """A validated positive automorphism.  Construct through validate()."""

    def __init__(self, alphabet, images, inverse_images):
        self.alphabet = alphabet
        self.rank = alphabet.size
        self.images = tuple(tuple(w) for w in images)
        self.inverse_images = tuple(tuple(w) for w in inverse_images)
        # incidence[a-1][b-1] = occurrences of letter a in the image of b
        self.incidence = tuple(
            tuple(self.images[b].count(a) for b in range(self.rank))
            for a in range(1, self.rank + 1)
        )
        self._img_cache = {}
        self._inv_cache = {}
        self._len_cache = {1: tuple(len(w) for w in self.images)}
        self._occ_cache = {1: self.incidence}
        self._ray_cache = {}
        self.point_key_cache = {}
        self.two_factor_cache = None
        self.gamma_bound_cache = {}

    # -- letter-level tables -------------------------------------------------

    def image_of_letter(self, a):
        return self.images[a - 1] if a > 0 else invert(self.images[-a - 1])

    def inverse_image_of_letter(self, a):
        if a > 0:
            return self.inverse_images[a - 1]
        return invert(self.inverse_images[-a - 1])

    def first_letter_map(self):
        return {a: self.images[a - 1][0] for a in self.alphabet.letters()}

    def last_letter_map(self):
        return {a: self.images[a - 1][-1] for a in self.alphabet.letters()}

    def letter_image(self, a, k, budget=None):
        """phi^k(a) for a positive letter a, memoized."""
        if k == 0:
            return (a,)
        key = (a, k)
        got = self._img_cache.get(key)
        if got is not None:
            return got
        prev = self.letter_image(a, k - 1, budget)
        out = []
        for x in prev:
            out.extend(self.images[x - 1])
        word = tuple(out)
        if budget is not None:
            budget.charge(len(word))
        self._img_cache[key] = word
        return word

    def inverse_letter_image(self, a, k, budget=None):
        """phi^-k(a) for a positive letter a, reduced, memoized."""
        if k == 0:
            return (a,)
        key = (a, k)
        got = self._inv_cache.get(key)
        if got is not None:
            return got
        prev = self.inverse_letter_image(a, k - 1, budget)
        out = []
        for x in prev:
            piece = self.inverse_image_of_letter(x)
            for y in piece:
                if out and out[-1] == -y:
                    out.pop()
                else:
                    out.append(y)
        word = tuple(out)
        if budget is not None:
            budget.charge(len(word))
        self._inv_cache[key] = word
        return word

    # -- arithmetic on counts, no materialization ----------------------------

    def image_lengths(self, k):
        """Tuple of |phi^k(a)| over positive letters, exact integers."""
        got = self._len_cache.get(k)
        if got is not None:
            return got
        prev = self.image_lengths(k - 1)
        cur = tuple(
            sum(prev[x - 1] for x in self.images[a]) for a in range(self.rank)
        )
        self._len_cache[k] = cur
        return cur

    def occurrence_matrix(self, k):
        """occ[a-1][b-1] = occurrences of a in phi^k(b)."""
        got = self._occ_cache.get(k)
        if got is not None:
            return got
        prev = self.occurrence_matrix(k - 1)
        base = self.incidence
        n = self.rank
        cur = tuple(
            tuple(
                sum(prev[a][c] * base[c][b] for c in range(n)) for b in range(n)
            )
            for a in range(n)
        )
        self._occ_cache[k] = cur
        return cur

    def word_image_length(self, u, k):
        """|phi^k(u)| for pure positive u, without materializing."""
        lens = self.image_lengths(k) if k > 0 else None
        if k == 0:
            return len(u)
        return sum(lens[x - 1] for x in u)

    # -- whole-word application ----------------------------------------------

    def apply(self, u, k=1, direction="forward", budget=None):
        """phi^(+-k)(u) for a reduced word u, reduced."""
        if k < 0:
            raise ValueError("k must be nonnegative; use direction='inverse'")
        if direction not in ("forward", "inverse"):
            raise ValueError(f"bad direction {direction!r}")
        word = tuple(u)
        if direction == "forward" and purity(word) is Purity.PURE_POSITIVE:
            # No cancellation can occur between pure positive images.
            out = []
            for x in word:
                out.extend(self.letter_image(x, k, budget))
            if budget is not None:
                budget.charge(len(out))
            return tuple(out)
        for _ in range(k):
            out = []
            table = (
                self.image_of_letter
                if direction == "forward"
                else self.inverse_image_of_letter
            )
            for x in word:
                for y in table(x):
                    if out and out[-1] == -y:
                        out.pop()
                    else:
                        out.append(y)
            word = tuple(out)
            if budget is not None:
                budget.charge(len(word))
        return word

    def conjugator_power(self, w, k, h, budget=None):
        """Word v with (inner(w) . phi^k)^h = inner(v) . phi^(k*h).

        inner(w) is conjugation u -> w^-1 u w.  v is
        phi^(k(h-1))(w) ... phi^k(w) w, computed incrementally.
        """
        if h < 0:
            raise ValueError("h must be nonnegative")
        acc = EPSILON
        for _ in range(h):
            acc = concat(self.apply(acc, k, budget=budget), w)
        return acc

    # -- periodic structure of the letter maps -------------------------------

    def cycle_letters(self, side):
        """Letters lying on a cycle of the first- or last-letter map.

        side 'first' uses the first letters of images, 'last' the last
        letters.  Returns {letter: cycle_length}.
        """
        func = self.first_letter_map() if side == "first" else self.last_letter_map()
        on_cycle = {}
        for start in self.alphabet.letters():
            seen = {}
            x = start
            step = 0
            while x not in seen:
                seen[x] = step
                x = func[x]
                step += 1
            if x == start:
                on_cycle[start] = step - seen[x]
        return on_cycle

    # -- growing rays for periodic points ------------------------------------

    def ray_tail(self, c, cycle_len, need, budget=None):
        """Last `need` letters of the leftward-periodic ray ending in c.

        The ray is the limit of phi^(cycle_len * t)(c); each image ends with
        the previous word, so iterating on a suffix converges.
        """
        key = ("tail", c, cycle_len)
        word = self._ray_cache.get(key, (c,))
        while len(word) < need:
            grown = self.apply(word, cycle_len, budget=budget)
            if len(grown) == len(word):
                raise CapExceeded("letter images do not grow under iteration")
            word = grown
            if len(word) > 4 * need:
                word = word[-2 * need:]
        self._ray_cache[key] = word
        return word[-need:]

    def ray_head(self, b, cycle_len, need, budget=None):
        """First `need` letters of the rightward-periodic ray starting at b."""
        key = ("head", b, cycle_len)
        word = self._ray_cache.get(key, (b,))
        while len(word) < need:
            grown = self.apply(word, cycle_len, budget=budget)
            if len(grown) == len(word):
                raise CapExceeded("letter images do not grow under iteration")
            word = grown
            if len(word) > 4 * need:
                word = word[: 2 * need]
        self._ray_cache[key] = word
        return word[:need]


def parse_automorphism(text):
    """Parse the text format: a letters: line, then map/inv lines."""
    names = None
    maps = {}
    invs = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("letters:"):
            if names is not None:
                raise ParseError("duplicate letters: line", lineno)
            names = line[len("letters:"):].split()
            if not names:
                raise ParseError("letters: line lists no generators", lineno)
            continue
        parts = line.split("=", 1)
        if len(parts) != 2:
            raise ParseError(f"expected 'map x = ...' or 'inv x = ...', got {line!r}", lineno)
        head = parts[0].split()
        if len(head) != 2 or head[0] not in ("map", "inv"):
            raise ParseError(f"bad line head {parts[0].strip()!r}", lineno)
        if names is None:
            raise ParseError("letters: line must come first", lineno)
        target = maps if head[0] == "map" else invs
        if head[1] in target:
            raise ParseError(f"duplicate {head[0]} for {head[1]!r}", lineno)
        target[head[1]] = parts[1].strip()
    if names is None:
        raise ParseError("missing letters: line")
    alphabet = Alphabet(names)
    images = []
    inverse_images = []
    for name in names:
        if name not in maps:
            raise ParseError(f"missing map for generator {name!r}")
        if name not in invs:
            raise ParseError(f"missing inv for generator {name!r}")
        images.append(alphabet.parse_word(maps[name]))
        inverse_images.append(alphabet.parse_word(invs[name]))
    extra = (set(maps) | set(invs)) - set(names)
    if extra:
        raise ParseError(f"map/inv lines for unknown generators {sorted(extra)}")
    return alphabet, tuple(images), tuple(inverse_images)


def validate(alphabet, images, inverse_images):
    """Check the defining data and build an Automorphism."""
    n = alphabet.size
    if len(images) != n or len(inverse_images) != n:
        raise ParseError("need exactly one map and one inv per generator")
    for a, w in enumerate(images, start=1):
        require_nonempty(w, f"image of {alphabet.format_letter(a)}")
        if purity(tuple(w)) is not Purity.PURE_POSITIVE:
            raise NotPositive(
                f"image of {alphabet.format_letter(a)} is not pure positive: "
                f"{alphabet.format_word(tuple(w))}"
            )
    phi = Automorphism(alphabet, images, inverse_images)
    for a in alphabet.letters():
        back = phi.apply(phi.inverse_images[a - 1], 1, "forward")
        if back != (a,):
            raise NotInverse(
                f"phi(inv({alphabet.format_letter(a)})) = "
                f"{alphabet.format_word(back)}, expected {alphabet.format_letter(a)}"
            )
        forth = phi.apply(phi.images[a - 1], 1, "inverse")
        if forth != (a,):
            raise NotInverse(
                f"inv(phi({alphabet.format_letter(a)})) = "
                f"{alphabet.format_word(forth)}, expected {alphabet.format_letter(a)}"
            )
    _check_primitive(phi)
    return phi


def _check_primitive(phi):
    n = phi.rank
    # Row a of the reachability relation as a bitmask over columns.
    base = [0] * n
    for a in range(n):
        for b in range(n):
            if phi.incidence[a][b] > 0:
                base[a] |= 1 << b
    full = (1 << n) - 1
    cur = list(base)
    limit = (n - 1) ** 2 + 1 if n > 1 else 1
    for _ in range(limit):
        if all(row == full for row in cur):
            return
        cur = [
            _bool_row_mul(cur[a], base, n) for a in range(n)
        ]
    if all(row == full for row in cur):
        return
    raise NotPrimitive(
        f"no power of the incidence matrix is strictly positive "
        f"(checked up to exponent {limit + 1})"
    )


def _bool_row_mul(row_mask, base, n):
    out = 0
    for c in range(n):
        if row_mask >> c & 1:
            out |= base[c]
    return out


def load_automorphism(path):
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    alphabet, images, inverse_images = parse_automorphism(text)
    return validate(alphabet, images, inverse_images)
