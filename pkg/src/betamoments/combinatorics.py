"""Catalan/Motzkin/Schroeder counts and weighted lattice-path counting.

Paths live on the integer lattice. A step is one of

    U = (1, 1)   rise
    D = (1, -1)  fall
    H = (1, 0)   horizontal
    V = (0, 1)   vertical

A :class:`PathModel` fixes which steps are allowed, their weights, the
floor the path may not go below, the start/end heights and the total
horizontal displacement. :func:`count_weighted_paths` sums the product of
step weights over all admissible paths by dynamic programming, and
:func:`enumerate_paths` lists them one by one (slow; used as an oracle).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterator, Optional

from .exact import as_rational

RISE = (1, 1)
FALL = (1, -1)
HORIZONTAL = (1, 0)
VERTICAL = (0, 1)

ALLOWED_MOVES = (VERTICAL, RISE, HORIZONTAL, FALL)

_LETTER = {RISE: "U", FALL: "D", HORIZONTAL: "H", VERTICAL: "V", (2, 0): "H"}
_MOVE = {"U": RISE, "D": FALL, "H": HORIZONTAL, "V": VERTICAL}

MAX_ENUMERATION_STEPS = 20


class EnumerationBoundError(ValueError):
    pass


class InadmissiblePathError(ValueError):
    pass


# ---------------------------------------------------------------------------
# closed-form sequences


def catalan(n: int) -> int:
    if n < 0:
        raise ValueError("n must be non-negative")
    return comb(2 * n, n) // (n + 1)


def motzkin_count(n: int, m: int) -> int:
    """Motzkin paths of length ``n`` with exactly ``m`` rises: C(n, 2m) * Catalan(m)."""
    if n < 0 or m < 0:
        raise ValueError("n and m must be non-negative")
    if 2 * m > n:
        return 0
    return comb(n, 2 * m) * catalan(m)


@lru_cache(maxsize=None)
def _schroder_table(n: int) -> tuple[int, ...]:
    r = [1]
    for k in range(1, n + 1):
        r.append(r[k - 1] + sum(r[j] * r[k - 1 - j] for j in range(k)))
    return tuple(r)


def schroder(n: int) -> int:
    """Large Schroeder number: paths from (0,0) to (2n,0) with steps U, D and (2,0)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return _schroder_table(n)[n]


# ---------------------------------------------------------------------------
# models


@dataclass(frozen=True)
class Step:
    dx: int
    dy: int
    weight: Fraction = Fraction(1)
    label: str = ""

    def __post_init__(self):
        if (self.dx, self.dy) not in ALLOWED_MOVES:
            raise ValueError(f"step ({self.dx},{self.dy}) is not one of U, D, H, V")
        object.__setattr__(self, "weight", as_rational(self.weight))

    @property
    def move(self) -> tuple[int, int]:
        return (self.dx, self.dy)

    @property
    def letter(self) -> str:
        return _LETTER[self.move]


@dataclass(frozen=True)
class PathModel:
    steps: tuple[Step, ...]
    horizontal_length: int
    floor: int = 0
    start_height: int = 0
    end_height: int = 0

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        if not self.steps:
            raise ValueError("a path model needs at least one step")
        moves = [s.move for s in self.steps]
        if len(set(moves)) != len(moves):
            raise ValueError("at most one step per direction")
        if self.horizontal_length < 0:
            raise ValueError("horizontal_length must be non-negative")
        if self.start_height < self.floor or self.end_height < self.floor:
            raise ValueError("start and end must lie on or above the floor")

    def step(self, move) -> Optional[Step]:
        for s in self.steps:
            if s.move == move:
                return s
        return None

    def weight_of(self, path: "Path") -> Fraction:
        w = Fraction(1)
        for mv in path.moves:
            s = self.step(mv)
            if s is None:
                raise InadmissiblePathError(f"step {_LETTER.get(mv, mv)} not in model")
            w *= s.weight
        return w

    def admits(self, path: "Path") -> bool:
        h, x = self.start_height, 0
        for mv in path.moves:
            if self.step(mv) is None:
                return False
            x += mv[0]
            h += mv[1]
            if h < self.floor:
                return False
        return x == self.horizontal_length and h == self.end_height


def dyck_model(length: int, rise=1, fall=1) -> PathModel:
    return PathModel(
        (Step(*RISE, rise, "A1"), Step(*FALL, fall, "A2")), horizontal_length=length
    )


def motzkin_model(length: int, rise=1, fall=1, horizontal=1) -> PathModel:
    return PathModel(
        (Step(*RISE, rise, "A1"), Step(*FALL, fall, "A2"), Step(*HORIZONTAL, horizontal, "A3")),
        horizontal_length=length,
    )


def schroder_like_model(length: int, vertical=1, fall=1, horizontal=1) -> PathModel:
    """Vertical/fall/horizontal steps; these paths biject onto Schroeder paths."""
    return PathModel(
        (Step(*VERTICAL, vertical, "A1"), Step(*FALL, fall, "A2"), Step(*HORIZONTAL, horizontal, "A3")),
        horizontal_length=length,
    )


def jacobi_model(length: int, vertical=1, rise=1, fall=1, horizontal=1) -> PathModel:
    return PathModel(
        (
            Step(*VERTICAL, vertical, "A1"),
            Step(*FALL, fall, "A2"),
            Step(*HORIZONTAL, horizontal, "A3"),
            Step(*RISE, rise, "A4"),
        ),
        horizontal_length=length,
    )


# ---------------------------------------------------------------------------
# paths


@dataclass(frozen=True)
class Path:
    moves: tuple[tuple[int, int], ...] = ()

    def __str__(self):
        return "".join(_LETTER[m] for m in self.moves)

    def __len__(self):
        return len(self.moves)

    @classmethod
    def from_string(cls, s: str, flat=HORIZONTAL) -> "Path":
        """Parse a U/D/H/V word. ``flat`` is the geometry used for ``H``."""
        try:
            return cls(tuple(flat if c == "H" else _MOVE[c] for c in s.strip().upper()))
        except KeyError as e:
            raise ValueError(f"unknown step letter {e.args[0]!r}") from None


def count_weighted_paths(model: PathModel) -> Fraction:
    """Sum over admissible paths of the product of step weights.

    Columns are processed left to right. Inside a column any run of
    vertical steps may occur before the next unit-dx step; heights are
    capped at ``end_height + remaining dx`` when a fall step exists
    (otherwise at ``end_height``), since higher states cannot return.
    """
    L = model.horizontal_length
    up = model.step(VERTICAL)
    fall = model.step(FALL)
    unit = [s for s in model.steps if s.dx == 1]

    def cap(x: int) -> int:
        return model.end_height + (L - x if fall is not None else 0)

    layer: dict[int, Fraction] = {}
    if model.start_height <= cap(0):
        layer[model.start_height] = Fraction(1)

    for x in range(L + 1):
        if up is not None and layer:
            top = cap(x)
            lo = min(layer)
            h = lo
            # ascending sweep so chains of vertical steps accumulate
            while h < top:
                w = layer.get(h)
                if w:
                    layer[h + 1] = layer.get(h + 1, Fraction(0)) + w * up.weight
                h += 1
        if x == L:
            break
        nxt: dict[int, Fraction] = {}
        top = cap(x + 1)
        for h, w in layer.items():
            if not w:
                continue
            for s in unit:
                h2 = h + s.dy
                if h2 < model.floor or h2 > top:
                    continue
                nxt[h2] = nxt.get(h2, Fraction(0)) + w * s.weight
        layer = nxt
    return layer.get(model.end_height, Fraction(0))


def _iter_paths(model: PathModel, max_steps: int) -> Iterator[Path]:
    L = model.horizontal_length
    moves = [s.move for s in model.steps]
    has_fall = model.step(FALL) is not None
    acc: list[tuple[int, int]] = []

    def rec(x, h):
        if x == L and h == model.end_height:
            yield Path(tuple(acc))
        if len(acc) == max_steps:
            return
        for mv in moves:
            x2, h2 = x + mv[0], h + mv[1]
            if x2 > L or h2 < model.floor:
                continue
            # prune states that can no longer reach the end height
            reach = model.end_height + (L - x2 if has_fall else 0)
            if h2 > reach:
                continue
            acc.append(mv)
            yield from rec(x2, h2)
            acc.pop()

    yield from rec(0, model.start_height)


def enumerate_paths(model: PathModel, max_steps: int) -> list[Path]:
    """Every admissible path of ``model`` using at most ``max_steps`` steps."""
    if max_steps < 1:
        raise ValueError("max_steps must be positive")
    if max_steps > MAX_ENUMERATION_STEPS:
        raise EnumerationBoundError(
            f"enumeration bound: max_steps={max_steps} exceeds {MAX_ENUMERATION_STEPS}"
        )
    return list(_iter_paths(model, max_steps))


# ---------------------------------------------------------------------------
# Schroeder paths and the bijection


def enumerate_schroder_paths(n: int) -> list[Path]:
    """Brute-force Schroeder paths from (0,0) to (2n,0), flat steps of length 2."""
    out: list[Path] = []
    acc: list[tuple[int, int]] = []
    target = 2 * n

    def rec(x, h):
        if x == target:
            if h == 0:
                out.append(Path(tuple(acc)))
            return
        for mv in (RISE, FALL, (2, 0)):
            x2, h2 = x + mv[0], h + mv[1]
            if x2 > target or h2 < 0 or h2 > target - x2:
                continue
            acc.append(mv)
            rec(x2, h2)
            acc.pop()

    rec(0, 0)
    return out


def is_schroder_path(path: Path) -> bool:
    h = x = 0
    for mv in path.moves:
        if mv not in (RISE, FALL, (2, 0)):
            return False
        x += mv[0]
        h += mv[1]
        if h < 0:
            return False
    return h == 0 and x % 2 == 0


def schroder_bijection(path: Path) -> Path:
    """Map a vertical/fall/horizontal path to a Schroeder path.

    Vertical steps become rises and horizontal steps are doubled to (2,0).
    A path with horizontal length n - 1 lands on a Schroeder path of
    length 2(n - 1).
    """
    h = 0
    out = []
    for mv in path.moves:
        if mv == VERTICAL:
            out.append(RISE)
        elif mv == HORIZONTAL:
            out.append((2, 0))
        elif mv == FALL:
            out.append(FALL)
        else:
            raise InadmissiblePathError(f"step {_LETTER[mv]} is not vertical, fall or horizontal")
        h += mv[1]
        if h < 0:
            raise InadmissiblePathError("path falls below its starting level")
    if h != 0:
        raise InadmissiblePathError("path does not return to its starting level")
    return Path(tuple(out))
