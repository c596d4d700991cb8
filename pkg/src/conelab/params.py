"""Domain parameters, the partition lattice and unit steps.

Partitions are plain tuples of non-negative integers, weakly decreasing and
padded with zeros to the rank ``r``.  ``fmt_partition`` trims trailing zeros
for display and serialization.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple, Union

Partition = Tuple[int, ...]
RationalLike = Union[int, Fraction, str]


def as_fraction(x: RationalLike) -> Fraction:
    """Parse ``3``, ``"7/2"`` or a Fraction; floats are rejected on purpose."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {x!r}") from exc
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def fmt_fraction(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class DomainParams:
    """Rank ``r`` and root multiplicity ``a`` of a type-A symmetric cone."""

    r: int
    a: Fraction

    def __post_init__(self):
        if not isinstance(self.r, int) or self.r < 1:
            raise ValueError(f"rank r must be an integer >= 1, got {self.r!r}")
        a = as_fraction(self.a)
        if a <= 0:
            raise ValueError(f"multiplicity a must be > 0, got {a}")
        object.__setattr__(self, "a", a)

    @property
    def d(self) -> Fraction:
        return self.r + self.a * self.r * (self.r - 1) / 2

    @property
    def p(self) -> Fraction:
        return 2 * self.d / self.r

    @property
    def alpha(self) -> Fraction:
        """Jack parameter matching the multiplicity."""
        return 2 / self.a

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "a": fmt_fraction(self.a),
            "d": fmt_fraction(self.d),
            "p": fmt_fraction(self.p),
        }


def make_params(r: int, a: RationalLike) -> DomainParams:
    return DomainParams(r, as_fraction(a))


def partition(parts: Iterable[int], r: int) -> Partition:
    """Canonical padded partition; raises if ``parts`` is not a partition."""
    parts = [int(p) for p in parts]
    while parts and parts[-1] == 0:
        parts.pop()
    if len(parts) > r:
        raise ValueError(f"{parts} has more than r={r} parts")
    if any(p < 0 for p in parts):
        raise ValueError(f"{parts} has negative parts")
    if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
        raise ValueError(f"{parts} is not weakly decreasing")
    return tuple(parts) + (0,) * (r - len(parts))


def is_partition(parts: Sequence[int]) -> bool:
    return all(p >= 0 for p in parts) and all(
        parts[i] >= parts[i + 1] for i in range(len(parts) - 1)
    )


def weight(m: Sequence[int]) -> int:
    return sum(m)


def fmt_partition(m: Sequence[int]) -> str:
    parts = list(m)
    while parts and parts[-1] == 0:
        parts.pop()
    return ",".join(str(p) for p in parts)


def parse_partition(text: str, r: int) -> Partition:
    text = text.strip().strip("()")
    if not text:
        return (0,) * r
    return partition([int(t) for t in text.split(",") if t.strip()], r)


def _partitions_of(n: int, max_part: int, max_len: int):
    # Lex-decreasing enumeration.
    if n == 0:
        yield ()
        return
    if max_len == 0:
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in _partitions_of(n - first, first, max_len - 1):
            yield (first,) + rest


def partitions_of(n: int, r: int) -> list:
    """Partitions of ``n`` with at most ``r`` parts, lex-decreasing, padded."""
    return [p + (0,) * (r - len(p)) for p in _partitions_of(n, n, r)]


def partitions_up_to(r: int, max_weight: int) -> list:
    """All partitions with at most ``r`` parts and weight <= ``max_weight``.

    Ordered by weight, then reverse-lexicographically within a weight.
    """
    if max_weight < 0:
        raise ValueError("max_weight must be >= 0")
    out = []
    for n in range(max_weight + 1):
        out.extend(partitions_of(n, r))
    return out


def step(m: Partition, j: int, direction: str) -> Optional[Partition]:
    """``m + gamma_j`` or ``m - gamma_j`` (``j`` is 1-based), or None when invalid."""
    r = len(m)
    if not 1 <= j <= r:
        raise ValueError(f"step index j={j} outside 1..{r}")
    if direction not in ("up", "down"):
        raise ValueError(f"direction must be 'up' or 'down', got {direction!r}")
    shifted = list(m)
    shifted[j - 1] += 1 if direction == "up" else -1
    return tuple(shifted) if is_partition(shifted) else None


def rho(params: DomainParams) -> Tuple[Fraction, ...]:
    r, a = params.r, params.a
    return tuple(a * (r + 1 - 2 * j) / 4 for j in range(1, r + 1))


def dominates(lam: Sequence[int], mu: Sequence[int]) -> bool:
    """Dominance order ``lam >= mu`` for partitions of equal weight."""
    if sum(lam) != sum(mu):
        return False
    acc_l = acc_m = 0
    for x, y in zip(lam, mu):
        acc_l += x
        acc_m += y
        if acc_l < acc_m:
            return False
    return True
