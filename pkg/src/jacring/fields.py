"""Exact scalar fields: prime fields F_p and the rationals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import PreconditionError, PrimeReductionError

Scalar = Union[int, Fraction]

# Deterministic Miller-Rabin witnesses; correct for every n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

DEFAULT_PRIMES = (65537, 1000003)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Either ``F_p`` (``p`` an odd prime below 2**62) or ``QQ`` (``p is None``).

    Elements of ``F_p`` are plain ints in ``[0, p)``; elements of ``QQ`` are
    :class:`fractions.Fraction` (always in lowest terms).
    """

    p: Optional[int] = None

    def __post_init__(self):
        if self.p is None:
            return
        if not isinstance(self.p, int) or self.p <= 2 or self.p >= 2**62 or not is_prime(self.p):
            raise PreconditionError(f"field characteristic must be an odd prime < 2^62, got {self.p!r}")

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(p)

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(None)

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        t = text.strip().upper()
        if t in ("Q", "QQ", "RATIONALS"):
            return cls(None)
        if t.startswith("F_"):
            t = t[2:]
        elif t.startswith("F") or t.startswith("GF"):
            t = t.lstrip("GF")
        try:
            return cls(int(t))
        except ValueError:
            raise PreconditionError(f"cannot parse field {text!r}") from None

    @property
    def is_rational(self) -> bool:
        return self.p is None

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    def __str__(self) -> str:
        return "QQ" if self.p is None else f"F_{self.p}"

    def exceeds(self, bound: int) -> bool:
        """True when char = 0 or char > bound."""
        return self.p is None or self.p > bound

    # --- element arithmetic -------------------------------------------------

    @property
    def zero(self) -> Scalar:
        return 0 if self.p is not None else Fraction(0)

    @property
    def one(self) -> Scalar:
        return 1 if self.p is not None else Fraction(1)

    def __call__(self, x) -> Scalar:
        """Coerce an int, Fraction or ``"a/b"`` string into this field."""
        if isinstance(x, str):
            x = Fraction(x)
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            den = x.denominator % self.p
            if den == 0:
                raise PrimeReductionError(f"denominator of {x} vanishes mod {self.p}")
            return x.numerator * pow(den, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, x: Scalar) -> Scalar:
        if self.p is None:
            return 1 / Fraction(x)
        return pow(int(x), -1, self.p)

    def is_zero(self, x: Scalar) -> bool:
        return x == 0 if self.p is None else x % self.p == 0

    def signed(self, x: Scalar) -> Scalar:
        """Symmetric representative, for display."""
        if self.p is None:
            return x
        return x - self.p if x > self.p // 2 else x

    def to_json(self):
        return "QQ" if self.p is None else self.p


QQ = FieldSpec(None)
