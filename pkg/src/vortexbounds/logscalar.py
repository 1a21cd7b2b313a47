"""Extended-range nonnegative scalars stored as natural logarithms.

The growth-bound formulas multiply constants like 3.99e26 / nu^4.02 and
exponentiate sums that themselves exceed 1e7, far past double range.  A
LogScalar keeps ln(value) instead: multiplication and powers are exact in
that representation, addition uses log-sum-exp, and exponentiation saturates
into an overflow flag once the *logarithm* of the result would leave the
range where another exponential is representable (ln_value > 700).  An
overflowed value compares greater than every finite one.
"""

from __future__ import annotations

import math
import sys
from typing import Union

__all__ = ["LogScalar", "EXP_LN_LIMIT"]

EXP_LN_LIMIT = 700.0
_LN_FLOAT_MAX = math.log(sys.float_info.max)

Number = Union[int, float, "LogScalar"]


class LogScalar:
    """Nonnegative extended-range number held as its natural logarithm."""

    __slots__ = ("ln_value", "is_zero", "overflow")

    def __init__(self, ln_value: float, *, is_zero: bool = False, overflow: bool = False):
        if is_zero and overflow:
            raise ValueError("a LogScalar cannot be both zero and overflowed")
        self.ln_value = 0.0 if (is_zero or overflow) else float(ln_value)
        self.is_zero = bool(is_zero)
        self.overflow = bool(overflow)
        if not (is_zero or overflow) and math.isnan(self.ln_value):
            raise ValueError("ln_value must not be NaN")

    # -- constructors ------------------------------------------------------
    @classmethod
    def from_value(cls, x: float) -> "LogScalar":
        x = float(x)
        if x < 0:
            raise ValueError(f"LogScalar holds nonnegative values only, got {x}")
        if x == 0.0:
            return cls.zero()
        if math.isinf(x):
            return cls.overflowed()
        return cls(math.log(x))

    @classmethod
    def from_ln(cls, ln_value: float) -> "LogScalar":
        if math.isinf(ln_value):
            return cls.overflowed() if ln_value > 0 else cls.zero()
        return cls(float(ln_value))

    @classmethod
    def zero(cls) -> "LogScalar":
        return cls(0.0, is_zero=True)

    @classmethod
    def one(cls) -> "LogScalar":
        return cls(0.0)

    @classmethod
    def overflowed(cls) -> "LogScalar":
        return cls(0.0, overflow=True)

    # -- conversions -------------------------------------------------------
    def to_float(self) -> float:
        if self.is_zero:
            return 0.0
        if self.overflow or self.ln_value > _LN_FLOAT_MAX:
            return math.inf
        return math.exp(self.ln_value)

    @staticmethod
    def _coerce(x: Number) -> "LogScalar":
        return x if isinstance(x, LogScalar) else LogScalar.from_value(x)

    # -- algebra -----------------------------------------------------------
    def __mul__(self, other: Number) -> "LogScalar":
        other = self._coerce(other)
        if self.is_zero or other.is_zero:
            return LogScalar.zero()
        if self.overflow or other.overflow:
            return LogScalar.overflowed()
        return LogScalar.from_ln(self.ln_value + other.ln_value)

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> "LogScalar":
        other = self._coerce(other)
        if other.is_zero:
            raise ZeroDivisionError("division by a zero LogScalar")
        if self.is_zero or other.overflow:
            return LogScalar.zero()
        if self.overflow:
            return LogScalar.overflowed()
        return LogScalar.from_ln(self.ln_value - other.ln_value)

    def __add__(self, other: Number) -> "LogScalar":
        other = self._coerce(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.overflow or other.overflow:
            return LogScalar.overflowed()
        hi = max(self.ln_value, other.ln_value)
        lo = min(self.ln_value, other.ln_value)
        return LogScalar.from_ln(hi + math.log1p(math.exp(lo - hi)))

    __radd__ = __add__

    def __pow__(self, p: float) -> "LogScalar":
        p = float(p)
        if p == 0.0:
            return LogScalar.one()
        if self.is_zero:
            if p < 0:
                raise ZeroDivisionError("zero LogScalar raised to a negative power")
            return LogScalar.zero()
        if self.overflow:
            return LogScalar.overflowed() if p > 0 else LogScalar.zero()
        return LogScalar.from_ln(p * self.ln_value)

    def exp(self) -> "LogScalar":
        """e^(value); saturates when ln_value exceeds EXP_LN_LIMIT."""
        if self.is_zero:
            return LogScalar.one()
        if self.overflow or self.ln_value > EXP_LN_LIMIT:
            return LogScalar.overflowed()
        return LogScalar.from_ln(math.exp(self.ln_value))

    # -- order -------------------------------------------------------------
    def _key(self) -> tuple[int, float]:
        if self.is_zero:
            return (-1, 0.0)
        if self.overflow:
            return (1, 0.0)
        return (0, self.ln_value)

    def __lt__(self, other: Number) -> bool:
        a, b = self._key(), self._coerce(other)._key()
        return a[0] < b[0] or (a[0] == b[0] and a[1] < b[1])

    def __le__(self, other: Number) -> bool:
        return self < other or self == other

    def __gt__(self, other: Number) -> bool:
        return self._coerce(other) < self

    def __ge__(self, other: Number) -> bool:
        return self._coerce(other) <= self

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, (LogScalar, int, float)):
            return NotImplemented
        return self._key() == self._coerce(other)._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        if self.is_zero:
            return "LogScalar(0)"
        if self.overflow:
            return "LogScalar(overflow)"
        return f"LogScalar(ln={self.ln_value!r})"
