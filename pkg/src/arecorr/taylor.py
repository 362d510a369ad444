"""Truncated Taylor (jet) arithmetic for exact high-order derivatives.

A jet stores the Taylor coefficients c[0..K] of a scalar function at a
fixed center, so c[k] = f^(k)(center) / k!.  Arithmetic propagates the
coefficients through the exact truncated product/quotient/chain rules;
the only rounding is ordinary float rounding, so nested derivatives of
elementary expressions come out accurate to ~1 ulp per operation with no
symbolic algebra and no finite-difference step-size error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["Jet"]


@dataclass(frozen=True)
class Jet:
    center: float
    coeffs: tuple[float, ...]

    @classmethod
    def variable(cls, center: float, order: int) -> Jet:
        """The identity function x, truncated at the given order."""
        if order < 0:
            raise ValueError("jet order must be >= 0")
        if order == 0:
            return cls(center, (center,))
        return cls(center, (center, 1.0) + (0.0,) * (order - 1))

    @classmethod
    def constant(cls, value: float, center: float, order: int) -> Jet:
        if order < 0:
            raise ValueError("jet order must be >= 0")
        return cls(center, (value,) + (0.0,) * order)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def value(self) -> float:
        return self.coeffs[0]

    def _promote(self, other: Jet | float | int) -> Jet:
        if isinstance(other, Jet):
            if other.center != self.center:
                raise ValueError("jet centers differ")
            return other
        return Jet.constant(float(other), self.center, self.order)

    def __add__(self, other: Jet | float | int) -> Jet:
        o = self._promote(other)
        n = min(len(self.coeffs), len(o.coeffs))
        return Jet(self.center, tuple(self.coeffs[k] + o.coeffs[k] for k in range(n)))

    __radd__ = __add__

    def __neg__(self) -> Jet:
        return Jet(self.center, tuple(-c for c in self.coeffs))

    def __sub__(self, other: Jet | float | int) -> Jet:
        return self + (-self._promote(other))

    def __rsub__(self, other: float | int) -> Jet:
        return (-self) + other

    def __mul__(self, other: Jet | float | int) -> Jet:
        if not isinstance(other, Jet):
            f = float(other)
            return Jet(self.center, tuple(c * f for c in self.coeffs))
        o = self._promote(other)
        n = min(len(self.coeffs), len(o.coeffs))
        out = [0.0] * n
        for k in range(n):
            acc = 0.0
            for j in range(k + 1):
                acc += self.coeffs[j] * o.coeffs[k - j]
            out[k] = acc
        return Jet(self.center, tuple(out))

    __rmul__ = __mul__

    def __truediv__(self, other: Jet | float | int) -> Jet:
        if not isinstance(other, Jet):
            return self * (1.0 / float(other))
        o = self._promote(other)
        if o.coeffs[0] == 0.0:
            raise ZeroDivisionError("jet division by a jet with zero value")
        n = min(len(self.coeffs), len(o.coeffs))
        out = [0.0] * n
        for k in range(n):
            acc = self.coeffs[k]
            for j in range(k):
                acc -= out[j] * o.coeffs[k - j]
            out[k] = acc / o.coeffs[0]
        return Jet(self.center, tuple(out))

    def __rtruediv__(self, other: float | int) -> Jet:
        return Jet.constant(float(other), self.center, self.order) / self

    def __pow__(self, exponent: int) -> Jet:
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("only non-negative integer jet powers")
        result = Jet.constant(1.0, self.center, self.order)
        for _ in range(exponent):
            result = result * self
        return result

    def sqrt(self) -> Jet:
        if self.coeffs[0] <= 0.0:
            raise ValueError("jet sqrt needs a strictly positive value")
        out = [0.0] * len(self.coeffs)
        out[0] = math.sqrt(self.coeffs[0])
        for k in range(1, len(self.coeffs)):
            acc = self.coeffs[k]
            for j in range(1, k):
                acc -= out[j] * out[k - j]
            out[k] = acc / (2.0 * out[0])
        return Jet(self.center, tuple(out))

    def asin(self) -> Jet:
        # v' = u'/sqrt(1 - u^2), integrated coefficient-wise.
        if abs(self.coeffs[0]) >= 1.0:
            raise ValueError("jet asin needs |value| < 1")
        out = [0.0] * len(self.coeffs)
        out[0] = math.asin(self.coeffs[0])
        if len(self.coeffs) > 1:
            w = (1.0 - self * self).sqrt()
            q = self.deriv() / Jet(self.center, w.coeffs[:-1])
            for k in range(1, len(self.coeffs)):
                out[k] = q.coeffs[k - 1] / k
        return Jet(self.center, tuple(out))

    def deriv(self) -> Jet:
        if len(self.coeffs) < 2:
            raise ValueError("jet order too low to differentiate")
        return Jet(
            self.center,
            tuple((k + 1) * self.coeffs[k + 1] for k in range(len(self.coeffs) - 1)),
        )

    def derivative(self, k: int) -> float:
        """k-th derivative value at the center (coefficient times k!)."""
        if k < 0 or k > self.order:
            raise ValueError("derivative order outside stored jet order")
        return self.coeffs[k] * math.factorial(k)

    def __call__(self, t: float) -> float:
        """Evaluate the truncated polynomial at offset t from the center."""
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc
