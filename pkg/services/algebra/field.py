"""
Finite Field Arithmetic
Exact arithmetic in GF(p^k) on integer-encoded elements, backed by galois.

An element is a Python int in [0, p^k): the base-p digits of the int are the
coefficients of its polynomial-basis representation, lowest degree first
(galois' "int" representation). The modulus of GF(p^k) is the Conway
polynomial for (p, k), so encodings are reproducible across runs and tools.
"""

from functools import lru_cache
from typing import List, Optional, Sequence

import galois
import numpy as np


class Field:
    """
    GF(p^k) with table-driven scalar arithmetic.

    Scalar operations run on log/antilog tables built once from galois; bulk
    work uses the galois FieldArray class exposed as ``Field.GF``.
    """

    def __init__(self, p: int, k: int = 1):
        """
        Build the field and its lookup tables.

        Args:
            p: Prime characteristic
            k: Extension degree (>= 1)
        """
        if not galois.is_prime(p):
            raise ValueError(f"Characteristic must be prime, got p={p}")
        if k < 1:
            raise ValueError(f"Extension degree must be >= 1, got k={k}")

        self.p = p
        self.k = k
        self.order = p**k

        if k == 1:
            self.GF = galois.GF(p)
        else:
            self.GF = galois.GF(self.order, irreducible_poly=galois.conway_poly(p, k))
        self.modulus = self.GF.irreducible_poly

        self._build_tables()

    def _build_tables(self):
        """Precompute exp/log tables and, for odd p, negation and Zech logarithms."""
        q1 = self.order - 1
        alpha = self.GF.primitive_element
        powers = alpha ** np.arange(q1)
        exp = self.to_ints(powers)

        log = [0] * self.order
        for i, v in enumerate(exp):
            log[v] = i

        # doubled so products of two logs never need a reduction
        self._exp = exp + exp
        self._log = log
        self._q1 = q1

        if self.p != 2:
            self._neg = self.to_ints(-self.GF.elements)
            one_plus = self.to_ints(self.GF(1) + powers)
            self._zech = [log[v] if v else -1 for v in one_plus]

    def __repr__(self) -> str:
        return f"Field(p={self.p}, k={self.k})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self) -> int:
        return hash((self.p, self.k))

    # Scalar arithmetic

    def add(self, a: int, b: int) -> int:
        if a == 0:
            return b
        if b == 0:
            return a
        if self.p == 2:
            return a ^ b
        la = self._log[a]
        z = self._zech[(self._log[b] - la) % self._q1]
        if z < 0:
            return 0
        return self._exp[la + z]

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self._exp[(self._q1 - self._log[a]) % self._q1]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def power(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e > 0 else 1
        return self._exp[(self._log[a] * e) % self._q1]

    def sqrt(self, a: int) -> Optional[int]:
        """Return a square root of a, or None when a is a non-square."""
        if a == 0:
            return 0
        if self.p == 2:
            return self.power(a, self.order // 2)
        la = self._log[a]
        if la % 2:
            return None
        return self._exp[la // 2]

    def from_int(self, n: int) -> int:
        """Image of an integer in the prime subfield."""
        return n % self.p

    # Encodings

    def coefficients(self, a: int) -> List[int]:
        """Polynomial-basis coefficients of a, lowest degree first."""
        digits = []
        for _ in range(self.k):
            a, d = divmod(a, self.p)
            digits.append(d)
        return digits

    def from_coefficients(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) != self.k:
            raise ValueError(f"Expected {self.k} coefficients, got {len(coeffs)}")
        value = 0
        for c in reversed(coeffs):
            if not 0 <= c < self.p:
                raise ValueError(f"Coefficient {c} outside F_{self.p}")
            value = value * self.p + c
        return value

    # Arrays

    def array(self, values) -> galois.FieldArray:
        return self.GF(np.asarray(values, dtype=np.int64))

    def zeros(self, shape) -> galois.FieldArray:
        return self.GF.Zeros(shape)

    @staticmethod
    def to_ints(arr) -> list:
        """Plain int list (nested for 2-D) from a FieldArray."""
        return np.asarray(arr.view(np.ndarray)).tolist()

    def random(self, rng: np.random.Generator, size, nonzero: bool = False) -> galois.FieldArray:
        """Uniform random elements drawn from a seeded numpy Generator."""
        low = 1 if nonzero else 0
        return self.GF(rng.integers(low, self.order, size=size))


@lru_cache(maxsize=None)
def get_field(p: int, k: int = 1) -> Field:
    """Shared Field instance for (p, k)."""
    return Field(p, k)


def field_ops(a: int, b: int, op: str, field: Field) -> int:
    """
    Apply one field operation.

    Args:
        a: First operand
        b: Second operand (ignored by unary operations)
        op: One of add, sub, mul, div, inv, neg
        field: Field to compute in

    Returns:
        Result as an integer-encoded element
    """
    if op == "add":
        return field.add(a, b)
    if op == "sub":
        return field.sub(a, b)
    if op == "mul":
        return field.mul(a, b)
    if op == "div":
        return field.div(a, b)
    if op == "inv":
        return field.inv(a)
    if op == "neg":
        return field.neg(a)
    raise ValueError(f"Unknown field operation: {op}")


def parse_field(text: str) -> Field:
    """Parse a 'p,k' field spec such as '2,15'."""
    try:
        parts = [int(x) for x in text.split(",")]
    except ValueError:
        raise ValueError(f"Field must look like 'p,k', got '{text}'")
    if len(parts) == 1:
        parts.append(1)
    if len(parts) != 2:
        raise ValueError(f"Field must look like 'p,k', got '{text}'")
    return get_field(parts[0], parts[1])
