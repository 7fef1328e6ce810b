"""
Universal Polynomial
The degree-p^k bipolynomial 5-cocycle as a polynomial in the elementary
symmetric functions of the signed face values t_k = ε_k Q_k.

The power sum Σ t_k^{p^k} is expanded by Newton's identities with e_1 = 0
(δQ = 0) and e_i = 0 beyond the number of faces. Every integer coefficient
must be divisible by p; the quotient reduced mod p is the polynomial.
"""

from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import sympy

from services.algebra.field import Field
from services.config import get_settings

N_FACES = 6


def newton_power_sum(n: int, e: Sequence) -> sympy.Expr:
    """
    p_n in terms of e_1..e_m (``e[i]`` is e_i, ``e[0]`` unused).

    p_n = Σ_{i=1}^{n-1} (-1)^{i-1} e_i p_{n-i} + (-1)^{n-1} n e_n
    """
    m = len(e) - 1
    sums = [sympy.Integer(0)]
    for j in range(1, n + 1):
        total = sympy.Integer(0)
        for i in range(1, j):
            if i <= m:
                total += (-1) ** (i - 1) * e[i] * sums[j - i]
        if j <= m:
            total += (-1) ** (j - 1) * j * e[j]
        sums.append(sympy.expand(total))
    return sums[n]


class UniversalPolynomial:
    """
    U(e_2, ..., e_6) over F_p with U(e(t)) = (1/p) Σ ε_k Q_k^{p^k} mod p.

    For p = 2 the sign bookkeeping leaves an extra Σ_k ε̃_k Q_k^{2^k} term,
    added by ``evaluate``.
    """

    def __init__(self, p: int, k: int, terms: Dict[Tuple[int, ...], int], symbols: Tuple[sympy.Symbol, ...]):
        self.p = p
        self.k = k
        self.degree = p**k
        self.terms = terms
        self.symbols = symbols

    def as_expr(self) -> sympy.Expr:
        expr = sympy.Integer(0)
        for exponents, coeff in self.terms.items():
            monomial = sympy.Integer(coeff)
            for symbol, a in zip(self.symbols, exponents):
                monomial *= symbol**a
            expr += monomial
        return expr

    def __repr__(self) -> str:
        return f"UniversalPolynomial(p={self.p}, k={self.k}: {self.as_expr()} mod {self.p})"

    def evaluate(self, q_values: Sequence[int], field: Field) -> int:
        """
        Value on the six Q values of a 5-simplex (omission order).

        Args:
            q_values: Q_0..Q_5 as integer-encoded elements of ``field``
            field: A field of characteristic p
        """
        if field.p != self.p:
            raise ValueError(f"Polynomial over F_{self.p} evaluated in {field}")
        if len(q_values) != N_FACES:
            raise ValueError(f"Expected {N_FACES} face values, got {len(q_values)}")

        signed = [int(q) if k % 2 == 0 else field.neg(int(q)) for k, q in enumerate(q_values)]
        e = elementary_symmetric(signed, field)

        total = 0
        for exponents, coeff in self.terms.items():
            term = field.from_int(coeff)
            for i, a in enumerate(exponents, start=2):
                if a:
                    term = field.mul(term, field.power(e[i], a))
            total = field.add(total, term)

        if self.p == 2:
            for k, q in enumerate(q_values):
                if k % 2 == 0:
                    total = field.add(total, field.power(int(q), self.degree))
        return total


def elementary_symmetric(values: Sequence[int], field: Field) -> List[int]:
    """e_0..e_n of the given field elements."""
    e = [1] + [0] * len(values)
    for count, t in enumerate(values, start=1):
        for j in range(count, 0, -1):
            e[j] = field.add(e[j], field.mul(t, e[j - 1]))
    return e


@lru_cache(maxsize=None)
def _derive(p: int, k: int) -> UniversalPolynomial:
    n = p**k
    symbols = sympy.symbols(f"e2:{N_FACES + 1}")
    e = [None, sympy.Integer(0)] + list(symbols)
    power_sum = newton_power_sum(n, e)

    terms: Dict[Tuple[int, ...], int] = {}
    if power_sum != 0:
        poly = sympy.Poly(power_sum, *symbols)
        for exponents, coeff in poly.terms():
            coeff = int(coeff)
            if coeff % p:
                raise ArithmeticError(
                    f"Coefficient {coeff} of {exponents} in p_{n} is not divisible by {p}"
                )
            reduced = (coeff // p) % p
            if reduced:
                terms[tuple(exponents)] = reduced
    return UniversalPolynomial(p, k, terms, tuple(symbols))


def universal_polynomial(p: int, k: int, cap: Optional[int] = None) -> UniversalPolynomial:
    """
    Derive the universal polynomial for (p, k).

    Args:
        p: Prime characteristic
        k: Exponent; the cocycle has degree p^k in each coloring
        cap: Largest allowed p^k (default from settings)

    Raises:
        ValueError: if p^k exceeds the cap
    """
    cap = get_settings().polynomial_cap if cap is None else cap
    if p**k > cap:
        raise ValueError(f"p^k = {p**k} exceeds the polynomial cap {cap}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return _derive(p, k)
