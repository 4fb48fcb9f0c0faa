"""
Exact arithmetic in cyclotomic fields Q(ζ_N).

Numbers are stored in the power basis 1, ζ, ..., ζ^{φ(N)-1} modulo the N-th
cyclotomic polynomial, so equality inside one field is coefficient equality.
Operands living in different fields are coerced into Q(ζ_lcm) first.
"""
from fractions import Fraction
from functools import lru_cache
from math import gcd
import logging

from sympy import I, QQ, Symbol, cyclotomic_poly, exp, integer_nthroot, mobius, pi, totient

from app.exceptions import DivisionByZero, SchemaError

logger = logging.getLogger(__name__)

_z = Symbol('z')


def _lcm(a, b):
    return a * b // gcd(a, b)


@lru_cache(maxsize=None)
def euler_phi(n):
    return int(totient(n))


@lru_cache(maxsize=None)
def cyclotomic_coeffs(n):
    """Coefficients of Φ_n, lowest degree first (monic)"""
    coeffs = cyclotomic_poly(n, _z, polys=True).all_coeffs()
    return tuple(int(c) for c in reversed(coeffs))


@lru_cache(maxsize=None)
def power_table(n):
    """
    Reduced coordinates of ζ_n^k for k = 0..n-1.

    Returns:
        tuple of length n; entry k is a tuple of φ(n) Fractions
    """
    phi = euler_phi(n)
    poly = cyclotomic_coeffs(n)
    rows = []
    current = [Fraction(0)] * phi
    current[0] = Fraction(1)
    for _ in range(n):
        rows.append(tuple(current))
        # multiply by ζ and fold ζ^φ = -Σ c_j ζ^j
        top = current[-1]
        shifted = [Fraction(0)] + current[:-1]
        if top:
            for j in range(phi):
                shifted[j] -= top * poly[j]
        current = shifted
    return tuple(rows)


@lru_cache(maxsize=None)
def _embedding(source, target):
    """Images of the source power basis inside Q(ζ_target)"""
    step = target // source
    table = power_table(target)
    return tuple(table[(j * step) % target] for j in range(euler_phi(source)))


@lru_cache(maxsize=None)
def sympy_domain(n):
    """
    sympy field realizing Q(ζ_n), generated by ζ_n so that its modulus is Φ_n.

    Elimination over exact matrices runs in this domain.
    """
    if n <= 2:
        return QQ
    return QQ.algebraic_field(exp(2 * pi * I / n))


def _qq(value):
    return QQ(value.numerator, value.denominator)


def _fraction(value):
    return Fraction(int(value.numerator), int(value.denominator))


def _as_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f'Cannot build a cyclotomic number from {value!r}')


class CycNum:
    """An element of Q(ζ_N) in reduced power-basis coordinates"""

    __slots__ = ('conductor', 'coeffs')

    def __init__(self, conductor, coeffs):
        if conductor < 1:
            raise ValueError('conductor must be positive')
        coeffs = tuple(_as_fraction(c) for c in coeffs)
        if len(coeffs) != euler_phi(conductor):
            raise ValueError(
                f'expected {euler_phi(conductor)} coefficients for conductor {conductor}, got {len(coeffs)}'
            )
        self.conductor = conductor
        self.coeffs = coeffs

    # Construction

    @classmethod
    def rational(cls, value, conductor=1):
        value = _as_fraction(value)
        coeffs = [Fraction(0)] * euler_phi(conductor)
        coeffs[0] = value
        return cls(conductor, coeffs)

    @classmethod
    def zero(cls, conductor=1):
        return cls.rational(0, conductor)

    @classmethod
    def one(cls, conductor=1):
        return cls.rational(1, conductor)

    @classmethod
    def from_powers(cls, conductor, terms):
        """Build Σ c_k ζ_N^k from a mapping k -> rational"""
        phi = euler_phi(conductor)
        table = power_table(conductor)
        out = [Fraction(0)] * phi
        for k, c in terms.items():
            c = _as_fraction(c)
            if not c:
                continue
            row = table[k % conductor]
            for j in range(phi):
                if row[j]:
                    out[j] += c * row[j]
        return cls(conductor, out)

    @classmethod
    def coerce(cls, value):
        if isinstance(value, CycNum):
            return value
        return cls.rational(value)

    # Field plumbing

    def in_field(self, conductor):
        """Same number written in Q(ζ_conductor); conductor must be a multiple"""
        if conductor == self.conductor:
            return self
        if conductor % self.conductor:
            raise ValueError(f'Q(ζ_{self.conductor}) does not embed in Q(ζ_{conductor})')
        phi = euler_phi(conductor)
        out = [Fraction(0)] * phi
        for c, image in zip(self.coeffs, _embedding(self.conductor, conductor)):
            if not c:
                continue
            for j in range(phi):
                if image[j]:
                    out[j] += c * image[j]
        return CycNum(conductor, out)

    def to_domain(self, conductor=None):
        """This number as an element of sympy_domain(conductor)"""
        conductor = conductor or self.conductor
        coeffs = self.in_field(conductor).coeffs
        if conductor <= 2:
            return _qq(coeffs[0])
        # sympy lists coefficients from the highest power down
        return sympy_domain(conductor)([_qq(c) for c in reversed(coeffs)])

    @classmethod
    def from_domain(cls, conductor, element):
        if conductor <= 2:
            return cls.rational(_fraction(element), conductor)
        phi = euler_phi(conductor)
        coeffs = [_fraction(c) for c in reversed(element.to_list())]
        return cls(conductor, coeffs + [Fraction(0)] * (phi - len(coeffs)))

    @staticmethod
    def common(a, b):
        a = CycNum.coerce(a)
        b = CycNum.coerce(b)
        if a.conductor == b.conductor:
            return a, b
        n = _lcm(a.conductor, b.conductor)
        return a.in_field(n), b.in_field(n)

    # Predicates

    def is_zero(self):
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def is_rational(self):
        return not any(self.coeffs[1:])

    def as_rational(self):
        return self.coeffs[0] if self.is_rational() else None

    # Arithmetic

    def __neg__(self):
        return CycNum(self.conductor, [-c for c in self.coeffs])

    def __add__(self, other):
        try:
            a, b = CycNum.common(self, other)
        except TypeError:
            return NotImplemented
        return CycNum(a.conductor, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        try:
            a, b = CycNum.common(self, other)
        except TypeError:
            return NotImplemented
        return CycNum(a.conductor, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return CycNum.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = _as_fraction(other)
            return CycNum(self.conductor, [c * other for c in self.coeffs])
        try:
            a, b = CycNum.common(self, other)
        except TypeError:
            return NotImplemented
        if a.is_rational():
            return CycNum(b.conductor, [a.coeffs[0] * c for c in b.coeffs])
        if b.is_rational():
            return CycNum(a.conductor, [b.coeffs[0] * c for c in a.coeffs])
        n = a.conductor
        phi = euler_phi(n)
        acc = {}
        for i, x in enumerate(a.coeffs):
            if not x:
                continue
            for j, y in enumerate(b.coeffs):
                if y:
                    acc[i + j] = acc.get(i + j, 0) + x * y
        out = [Fraction(0)] * phi
        table = power_table(n)
        for k, v in acc.items():
            if not v:
                continue
            if k < phi:
                out[k] += v
                continue
            row = table[k % n]
            for j in range(phi):
                if row[j]:
                    out[j] += v * row[j]
        return CycNum(n, out)

    __rmul__ = __mul__

    def inverse(self):
        """
        Multiplicative inverse, computed in the sympy field of the conductor.

        Raises:
            DivisionByZero: when inverting 0
        """
        if self.is_zero():
            raise DivisionByZero('Cannot invert zero')
        if self.is_rational():
            return CycNum.rational(1 / self.coeffs[0], self.conductor)
        domain = sympy_domain(self.conductor)
        return CycNum.from_domain(self.conductor, domain.quo(domain.one, self.to_domain()))

    def __truediv__(self, other):
        other = CycNum.coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return CycNum.coerce(other) * self.inverse()

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = CycNum.one(self.conductor)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    # Comparison

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, CycNum):
            return NotImplemented
        a, b = CycNum.common(self, other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        # the normalized trace does not depend on the field we sit in
        return hash(self.normalized_trace())

    def normalized_trace(self):
        """Tr_{Q(ζ_N)/Q}(self) / φ(N)"""
        n = self.conductor
        total = Fraction(0)
        for k, c in enumerate(self.coeffs):
            if c:
                total += c * _root_trace(n, k)
        return total

    # Encoding

    def to_dict(self):
        return {
            'conductor': self.conductor,
            'coeffs': [f'{c.numerator}/{c.denominator}' for c in self.coeffs],
        }

    @classmethod
    def from_dict(cls, data):
        try:
            conductor = int(data['conductor'])
            coeffs = [Fraction(str(c)) for c in data['coeffs']]
            return cls(conductor, coeffs)
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f'Invalid cyclotomic number: {exc}', pointer='coeffs') from exc

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                terms.append(str(c))
                continue
            root = f'ζ{self.conductor}' + (f'^{k}' if k > 1 else '')
            if c == 1:
                terms.append(root)
            elif c == -1:
                terms.append(f'-{root}')
            else:
                terms.append(f'{c}·{root}')
        if not terms:
            return '0'
        return ' + '.join(terms).replace('+ -', '- ')

    def __repr__(self):
        return f'CycNum({self.conductor}, {self})'


@lru_cache(maxsize=None)
def _root_trace(n, k):
    d = n // gcd(k, n)
    return Fraction(int(mobius(d)), euler_phi(d))


def cyc_root(n, k=1):
    """ζ_n^k in canonical form"""
    if n < 1:
        raise ValueError('n must be positive')
    return CycNum.from_powers(n, {k % n: 1})


def order_of(z):
    """
    Multiplicative order of z, or None when z is not a root of unity.

    Roots of unity in Q(ζ_N) have order dividing lcm(2, N), so testing
    t ≤ 2N decides the question.
    """
    z = CycNum.coerce(z)
    if z.is_zero():
        return None
    power = z
    for t in range(1, 2 * z.conductor + 1):
        if power == 1:
            return t
        power = power * z
    return None


def root_exponent(z, n):
    """k with z = ζ_n^k, or None"""
    z = CycNum.coerce(z)
    for k in range(n):
        if cyc_root(n, k) == z:
            return k
    return None


def _rational_root(value, m):
    if value <= 0:
        return None
    num, exact_num = integer_nthroot(value.numerator, m)
    den, exact_den = integer_nthroot(value.denominator, m)
    if exact_num and exact_den:
        return Fraction(int(num), int(den))
    return None


def nth_root(z, m):
    """
    A cyclotomic m-th root of z, or None when none of the supported shapes fit.

    Supported: z = r·w with r a positive rational m-th power and w a root of
    unity of Q(ζ_N). The choice is deterministic (smallest exponent of w).
    """
    z = CycNum.coerce(z)
    if m == 1:
        return z
    if z.is_zero():
        return z
    n = 2 * z.conductor if z.conductor % 2 else z.conductor
    for j in range(n):
        ratio = (z / cyc_root(n, j)).as_rational()
        if ratio is None:
            continue
        root = _rational_root(ratio, m)
        if root is not None:
            return cyc_root(n * m, j) * root
    logger.info(f'No cyclotomic {m}-th root found for {z}')
    return None


def parse_scalar(value):
    """
    Accept a CycNum, an int/Fraction, a 'p/q' string or a CycNum dict.
    """
    if isinstance(value, CycNum):
        return value
    if isinstance(value, (int, Fraction)):
        return CycNum.rational(value)
    if isinstance(value, str):
        try:
            return CycNum.rational(Fraction(value))
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f'Invalid rational {value!r}') from exc
    if isinstance(value, dict):
        return CycNum.from_dict(value)
    raise SchemaError(f'Cannot read a scalar from {value!r}')
