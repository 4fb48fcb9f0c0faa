"""
Dense matrices over cyclotomic fields with exact kernels.

``@`` is the matrix product and ``*`` scales by a number. Products skip
zero entries, which keeps matrix-unit and monomial computations cheap.
"""
from fractions import Fraction
from itertools import product
from math import lcm
import logging

from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

from app.exceptions import NotPrimitiveRoot, SchemaError, ShapeMismatch, SingularMatrix
from app.services.cyclo import CycNum, order_of, parse_scalar, sympy_domain

logger = logging.getLogger(__name__)

_ZERO = CycNum.zero()
_ONE = CycNum.one()


def _scalar(value):
    return value if isinstance(value, CycNum) else CycNum.coerce(value)


def _conductor(values):
    return lcm(1, *(v.conductor for v in values))


def _from_domain_rows(dm, conductor):
    return [[CycNum.from_domain(conductor, v) for v in row] for row in dm.to_list()]


class ExactMatrix:
    __slots__ = ('rows', 'cols', 'entries')

    def __init__(self, entries):
        entries = tuple(tuple(_scalar(v) for v in row) for row in entries)
        if not entries or not entries[0]:
            raise ShapeMismatch('A matrix needs at least one row and one column')
        width = len(entries[0])
        if any(len(row) != width for row in entries):
            raise ShapeMismatch('Ragged matrix rows')
        self.rows = len(entries)
        self.cols = width
        self.entries = entries

    # Constructors

    @classmethod
    def zeros(cls, rows, cols=None):
        cols = rows if cols is None else cols
        return cls([[_ZERO] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n):
        return cls.scalar(n, _ONE)

    @classmethod
    def scalar(cls, n, value):
        value = _scalar(value)
        return cls([[value if i == j else _ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def diag(cls, values):
        values = [_scalar(v) for v in values]
        n = len(values)
        return cls([[values[i] if i == j else _ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def unit(cls, n, i, j, value=1):
        """Matrix unit E_ij (zero-based indices)"""
        value = _scalar(value)
        return cls([[value if (r, c) == (i, j) else _ZERO for c in range(n)] for r in range(n)])

    @classmethod
    def block(cls, blocks):
        """Assemble from a grid of ExactMatrix blocks"""
        rows = []
        for block_row in blocks:
            height = block_row[0].rows
            if any(b.rows != height for b in block_row):
                raise ShapeMismatch('Blocks in one block row must have equal heights')
            for r in range(height):
                rows.append([v for b in block_row for v in b.entries[r]])
        return cls(rows)

    @classmethod
    def from_vector(cls, vector, n):
        return cls([vector[i * n:(i + 1) * n] for i in range(n)])

    # Shape

    @property
    def shape(self):
        return (self.rows, self.cols)

    def is_square(self):
        return self.rows == self.cols

    def _require_square(self):
        if not self.is_square():
            raise ShapeMismatch(f'Square matrix required, got {self.rows}x{self.cols}')

    def __getitem__(self, index):
        i, j = index
        return self.entries[i][j]

    def flatten(self):
        return [v for row in self.entries for v in row]

    def nonzero(self):
        return [(i, j, v) for i, row in enumerate(self.entries) for j, v in enumerate(row) if v]

    # Arithmetic

    def __add__(self, other):
        if self.shape != other.shape:
            raise ShapeMismatch(f'Cannot add {self.shape} and {other.shape}')
        return ExactMatrix([
            [a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)
        ])

    def __sub__(self, other):
        if self.shape != other.shape:
            raise ShapeMismatch(f'Cannot subtract {other.shape} from {self.shape}')
        return ExactMatrix([
            [a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)
        ])

    def __neg__(self):
        return ExactMatrix([[-v for v in row] for row in self.entries])

    def __mul__(self, value):
        if isinstance(value, ExactMatrix):
            return NotImplemented
        value = _scalar(value)
        if value.is_zero():
            return ExactMatrix.zeros(self.rows, self.cols)
        return ExactMatrix([[v * value if v else v for v in row] for row in self.entries])

    __rmul__ = __mul__

    def scale(self, value):
        return self * value

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ShapeMismatch(f'Cannot multiply {self.shape} by {other.shape}')
        other_rows = [
            [(j, v) for j, v in enumerate(row) if v] for row in other.entries
        ]
        out = []
        for row in self.entries:
            acc = {}
            for k, a in enumerate(row):
                if not a:
                    continue
                for j, b in other_rows[k]:
                    prod_ = a * b
                    acc[j] = acc[j] + prod_ if j in acc else prod_
            out.append([acc.get(j, _ZERO) for j in range(other.cols)])
        return ExactMatrix(out)

    def __pow__(self, exponent):
        self._require_square()
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = ExactMatrix.identity(self.rows)
        base = self
        while exponent:
            if exponent & 1:
                result = result @ base
            base = base @ base
            exponent >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for r, s in zip(self.entries, other.entries) for a, b in zip(r, s)
        )

    def __hash__(self):
        return hash((self.shape, tuple(hash(v) for v in self.flatten())))

    def transpose(self):
        return ExactMatrix([list(col) for col in zip(*self.entries)])

    def kron(self, other):
        rows = []
        for a_row in self.entries:
            for b_row in other.entries:
                rows.append([a * b if a and b else _ZERO for a in a_row for b in b_row])
        return ExactMatrix(rows)

    def trace(self):
        self._require_square()
        total = _ZERO
        for i in range(self.rows):
            total = total + self.entries[i][i]
        return total

    # Predicates

    def is_zero(self):
        return all(not v for row in self.entries for v in row)

    def as_scalar(self):
        """c when the matrix equals c·I, else None"""
        self._require_square()
        c = self.entries[0][0]
        for i, row in enumerate(self.entries):
            for j, v in enumerate(row):
                if i == j:
                    if v != c:
                        return None
                elif v:
                    return None
        return c

    def ratio_to(self, other):
        """c with self = c·other, or None (other must be nonzero)"""
        if self.shape != other.shape:
            raise ShapeMismatch(f'Cannot compare {self.shape} with {other.shape}')
        c = None
        for r, s in zip(self.entries, other.entries):
            for a, b in zip(r, s):
                if not b:
                    if a:
                        return None
                    continue
                if c is None:
                    c = a / b
                elif a != c * b:
                    return None
        return c if c is not None else (_ZERO if self.is_zero() else None)

    # Elimination

    def _domain_matrix(self):
        conductor = _conductor(self.flatten())
        domain = sympy_domain(conductor)
        rows = [[v.to_domain(conductor) for v in row] for row in self.entries]
        return DomainMatrix(rows, self.shape, domain), conductor

    def rank(self):
        dm, _ = self._domain_matrix()
        return dm.rank()

    def det(self):
        self._require_square()
        dm, conductor = self._domain_matrix()
        return CycNum.from_domain(conductor, dm.det())

    def inverse(self):
        """
        Raises:
            SingularMatrix: when the determinant vanishes
        """
        self._require_square()
        dm, conductor = self._domain_matrix()
        try:
            inv = dm.inv()
        except DMNonInvertibleMatrixError:
            raise SingularMatrix(f'Matrix of size {self.rows} is singular')
        return ExactMatrix(_from_domain_rows(inv, conductor))

    def is_invertible(self):
        self._require_square()
        return self.rank() == self.rows

    # Encoding

    def to_dict(self):
        return [[v.to_dict() for v in row] for row in self.entries]

    def pretty(self):
        return [[str(v) for v in row] for row in self.entries]

    @classmethod
    def from_json(cls, data, pointer='matrix'):
        if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
            raise SchemaError('A matrix is a non-empty list of rows', pointer=pointer)
        rows = []
        for i, row in enumerate(data):
            parsed = []
            for j, value in enumerate(row):
                try:
                    parsed.append(parse_scalar(value))
                except SchemaError as exc:
                    raise SchemaError(exc.message, pointer=f'{pointer}.{i}.{j}') from exc
            rows.append(parsed)
        try:
            return cls(rows)
        except ShapeMismatch as exc:
            raise SchemaError(exc.message, pointer=pointer) from exc

    def __repr__(self):
        return f'ExactMatrix({self.pretty()})'


def conjugate(c, m):
    """C·M·C⁻¹"""
    return c @ m @ c.inverse()


def commutator_scalar(a, b):
    """c with a·b = c·b·a, or None"""
    return (a @ b).ratio_to(b @ a)


def clock_shift(n, omega):
    """
    Sylvester clock C = diag(1, ω, ..., ω^{n-1}) and shift S (1s on the
    superdiagonal and in the bottom-left corner); S·C = ω·C·S.

    Raises:
        NotPrimitiveRoot: when ω does not have order n
    """
    omega = _scalar(omega)
    if order_of(omega) != n:
        raise NotPrimitiveRoot(f'{omega} is not a primitive {n}-th root of unity', n=n)
    clock = ExactMatrix.diag([omega ** k for k in range(n)])
    shift = ExactMatrix([[_ONE if j == (i + 1) % n else _ZERO for j in range(n)] for i in range(n)])
    return clock, shift


def permutation_matrix(perm):
    """P with P·e_j = e_{perm[j]}"""
    n = len(perm)
    return ExactMatrix([[_ONE if perm[j] == i else _ZERO for j in range(n)] for i in range(n)])


# Linear systems on coordinate vectors

def rref(rows, ncols):
    """
    Reduced row echelon form of a list of CycNum rows.

    Returns:
        (nonzero rows, pivot columns)
    """
    if not rows:
        return [], []
    rows = [[_scalar(v) for v in row] for row in rows]
    conductor = _conductor(v for row in rows for v in row)
    dm = DomainMatrix(
        [[v.to_domain(conductor) for v in row] for row in rows], (len(rows), ncols), sympy_domain(conductor),
    )
    reduced, pivots = dm.rref()
    return _from_domain_rows(reduced[:len(pivots), :], conductor), list(pivots)


def span_basis(vectors, ncols):
    """Echelonized basis (leading entries 1) of the span of ``vectors``"""
    rows, _ = rref([list(v) for v in vectors], ncols)
    return rows


def in_span(basis, pivots, vector):
    """Reduce ``vector`` by an echelon basis; True when the remainder vanishes"""
    rest = list(vector)
    for row, col in zip(basis, pivots):
        f = rest[col]
        if f:
            rest = [a - f * b if b else a for a, b in zip(rest, row)]
    return not any(rest)


def nullspace(equations, ncols):
    """
    Basis of {v : Σ_j eq[j]·v[j] = 0 for every equation}.

    Equations are given sparsely as dicts column -> CycNum. Each basis vector
    has a 1 at one free column and zeros at the others.
    """
    equations = [{j: v for j, v in eq.items() if v} for eq in equations]
    equations = [eq for eq in equations if eq]
    rows, pivots = [], []
    if equations:
        conductor = _conductor(v for eq in equations for v in eq.values())
        sparse = {
            i: {j: v.to_domain(conductor) for j, v in eq.items()} for i, eq in enumerate(equations)
        }
        dm = DomainMatrix(sparse, (len(equations), ncols), sympy_domain(conductor))
        reduced, pivots = dm.rref()
        rows = _from_domain_rows(reduced[:len(pivots), :], conductor)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [_ZERO] * ncols
        vec[free] = _ONE
        for prow, pcol in zip(rows, pivots):
            f = prow[free]
            if f:
                vec[pcol] = -f
        basis.append(vec)
    return basis


def matrix_units(n):
    return [ExactMatrix.unit(n, i, j) for i, j in product(range(n), repeat=2)]


def random_invertible(n, rng, conductor=1, low=-2, high=2):
    """Random invertible matrix with small entries in Q(ζ_conductor)"""
    while True:
        rows = []
        for _ in range(n):
            row = []
            for _ in range(n):
                terms = {k: rng.randint(low, high) for k in range(min(conductor, 2))}
                row.append(CycNum.from_powers(conductor, terms) if conductor > 1
                           else CycNum.rational(Fraction(rng.randint(low, high))))
            rows.append(row)
        candidate = ExactMatrix(rows)
        if candidate.is_invertible():
            return candidate