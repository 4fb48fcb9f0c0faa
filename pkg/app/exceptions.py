"""
Domain errors raised by the exact-arithmetic services.

Every error carries a short ``code`` and a ``details`` dict so management
commands can emit them as JSON without string parsing.
"""


class HopfActionError(Exception):
    """Base class for every error raised by the services"""

    code = 'hopf_action_error'

    def __init__(self, message='', **details):
        super().__init__(message or self.code)
        self.message = message or self.code
        self.details = details

    def to_dict(self):
        return {
            'error': self.code,
            'message': self.message,
            'details': {key: str(value) for key, value in sorted(self.details.items())},
        }


# Arithmetic

class DivisionByZero(HopfActionError, ZeroDivisionError):
    code = 'division_by_zero'


class SingularMatrix(HopfActionError, ArithmeticError):
    code = 'singular_matrix'


class ShapeMismatch(HopfActionError, ValueError):
    code = 'shape_mismatch'


class NotPrimitiveRoot(HopfActionError, ValueError):
    code = 'not_primitive_root'


# Groups and gradings

class ParentMismatch(HopfActionError, ValueError):
    code = 'parent_mismatch'


class NoSolution(HopfActionError, ValueError):
    code = 'no_solution'


class BadBicharacter(HopfActionError, ValueError):
    code = 'bad_bicharacter'


class BadSupportShape(HopfActionError, ValueError):
    code = 'bad_support_shape'


class DegenerateBicharacter(HopfActionError, ValueError):
    code = 'degenerate_bicharacter'


class NotCommutingAction(HopfActionError, ValueError):
    code = 'not_commuting_action'


class NotFiniteOrder(HopfActionError, ValueError):
    code = 'not_finite_order'


class MalformedGrading(HopfActionError, ValueError):
    code = 'malformed_grading'


# Presentations

class DatumViolation(HopfActionError, ValueError):
    """Raised with every violated datum rule, not only the first one"""

    code = 'datum_violation'

    def __init__(self, violations):
        self.violations = list(violations)
        summary = '; '.join(v['message'] for v in self.violations)
        super().__init__(summary, violations=self.violations)

    def to_dict(self):
        return {
            'error': self.code,
            'message': self.message,
            'details': {'violations': self.violations},
        }


class BadOrder(HopfActionError, ValueError):
    code = 'bad_order'


# Actions

class UnknownGenerator(HopfActionError, KeyError):
    code = 'unknown_generator'

    def __str__(self):
        return self.message


class NotInnerCompatible(HopfActionError, ValueError):
    code = 'not_inner_compatible'


class CertificationFailure(HopfActionError):
    code = 'certification_failure'


class InconsistentDegree(HopfActionError):
    code = 'inconsistent_degree'


# Catalogs

class NotDivisible(HopfActionError, ValueError):
    code = 'not_divisible'


class ChiOutsideSupport(HopfActionError, ValueError):
    code = 'chi_outside_support'


class ConditionFailed(HopfActionError, ValueError):
    code = 'condition_failed'


class ConstraintViolated(HopfActionError, ValueError):
    code = 'constraint_violated'


class ShapeViolation(HopfActionError, ValueError):
    code = 'shape_violation'


class RecurrenceInconsistent(HopfActionError):
    code = 'recurrence_inconsistent'

    def __init__(self, message, residual=None, **details):
        super().__init__(message, **details)
        self.residual = residual


class TrivialSkewPart(HopfActionError):
    code = 'trivial_skew_part'


# Input documents

class SchemaError(HopfActionError, ValueError):
    """Malformed input document; ``pointer`` names the offending field"""

    code = 'schema_error'

    def __init__(self, message, pointer=''):
        super().__init__(message, pointer=pointer)
        self.pointer = pointer
