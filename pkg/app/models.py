from django.db import models


# Choice Enums
# Nothing here is persisted; the tags travel inside JSON documents.

class GradingKind(models.TextChoices):
    ELEMENTARY = 'elementary', 'Elementary'
    DIVISION = 'division', 'Division'
    MIXED = 'mixed', 'Mixed'


class Family(models.TextChoices):
    TAFT = 'taft', 'Taft algebra'
    DD_TAFT = 'dd_taft', 'Drinfeld double of a Taft algebra'
    UQ_SL2 = 'uq_sl2', 'Small quantum group u_q(sl2)'
    BOOK = 'book', 'Book algebra'
    P3 = 'p3', 'T_p tensor group algebra of Z_p'
    CUSTOM = 'custom', 'Custom datum'


class Coproduct(models.TextChoices):
    GROUP_LIKE = 'group_like', 'Group-like'
    # x ⊗ 1 + a ⊗ x, the datum convention
    LEFT = 'one_a', '(1,a)-primitive'
    # x ⊗ b + 1 ⊗ x, translated on construction
    RIGHT = 'a_one', '(a,1)-primitive'


class Verdict(models.TextChoices):
    PASS = 'pass', 'Pass'
    FAIL = 'fail', 'Fail'


class IsoStatus(models.TextChoices):
    ISOMORPHIC = 'isomorphic', 'Isomorphic'
    NOT_ISOMORPHIC = 'not_isomorphic', 'Not isomorphic'
    UNDECIDED = 'undecided', 'Undecided'


class Direction(models.TextChoices):
    TO_DATUM = 'to_datum', 'To (1,a^-1)-primitive'
    FROM_DATUM = 'from_datum', 'To (a,1)-primitive'


class RelationKind(models.TextChoices):
    ORDER = 'order', 'Group generator order'
    COMMUTE = 'commute', 'Group generators commute'
    SKEW_COMMUTE = 'skew_commute', 'Group-like skew-commutes with skew-primitive'
    POWER = 'power', 'Power of a skew-primitive'
    CROSS = 'cross', 'Cross relation of two skew-primitives'


class DT2Variant(models.TextChoices):
    NILPOTENT = 'nilpotent', 'Nilpotent u(X)'
    NONNILPOTENT = 'nonnilpotent', 'Non-nilpotent u(X)'
    NONNILPOTENT_GENERIC = 'nonnilpotent_generic', 'Non-nilpotent, 4αβ ≠ 1 branch'
