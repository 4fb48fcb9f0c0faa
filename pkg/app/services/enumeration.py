"""
Desk-scale enumeration of catalog entries into isomorphism classes.

Entries are built from a family name and a parameter grid, compared pairwise
with iso_test on a thread pool, and merged with a union-find over the
isomorphic pairs. Undecided pairs never merge.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, product
import logging

from django.conf import settings

from app.exceptions import HopfActionError, ParentMismatch, SchemaError, ShapeMismatch
from app.models import IsoStatus
from app.services.catalogs import (
    catalog_dd_division, catalog_dt2_mixed, catalog_pp3, catalog_taft_m3,
    catalog_taft_nonsingular, dd_elementary_x, uqsl2_m2,
)
from app.services.cyclo import CycNum, cyc_root
from app.services.iso import IsoVerdict, iso_test

logger = logging.getLogger(__name__)

MAX_GRID_POINTS = 100


def _dd_division_point(n, m, pi, gamma=1, delta=None):
    if delta is None:
        omega = cyc_root(n, 1)
        delta = ((1 - omega) * CycNum.coerce(gamma)).inverse()
    return catalog_dd_division(n, pi, gamma, delta)


# family -> builder(n, m, **point); each builder returns one entry
FAMILY_BUILDERS = {
    'taft_nonsingular': lambda n, m, alpha: catalog_taft_nonsingular(n, m, alpha),
    'pp3': lambda n, m, ell, alpha: catalog_pp3(n, ell, alpha),
    'dd_division': _dd_division_point,
    'dt2_mixed': lambda n, m, **point: catalog_dt2_mixed(**point),
    'dd_elementary': lambda n, m, **point: dd_elementary_x(n, **point),
    'uqsl2_m2': lambda n, m, lam, k, p: uqsl2_m2(n, lam, k, p),
}

FAMILIES = ('taft_m3', *FAMILY_BUILDERS)


def grid_points(grid):
    """Cartesian product of a {name: [values]} grid, keys in sorted order"""
    keys = sorted(grid or {})
    for values in product(*(grid[k] for k in keys)):
        yield dict(zip(keys, values))


def build_entries(family, n, m=None, grid=None):
    """
    Catalog entries of one family over a parameter grid.

    Raises:
        SchemaError: for an unknown family or a grid above the desk-scale limit
    """
    grid = grid or {}
    if family == 'taft_m3':
        return catalog_taft_m3(n, gammas=tuple(grid.get('gamma', ())))
    builder = FAMILY_BUILDERS.get(family)
    if builder is None:
        raise SchemaError(f'Unknown family {family!r}', pointer='family')
    points = list(grid_points(grid))
    if len(points) > MAX_GRID_POINTS:
        raise SchemaError(f'Grid has {len(points)} points, the limit is {MAX_GRID_POINTS}', pointer='grid')
    return [builder(n, m, **point) for point in points]


class _UnionFind:
    def __init__(self, size):
        self.parent = list(range(size))

    def find(self, i):
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i, j):
        a, b = self.find(i), self.find(j)
        if a != b:
            self.parent[max(a, b)] = min(a, b)


@dataclass
class ClassReport:
    entries: list
    verdicts: list
    classes: list
    undecided: list = field(default_factory=list)

    @property
    def representatives(self):
        return [members[0] for members in self.classes]

    def to_dict(self):
        return {
            'entries': [entry.to_dict() for entry in self.entries],
            'verdicts': [[str(v.status) for v in row] for row in self.verdicts],
            'classes': [list(members) for members in self.classes],
            'representatives': self.representatives,
            'undecided': [list(pair) for pair in self.undecided],
        }


def _diagonal():
    return IsoVerdict(IsoStatus.ISOMORPHIC, obstruction='identical entry')


def _compare(pair, entries, seed):
    i, j = pair
    try:
        return pair, iso_test(entries[i].action, entries[j].action, seed=seed)
    except (ShapeMismatch, ParentMismatch) as exc:
        logger.warning(f'Pair ({i}, {j}) not comparable: {exc.message}')
        return pair, IsoVerdict(IsoStatus.NOT_ISOMORPHIC, obstruction=exc.message)
    except HopfActionError as exc:
        logger.warning(f'Pair ({i}, {j}) left undecided: {exc.message}')
        return pair, IsoVerdict(IsoStatus.UNDECIDED, obstruction=exc.message)


def enumerate_and_dedupe(entries=None, family=None, n=None, m=None, grid=None, workers=None, seed=None):
    """
    Partition catalog entries into isomorphism classes.

    Either pass ``entries`` directly or a family with its grid. Every pair is
    tested once; the verdict matrix is filled symmetrically.
    """
    if entries is None:
        entries = build_entries(family, n, m, grid)
    entries = list(entries)
    if workers is None:
        workers = getattr(settings, 'HOPF_ENUMERATE_WORKERS', 4)
    if seed is None:
        seed = getattr(settings, 'HOPF_DEFAULT_SEED', 20240601)
    size = len(entries)
    verdicts = [[None] * size for _ in range(size)]
    for i in range(size):
        verdicts[i][i] = _diagonal()
    pairs = list(combinations(range(size), 2))
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        results = list(pool.map(lambda pair: _compare(pair, entries, seed), pairs))
    classes = _UnionFind(size)
    undecided = []
    for (i, j), verdict in results:
        verdicts[i][j] = verdicts[j][i] = verdict
        if verdict.isomorphic:
            classes.union(i, j)
        elif verdict.status == IsoStatus.UNDECIDED:
            undecided.append((i, j))
    if undecided:
        logger.warning(f'{len(undecided)} pairs left undecided')
    grouped = {}
    for i in range(size):
        grouped.setdefault(classes.find(i), []).append(i)
    partition = sorted(grouped.values())
    logger.info(f'{size} entries fall into {len(partition)} classes')
    return ClassReport(entries=entries, verdicts=verdicts, classes=partition, undecided=undecided)
