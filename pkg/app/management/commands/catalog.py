from app.management.base import CertifiedFailure, JsonCommand
from app.serializers import CatalogRequestSerializer, to_presentation
from app.services.actions import certify_action
from app.services.catalogs import (
    catalog_rank1_division, catalog_taft_m3, lift_uqsl2_to_dd, uqsl2_m2,
)
from app.services.enumeration import build_entries
from app.services.groups import AbGroup, Bicharacter, Character
import logging

logger = logging.getLogger(__name__)


class Command(JsonCommand):
    help = 'Emits the canonical catalog entries of one family'
    serializer_class = CatalogRequestSerializer

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            '--certify',
            action='store_true',
            help='Certify every entry and exit 1 when one fails',
        )

    def handle(self, *args, **options):
        self.certify = options.get('certify', False)
        super().handle(*args, **options)

    def run(self, data, seed):
        entries = self.build(data['family'], data['n'], data.get('m'), data.get('params', {}))
        documents = []
        failed = []
        for index, entry in enumerate(entries):
            document = entry.to_dict()
            if self.certify:
                certificate = certify_action(entry.action)
                document['verdict'] = str(certificate.verdict)
                if not certificate.passed:
                    failed.append(index)
            documents.append(document)
        for entry in entries:
            if entry.flags:
                logger.warning(f'{entry.family} {entry.label}: {", ".join(entry.flags)}')
        output = {'entries': documents}
        if failed:
            raise CertifiedFailure(f'Catalog entries {failed} failed certification', output)
        return output

    def build(self, family, n, m, params):
        if family == 'taft_m3':
            return catalog_taft_m3(n, gammas=tuple(params.get('gamma', ())))
        if family == 'rank1_division':
            pres = to_presentation(params['presentation'])
            support = AbGroup(tuple(params['support']))
            beta = Bicharacter(support, tuple(tuple(row) for row in params['beta']))
            tau_chars = [Character(pres.group, tuple(exps)) for exps in params['tau_chars']]
            return [catalog_rank1_division(pres, beta, tau_chars, params['alpha'], params['strict'])]
        if family == 'dd_lift':
            source = uqsl2_m2(n, params['lam'], params['k'], params['p'], strict=True)
            return [lift_uqsl2_to_dd(source)]
        return build_entries(family, n, m, {key: [value] for key, value in params.items()})
