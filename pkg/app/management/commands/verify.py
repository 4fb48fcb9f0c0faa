from app.management.base import CertifiedFailure, JsonCommand
from app.models import Verdict
from app.serializers import VerifyRequestSerializer, to_action, verify_payload
from app.services.actions import certify_action, skew_support_check
import logging

logger = logging.getLogger(__name__)


class Command(JsonCommand):
    help = 'Certifies inner actions given as an action, a catalog entry or a catalog listing'
    serializer_class = VerifyRequestSerializer

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            '--support',
            action='store_true',
            help='Also report the kernel and support predictions for every skew generator',
        )

    def handle(self, *args, **options):
        self.with_support = options.get('support', False)
        super().handle(*args, **options)

    def prepare(self, document):
        return verify_payload(document)

    def run(self, data, seed):
        certificates = []
        for index, action_data in enumerate(data['actions']):
            action = to_action(action_data, pointer=f'actions.{index}.')
            certificate = certify_action(action)
            document = certificate.to_dict()
            if self.with_support:
                document['support'] = skew_support_check(certificate.action).to_dict()
            certificates.append((certificate, document))
        passed = all(c.passed for c, _ in certificates)
        if len(certificates) == 1:
            output = certificates[0][1]
        else:
            output = {
                'verdict': str(Verdict.PASS if passed else Verdict.FAIL),
                'certificates': [document for _, document in certificates],
            }
        if not passed:
            failed = [i for i, (c, _) in enumerate(certificates) if not c.passed]
            raise CertifiedFailure(f'Verification failed for action(s) {failed}', output)
        logger.info(f'{len(certificates)} action(s) certified')
        return output
