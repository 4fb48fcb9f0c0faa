import json
import logging
from pathlib import Path
import sys

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from app.exceptions import HopfActionError, SchemaError
from app.serializers import validate_document

logger = logging.getLogger(__name__)

EXIT_FAILURE = 1
EXIT_SCHEMA = 2


class CertifiedFailure(Exception):
    """The command ran and the answer is negative; the document is still written"""

    def __init__(self, message, document):
        super().__init__(message)
        self.document = document


class JsonCommand(BaseCommand):
    """
    JSON in, JSON out. Subclasses set ``serializer_class`` and implement
    ``run(data, seed)`` returning the output document.

    Exit codes: 0 on success, 1 on a certified failure, 2 on malformed input.
    """

    serializer_class = None

    def add_arguments(self, parser):
        parser.add_argument(
            '--input',
            default='-',
            help='Input document: a path, inline JSON, or - for stdin',
        )
        parser.add_argument(
            '--output',
            help='Write the JSON document here instead of stdout',
        )
        parser.add_argument(
            '--seed',
            type=int,
            help='Seed for every randomized step (default HOPF_DEFAULT_SEED)',
        )

    def handle(self, *args, **options):
        seed = options.get('seed')
        if seed is None:
            seed = getattr(settings, 'HOPF_DEFAULT_SEED', 20240601)
        try:
            data = validate_document(
                self.serializer_class, self.prepare(self.read_document(options['input'])),
            )
            document = self.run(data, seed)
        except CertifiedFailure as exc:
            self.emit(exc.document, options.get('output'))
            logger.error(str(exc))
            raise CommandError(str(exc), returncode=EXIT_FAILURE)
        except SchemaError as exc:
            self.emit(exc.to_dict(), options.get('output'))
            logger.error(f'Malformed input at {exc.pointer or "<root>"}: {exc.message}')
            raise CommandError(f'{exc.pointer}: {exc.message}', returncode=EXIT_SCHEMA)
        except HopfActionError as exc:
            self.emit(exc.to_dict(), options.get('output'))
            logger.error(exc.message)
            raise CommandError(exc.message, returncode=EXIT_SCHEMA)
        self.emit(document, options.get('output'))

    def prepare(self, document):
        return document

    def run(self, data, seed):
        raise NotImplementedError

    def read_document(self, source):
        if source == '-':
            text = sys.stdin.read()
        elif source.lstrip().startswith(('{', '[')):
            text = source
        else:
            path = Path(source)
            if not path.exists():
                raise SchemaError(f'No such input file: {source}', pointer='')
            text = path.read_text(encoding='utf-8')
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f'Invalid JSON: {exc.msg} at line {exc.lineno}', pointer='')

    def emit(self, document, output=None):
        text = json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False)
        if output:
            Path(output).write_text(text + '\n', encoding='utf-8')
        else:
            self.stdout.write(text)
