from app.management.base import JsonCommand
from app.serializers import EnumerateRequestSerializer
from app.services.enumeration import enumerate_and_dedupe


class Command(JsonCommand):
    help = 'Builds a catalog family over a parameter grid and splits it into isomorphism classes'
    serializer_class = EnumerateRequestSerializer

    def run(self, data, seed):
        report = enumerate_and_dedupe(
            family=data['family'],
            n=data['n'],
            m=data.get('m'),
            grid=data.get('grid'),
            workers=data.get('workers'),
            seed=seed,
        )
        self.stderr.write(self.style.SUCCESS(
            f'{len(report.entries)} entries, {len(report.classes)} classes',
        ))
        return report.to_dict()
