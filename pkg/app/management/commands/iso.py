from app.management.base import JsonCommand
from app.serializers import IsoRequestSerializer, to_action
from app.services.iso import iso_test, replay_witness


class Command(JsonCommand):
    help = 'Decides whether two inner actions of one presentation are isomorphic'
    serializer_class = IsoRequestSerializer

    def run(self, data, seed):
        first = to_action(data['first'], pointer='first.')
        second = to_action(data['second'], pointer='second.')
        verdict = iso_test(first, second, seed=seed)
        document = verdict.to_dict()
        if verdict.isomorphic:
            document['replayed'] = replay_witness(first, second, verdict)
        return document
