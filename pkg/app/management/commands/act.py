from app.management.base import JsonCommand
from app.serializers import ActRequestSerializer, to_action
from app.services.actions import act


class Command(JsonCommand):
    help = 'Applies a word in the generators to a matrix through an inner action'
    serializer_class = ActRequestSerializer

    def run(self, data, seed):
        action = to_action(data['action'], pointer='action.')
        result = act(action, data['word'], data['matrix'])
        return {
            'word': data['word'],
            'result': result.to_dict(),
            'pretty': result.pretty(),
        }
