from app.management.base import JsonCommand
from app.serializers import GradingRequestSerializer, to_action
from app.services.gradedmat import (
    classify_kind, division_grading, elementary_grading, grading_from_action,
)
from app.services.groups import AbGroup, Bicharacter, Character


class Command(JsonCommand):
    help = 'Builds the grading of M_m induced by group matrices and reports its kind'
    serializer_class = GradingRequestSerializer

    def run(self, data, seed):
        if 'action' in data:
            action = to_action(data['action'], pointer='action.')
            grading = grading_from_action(action.pres.group, action.ug)
        elif 'operators' in data:
            grading = grading_from_action(AbGroup(tuple(data['group'])), data['operators'])
        elif 'beta' in data:
            support = AbGroup(tuple(data['support']))
            beta = Bicharacter(support, tuple(tuple(row) for row in data['beta']))
            grading = division_grading(support, beta)
        else:
            group = AbGroup(tuple(data['group']))
            grading = elementary_grading([Character(group, tuple(exps)) for exps in data['chars']])
        return {
            'grading': grading.to_dict(),
            'classification': classify_kind(grading).to_dict(),
        }
