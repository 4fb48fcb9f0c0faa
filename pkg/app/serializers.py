"""
Input schemas for the management commands.

Each document is validated by a DRF serializer; the first entry of
``serializer.errors`` becomes a SchemaError whose pointer is the dotted
field path. Domain objects are built by the ``to_*`` helpers.
"""
from rest_framework import serializers

from app.exceptions import HopfActionError, SchemaError
from app.models import DT2Variant, Family
from app.services.actions import InnerActionMap
from app.services.cyclo import cyc_root, parse_scalar
from app.services.enumeration import FAMILIES
from app.services.exact_matrix import ExactMatrix
from app.services.groups import AbGroup, Character, GrpElt
from app.services.hopf import (
    Datum, SkewGenerator, book, dd_taft, make_presentation, p3_example, taft, uq_sl2,
)

INT_PARAMS = {'n', 'm', 'r', 's', 't', 'k', 'ell'}
MATRIX_PARAMS = {'xi_block'}
TEXT_PARAMS = {'variant'}


def first_error(errors, prefix=''):
    """(pointer, message) of the first leaf in a DRF error structure"""
    if isinstance(errors, dict):
        for key, value in errors.items():
            if value in ({}, [], None):
                continue
            pointer = str(key) if key != 'non_field_errors' else ''
            pointer = f'{prefix}.{pointer}' if prefix and pointer else (pointer or prefix)
            return first_error(value, pointer)
    if isinstance(errors, list):
        if errors and all(isinstance(e, str) for e in errors):
            return prefix, str(errors[0])
        for index, value in enumerate(errors):
            if value in ({}, [], None):
                continue
            if isinstance(value, str):
                return prefix, value
            return first_error(value, f'{prefix}.{index}' if prefix else str(index))
    return prefix, str(errors)


def validate_document(serializer_class, data, pointer=''):
    """
    Run a serializer and return its validated data.

    Raises:
        SchemaError: pointing at the first offending field
    """
    serializer = serializer_class(data=data)
    if not serializer.is_valid():
        path, message = first_error(serializer.errors, pointer)
        raise SchemaError(message, pointer=path)
    return serializer.validated_data


def _nested_error(pointer, message):
    """ValidationError nested along a dotted pointer so the path survives"""
    detail = [message]
    for part in reversed([p for p in pointer.split('.') if p]):
        detail = {part: detail}
    return serializers.ValidationError(detail)


# Fields

class ScalarField(serializers.Field):
    default_error_messages = {'invalid': 'Invalid scalar.'}

    def to_internal_value(self, data):
        try:
            return parse_scalar(data)
        except SchemaError as exc:
            raise serializers.ValidationError(exc.message)

    def to_representation(self, value):
        return value.to_dict()


class MatrixField(serializers.Field):
    def to_internal_value(self, data):
        try:
            return ExactMatrix.from_json(data, pointer='')
        except SchemaError as exc:
            raise _nested_error(exc.pointer, exc.message)

    def to_representation(self, value):
        return value.to_dict()


def parse_param(name, value):
    try:
        if name in INT_PARAMS:
            if not isinstance(value, int) or isinstance(value, bool):
                raise serializers.ValidationError(f'{name} must be an integer.')
            return value
        if name in TEXT_PARAMS:
            if name == 'variant' and value not in DT2Variant.values:
                raise serializers.ValidationError(f'Unknown variant {value!r}.')
            return str(value)
        if name in MATRIX_PARAMS:
            if not isinstance(value, list) or not all(isinstance(row, list) for row in value):
                raise serializers.ValidationError(f'{name} must be a list of rows.')
            return [[parse_scalar(v) for v in row] for row in value]
        if name == 'seed' and isinstance(value, list):
            return ExactMatrix.from_json(value, pointer='')
        return parse_scalar(value)
    except SchemaError as exc:
        raise serializers.ValidationError(exc.message)


def _parse_params(data, pointer):
    if not isinstance(data, dict):
        raise serializers.ValidationError({pointer: ['Expected an object.']})
    out = {}
    for key, value in data.items():
        try:
            out[key] = parse_param(key, value)
        except serializers.ValidationError as exc:
            raise serializers.ValidationError({pointer: {key: exc.detail}})
    return out


# Presentations and actions

class FamilyParamsSerializer(serializers.Serializer):
    n = serializers.IntegerField(required=False, min_value=2)
    p = serializers.IntegerField(required=False, min_value=2)
    m = serializers.IntegerField(required=False)
    omega = ScalarField(required=False)
    q = ScalarField(required=False)


class DatumSerializer(serializers.Serializer):
    group = serializers.ListField(child=serializers.IntegerField(min_value=1), allow_empty=False)
    a = serializers.ListField(child=serializers.ListField(child=serializers.IntegerField()), allow_empty=False)
    chi = serializers.ListField(child=serializers.ListField(child=serializers.IntegerField()))
    mu = serializers.ListField(child=serializers.ChoiceField(choices=[0, 1]))
    # JSON key is "lambda"
    lam = serializers.ListField(child=serializers.ListField(child=ScalarField()))

    def get_fields(self):
        fields = super().get_fields()
        fields['lambda'] = fields.pop('lam')
        return fields

    def validate(self, attrs):
        rank = len(attrs['a'])
        width = len(attrs['group'])
        for key in ('a', 'chi'):
            for index, exps in enumerate(attrs[key]):
                if len(exps) != width:
                    raise serializers.ValidationError({key: {index: [f'Expected {width} exponents.']}})
        for key in ('chi', 'mu', 'lambda'):
            if len(attrs[key]) != rank:
                raise serializers.ValidationError({key: [f'Expected {rank} entries.']})
        return attrs


class GeneratorsSerializer(serializers.Serializer):
    group = serializers.ListField(child=serializers.CharField(), required=False)
    skew = serializers.ListField(child=serializers.DictField(), required=False)


class PresentationSerializer(serializers.Serializer):
    family = serializers.ChoiceField(choices=Family.choices)
    params = FamilyParamsSerializer(required=False)
    datum = DatumSerializer(required=False)
    generators = GeneratorsSerializer(required=False)

    def validate(self, attrs):
        family = attrs['family']
        params = attrs.get('params', {})
        if family == Family.CUSTOM:
            if 'datum' not in attrs:
                raise serializers.ValidationError({'datum': ['A custom presentation needs a datum.']})
            return attrs
        needed = {'book': ('p', 'q', 'm'), 'p3': ('p',)}.get(family, ('n',))
        for key in needed:
            if key not in params:
                raise serializers.ValidationError({'params': {key: ['This field is required.']}})
        return attrs


def to_presentation(data):
    """
    HopfPresentation from validated presentation data.

    Raises:
        SchemaError: when the family constructor rejects the parameters
    """
    family = data['family']
    params = data.get('params', {})
    try:
        if family == Family.CUSTOM:
            return _custom_presentation(data['datum'], data.get('generators', {}))
        if family == Family.BOOK:
            return book(params['p'], params['q'], params['m'])
        if family == Family.P3:
            return p3_example(params['p'], params.get('omega') or cyc_root(params['p'], 1))
        n = params['n']
        omega = params.get('omega') or cyc_root(n, 1)
        builder = {Family.TAFT: taft, Family.DD_TAFT: dd_taft, Family.UQ_SL2: uq_sl2}[family]
        return builder(n, omega)
    except SchemaError:
        raise
    except HopfActionError as exc:
        raise SchemaError(exc.message, pointer='presentation.params') from exc


def _custom_presentation(datum_data, generators):
    group = AbGroup(tuple(datum_data['group']))
    datum = Datum(
        group=group,
        a=tuple(GrpElt(group, tuple(e)) for e in datum_data['a']),
        chi=tuple(Character(group, tuple(e)) for e in datum_data['chi']),
        mu=tuple(datum_data['mu']),
        lam=tuple(tuple(row) for row in datum_data['lambda']),
    )
    group_names = generators.get('group') or None
    skews = None
    if generators.get('skew'):
        skews = tuple(
            SkewGenerator(name=str(item.get('name', f'x{i + 1}')), index=i)
            for i, item in enumerate(generators['skew'])
        )
    return make_presentation(datum, Family.CUSTOM, {}, group_names, skews)


class ActionSerializer(serializers.Serializer):
    presentation = PresentationSerializer()
    m = serializers.IntegerField(required=False, min_value=1)
    u = serializers.DictField(child=MatrixField(), allow_empty=False)


def to_action(data, pointer=''):
    """
    InnerActionMap from validated action data; matrices are keyed by native names.

    Raises:
        SchemaError: for unknown generators or inconsistent shapes
    """
    pres = to_presentation(data['presentation'])
    matrices = data['u']
    ug = {name: u for name, u in matrices.items() if pres.group_index(name) is not None}
    ux = {name: u for name, u in matrices.items() if name not in ug}
    for name in ux:
        if pres.skew_by_name(name) is None:
            raise SchemaError(f'Unknown generator {name!r}', pointer=f'{pointer}u.{name}')
    try:
        action = InnerActionMap.from_native(pres, ug, ux)
    except HopfActionError as exc:
        raise SchemaError(exc.message, pointer=f'{pointer}u') from exc
    if data.get('m') not in (None, action.m):
        raise SchemaError(f'm = {data["m"]} does not match the {action.m}x{action.m} matrices',
                          pointer=f'{pointer}m')
    return action


# Requests

class ActRequestSerializer(serializers.Serializer):
    action = ActionSerializer()
    word = serializers.CharField()
    matrix = MatrixField()


class GradingRequestSerializer(serializers.Serializer):
    action = ActionSerializer(required=False)
    group = serializers.ListField(child=serializers.IntegerField(min_value=1), required=False)
    operators = serializers.ListField(child=MatrixField(), required=False)
    support = serializers.ListField(child=serializers.IntegerField(min_value=1), required=False)
    beta = serializers.ListField(child=serializers.ListField(child=serializers.IntegerField()), required=False)
    chars = serializers.ListField(child=serializers.ListField(child=serializers.IntegerField()), required=False)

    def validate(self, attrs):
        modes = [
            'action' in attrs,
            'operators' in attrs,
            'beta' in attrs,
            'chars' in attrs,
        ]
        if sum(modes) != 1:
            raise serializers.ValidationError(
                'Give exactly one of action, operators, beta or chars.',
            )
        if 'operators' in attrs or 'chars' in attrs:
            if 'group' not in attrs:
                raise serializers.ValidationError({'group': ['This field is required.']})
        if 'beta' in attrs and 'support' not in attrs:
            raise serializers.ValidationError({'support': ['This field is required.']})
        return attrs


class CatalogRequestSerializer(serializers.Serializer):
    family = serializers.ChoiceField(choices=[*FAMILIES, 'rank1_division', 'dd_lift'])
    n = serializers.IntegerField(min_value=2)
    m = serializers.IntegerField(required=False, min_value=1)
    params = serializers.DictField(required=False)

    def validate(self, attrs):
        raw = attrs.get('params', {})
        if attrs['family'] == 'taft_m3':
            gammas = raw.get('gamma', [])
            if not isinstance(gammas, list):
                raise serializers.ValidationError({'params': {'gamma': ['Expected a list.']}})
            attrs['params'] = {'gamma': [parse_param('gamma', g) for g in gammas]}
            return attrs
        if attrs['family'] == 'rank1_division':
            attrs['params'] = _rank1_params(raw)
            return attrs
        attrs['params'] = _parse_params(raw, 'params')
        return attrs


def _rank1_params(raw):
    """presentation, support, beta table, tau characters and α"""
    for key in ('presentation', 'support', 'beta', 'tau_chars', 'alpha'):
        if key not in raw:
            raise serializers.ValidationError({'params': {key: ['This field is required.']}})
    presentation = PresentationSerializer(data=raw['presentation'])
    if not presentation.is_valid():
        raise serializers.ValidationError({'params': {'presentation': presentation.errors}})
    try:
        alpha = parse_scalar(raw['alpha'])
    except SchemaError as exc:
        raise serializers.ValidationError({'params': {'alpha': [exc.message]}})
    return {
        'presentation': presentation.validated_data,
        'support': list(raw['support']),
        'beta': [list(row) for row in raw['beta']],
        'tau_chars': [list(c) for c in raw['tau_chars']],
        'alpha': alpha,
        'strict': bool(raw.get('strict', False)),
    }


class IsoRequestSerializer(serializers.Serializer):
    first = ActionSerializer()
    second = ActionSerializer()


class EnumerateRequestSerializer(serializers.Serializer):
    family = serializers.ChoiceField(choices=FAMILIES)
    n = serializers.IntegerField(min_value=2)
    m = serializers.IntegerField(required=False, min_value=1)
    grid = serializers.DictField(child=serializers.ListField(), required=False)
    workers = serializers.IntegerField(required=False, min_value=1)

    def validate(self, attrs):
        grid = {}
        for key, values in attrs.get('grid', {}).items():
            parsed = []
            for index, value in enumerate(values):
                try:
                    parsed.append(parse_param(key, value))
                except serializers.ValidationError as exc:
                    raise serializers.ValidationError({'grid': {key: {index: exc.detail}}})
            grid[key] = parsed
        attrs['grid'] = grid
        return attrs


class VerifyRequestSerializer(serializers.Serializer):
    actions = ActionSerializer(many=True, allow_empty=False)


def verify_payload(document):
    """Accept an action, a catalog entry or a catalog listing and return {'actions': [...]}"""
    if isinstance(document, dict) and isinstance(document.get('entries'), list):
        return {'actions': [e.get('action', e) if isinstance(e, dict) else e for e in document['entries']]}
    if isinstance(document, dict) and isinstance(document.get('action'), dict):
        return {'actions': [document['action']]}
    if isinstance(document, list):
        return {'actions': document}
    return {'actions': [document]}
