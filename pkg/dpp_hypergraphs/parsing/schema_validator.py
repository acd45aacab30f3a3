import re

from jsonschema import Draft7Validator, ValidationError
from jsonschema._utils import extras_msg
from jsonschema.validators import extend

# Bookkeeping keys added while parsing, such as __parsing_context__, are never reported as unexpected.
BOOKKEEPING_KEY_PATTERN = "^__(.+)__$"


def find_unexpected_properties(instance, schema):  # type: ignore[no-untyped-def]
    """Yield the keys of `instance` covered neither by `properties` nor by `patternProperties`.

    Keys matching BOOKKEEPING_KEY_PATTERN are always skipped. Assumes ``instance`` is dict-like already.
    """
    properties = schema.get("properties", {})
    patterns = "|".join([*schema.get("patternProperties", {}), BOOKKEEPING_KEY_PATTERN])
    for key in instance:
        if key in properties or re.search(patterns, key):
            continue
        yield key


def additional_properties_ignoring_bookkeeping(validator, aP, instance, schema):  # type: ignore[no-untyped-def]
    """Replacement for the Draft 7 ``additionalProperties`` keyword that skips bookkeeping keys."""
    if not validator.is_type(instance, "object"):
        return

    extras = sorted(find_unexpected_properties(instance, schema))
    if validator.is_type(aP, "object"):
        for extra in extras:
            yield from validator.descend(instance[extra], aP, path=extra)
    elif not aP and extras:
        yield ValidationError(f"Additional properties are not allowed ({extras_msg(extras)} unexpected)")


# Draft 7 with `additionalProperties` overridden so parsing bookkeeping never trips `additionalProperties: false`
SchemaValidator = extend(
    validator=Draft7Validator, validators={"additionalProperties": additional_properties_ignoring_bookkeeping}
)
