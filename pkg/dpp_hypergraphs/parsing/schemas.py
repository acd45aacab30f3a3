from typing import Any, Dict

from referencing import Registry
from referencing.jsonschema import DRAFT7

from dpp_hypergraphs.parsing.schema_validator import SchemaValidator

positive_integer_schema = {
    "$id": "positive_integer_schema",
    "type": "integer",
    "minimum": 1,
}

positive_number_schema = {
    "$id": "positive_number_schema",
    "type": "number",
    "exclusiveMinimum": 0,
}

fit_options_schema = {
    "$id": "fit_options_schema",
    "type": "object",
    "properties": {
        "d": {"$ref": "positive_integer_schema"},
        "max_iters": {"$ref": "positive_integer_schema"},
        "step_size": {"$ref": "positive_number_schema"},
        "backtrack_factor": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "tol": {"$ref": "positive_number_schema"},
        "batch_size": {
            "oneOf": [
                {"$ref": "positive_integer_schema"},
                {"type": "string", "enum": ["full"]},
            ]
        },
        "n_inits": {"$ref": "positive_integer_schema"},
        "floor_eps": {"$ref": "positive_number_schema"},
        "seed": {"type": "integer", "minimum": 0},
        "max_backtracks": {"$ref": "positive_integer_schema"},
    },
    "additionalProperties": False,
}

simulation_grid_schema = {
    "$id": "simulation_grid_schema",
    "type": "object",
    "properties": {
        "n_v": {"$ref": "positive_integer_schema"},
        "d_values": {"type": "array", "items": {"$ref": "positive_integer_schema"}, "minItems": 1},
        "n_e_values": {"type": "array", "items": {"$ref": "positive_integer_schema"}, "minItems": 1},
        "replicates": {"$ref": "positive_integer_schema"},
        "master_seed": {"type": "integer", "minimum": 0},
        "n_clusters": {"$ref": "positive_integer_schema"},
        "kappa": {"type": "number", "minimum": 0},
        "beta": {"$ref": "positive_number_schema"},
        "max_workers": {"$ref": "positive_integer_schema"},
    },
    "additionalProperties": False,
}

line_kmeans_options_schema = {
    "$id": "line_kmeans_options_schema",
    "type": "object",
    "properties": {
        "n_starts": {"$ref": "positive_integer_schema"},
        "max_iters": {"$ref": "positive_integer_schema"},
        "tol": {"type": "number", "minimum": 0},
        "seed": {"type": "integer", "minimum": 0},
    },
    "additionalProperties": False,
}

config_file_schema = {
    "$id": "config_file_schema",
    "type": "object",
    "properties": {
        "fit": {"$ref": "fit_options_schema"},
        "grid": {"$ref": "simulation_grid_schema"},
        "line_kmeans": {"$ref": "line_kmeans_options_schema"},
    },
    "additionalProperties": False,
}

model_provenance_schema = {
    "$id": "model_provenance_schema",
    "type": "object",
    "properties": {
        "fit_options": {"$ref": "fit_options_schema"},
        "seed": {"type": "integer", "minimum": 0},
        "final_objective": {"type": "number"},
        "aic": {"type": "number"},
        "bic": {"type": "number"},
        "iterations_used": {"type": "integer", "minimum": 0},
        "converged": {"type": "boolean"},
        "created_at": {"type": "string"},
    },
    "required": ["created_at"],
    "additionalProperties": False,
}

model_file_schema = {
    "$id": "model_file_schema",
    "type": "object",
    "properties": {
        "format_version": {"type": "string"},
        "n_v": {"$ref": "positive_integer_schema"},
        "d": {"$ref": "positive_integer_schema"},
        "vocabulary": {
            "oneOf": [
                {"type": "null"},
                {"type": "array", "items": {"type": "string"}},
            ]
        },
        "beta": {"type": "number"},
        "alpha": {"type": "array", "items": {"type": "number"}, "minItems": 1},
        "V": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "number"}, "minItems": 1},
            "minItems": 1,
        },
        "provenance": {
            "oneOf": [
                {"type": "null"},
                {"$ref": "model_provenance_schema"},
            ]
        },
    },
    "required": ["format_version", "n_v", "d", "beta", "alpha", "V"],
    "additionalProperties": False,
}


schema_store: Dict[str, Dict[str, Any]] = {
    # Top level schemas
    config_file_schema["$id"]: config_file_schema,
    model_file_schema["$id"]: model_file_schema,
    # Sub-object schemas
    fit_options_schema["$id"]: fit_options_schema,
    simulation_grid_schema["$id"]: simulation_grid_schema,
    line_kmeans_options_schema["$id"]: line_kmeans_options_schema,
    model_provenance_schema["$id"]: model_provenance_schema,
    positive_integer_schema["$id"]: positive_integer_schema,
    positive_number_schema["$id"]: positive_number_schema,
}

resources = [(str(k), DRAFT7.create_resource(v)) for k, v in schema_store.items()]
registry: Registry = Registry().with_resources(resources)

config_file_validator = SchemaValidator(config_file_schema, registry=registry)
model_file_validator = SchemaValidator(model_file_schema, registry=registry)
