"""JSON schemas (draft 2020-12) for the reports written by the command-line tool.

``SCHEMAS`` maps each subcommand to the schema of one report. For
``mlt-table`` the output is JSON Lines and the schema describes one line.
"""

_num = {"type": ["number", "null"]}
_matrix = {"type": "array", "items": {"type": "array", "items": {"type": "number"}}}
_label = {"type": ["integer", "string"]}


def _obj(props: dict, required=None) -> dict:
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "type": "object",
        "properties": props,
        "required": list(props) if required is None else required,
        "additionalProperties": False,
    }


_classes = ["Unstable", "SemistableNotPolystable", "Polystable", "Stable", "Undetermined"]

STABILITY_REPORT = _obj(
    {
        "classification": {"enum": _classes},
        "capacity_estimate": _num,
        "moment_residual": _num,
        "stabilizer_dim": {"type": ["integer", "null"], "minimum": 0},
        "iterations": {"type": "integer", "minimum": 0},
        "stop_reason": {"enum": ["converged", "singular", "capacity_vanished", "max_iter", "zero_tuple"]},
        "log_condition": _num,
        "mle": {
            "oneOf": [
                {"type": "null"},
                _obj({"psi1": _matrix, "psi2": _matrix}),
            ]
        },
        "trace": {
            "type": "array",
            "items": _obj({"log_likelihood": _num, "residual": _num}),
        },
    }
)

MOMENT_REPORT = _obj(
    {"moment_residual": _num, "c1": {"type": "number"}, "c2": {"type": "number"}, "norm_sq": {"type": "number"}}
)

STABDIM_REPORT = _obj({"stabilizer_dim": {"type": "integer", "minimum": 0}})

_count = {"type": "integer", "minimum": 0}

CP_RANK_REPORT = _obj(
    {
        "a": _count,
        "b": _count,
        "c": _count,
        "d": _count,
        "n": _count,
        "cp_rank": _count,
        "max_rank": _count,
        "trials": _count,
        "entry_bound": _count,
        "seed": {"type": ["integer", "null"]},
    }
)

_bounds = {
    "m1": _count,
    "m2": _count,
    "lower_L": _count,
    "exact_mltb": _count,
    "alpha_upper": _count,
    "simple_upper_U": _count,
}

MLT_ROW = _obj(_bounds)

MLT_REPORT = _obj(
    {
        **_bounds,
        "fills": {"type": "array", "items": _obj({"n": _count, "fills": {"type": "boolean"}})},
    }
)

TDAG_CHECK_REPORT = _obj(
    {
        "nodes": {"type": "array", "items": _label},
        "status": {"enum": ["Exists", "Unbounded"]},
        "witness": {"oneOf": [{"type": "null"}, _label]},
        "exact": {"type": "boolean"},
    }
)

TDAG_MLE_REPORT = _obj(
    {
        "nodes": {"type": "array", "items": _label},
        "status": {"enum": ["Exists", "Unbounded"]},
        "witness": {"oneOf": [{"type": "null"}, _label]},
        "Lambda": {"oneOf": [{"type": "null"}, _matrix]},
        "Omega": {"oneOf": [{"type": "null"}, {"type": "array", "items": {"type": "number"}}]},
        "Psi": {"oneOf": [{"type": "null"}, _matrix]},
    }
)

TDAG_ANALYZE_REPORT = _obj(
    {
        "nodes": {"type": "array", "items": _label},
        "transitive": {"type": "boolean"},
        "mlt": {"type": ["integer", "null"], "minimum": 1},
        "colliders": {
            "type": "array",
            "items": {"type": "array", "items": _label, "minItems": 3, "maxItems": 3},
        },
        "zariski_closed": {"type": ["boolean", "null"]},
        "n": {"type": ["integer", "null"]},
    }
)

SCHEMAS = {
    "flipflop": STABILITY_REPORT,
    "classify": STABILITY_REPORT,
    "moment": MOMENT_REPORT,
    "stabdim": STABDIM_REPORT,
    "cp-rank": CP_RANK_REPORT,
    "mlt": MLT_REPORT,
    "mlt-table": MLT_ROW,
    "tdag-check": TDAG_CHECK_REPORT,
    "tdag-mle": TDAG_MLE_REPORT,
    "tdag-analyze": TDAG_ANALYZE_REPORT,
}
