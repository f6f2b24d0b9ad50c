"""Published JSON schemas for every artifact the CLI emits."""

_GRAPH = {
    "type": "object",
    "required": ["n", "edges"],
    "properties": {
        "n": {"type": "integer", "minimum": 0},
        "edges": {
            "type": "array",
            "items": {
                "type": "array",
                "items": {"type": "integer", "minimum": 0},
                "minItems": 2,
                "maxItems": 2,
            },
        },
    },
}

MULTIGRAPH_SCHEMA = {
    "type": "object",
    "required": ["n", "edges", "edge_ids"],
    "properties": {
        "n": {"type": "integer", "minimum": 0},
        "edges": _GRAPH["properties"]["edges"],
        "edge_ids": {"type": "array", "items": {"type": "integer"}},
    },
}

GRAPH_SCHEMA = _GRAPH

CSP_SCHEMA = {
    "type": "object",
    "required": ["n", "alphabet_sizes", "edges"],
    "properties": {
        "n": {"type": "integer", "minimum": 0},
        "alphabet_sizes": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "edges": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["u", "v", "pairs"],
                "properties": {
                    "u": {"type": "integer", "minimum": 0},
                    "v": {"type": "integer", "minimum": 0},
                    "pairs": {
                        "type": "array",
                        "items": {
                            "type": "array",
                            "items": {"type": "integer", "minimum": 0},
                            "minItems": 2,
                            "maxItems": 2,
                        },
                    },
                },
            },
        },
    },
}

CERTIFICATE_SCHEMA = {
    "type": "object",
    "required": ["format_version", "cheeger_lb", "method"],
    "properties": {
        "format_version": {"const": 1},
        "cheeger_lb": {"type": "number", "exclusiveMinimum": 0},
        "method": {"enum": ["exact", "spectral", "connectivity", "charging"]},
        "lambda2": {"type": ["number", "null"]},
        "n": {"type": "integer"},
        "seed": {"type": "integer"},
    },
}

ROUTE_SCHEMA = {
    "type": "object",
    "required": ["format_version", "paths", "max_edge_congestion", "max_path_len", "met_targets"],
    "properties": {
        "format_version": {"const": 1},
        "paths": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        },
        "max_edge_congestion": {"type": "integer", "minimum": 0},
        "max_path_len": {"type": "integer", "minimum": 0},
        "met_targets": {"type": ["boolean", "null"]},
        "seed": {"type": "integer"},
    },
}

EMBEDDING_SCHEMA = {
    "type": "object",
    "required": ["format_version", "host", "anchor", "psi", "depth", "bound"],
    "properties": {
        "format_version": {"const": 1},
        "host": _GRAPH,
        "anchor": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "psi": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        },
        "depth": {"type": "integer", "minimum": 0},
        "bound": {"type": "number"},
        "fitted_z": {"type": "number"},
        "max_edge_congestion": {"type": "integer"},
        "seed": {"type": "integer"},
    },
}

E2E_REPORT_SCHEMA = {
    "type": "object",
    "required": [
        "format_version",
        "seed",
        "k",
        "gamma_satisfiable",
        "phi_satisfiable",
        "gamma_count",
        "phi_count",
        "satisfiability_agrees",
        "counts_agree",
        "depth",
        "depth_bound",
        "fitted_z",
        "max_edge_congestion",
        "timings",
    ],
    "properties": {
        "format_version": {"const": 1},
        "gamma_satisfiable": {"type": "boolean"},
        "phi_satisfiable": {"type": "boolean"},
        "gamma_count": {"type": "integer", "minimum": 0},
        "phi_count": {"type": "integer", "minimum": 0},
        "satisfiability_agrees": {"type": "boolean"},
        "counts_agree": {"type": "boolean"},
        "timings": {"type": "object"},
    },
}
