"""Scenario files: TOML with one `kind` selecting the experiment family and
one section of engine parameters.  Unknown keys anywhere are errors, so a
typo cannot silently fall back to a default.
"""

import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List

if sys.version_info >= (3, 11):
    import tomllib as _toml
else:
    import tomli as _toml


class ScenarioError(ValueError):
    pass


_TOP_KEYS = {"kind", "seed", "run_id"}

_SCHEMAS: Dict[str, Dict[str, type]] = {
    "icn_grid_bpsr": {
        "rows": int, "cols": int, "clusters": int, "gateways_per_cluster": int,
        "T": int, "eta": int, "contact_budget": int, "forward": float,
        "stay": float, "inter_rate": float, "intra_rate": float, "horizon": int,
    },
    "icn_line_delay": {
        "n_c": int, "T": int, "gamma": float, "mode": str, "eta": int,
        "right": int, "contact_budget": int, "horizon": int,
    },
    "icn_two_scale": {
        "K1": float, "K2": float, "T": int, "mode": str, "beta": float,
        "kappa": int, "eta": int, "contact_budget": int,
        "shadow_blues_per_red": int, "rate_unit": float, "horizon": int,
        "measure_from": int, "record_every": int,
        # recorded for documentation only: the slotted model has no MAC
        # contention, so priority thresholds have no effect here
        "mac_priority_thresholds": list,
    },
    "mobility": {
        "slots_per_min": float, "eta_p": float, "eta_d": float, "K": float,
        "kappa": float, "variant": str, "minutes": float, "warmup_fraction": float,
        "forced_cycle": list, "arrivals": str, "routes": list, "flows": list,
        "record_every": int,
    },
    "tcp_multipath": {
        "paths": int, "total_capacity": int, "mode": str, "p_low": float,
        "weight_low": float, "p_high": float, "hold_lo": float, "hold_hi": float,
        "redundancy": int, "grace": int, "horizon": int, "measure_from": int,
        "fec_rate": float, "aqm_rho": float, "record_every": int,
    },
}

_ROUTE_KEYS = {"name": str, "duration_min": float, "cost": float, "floor": float,
               "visits": dict, "pickup_cost": dict}
_FLOW_KEYS = {"source": str, "dest": str, "rate_per_min": float}

_MODES = {
    "icn_grid_bpsr": {
        "rows": int, "cols": int, "clusters": int, "gateways_per_cluster": int,
        "T": int, "eta": int, "contact_budget": int, "forward": float,
        "stay": float, "inter_rate": float, "intra_rate": float, "horizon": int,
    },
    "icn_line_delay": {"bp", "bpsr"},
    "icn_two_scale": {"two_scale", "bp"},
    "tcp_multipath": {"rlc", "plain", "fixed_fec"},
}


@dataclass
class ScenarioConfig:
    kind: str
    seed: int
    run_id: str
    params: Dict[str, Any] = field(default_factory=dict)


def _check_keys(given: Dict[str, Any], allowed: Dict[str, type], where: str) -> None:
    for key, value in given.items():
        if key not in allowed:
            raise ScenarioError("unknown key %r in %s (allowed: %s)"
                                % (key, where, ", ".join(sorted(allowed))))
        want = allowed[key]
        if want is float and isinstance(value, int):
            continue
        if want is int and isinstance(value, bool):
            raise ScenarioError("key %r in %s must be an integer" % (key, where))
        if not isinstance(value, want):
            raise ScenarioError("key %r in %s must be %s, got %r"
                                % (key, where, want.__name__, value))


def _validate(doc: Dict[str, Any]) -> ScenarioConfig:
    unknown = set(doc) - _TOP_KEYS - set(_SCHEMAS)
    if unknown:
        raise ScenarioError("unknown top-level keys: %s" % ", ".join(sorted(unknown)))
    kind = doc.get("kind")
    if kind not in _SCHEMAS:
        raise ScenarioError("scenario kind must be one of %s, got %r"
                            % (", ".join(sorted(_SCHEMAS)), kind))
    sections = [k for k in doc if k in _SCHEMAS]
    if sections != [kind] and sections != []:
        if set(sections) != {kind}:
            raise ScenarioError("scenario of kind %r must only carry the %r section"
                                % (kind, kind))
    params = dict(doc.get(kind, {}))
    _check_keys(params, _SCHEMAS[kind], "[%s]" % kind)
    if kind in _MODES and "mode" in params and params["mode"] not in _MODES[kind]:
        raise ScenarioError("mode %r invalid for %s (one of %s)"
                            % (params["mode"], kind, ", ".join(sorted(_MODES[kind]))))
    if kind == "mobility":
        for i, route in enumerate(params.get("routes", [])):
            _check_keys(route, _ROUTE_KEYS, "[[mobility.routes]] #%d" % i)
            if route.get("duration_min", 0) <= 0:
                raise ScenarioError("route %r needs a positive duration" % route.get("name"))
            if not route.get("visits"):
                raise ScenarioError("route %r visits nobody" % route.get("name"))
            for node, count in route["visits"].items():
                if not isinstance(count, int) or count < 1:
                    raise ScenarioError("visit count for %s on %r must be a positive int"
                                        % (node, route.get("name")))
        stationaries = {n for r in params.get("routes", []) for n in r["visits"]}
        for i, flow in enumerate(params.get("flows", [])):
            _check_keys(flow, _FLOW_KEYS, "[[mobility.flows]] #%d" % i)
            if flow.get("rate_per_min", -1) <= 0:
                raise ScenarioError("flow #%d needs a positive rate" % i)
            for endpoint in (flow.get("source"), flow.get("dest")):
                if endpoint not in stationaries:
                    raise ScenarioError("flow endpoint %r not visited by any route" % endpoint)
    for key in ("horizon", "T", "n_c", "paths", "total_capacity"):
        if key in params and params[key] is not None and params[key] < 0:
            raise ScenarioError("%s must be non-negative" % key)
    return ScenarioConfig(kind=kind, seed=int(doc.get("seed", 1)),
                          run_id=str(doc.get("run_id", kind)), params=params)


def loads(text: str) -> ScenarioConfig:
    try:
        doc = _toml.loads(text)
    except _toml.TOMLDecodeError as exc:
        raise ScenarioError("scenario parse error: %s" % exc)
    return _validate(doc)


def load(path: str) -> ScenarioConfig:
    with open(path, "rb") as fh:
        data = fh.read()
    return loads(data.decode("utf-8"))


def apply_overrides(text: str, overrides: List[str]) -> str:
    """Apply --set key=value pairs (dotted paths into the TOML document) by
    re-serializing the parsed doc; values are parsed as TOML literals."""
    doc = _toml.loads(text)
    for item in overrides:
        if "=" not in item:
            raise ScenarioError("override %r is not key=value" % item)
        key, raw = item.split("=", 1)
        path = key.strip().split(".")
        try:
            parsed = _toml.loads("v = %s" % raw)["v"]
        except _toml.TOMLDecodeError:
            parsed = raw.strip()
        node = doc
        for part in path[:-1]:
            if part not in node or not isinstance(node[part], dict):
                raise ScenarioError("override path %r does not exist" % key)
            node = node[part]
        if path[-1] not in node:
            raise ScenarioError("override key %r does not exist in the scenario" % key)
        node[path[-1]] = parsed
    return _dump_toml(doc)


def _is_scalar_table(value: Any) -> bool:
    return isinstance(value, dict) and all(
        not isinstance(v, (dict, list)) or
        (isinstance(v, list) and not any(isinstance(x, dict) for x in v))
        for v in value.values())


def _dump_toml(doc: Dict[str, Any], prefix: str = "") -> str:
    # minimal writer for round-tripping overrides; handles the schema subset
    lines = []
    tables = []
    for key, value in doc.items():
        if isinstance(value, dict) and not _is_scalar_table(value):
            tables.append((key, value))
        elif isinstance(value, dict):
            lines.append("%s = %s" % (key, _toml_literal(value)))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            tables.append((key, value))
        else:
            lines.append("%s = %s" % (key, _toml_literal(value)))
    out = "\n".join(lines)
    for key, value in tables:
        full = ("%s.%s" % (prefix, key)) if prefix else key
        if isinstance(value, dict):
            out += "\n\n[%s]\n" % full + _dump_toml(value, full)
        else:
            for item in value:
                out += "\n\n[[%s]]\n" % full + _dump_toml(item, full)
    return out


def _toml_literal(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return repr(value)
    if isinstance(value, str):
        return '"%s"' % value.replace("\\", "\\\\").replace('"', '\\"')
    if isinstance(value, list):
        return "[%s]" % ", ".join(_toml_literal(v) for v in value)
    if isinstance(value, dict):
        return "{%s}" % ", ".join("%s = %s" % (k, _toml_literal(v)) for k, v in value.items())
    raise ScenarioError("cannot serialize %r" % (value,))
