"""Case-file reader and writer.

The on-disk format is a restricted TOML document (grammar and schema
documented in cases/FORMAT.md): one section per entity kind, powers in
MW, prices in $/MWh, susceptance per-unit.  Per-period quantities may be
a scalar (broadcast over the horizon) or a bracketed length-T array.

Reading is strict: unknown keys, wrong types, and dangling references
are reported with the section that contains them.  Writing is
deterministic; a serialized case parses back to an equal CaseSpec.
"""

from __future__ import annotations

try:
    import tomllib
except ModuleNotFoundError:            # Python 3.10
    import tomli as tomllib

from .netmodel import (
    CaseSpec,
    Entity,
    Generator,
    Line,
    Load,
    Node,
    SpaceTimeIndex,
    VirtualLink,
    per_period,
    validate,
)


class CaseError(Exception):
    """Base class for case-file failures."""


class CaseFormatError(CaseError):
    """Syntax or schema violation; `location` names the offending section."""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class CaseValidationError(CaseError):
    """The file parsed but the case breaks a model invariant."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        lines = "; ".join(str(d) for d in self.diagnostics)
        super().__init__(f"invalid case: {lines}")


_SCHEMA = {
    "case": {"name": str, "description": str},
    "periods": {"count": int},
    "nodes": {"id": str, "label": str},
    "generators": {"id": str, "node": str, "capacity": "series",
                   "cost": "series", "ramp": float},
    "loads": {"id": str, "node": str, "entity": str, "request": "series",
              "value": "series"},
    "lines": {"id": str, "from": str, "to": str, "capacity": "series",
              "cost": "series", "susceptance": float},
    "entities": {"id": str, "loads": list, "dc_capacity": dict},
    "virtual_links": {"id": str, "entity": str, "from": "stindex",
                      "to": "stindex", "lower": float, "upper": float,
                      "cost": float},
}
_REQUIRED = {
    "case": ("name",),
    "periods": ("count",),
    "nodes": ("id",),
    "generators": ("id", "node", "capacity", "cost"),
    "loads": ("id", "node", "entity", "request", "value"),
    "lines": ("id", "from", "to", "capacity", "cost", "susceptance"),
    "entities": ("id",),
    "virtual_links": ("id", "entity", "from", "to", "lower", "upper", "cost"),
}


def _check_keys(section: str, table: dict, where: str):
    schema = _SCHEMA[section]
    for key in table:
        if key not in schema:
            raise CaseFormatError(f"unknown key {key!r}", where)
    for key in _REQUIRED[section]:
        if key not in table:
            raise CaseFormatError(f"missing required key {key!r}", where)


def _number(value, where, key):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise CaseFormatError(f"{key!r} must be a number", where)
    return float(value)


def _series(value, where, key):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if isinstance(value, list) and value and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        return [float(v) for v in value]
    raise CaseFormatError(f"{key!r} must be a number or an array of numbers", where)


def _stindex(value, where, key):
    if (not isinstance(value, list) or len(value) != 2
            or not isinstance(value[0], str)
            or isinstance(value[1], bool) or not isinstance(value[1], int)):
        raise CaseFormatError(f'{key!r} must be ["node", period]', where)
    return SpaceTimeIndex(node=value[0], period=value[1])


def parse_case(data) -> CaseSpec:
    """Parse and validate a case file (str or bytes).

    Raises CaseFormatError (syntax/schema, with position or section) or
    CaseValidationError (model invariant broken, with diagnostics).
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CaseFormatError(f"not valid UTF-8: {exc}")
    try:
        doc = tomllib.loads(data)
    except tomllib.TOMLDecodeError as exc:
        raise CaseFormatError(f"syntax error: {exc}")

    for section in doc:
        if section not in _SCHEMA:
            raise CaseFormatError(f"unknown section {section!r}", section)

    meta = doc.get("case")
    if not isinstance(meta, dict):
        raise CaseFormatError("missing [case] section", "case")
    _check_keys("case", meta, "case")
    periods_tbl = doc.get("periods")
    if not isinstance(periods_tbl, dict):
        raise CaseFormatError("missing [periods] section", "periods")
    _check_keys("periods", periods_tbl, "periods")
    count = periods_tbl["count"]
    if isinstance(count, bool) or not isinstance(count, int):
        raise CaseFormatError("'count' must be an integer", "periods")
    T = count

    def tables(section):
        items = doc.get(section, [])
        if not isinstance(items, list) or not all(isinstance(i, dict) for i in items):
            raise CaseFormatError("expected an array of tables "
                                  f"([[{section}]])", section)
        out = []
        for i, table in enumerate(items):
            where = f"{section}[{i}]"
            _check_keys(section, table, where)
            out.append((table, where))
        return out

    def broadcast(raw, where, key):
        try:
            return per_period(raw, T, key)
        except ValueError as exc:
            raise CaseFormatError(str(exc), where)

    nodes = tuple(
        Node(id=t["id"], label=t.get("label", "")) for t, _ in tables("nodes")
    )

    generators = []
    for t, where in tables("generators"):
        ramp = t.get("ramp")
        generators.append(Generator(
            id=t["id"], node=t["node"],
            capacity=broadcast(_series(t["capacity"], where, "capacity"),
                               where, "capacity"),
            bid_cost=broadcast(_series(t["cost"], where, "cost"), where, "cost"),
            ramp_limit=None if ramp is None else _number(ramp, where, "ramp"),
        ))

    loads = []
    for t, where in tables("loads"):
        loads.append(Load(
            id=t["id"], node=t["node"], entity=t["entity"],
            request=broadcast(_series(t["request"], where, "request"),
                              where, "request"),
            bid_value=broadcast(_series(t["value"], where, "value"),
                                where, "value"),
        ))

    lines = []
    for t, where in tables("lines"):
        lines.append(Line(
            id=t["id"], snd=t["from"], rec=t["to"],
            capacity=broadcast(_series(t["capacity"], where, "capacity"),
                               where, "capacity"),
            bid_cost=broadcast(_series(t["cost"], where, "cost"), where, "cost"),
            susceptance=_number(t["susceptance"], where, "susceptance"),
        ))

    entities = []
    for t, where in tables("entities"):
        eid = t["id"]
        declared = t.get("loads")
        if declared is None:
            owned = tuple(j.id for j in loads if j.entity == eid)
        else:
            if not all(isinstance(x, str) for x in declared):
                raise CaseFormatError("'loads' must be an array of load ids", where)
            owned = tuple(declared)
        caps = {}
        for node, raw in t.get("dc_capacity", {}).items():
            caps[node] = broadcast(_series(raw, where, "dc_capacity"),
                                   where, "dc_capacity")
        entities.append(Entity(id=eid, loads=owned, dc_capacity=caps))

    links = []
    for t, where in tables("virtual_links"):
        links.append(VirtualLink(
            id=t["id"], entity=t["entity"],
            snd=_stindex(t["from"], where, "from"),
            rec=_stindex(t["to"], where, "to"),
            lower=_number(t["lower"], where, "lower"),
            upper=_number(t["upper"], where, "upper"),
            bid_cost=_number(t["cost"], where, "cost"),
        ))

    case = CaseSpec(
        name=meta["name"],
        description=meta.get("description", ""),
        nodes=nodes,
        num_periods=T,
        generators=tuple(generators),
        loads=tuple(loads),
        lines=tuple(lines),
        entities=tuple(entities),
        virtual_links=tuple(links),
    )
    diags = validate(case)
    if diags:
        raise CaseValidationError(diags)
    return case


# -- writing ---------------------------------------------------------------

def _fmt_str(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _fmt_num(v: float) -> str:
    if v != v or v in (float("inf"), float("-inf")):
        raise ValueError(f"cannot serialize non-finite number {v}")
    return repr(float(v))


def _fmt_series(series: tuple) -> str:
    if all(v == series[0] for v in series):
        return _fmt_num(series[0])
    return "[" + ", ".join(_fmt_num(v) for v in series) + "]"


def serialize_case(case: CaseSpec) -> str:
    """Emit the deterministic case-file text for a CaseSpec."""
    out = ["[case]", f"name = {_fmt_str(case.name)}"]
    if case.description:
        out.append(f"description = {_fmt_str(case.description)}")
    out += ["", "[periods]", f"count = {case.num_periods}"]

    for n in case.nodes:
        out += ["", "[[nodes]]", f"id = {_fmt_str(n.id)}"]
        if n.label:
            out.append(f"label = {_fmt_str(n.label)}")

    for g in case.generators:
        out += ["", "[[generators]]", f"id = {_fmt_str(g.id)}",
                f"node = {_fmt_str(g.node)}",
                f"capacity = {_fmt_series(g.capacity)}",
                f"cost = {_fmt_series(g.bid_cost)}"]
        if g.ramp_limit is not None:
            out.append(f"ramp = {_fmt_num(g.ramp_limit)}")

    for j in case.loads:
        out += ["", "[[loads]]", f"id = {_fmt_str(j.id)}",
                f"node = {_fmt_str(j.node)}",
                f"entity = {_fmt_str(j.entity)}",
                f"request = {_fmt_series(j.request)}",
                f"value = {_fmt_series(j.bid_value)}"]

    for l in case.lines:
        out += ["", "[[lines]]", f"id = {_fmt_str(l.id)}",
                f"from = {_fmt_str(l.snd)}", f"to = {_fmt_str(l.rec)}",
                f"capacity = {_fmt_series(l.capacity)}",
                f"cost = {_fmt_series(l.bid_cost)}",
                f"susceptance = {_fmt_num(l.susceptance)}"]

    for e in case.entities:
        out += ["", "[[entities]]", f"id = {_fmt_str(e.id)}"]
        if e.loads:
            out.append("loads = [" + ", ".join(_fmt_str(x) for x in e.loads) + "]")
        if e.dc_capacity:
            out.append("[entities.dc_capacity]")
            for node in sorted(e.dc_capacity):
                out.append(f"{_fmt_str(node)} = {_fmt_series(e.dc_capacity[node])}")

    for v in case.virtual_links:
        out += ["", "[[virtual_links]]", f"id = {_fmt_str(v.id)}",
                f"entity = {_fmt_str(v.entity)}",
                f"from = [{_fmt_str(v.snd.node)}, {v.snd.period}]",
                f"to = [{_fmt_str(v.rec.node)}, {v.rec.period}]",
                f"lower = {_fmt_num(v.lower)}",
                f"upper = {_fmt_num(v.upper)}",
                f"cost = {_fmt_num(v.bid_cost)}"]

    return "\n".join(out) + "\n"
