"""Document and record formats: the human-writable side and the CSV side.

Collective documents are versioned YAML with a strict schema by default;
unknown fields reject in strict mode and warn otherwise. Record files are
comma-separated with a fixed header and every real printed at six
significant digits, so identical runs produce identical bytes.
"""

from __future__ import annotations

import csv
import io as _io

import yaml

from .core import (
    ARTIFICIAL,
    HUMAN,
    PROFILE_FIELDS,
    AgentDecl,
    AutonomyProfile,
    HacSpec,
    InteractionGraph,
    WeightVector,
    validate_hac,
)
from .attribution import Attribution, OutcomeTypeTable
from .errors import DocumentSyntaxError, SchemaError, ValidationError
from .estimation import ActionLog, BeliefSamplePairs, CommCounts, UtilityPair
from .scm import LinearCyclicScm, MixtureCycle, NoiseSpec, OutcomeEvent
from . import fixtures

DOCUMENT_VERSION = 1

_HAC_FIELDS = {"version", "agents", "edges", "weights", "tau", "delta_meas", "delta_model"}
_AGENT_FIELDS = {"id", "kind", "profile"}


def _load_yaml(text, what):
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise DocumentSyntaxError(f"{what}: {exc}") from exc
    if not isinstance(data, dict):
        raise SchemaError(f"{what}: expected a mapping at top level")
    return data


def _check_version(data, what):
    if "version" not in data:
        raise SchemaError(f"{what}: missing required field 'version'")
    if data["version"] != DOCUMENT_VERSION:
        raise SchemaError(
            f"{what}: unsupported version {data['version']!r} (expected {DOCUMENT_VERSION})"
        )


def _unknown_fields(data, allowed, what, strict, warnings):
    unknown = sorted(set(data) - allowed)
    if not unknown:
        return
    msg = f"{what}: unknown field(s) {', '.join(repr(u) for u in unknown)}"
    if strict:
        raise SchemaError(msg)
    if warnings is not None:
        warnings.append(msg)


def _require(data, field_name, what):
    if field_name not in data:
        raise SchemaError(f"{what}: missing required field {field_name!r}")
    return data[field_name]


def _four_vector(raw, what):
    if isinstance(raw, dict):
        missing = [f for f in PROFILE_FIELDS if f not in raw]
        if missing:
            raise SchemaError(f"{what}: missing component(s) {missing}")
        extra = sorted(set(raw) - set(PROFILE_FIELDS))
        if extra:
            raise SchemaError(f"{what}: unknown component(s) {extra}")
        return tuple(float(raw[f]) for f in PROFILE_FIELDS)
    if isinstance(raw, (list, tuple)) and len(raw) == 4:
        return tuple(float(v) for v in raw)
    raise SchemaError(f"{what}: expected four components")


def parse_hac_document(text, strict=True, warnings=None) -> HacSpec:
    """Parse and validate a collective document.

    Syntax failures, schema violations, and semantic validation failures
    raise distinct exception types so callers can diagnose precisely.
    """
    data = _load_yaml(text, "hac document")
    _check_version(data, "hac document")
    _unknown_fields(data, _HAC_FIELDS, "hac document", strict, warnings)

    raw_agents = _require(data, "agents", "hac document")
    if not isinstance(raw_agents, list) or not raw_agents:
        raise SchemaError("hac document: 'agents' must be a non-empty list")
    agents = []
    for pos, entry in enumerate(raw_agents):
        where = f"agents[{pos}]"
        if not isinstance(entry, dict):
            raise SchemaError(f"{where}: expected a mapping")
        _unknown_fields(entry, _AGENT_FIELDS, where, strict, warnings)
        agent_id = str(_require(entry, "id", where))
        kind = str(_require(entry, "kind", where))
        profile = None
        if "profile" in entry and entry["profile"] is not None:
            profile = AutonomyProfile(*_four_vector(entry["profile"], f"{where}.profile"))
        agents.append(AgentDecl(id=agent_id, kind=kind, profile=profile))

    raw_edges = _require(data, "edges", "hac document")
    if raw_edges is None:
        raw_edges = []
    if not isinstance(raw_edges, list):
        raise SchemaError("hac document: 'edges' must be a list")
    edges = []
    for pos, pair in enumerate(raw_edges):
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise SchemaError(f"edges[{pos}]: expected a [source, target] pair")
        edges.append((str(pair[0]), str(pair[1])))

    weights = WeightVector(*_four_vector(_require(data, "weights", "hac document"), "weights"))
    tau = float(_require(data, "tau", "hac document"))
    spec = HacSpec(
        agents=tuple(agents),
        graph=InteractionGraph(nodes=tuple(a.id for a in agents), edges=tuple(edges)),
        weights=weights,
        tau=tau,
        delta_meas=float(data.get("delta_meas", 0.0)),
        delta_model=float(data.get("delta_model", 0.0)),
    )
    return validate_hac(spec)


def serialize_hac_document(spec: HacSpec) -> str:
    """Canonical YAML for a collective; parse(serialize(x)) == x."""
    doc = {
        "version": DOCUMENT_VERSION,
        "agents": [
            {
                "id": a.id,
                "kind": a.kind,
                **(
                    {"profile": {f: getattr(a.profile, f) for f in PROFILE_FIELDS}}
                    if a.profile is not None
                    else {}
                ),
            }
            for a in spec.agents
        ],
        "edges": [[s, t] for s, t in spec.graph.edges],
        "weights": {f: getattr(spec.weights, f) for f in PROFILE_FIELDS},
        "tau": spec.tau,
        "delta_meas": spec.delta_meas,
        "delta_model": spec.delta_model,
    }
    return yaml.safe_dump(doc, sort_keys=False)


_ATTR_FIELDS = {"version", "shares", "remedy"}
_TABLE_FIELDS = {"version", "outcome_types", "kinds"}


def parse_attribution_document(text, strict=True, warnings=None) -> Attribution:
    data = _load_yaml(text, "attribution document")
    _check_version(data, "attribution document")
    _unknown_fields(data, _ATTR_FIELDS, "attribution document", strict, warnings)
    raw = _require(data, "shares", "attribution document")
    if not isinstance(raw, dict) or not raw:
        raise SchemaError("attribution document: 'shares' must be a non-empty mapping")
    shares = {
        str(otype): {str(a): float(v) for a, v in row.items()}
        for otype, row in raw.items()
    }
    remedy = None
    if data.get("remedy") is not None:
        remedy = {
            str(otype): {str(a): float(v) for a, v in row.items()}
            for otype, row in data["remedy"].items()
        }
    return Attribution(shares=shares, remedy=remedy)


def parse_table_document(text, strict=True, warnings=None) -> OutcomeTypeTable:
    data = _load_yaml(text, "table document")
    _check_version(data, "table document")
    _unknown_fields(data, _TABLE_FIELDS, "table document", strict, warnings)
    raw = _require(data, "outcome_types", "table document")
    if not isinstance(raw, dict) or not raw:
        raise SchemaError("table document: 'outcome_types' must be a non-empty mapping")
    types = {}
    for otype, row in raw.items():
        agents = {}
        for agent, entry in row.items():
            if not isinstance(entry, dict):
                raise SchemaError(
                    f"table document: entry for {otype}/{agent} must be a mapping"
                )
            kappa = float(_require(entry, "epistemic_access", f"{otype}/{agent}"))
            ce = float(_require(entry, "causal_effect", f"{otype}/{agent}"))
            agents[str(agent)] = (kappa, ce)
        types[str(otype)] = agents
    kinds = None
    if data.get("kinds") is not None:
        kinds = {str(a): str(k) for a, k in data["kinds"].items()}
    return OutcomeTypeTable(types=types, kinds=kinds)


_SCM_FIELDS = {
    "version",
    "model",
    "agents",
    "coefficients",
    "noise_gain",
    "noise",
    "outcome",
    "lambda_hat",
    "mixed_cycle_count",
}
_MIXTURE_FIELDS = {
    "version",
    "model",
    "order",
    "kinds",
    "agents",
    "alphabet_size",
    "drift_target",
}


def _parse_noise(raw, agent):
    if not isinstance(raw, dict):
        raise SchemaError(f"noise[{agent}]: expected a mapping")
    kind = raw.get("kind", "normal")
    if kind == "normal":
        return NoiseSpec()
    if kind == "finite":
        return NoiseSpec(
            kind="finite",
            values=tuple(float(v) for v in raw.get("values", ())),
            probs=tuple(float(p) for p in raw.get("probs", ())),
        )
    raise SchemaError(f"noise[{agent}]: unknown noise kind {kind!r}")


def parse_scm_document(text, strict=True, warnings=None):
    """Parse an SCM description: a linear system or a mixture loop.

    Returns ``(model, extras)`` where extras carries the optional
    annotations (compound autonomy, mixed-cycle count) used by reports.
    """
    data = _load_yaml(text, "scm document")
    _check_version(data, "scm document")
    model = data.get("model", "linear")
    if model == "linear":
        _unknown_fields(data, _SCM_FIELDS, "scm document", strict, warnings)
        agents = tuple(str(a) for a in _require(data, "agents", "scm document"))
        coefficients = {
            str(t): {str(s): float(w) for s, w in row.items()}
            for t, row in _require(data, "coefficients", "scm document").items()
        }
        gains = {str(a): float(g) for a, g in _require(data, "noise_gain", "scm document").items()}
        noise = {
            str(a): _parse_noise(raw, a)
            for a, raw in _require(data, "noise", "scm document").items()
        }
        raw_outcome = _require(data, "outcome", "scm document")
        outcome = OutcomeEvent(
            coeffs={str(a): float(w) for a, w in _require(raw_outcome, "coeffs", "outcome").items()},
            threshold=float(_require(raw_outcome, "threshold", "outcome")),
        )
        scm = LinearCyclicScm(
            agents=agents,
            coefficients=coefficients,
            noise_gain=gains,
            noise=noise,
            outcome=outcome,
        )
        extras = {
            "lambda_hat": data.get("lambda_hat"),
            "mixed_cycle_count": data.get("mixed_cycle_count"),
        }
        return scm, extras
    if model == "mixture_cycle":
        _unknown_fields(data, _MIXTURE_FIELDS, "scm document", strict, warnings)
        order = tuple(str(a) for a in _require(data, "order", "scm document"))
        kinds = {str(a): str(k) for a, k in _require(data, "kinds", "scm document").items()}
        q = int(_require(data, "alphabet_size", "scm document"))
        agents = {}
        for name, entry in _require(data, "agents", "scm document").items():
            if not isinstance(entry, dict):
                raise SchemaError(f"agents[{name}]: expected a mapping")
            executive = float(_require(entry, "executive", f"agents[{name}]"))
            revealed = int(entry.get("revealed_bits", 1))
            agents[str(name)] = fixtures.mixture_agent(executive, q=q, revealed_bits=revealed)
        cycle = MixtureCycle(
            order=order,
            kinds=kinds,
            agents=agents,
            alphabet_size=q,
            drift_target=int(data.get("drift_target", 0)),
        )
        return cycle, {}
    raise SchemaError(f"scm document: unknown model {model!r}")


def _read_csv(text, required, what):
    reader = csv.DictReader(_io.StringIO(text))
    if reader.fieldnames is None:
        raise SchemaError(f"{what}: empty file")
    missing = [c for c in required if c not in reader.fieldnames]
    if missing:
        raise SchemaError(f"{what}: missing column(s) {missing}")
    rows = list(reader)
    if not rows:
        raise SchemaError(f"{what}: no data rows")
    return rows


def read_belief_pairs(text) -> BeliefSamplePairs:
    rows = _read_csv(text, ("agent_belief", "supervisor_belief"), "belief log")
    return BeliefSamplePairs(
        pairs=tuple((r["agent_belief"], r["supervisor_belief"]) for r in rows)
    )


def read_action_log(text) -> ActionLog:
    data = _load_yaml(text, "action log")
    _check_version(data, "action log")
    policy = {
        str(s): {str(a): float(p) for a, p in row.items()}
        for s, row in _require(data, "policy", "action log").items()
    }
    events = []
    for pos, pair in enumerate(_require(data, "log", "action log")):
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise SchemaError(f"log[{pos}]: expected a [state, action] pair")
        events.append((str(pair[0]), str(pair[1])))
    count = data.get("action_count")
    if count is None:
        actions = {a for row in policy.values() for a in row}
        actions.update(a for _, a in events)
        count = len(actions)
    return ActionLog(events=tuple(events), policy=policy, action_count=int(count))


def read_utility_pair(text) -> UtilityPair:
    rows = _read_csv(text, ("outcome", "agent_utility", "supervisor_utility"), "utility table")
    return UtilityPair(
        agent={r["outcome"]: float(r["agent_utility"]) for r in rows},
        supervisor={r["outcome"]: float(r["supervisor_utility"]) for r in rows},
    )


def read_comm_counts(text) -> CommCounts:
    rows = _read_csv(text, ("self_initiated", "human_directed"), "communication counts")
    row = rows[0]
    return CommCounts(
        self_initiated=int(row["self_initiated"]),
        human_directed=int(row["human_directed"]),
    )


def read_info_log(text):
    rows = _read_csv(text, ("action", "supervisor_state", "agent_state"), "info log")
    actions = tuple(r["action"] for r in rows)
    sup = tuple(r["supervisor_state"] for r in rows)
    own = tuple(r["agent_state"] for r in rows)
    return actions, sup, own


def format_real(value) -> str:
    """Fixed six-significant-digit rendering; empty for absent values."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, int):
        return str(value)
    return f"{value:.6g}"


def render_records(header, rows) -> str:
    """Deterministic CSV text for a sequence of record mappings."""
    out = _io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(
            [
                format_real(row.get(col)) if not isinstance(row.get(col), str) else row.get(col)
                for col in header
            ]
        )
    return out.getvalue()


def write_records(path, header, rows):
    text = render_records(header, rows)
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return path
