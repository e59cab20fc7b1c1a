"""
Effective pipeline configuration.

Precedence: shipped defaults < `--config` JSON file (deep-merged) < CLI flags.
Relative paths inside a config file resolve against that file's directory.
"""

import copy
import hashlib
import json
import os
from typing import Any, Dict, List, Mapping, Optional

from core import config as C
from core.errors import ConfigError, IoError

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
CONFIG_DIR = os.path.join(ROOT, "config")
LISTS_DIR = os.path.join(CONFIG_DIR, "lists")
ADAPTERS_DIR = os.path.join(CONFIG_DIR, "adapters")

# Keys that affect scheduling only; they are left out of the fingerprint and the report echo.
RUNTIME_KEYS = ("threads", "output_dir")

DEFAULTS: Dict[str, Any] = {
    "inputs": [],
    "lists": {
        "low_credibility": os.path.join(LISTS_DIR, "low_credibility_domains.txt"),
        "entity_dictionary": os.path.join(LISTS_DIR, "entity_dictionary.json"),
        "propaganda_lexicon": os.path.join(LISTS_DIR, "propaganda_lexicon.json"),
        "shortener_map": None,
        "articles": None,
    },
    "narrative": {
        "window_len": C.WINDOW_LEN,
        "stride": C.STRIDE,
        "theta_edge": C.THETA_EDGE,
        "c_min": C.C_MIN,
        "tau_link": C.TAU_LINK,
        "z_event": C.Z_EVENT,
        "k_trailing": C.K_TRAILING,
        "clusterer": C.CLUSTERER,
    },
    "coordination": {
        "k_words": C.K_WORDS,
        "num_perm": C.NUM_PERM,
        "bands": C.BANDS,
        "rows": C.ROWS,
        "j_dup": C.J_DUP,
        "dup_min_accounts": C.DUP_MIN_ACCOUNTS,
        "sync_window": C.SYNC_WINDOW,
        "sync_min_posts": C.SYNC_MIN_POSTS,
        "weights": dict(C.COORDINATION_WEIGHTS),
        "bias": C.COORDINATION_BIAS,
    },
    "agenda": {
        "lambda": C.AGENDA_LAMBDA,
    },
    "credibility": {
        "min_account_age_days": C.MIN_ACCOUNT_AGE_DAYS,
        "follower_skew_ratio": C.FOLLOWER_SKEW_RATIO,
        "burst_posts_per_hour": C.BURST_POSTS_PER_HOUR,
        "handle_pattern": C.HANDLE_PATTERN,
        "min_flags": C.MIN_FLAGS,
        "weights": dict(C.DECEPTION_WEIGHTS),
    },
    "classify": {
        "weights": dict(C.FUSION_WEIGHTS),
        "bias": C.FUSION_BIAS,
        "decision_threshold": C.DECISION_THRESHOLD,
        "calibration_path": None,
        "learning_rate": C.CALIBRATION_LEARNING_RATE,
        "epochs": C.CALIBRATION_EPOCHS,
        "l2": C.CALIBRATION_L2,
    },
    "attribution": {
        "cosine_threshold": C.COSINE_THRESHOLD,
    },
    "report": {
        "max_evidence_items": C.MAX_EVIDENCE_ITEMS,
    },
    "seed": C.SEED,
    "threads": 0,
    "output_dir": "out",
}

# Sections whose nested maps take arbitrary-but-known axis names.
_WEIGHT_KEYS = {
    ("coordination", "weights"): set(C.COORDINATION_WEIGHTS),
    ("credibility", "weights"): set(C.DECEPTION_WEIGHTS),
    ("classify", "weights"): set(C.FUSION_WEIGHTS),
}
_PATH_KEYS = ("low_credibility", "entity_dictionary", "propaganda_lexicon", "shortener_map", "articles")


def deep_merge(base: Dict[str, Any], override: Mapping[str, Any]) -> Dict[str, Any]:
    """Recursive dict merge; override wins, lists are replaced whole."""
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, Mapping) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def _check_keys(data: Mapping[str, Any], reference: Mapping[str, Any], where: str = "") -> None:
    for key, value in data.items():
        path = f"{where}.{key}" if where else key
        if key not in reference:
            raise ConfigError(f"unknown config key '{path}'")
        if isinstance(reference[key], dict) and isinstance(value, Mapping):
            _check_keys(value, reference[key], path)


def _resolve(path: Optional[str], base_dir: str) -> Optional[str]:
    if not path:
        return path
    path = os.path.expanduser(path)
    return path if os.path.isabs(path) else os.path.normpath(os.path.join(base_dir, path))


def resolve_adapter(ref: str, base_dir: str) -> str:
    """An adapter is a JSON path or the name of a shipped adapter (alpha, beta, gamma)."""
    if not ref.endswith(".json") and os.sep not in ref and "/" not in ref:
        return os.path.join(ADAPTERS_DIR, f"{ref}.json")
    return _resolve(ref, base_dir)


def resolve_paths(data: Dict[str, Any], base_dir: str) -> Dict[str, Any]:
    """Make input, adapter, list and calibration paths of a config fragment absolute."""
    data = copy.deepcopy(data)
    if "inputs" in data:
        resolved = []
        for item in data["inputs"]:
            if not isinstance(item, Mapping) or "path" not in item or "adapter" not in item:
                raise ConfigError("each input needs 'path' and 'adapter'")
            resolved.append({"path": _resolve(item["path"], base_dir),
                             "adapter": resolve_adapter(item["adapter"], base_dir)})
        data["inputs"] = resolved
    for key in _PATH_KEYS:
        if key in data.get("lists", {}):
            data["lists"][key] = _resolve(data["lists"][key], base_dir)
    if "calibration_path" in data.get("classify", {}):
        data["classify"]["calibration_path"] = _resolve(data["classify"]["calibration_path"], base_dir)
    if data.get("output_dir"):
        data["output_dir"] = _resolve(data["output_dir"], base_dir)
    return data


def _positive(value: Any, name: str) -> None:
    if not isinstance(value, (int, float)) or isinstance(value, bool) or value <= 0:
        raise ConfigError(f"{name} must be positive (got {value!r})")


def _unit(value: Any, name: str) -> None:
    if not isinstance(value, (int, float)) or not 0.0 <= value <= 1.0:
        raise ConfigError(f"{name} must lie in [0, 1] (got {value!r})")


def validate(data: Mapping[str, Any]) -> None:
    """Raise ConfigError on the first violated constraint."""
    _check_keys(data, DEFAULTS)
    for (section, key), allowed in _WEIGHT_KEYS.items():
        weights = data[section][key]
        if set(weights) != allowed:
            raise ConfigError(f"{section}.{key} must name exactly {sorted(allowed)}")
        for axis, w in weights.items():
            if not isinstance(w, (int, float)) or w < 0:
                raise ConfigError(f"{section}.{key}.{axis} must be non-negative (got {w!r})")

    nar = data["narrative"]
    _positive(nar["window_len"], "narrative.window_len")
    _positive(nar["stride"], "narrative.stride")
    if nar["stride"] > nar["window_len"]:
        raise ConfigError("narrative.stride must not exceed narrative.window_len")
    if not isinstance(nar["c_min"], int) or nar["c_min"] < 1:
        raise ConfigError("narrative.c_min must be an integer >= 1")
    _unit(nar["theta_edge"], "narrative.theta_edge")
    _unit(nar["tau_link"], "narrative.tau_link")
    if nar["clusterer"] not in ("components", "label_propagation"):
        raise ConfigError("narrative.clusterer must be 'components' or 'label_propagation'")
    if not isinstance(nar["k_trailing"], int) or nar["k_trailing"] < 2:
        raise ConfigError("narrative.k_trailing must be an integer >= 2")

    co = data["coordination"]
    for key in ("k_words", "num_perm", "bands", "rows", "sync_window", "sync_min_posts", "dup_min_accounts"):
        _positive(co[key], f"coordination.{key}")
    if co["bands"] * co["rows"] != co["num_perm"]:
        raise ConfigError("coordination.bands * coordination.rows must equal coordination.num_perm")
    _unit(co["j_dup"], "coordination.j_dup")

    if data["agenda"]["lambda"] < 0:
        raise ConfigError("agenda.lambda must be non-negative")

    cred = data["credibility"]
    for key in ("min_account_age_days", "follower_skew_ratio", "burst_posts_per_hour", "min_flags"):
        _positive(cred[key], f"credibility.{key}")

    cl = data["classify"]
    _unit(cl["decision_threshold"], "classify.decision_threshold")
    _positive(cl["learning_rate"], "classify.learning_rate")
    _positive(cl["epochs"], "classify.epochs")
    if cl["l2"] < 0:
        raise ConfigError("classify.l2 must be non-negative")

    _unit(data["attribution"]["cosine_threshold"], "attribution.cosine_threshold")
    _positive(data["report"]["max_evidence_items"], "report.max_evidence_items")
    if not isinstance(data["seed"], int) or isinstance(data["seed"], bool):
        raise ConfigError("seed must be an integer")
    if not isinstance(data["threads"], int) or data["threads"] < 0:
        raise ConfigError("threads must be a non-negative integer (0 = all cores)")


class PipelineConfig:
    """Validated effective configuration plus its fingerprint."""

    def __init__(self, data: Dict[str, Any]):
        validate(data)
        self.data = data

    def __getitem__(self, key: str) -> Any:
        return self.data[key]

    def echo(self) -> Dict[str, Any]:
        """Config as written into artifacts: runtime-only keys removed."""
        return {k: v for k, v in self.data.items() if k not in RUNTIME_KEYS}

    @property
    def fingerprint(self) -> str:
        return config_fingerprint(self.data)

    @property
    def output_dir(self) -> str:
        return self.data["output_dir"]

    @property
    def threads(self) -> int:
        return self.data["threads"]


def calibration_digest(path: Optional[str]) -> Optional[str]:
    """SHA-256 of a calibration file's bytes; None when unset or not written yet."""
    if not path:
        return None
    try:
        with open(path, "rb") as f:
            return hashlib.sha256(f.read()).hexdigest()
    except OSError:
        return None


def config_fingerprint(data: Mapping[str, Any]) -> str:
    """
    SHA-256 of the canonical JSON of the config without runtime-only keys.

    A configured calibration file enters through its content digest, so
    rewriting the file changes the fingerprint even though the path does not.
    """
    payload = {k: v for k, v in data.items() if k not in RUNTIME_KEYS}
    digest = calibration_digest(data.get("classify", {}).get("calibration_path"))
    if digest is not None:
        payload["calibration_sha256"] = digest
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def read_config_file(path: str) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as exc:
        raise IoError(path, str(exc)) from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    _check_keys(data, DEFAULTS)
    return resolve_paths(data, os.path.dirname(os.path.abspath(path)))


def load_config(path: Optional[str] = None, overrides: Optional[Mapping[str, Any]] = None) -> PipelineConfig:
    """
    Build the effective configuration.

    Args:
        path: optional JSON config file, deep-merged over the defaults
        overrides: nested values from CLI flags, applied last (paths relative to the cwd)

    Raises:
        ConfigError: unknown key or violated constraint
        IoError: config file unreadable
    """
    data = copy.deepcopy(DEFAULTS)
    if path:
        data = deep_merge(data, read_config_file(path))
    if overrides:
        _check_keys(overrides, DEFAULTS)
        data = deep_merge(data, resolve_paths(dict(overrides), os.getcwd()))
    return PipelineConfig(data)


def cli_overrides(args: Any) -> Dict[str, Any]:
    """Nested override dict from parsed CLI flags that were actually given."""
    out: Dict[str, Any] = {}

    def put(section: Optional[str], key: str, value: Any) -> None:
        if value is None:
            return
        if section is None:
            out[key] = value
        else:
            out.setdefault(section, {})[key] = value

    put(None, "seed", getattr(args, "seed", None))
    put(None, "threads", getattr(args, "threads", None))
    put(None, "output_dir", getattr(args, "out", None))
    window = getattr(args, "window", None)
    stride = getattr(args, "stride", None)
    put("narrative", "window_len", window)
    # --window alone means tumbling windows
    put("narrative", "stride", stride if stride is not None else window)
    put("narrative", "theta_edge", getattr(args, "theta_edge", None))
    put("narrative", "tau_link", getattr(args, "tau_link", None))
    put("coordination", "j_dup", getattr(args, "j_dup", None))

    inputs: List[Dict[str, str]] = []
    for spec in getattr(args, "input", None) or []:
        path, sep, adapter = spec.rpartition(":")
        if not sep or not path or not adapter:
            raise ConfigError(f"--input expects PATH:ADAPTER (got {spec!r})")
        inputs.append({"path": path, "adapter": adapter})
    if inputs:
        out["inputs"] = inputs
    return out
