import pathlib
try:
    import tomllib  # Python 3.11+
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib
from copy import deepcopy

ROOT = pathlib.Path(__file__).parent
CONFIG = ROOT / "config.toml"

# Guard defaults. config.toml overrides these, command-line flags override both.
DEFAULTS = {
    # ---------- SAMPLING ----------
    # Free coefficients are sampled from [-box, box] when a group is infinite
    "box": 3,

    # ---------- SEARCH GUARDS ----------
    # Raw candidate ceiling for witness searches and the brute-force polarity oracle
    "max_candidates": 1_000_000,
    # Raw candidate ceiling for full cocycle enumeration
    "enumerate_max_candidates": 10_000_000,

    # ---------- EXECUTION ----------
    "parallel": 1,                      # worker processes for partitioned searches

    # ---------- LOGGING ----------
    "log_level": "WARNING",
}


def load_config(path: pathlib.Path | None = None) -> dict:
    path = path or CONFIG
    if not path.exists():
        return {}
    with open(path, "rb") as f:
        return tomllib.load(f)


def _coerce_types(base_cfg: dict, raw: dict) -> dict:
    """
    Convert incoming values to the types of the defaults.
    Only known keys are returned; None means "not given".
    """
    out = {}
    for k, v in (raw or {}).items():
        if k not in base_cfg or v is None:
            continue
        t = type(base_cfg[k])
        try:
            out[k] = t(v)
        except (TypeError, ValueError):
            # ignore bad casts; skip key
            pass
    return out


def effective_config(overrides: dict | None = None, path: pathlib.Path | None = None) -> dict:
    """DEFAULTS + config.toml [guards]/[logging] + explicit overrides."""
    eff = deepcopy(DEFAULTS)
    file_cfg = load_config(path)
    flat = dict(file_cfg.get("guards", {}))
    if "level" in file_cfg.get("logging", {}):
        flat["log_level"] = file_cfg["logging"]["level"]
    eff.update(_coerce_types(DEFAULTS, flat))
    eff.update(_coerce_types(DEFAULTS, overrides or {}))
    return eff
