"""Fan files and invariant reports as JSON.

A fan file is a JSON object with exactly the keys ``ambient_rank``, ``rays``,
``maximal_cones`` and optionally ``name``. Reports carry every invariant plus
the tool version and a sha256 digest of the canonical fan JSON.
"""

from __future__ import annotations

import hashlib
import json

from . import __version__
from .cech import InvariantReport
from .fan import Fan, FanError, build_fan
from .linalg import AbelianGroup

FAN_KEYS = ("ambient_rank", "rays", "maximal_cones", "name")
REPORT_KEYS = (
    "r", "s", "n_rays", "counts", "top_dim", "complete", "simplicial",
    "rho0", "rho1", "rho1_prime", "rho2", "kappa", "cech_dims", "euler",
    "class_group", "nonprojective_certificate",
)


class SchemaError(FanError):
    def __init__(self, path: str, detail: str = ""):
        msg = f"schema error: {path}"
        if detail:
            msg += f" ({detail})"
        super().__init__([msg])


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _int_list(value, path: str) -> list[int]:
    if not isinstance(value, list):
        raise SchemaError(path, "expected an array")
    for i, x in enumerate(value):
        if not _is_int(x):
            raise SchemaError(f"{path}[{i}]", "expected an integer")
    return value


def parse_fan_file(data: bytes | str, normalize: bool = False) -> Fan:
    """Parse and validate a fan file; raises :class:`FanError` (or :class:`SchemaError`)."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError:
            raise SchemaError("$", "not UTF-8") from None
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise SchemaError("$", "expected an object")
    for key in obj:
        if key not in FAN_KEYS:
            raise SchemaError(f"$.{key}", "unknown key")
    for key in FAN_KEYS[:3]:
        if key not in obj:
            raise SchemaError(f"$.{key}", "missing")
    r = obj["ambient_rank"]
    if not _is_int(r) or r < 0:
        raise SchemaError("$.ambient_rank", "expected a nonnegative integer")
    rays = obj["rays"]
    if not isinstance(rays, list):
        raise SchemaError("$.rays", "expected an array")
    for i, v in enumerate(rays):
        _int_list(v, f"$.rays[{i}]")
    cones = obj["maximal_cones"]
    if not isinstance(cones, list):
        raise SchemaError("$.maximal_cones", "expected an array")
    for i, c in enumerate(cones):
        _int_list(c, f"$.maximal_cones[{i}]")
    name = obj.get("name")
    if name is not None and not isinstance(name, str):
        raise SchemaError("$.name", "expected a string")
    try:
        return build_fan(r, rays, cones, name=name, normalize=normalize)
    except FanError as exc:
        errors = [e + " (use --normalize)" if e.endswith("not primitive") else e for e in exc.errors]
        raise FanError(errors) from None


def _dumps(obj: dict) -> bytes:
    # one key per line, values inline
    lines = [f"  {json.dumps(k)}: {json.dumps(v)}" for k, v in obj.items()]
    return ("{\n" + ",\n".join(lines) + "\n}\n").encode()


def fan_json(f: Fan) -> bytes:
    """Pretty, deterministic fan file bytes; :func:`parse_fan_file` inverts this."""
    return _dumps(f.to_json())


def input_digest(f: Fan) -> str:
    canon = json.dumps(f.to_json(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def report_json(report: InvariantReport, fan: Fan | None = None) -> dict:
    out = {
        "r": report.r,
        "s": report.s,
        "n_rays": report.n_rays,
        "counts": list(report.counts),
        "top_dim": report.top_dim,
        "complete": report.complete,
        "simplicial": report.simplicial,
        "rho0": report.rho0,
        "rho1": report.rho1,
        "rho1_prime": report.rho1_prime,
        "rho2": report.rho2,
        "kappa": list(report.kappa),
        "cech_dims": list(report.cech_dims),
        # the two Euler characteristics always agree
        "euler": report.euler_kappa,
        "class_group": report.class_group.to_json(),
        "nonprojective_certificate": report.nonprojective_certificate,
        "version": __version__,
    }
    if fan is not None:
        out["input_digest"] = input_digest(fan)
    return out


def _human(report: InvariantReport) -> str:
    def seq(xs):
        return "(" + ", ".join(str(x) for x in xs) + ")"

    rows = [
        ("r", report.r),
        ("s", report.s),
        ("rays", report.n_rays),
        ("cone counts", seq(report.counts)),
        ("top dim", report.top_dim),
        ("complete", "yes" if report.complete else "no"),
        ("simplicial", "yes" if report.simplicial else "no"),
        ("rho0", report.rho0),
        ("rho1", report.rho1),
        ("rho1'", report.rho1_prime),
        ("rho2", report.rho2),
        ("kappa", seq(report.kappa)),
        ("cech dims", seq(report.cech_dims)),
        ("euler", report.euler_kappa),
        ("class group", report.class_group),
        ("nonprojective", "yes" if report.nonprojective_certificate else "no"),
    ]
    width = max(len(k) for k, _ in rows)
    return "".join(f"{k.ljust(width)}  {v}\n" for k, v in rows)


def emit_report(report: InvariantReport, fmt: str = "human", fan: Fan | None = None) -> bytes:
    if fmt == "json":
        return (json.dumps(report_json(report, fan), separators=(",", ":")) + "\n").encode()
    if fmt == "human":
        return _human(report).encode()
    raise ValueError(f"unknown format {fmt!r}")


def report_from_json(data: bytes | str | dict) -> InvariantReport:
    """Rebuild an :class:`InvariantReport` from :func:`emit_report` JSON output."""
    obj = json.loads(data) if isinstance(data, (bytes, str)) else data
    missing = [k for k in REPORT_KEYS if k not in obj]
    if missing:
        raise SchemaError(f"$.{missing[0]}", "missing")
    extra = set(obj) - set(REPORT_KEYS) - {"version", "input_digest"}
    if extra:
        raise SchemaError(f"$.{sorted(extra)[0]}", "unknown key")
    return InvariantReport(
        r=obj["r"],
        s=obj["s"],
        n_rays=obj["n_rays"],
        counts=tuple(obj["counts"]),
        top_dim=obj["top_dim"],
        complete=obj["complete"],
        simplicial=obj["simplicial"],
        rho0=obj["rho0"],
        rho1=obj["rho1"],
        rho1_prime=obj["rho1_prime"],
        rho2=obj["rho2"],
        kappa=tuple(obj["kappa"]),
        cech_dims=tuple(obj["cech_dims"]),
        euler_kappa=obj["euler"],
        euler_c=obj["euler"],
        class_group=AbelianGroup.from_json(obj["class_group"]),
        nonprojective_certificate=obj["nonprojective_certificate"],
    )
