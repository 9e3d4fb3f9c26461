"""Top-level dispatch and the experiment harness.

``embed_auto`` sets ``m = (alpha + eps)|H| sqrt(log d)`` and ``k = eps m/2``,
shrinks the host to a minor-minimal member of E(m, k), and sends the result
to the sparse embedder when it has at least ``size_threshold * m`` vertices
and to the dense embedder otherwise.

``run_experiment`` expands a JSON grid into rows, runs each row, and writes
``results.csv`` and ``results.json``.  Both files depend only on the
config; wall-clock times go to ``timings.json``.
"""

from __future__ import annotations

import csv
import hashlib
import io
import itertools
import json
import logging
import math
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .connectivity import vertex_connectivity
from .dense import DenseConfig, embed_dense_rooted
from .extremal import ExtremalClassParams, compute_alpha, extract_minor_minimal, in_class
from .failure import EmbeddingFailed, FailureReport, inequality
from .generators import generate
from .graph import Graph, graph_stats
from .oracle import MinorModel, dumps_model, verify_model
from .sparse import SparseConfig, embed_sparse

__all__ = [
    "AutoRun",
    "PipelineConfig",
    "RunRecord",
    "derive_constants",
    "embed_auto",
    "expand_grid",
    "read_csv_records",
    "read_json_records",
    "row_digest",
    "replay",
    "run_auto",
    "run_experiment",
    "run_row",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PipelineConfig:
    """Settings for :func:`embed_auto`.

    ``dense_delta`` and ``dense_eta`` only matter in relaxed mode; in
    paper-faithful mode the dense call uses ``delta = eps/(2 size_threshold)``
    as in the top-level argument.
    """

    eps: float = 0.1
    mode: str = "relaxed"
    seed: int = 0
    size_threshold: float = 600.0
    attempts: int = 20
    connectivity_multiple: float = 4.0
    q: float = 0.1
    dense_delta: float = 0.5
    dense_eta: float | None = None
    kappa_limit: int = 400

    def __post_init__(self):
        if self.mode not in ("paper_faithful", "relaxed"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "paper_faithful" and not 0 < self.eps < 0.25:
            raise ValueError("paper_faithful mode needs 0 < eps < 1/4")
        if not self.eps > 0:
            raise ValueError("eps must be positive")


def derive_constants(H: Graph, eps: float, alpha: float | None = None) -> dict:
    """``d``, ``m = (alpha+eps)|H| sqrt(ln d)`` and ``k = eps m / 2`` for a target graph."""
    if alpha is None:
        alpha = compute_alpha().alpha
    t = H.n
    d = 2 * H.num_edges / t if t else 0.0
    m = (alpha + eps) * t * math.sqrt(math.log(d)) if d > 1 else 0.0
    return {"alpha": alpha, "d": d, "m": m, "k": eps * m / 2}


@dataclass
class AutoRun:
    model: MinorModel | None
    report: FailureReport | None
    derived: dict
    stages: list[dict] = field(default_factory=list)

    @property
    def success(self) -> bool:
        return self.model is not None


def _lift_model(H: Graph, origin: list[frozenset[int]], model: MinorModel) -> MinorModel:
    return MinorModel(H, [frozenset().union(*(origin[x] for x in b)) for b in model.branch_sets])


def run_auto(G: Graph, H: Graph, config: PipelineConfig = PipelineConfig()) -> AutoRun:
    """:func:`embed_auto` with the derived constants and per-stage outcomes kept."""
    cfg = config
    derived = derive_constants(H, cfg.eps)
    m, k = derived["m"], derived["k"]
    st = graph_stats(G) if G.n else None
    derived.update(host_n=G.n, host_e=G.num_edges, host_density=st.density if st else 0.0)
    stages: list[dict] = []

    def fail(report: FailureReport) -> AutoRun:
        stages.append({"stage": report.stage, "ok": False})
        return AutoRun(None, report, derived, stages)

    if H.n == 0 or G.n < H.n:
        return fail(FailureReport("auto/precondition", "host has fewer vertices than the target",
                                  [inequality(G.n, "<", H.n, "|G|")], cfg.seed))
    if not m > 1:
        return fail(FailureReport("auto/precondition", "target too sparse for the extremal class",
                                  [inequality(m, "<=", 1, "m")], cfg.seed))
    params = ExtremalClassParams(m, k)
    if cfg.mode == "paper_faithful" and G.num_edges < m * G.n:
        log.warning("e(G) = %d < m|G| = %.3f; running best effort", G.num_edges, m * G.n)
    member = in_class(G, params)
    derived["host_in_class"] = member
    if member:
        ext = extract_minor_minimal(G, params)
        Gp, origin = ext.graph, ext.origin
        derived["certificate_passed"] = ext.certificate.passed
        stages.append({"stage": "extract", "ok": True})
    else:
        log.warning("host is not in E(%.4f, %.4f); skipping extraction", m, k)
        Gp, origin = G, [frozenset([v]) for v in range(G.n)]
        derived["certificate_passed"] = None
        stages.append({"stage": "extract", "ok": False, "skipped": True})
    st2 = graph_stats(Gp)
    derived.update(minimal_n=Gp.n, minimal_e=Gp.num_edges, density=st2.density, minimal_min_degree=st2.min_degree)
    derived["kappa"] = vertex_connectivity(Gp) if 2 <= Gp.n <= cfg.kappa_limit else None
    branch = "sparse" if Gp.n >= cfg.size_threshold * m else "dense"
    derived["branch"] = branch

    try:
        if branch == "sparse":
            scfg = SparseConfig(mode=cfg.mode, seed=cfg.seed, q=cfg.q, connectivity_multiple=cfg.connectivity_multiple,
                                size_threshold=cfg.size_threshold)
            sub = embed_sparse(Gp, H, m, scfg)
        else:
            if Gp.n < H.n:
                raise EmbeddingFailed(FailureReport("dense/precondition", "minimal graph smaller than the target",
                                                    [inequality(Gp.n, "<", H.n, "|G'|")], cfg.seed))
            eps2 = cfg.eps / (2 * cfg.size_threshold)
            p = st2.density - eps2
            derived["p"] = p
            if cfg.mode == "paper_faithful":
                delta = cfg.eps / (2 * cfg.size_threshold)
                # the dense embedder tightens delta to min(delta, eps'/2); eta follows it
                eta = min(delta, eps2 / 2) / 8
                dcfg = DenseConfig(eps=eps2, delta=delta, eta=eta, p=p, mode="paper_faithful",
                                   attempts=cfg.attempts, seed=cfg.seed)
            else:
                dcfg = DenseConfig(eps=eps2, delta=cfg.dense_delta, eta=cfg.dense_eta, p=max(p, 1e-6),
                                   mode="relaxed", attempts=cfg.attempts, seed=cfg.seed)
            # roots: the first |H| vertices of the minimal graph
            sub = embed_dense_rooted(Gp, H, list(range(H.n)), dcfg)
    except EmbeddingFailed as exc:
        return fail(exc.report.tagged("auto"))
    stages.append({"stage": branch, "ok": True})
    model = _lift_model(H, origin, sub)
    violations = verify_model(G, model)
    assert not violations, violations
    stages.append({"stage": "verify", "ok": True})
    return AutoRun(model, None, derived, stages)


def embed_auto(G: Graph, H: Graph, config: PipelineConfig = PipelineConfig()) -> MinorModel:
    """A verified H minor of ``G``, or :class:`EmbeddingFailed` with a stage-tagged report."""
    run = run_auto(G, H, config)
    if run.report is not None:
        raise EmbeddingFailed(run.report)
    return run.model


# ---------------------------------------------------------------- experiment harness

_RANDOM_FAMILIES = {"gnp", "random_avg_degree", "glued_cliques"}
_CONFIG_KEYS = {"host", "target", "seeds", "mode", "eps", "method", "pipeline"}
METHODS = ("auto", "dense", "sparse")


def _expand(spec: dict) -> list[dict]:
    keys = sorted(spec)
    values = [spec[k] if isinstance(spec[k], list) else [spec[k]] for k in keys]
    return [dict(zip(keys, combo)) for combo in itertools.product(*values)]


def expand_grid(config: dict) -> list[dict]:
    """Row specs in canonical order: host grid, then target grid, then seeds.

    List-valued entries of ``host`` and ``target`` are grid axes.  ``seeds``
    is a count or an explicit list; random families get the row seed.
    """
    unknown = set(config) - _CONFIG_KEYS
    if unknown:
        raise ValueError(f"unknown config keys {sorted(unknown)}")
    for key in ("host", "target"):
        if key not in config or not isinstance(config[key], dict) or "family" not in config[key]:
            raise ValueError(f"config needs a {key!r} object with a 'family'")
    seeds = config.get("seeds", [0])
    if isinstance(seeds, int):
        seeds = list(range(seeds))
    if not all(isinstance(s, int) and not isinstance(s, bool) for s in seeds):
        raise ValueError("seeds must be integers")
    method = config.get("method", "auto")
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")
    mode = config.get("mode", "relaxed")
    eps = config.get("eps", 0.1)
    extra = dict(config.get("pipeline", {}))
    rows = []
    for host in _expand(config["host"]):
        for target in _expand(config["target"]):
            for seed in seeds:
                h, g = dict(host), dict(target)
                for spec in (h, g):
                    if spec["family"] in _RANDOM_FAMILIES:
                        spec["seed"] = seed
                rows.append({"host": h, "target": g, "seed": seed, "method": method, "mode": mode,
                             "eps": eps, "pipeline": extra})
    return rows


def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def row_digest(spec: dict) -> str:
    return hashlib.sha256(_canonical(spec).encode()).hexdigest()[:16]


_JSON_ONLY = ("spec", "model", "stages")


@dataclass
class RunRecord:
    """One harness row.  ``spec`` is everything needed to rerun it.

    ``density`` and ``kappa`` describe the graph handed to the embedder (the
    minor-minimal graph for ``method="auto"``, the host otherwise).
    """

    digest: str
    seed: int
    method: str
    mode: str
    host: str
    target: str
    success: bool
    branch: str
    stage: str
    reason: str
    violated: str
    alpha: float
    m: float
    k: float
    d: float
    host_n: int
    host_e: int
    density: float
    minimal_n: int
    minimal_e: int
    kappa: int | None
    model_sha256: str
    spec: dict = field(default_factory=dict, repr=False)
    model: dict | None = field(default=None, repr=False)
    stages: list = field(default_factory=list, repr=False)


    def to_row(self) -> dict:
        out = {}
        for f in fields(self):
            if f.name in _JSON_ONLY:
                continue
            v = getattr(self, f.name)
            out[f.name] = "" if v is None else (repr(v) if isinstance(v, float) else str(v))
        return out

    @classmethod
    def from_row(cls, row: dict) -> "RunRecord":
        """Scalar fields from a CSV row; ``spec``, ``model`` and ``stages`` live in the JSON file."""
        kw = {}
        for f in fields(cls):
            if f.name in _JSON_ONLY:
                continue
            raw = row[f.name]
            kind = _FIELD_TYPES[f.name]
            if raw == "" and kind is not str:
                kw[f.name] = None
            elif kind is bool:
                kw[f.name] = raw == "True"
            else:
                kw[f.name] = kind(raw)
        return cls(**kw)

    def to_json(self) -> dict:
        return asdict(self)


_FIELD_TYPES = {
    "digest": str, "seed": int, "method": str, "mode": str, "host": str, "target": str, "success": bool,
    "branch": str, "stage": str, "reason": str, "violated": str, "alpha": float, "m": float, "k": float,
    "d": float, "host_n": int, "host_e": int, "density": float, "minimal_n": int, "minimal_e": int,
    "kappa": int, "model_sha256": str,
}
CSV_FIELDS = [f.name for f in fields(RunRecord) if f.name not in _JSON_ONLY]


def run_row(spec: dict) -> RunRecord:
    """Run one expanded row spec."""
    G = generate(spec["host"])
    H = generate(spec["target"])
    method, mode, seed, eps = spec["method"], spec["mode"], spec["seed"], spec["eps"]
    extra = dict(spec.get("pipeline", {}))
    derived = derive_constants(H, eps)
    d_host = graph_stats(G).density if G.n else 0.0
    model, report, info, stages = None, None, {}, []
    if method == "auto":
        cfg = PipelineConfig(eps=eps, mode=mode, seed=seed, **extra)
        run = run_auto(G, H, cfg)
        model, report, info, stages = run.model, run.report, run.derived, run.stages
    elif method == "dense":
        cfg = DenseConfig(eps=eps, mode=mode, seed=seed, **extra)
        info = {"branch": "dense", "minimal_n": G.n, "minimal_e": G.num_edges, "density": d_host, "kappa": None}
        try:
            model = embed_dense_rooted(G, H, list(range(H.n)), cfg)
            assert not verify_model(G, model)
        except EmbeddingFailed as exc:
            report = exc.report
    else:
        m_override = extra.pop("m", None)
        cfg = SparseConfig(mode=mode, seed=seed, **extra)
        info = {"branch": "sparse", "minimal_n": G.n, "minimal_e": G.num_edges, "density": d_host, "kappa": None}
        try:
            model = embed_sparse(G, H, m_override if m_override is not None else derived["m"], cfg)
        except EmbeddingFailed as exc:
            report = exc.report
    model_doc = json.loads(dumps_model(model)) if model is not None else None
    return RunRecord(
        digest=row_digest(spec), seed=seed, method=method, mode=mode,
        host=_canonical(spec["host"]), target=_canonical(spec["target"]),
        success=model is not None, branch=str(info.get("branch", "")),
        stage="ok" if report is None else report.stage,
        reason="" if report is None else report.reason,
        violated="" if report is None else "; ".join(report.violated),
        alpha=derived["alpha"], m=derived["m"], k=derived["k"], d=derived["d"],
        host_n=G.n, host_e=G.num_edges, density=float(info.get("density", d_host)),
        minimal_n=int(info.get("minimal_n", G.n)), minimal_e=int(info.get("minimal_e", G.num_edges)),
        kappa=info.get("kappa"),
        model_sha256="" if model is None else hashlib.sha256(dumps_model(model).encode()).hexdigest(),
        spec=spec, model=model_doc,
        stages=stages or [{"stage": method, "ok": model is not None}],
    )


def _write_outputs(out_dir: Path, records: list[RunRecord], timings: list[float]) -> None:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for r in records:
        writer.writerow(r.to_row())
    (out_dir / "results.csv").write_text(buf.getvalue())
    doc = {"records": [r.to_json() for r in records]}
    (out_dir / "results.json").write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n")
    (out_dir / "timings.json").write_text(
        json.dumps({r.digest: t for r, t in zip(records, timings)}, sort_keys=True, indent=1) + "\n"
    )


def run_experiment(config: dict | str | Path, out_dir: str | Path | None = None, workers: int = 1) -> list[RunRecord]:
    """Run every row of a grid config; write the result files when ``out_dir`` is given.

    Rows keep canonical grid order whatever the worker count.  On
    interruption the rows finished so far are written before re-raising.
    """
    if not isinstance(config, dict):
        config = json.loads(Path(config).read_text())
    specs = expand_grid(config)
    out = Path(out_dir) if out_dir is not None else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
    records: list[RunRecord] = []
    timings: list[float] = []
    try:
        if workers > 1:
            from concurrent.futures import ProcessPoolExecutor

            with ProcessPoolExecutor(workers) as pool:
                for rec in pool.map(run_row, specs):
                    records.append(rec)
                    timings.append(float("nan"))
        else:
            for spec in specs:
                t0 = time.perf_counter()
                records.append(run_row(spec))
                timings.append(time.perf_counter() - t0)
    finally:
        if out is not None:
            _write_outputs(out, records, timings)
    return records


def read_csv_records(path: str | Path) -> list[RunRecord]:
    with open(path, newline="") as fh:
        return [RunRecord.from_row(row) for row in csv.DictReader(fh)]


def read_json_records(path: str | Path) -> list[RunRecord]:
    doc = json.loads(Path(path).read_text())
    out = []
    for rec in doc["records"]:
        spec, model = rec.pop("spec"), rec.pop("model")
        out.append(RunRecord(**rec, spec=spec, model=model))
    return out


def replay(results_json: str | Path, digest: str) -> tuple[RunRecord, RunRecord]:
    """Rerun the row with ``digest`` from a results file; returns (stored, fresh)."""
    stored = {r.digest: r for r in read_json_records(results_json)}
    if digest not in stored:
        raise KeyError(f"no row with digest {digest}")
    old = stored[digest]
    if row_digest(old.spec) != digest:
        raise ValueError("stored spec does not match its digest")
    return old, run_row(old.spec)
