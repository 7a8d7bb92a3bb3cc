"""Dataset files, run manifests, the end-to-end pipeline and reports.

On-disk contract
----------------
Per-view data ships as UTF-8 CSV with one row per sample and one column
per feature.  A header row is allowed and detected by the presence of any
cell that does not parse as a number.  Labels are newline-separated
integers, one per sample.  A manifest is a JSON object naming the dataset,
its view files with expected feature counts, an optional labels file, the
normalization flag and the cluster count; view and label paths are
resolved relative to the manifest's directory.  Reports are JSON with a
fixed key order and a schema version; all wall-clock numbers live under
the single ``timings`` key so reproducibility checks can drop them.
"""

import csv
import json
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .construct import MultiViewDataset, build_tensor, synth_generate
from .metrics import evaluate_trials
from .solver import SolverConfig, solve
from .spectral import cluster_pipeline, cluster_trials

REPORT_SCHEMA_VERSION = 1

_REPORT_KEYS = (
    "schema_version",
    "tool",
    "status",
    "seed",
    "dataset",
    "config",
    "solver",
    "labels_file",
    "metrics",
    "timings",
)


class DatasetFormatError(ValueError):
    """A dataset file violates the on-disk contract.

    Attributes
    ----------
    code : str
        One of ``MISSING_FILE``, ``RAGGED_ROWS``, ``SAMPLE_COUNT_MISMATCH``,
        ``NON_NUMERIC_CELL``, ``FEATURE_COUNT_MISMATCH``.  The message names
        the offending file and, where one exists, the line.
    """

    def __init__(self, code, message):
        self.code = code
        super().__init__("%s: %s" % (code, message))


@dataclass
class Manifest:
    """Parsed description of a multi-view dataset on disk."""

    name: str
    views: list
    n_clusters: int
    labels: Path = None
    normalize: bool = True


def load_manifest(path):
    """Read and validate a manifest file.

    View and label paths are resolved against the manifest's directory and
    must exist.

    Returns
    -------
    Manifest
    """
    path = Path(path)
    if not path.is_file():
        raise DatasetFormatError("MISSING_FILE", "manifest '%s' not found" % path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValueError("manifest '%s' is not valid JSON: %s" % (path, exc))
    if not isinstance(raw, dict):
        raise ValueError("manifest '%s' must hold a JSON object" % path)
    allowed = {"name", "views", "labels", "normalize", "n_clusters"}
    unknown = set(raw) - allowed
    if unknown:
        raise ValueError(
            "manifest '%s' has unknown fields %s" % (path, sorted(unknown))
        )
    for key in ("name", "views", "n_clusters"):
        if key not in raw:
            raise ValueError("manifest '%s' lacks required field '%s'" % (path, key))
    if not isinstance(raw["views"], list) or len(raw["views"]) == 0:
        raise ValueError("manifest '%s' must list at least one view" % path)

    base = path.parent
    views = []
    for i, entry in enumerate(raw["views"]):
        if not isinstance(entry, dict) or set(entry) != {"path", "features"}:
            raise ValueError(
                "view entry %d of '%s' must be {path, features}" % (i, path)
            )
        features = entry["features"]
        if not isinstance(features, int) or features < 1:
            raise ValueError(
                "view entry %d of '%s' needs a positive feature count" % (i, path)
            )
        vpath = base / entry["path"]
        if not vpath.is_file():
            raise DatasetFormatError(
                "MISSING_FILE", "view file '%s' not found" % vpath
            )
        views.append((vpath, features))

    labels = None
    if raw.get("labels") is not None:
        labels = base / raw["labels"]
        if not labels.is_file():
            raise DatasetFormatError(
                "MISSING_FILE", "labels file '%s' not found" % labels
            )

    n_clusters = raw["n_clusters"]
    if not isinstance(n_clusters, int) or n_clusters < 1:
        raise ValueError("manifest '%s' needs a positive cluster count" % path)

    return Manifest(
        name=str(raw["name"]),
        views=views,
        n_clusters=n_clusters,
        labels=labels,
        normalize=bool(raw.get("normalize", True)),
    )


def _read_csv(path):
    """Parse one view file into an (n_samples, n_features) array."""
    rows = []
    width = None
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        for cells in reader:
            if not cells or all(c.strip() == "" for c in cells):
                continue
            line = reader.line_num
            if width is None and rows == []:
                # a first row with any non-numeric cell is a header
                try:
                    parsed = [float(c) for c in cells]
                except ValueError:
                    width = len(cells)
                    continue
                width = len(cells)
                rows.append(parsed)
                continue
            if len(cells) != width:
                raise DatasetFormatError(
                    "RAGGED_ROWS",
                    "file '%s' line %d has %d cells, expected %d"
                    % (path, line, len(cells), width),
                )
            parsed = []
            for col, cell in enumerate(cells):
                try:
                    parsed.append(float(cell))
                except ValueError:
                    raise DatasetFormatError(
                        "NON_NUMERIC_CELL",
                        "file '%s' line %d column %d: %r is not a number"
                        % (path, line, col + 1, cell),
                    )
            rows.append(parsed)
    if not rows:
        raise ValueError("view file '%s' has no data rows" % path)
    return np.array(rows, dtype=np.float64)


def _read_labels(path):
    values = []
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            text = line.strip()
            if not text:
                continue
            try:
                values.append(int(text))
            except ValueError:
                raise DatasetFormatError(
                    "NON_NUMERIC_CELL",
                    "file '%s' line %d: %r is not an integer"
                    % (path, line_no, text),
                )
    return np.array(values, dtype=np.int64)


def load_dataset(manifest):
    """Load the files a :class:`Manifest` points at.

    Returns
    -------
    MultiViewDataset
        Views transposed to the internal (features, samples) orientation.
    """
    mats = []
    for vpath, features in manifest.views:
        mat = _read_csv(vpath)
        if mat.shape[1] != features:
            raise DatasetFormatError(
                "FEATURE_COUNT_MISMATCH",
                "file '%s' has %d features, manifest expects %d"
                % (vpath, mat.shape[1], features),
            )
        mats.append(mat)
    counts = [m.shape[0] for m in mats]
    if len(set(counts)) != 1:
        pairs = ", ".join(
            "'%s': %d" % (p, c) for (p, _), c in zip(manifest.views, counts)
        )
        raise DatasetFormatError(
            "SAMPLE_COUNT_MISMATCH", "views disagree on sample count (%s)" % pairs
        )
    labels = None
    if manifest.labels is not None:
        labels = _read_labels(manifest.labels)
        if labels.size != counts[0]:
            raise DatasetFormatError(
                "SAMPLE_COUNT_MISMATCH",
                "labels file '%s' has %d entries, views have %d samples"
                % (manifest.labels, labels.size, counts[0]),
            )
    return MultiViewDataset(
        views=[m.T.copy() for m in mats],
        labels=labels,
        names=[str(p.name) for p, _ in manifest.views],
    )


def _write_csv(path, mat):
    """Write samples-by-features data with round-trippable floats."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        for row in np.asarray(mat, dtype=np.float64):
            writer.writerow([repr(float(x)) for x in row])


def _write_labels(path, labels):
    with open(path, "w", encoding="utf-8") as handle:
        for value in labels:
            handle.write("%d\n" % value)


def run_synth(
    clusters=3,
    per_cluster=20,
    view_dims=(30, 25),
    subspace_dim=3,
    noise=0.01,
    seed=0,
    out_dir="synth-out",
):
    """Generate a synthetic dataset and write it out as CSVs plus manifest.

    Returns
    -------
    Path
        Location of the emitted manifest file.
    """
    data = synth_generate(clusters, per_cluster, view_dims, subspace_dim, noise, seed)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    entries = []
    for v, mat in enumerate(data.views):
        name = "view%d.csv" % v
        _write_csv(out / name, mat.T)
        entries.append({"path": name, "features": int(mat.shape[0])})
    _write_labels(out / "labels.txt", data.labels)
    manifest = {
        "name": "synth-c%d-n%d-seed%d" % (clusters, data.n_samples, seed),
        "views": entries,
        "labels": "labels.txt",
        "normalize": True,
        "n_clusters": int(clusters),
    }
    manifest_path = out / "manifest.json"
    manifest_path.write_text(
        json.dumps(manifest, indent=2) + "\n", encoding="utf-8"
    )
    return manifest_path


def build_report(manifest, dataset, cfg, trace, trials, labels_file, metrics, timings):
    """Assemble the run report dict in its fixed key order."""
    report = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "tool": {"name": "mvtclust", "version": __version__},
        "status": "ok" if trace.converged else "NOT_CONVERGED",
        "seed": cfg.seed,
        "dataset": {
            "name": manifest.name,
            "n_samples": dataset.n_samples,
            "n_views": dataset.n_views,
            "view_dims": list(dataset.view_dims),
            "n_clusters": manifest.n_clusters,
        },
        "config": {
            "alpha": cfg.alpha,
            "lam": cfg.lam,
            "beta": cfg.beta,
            "normalize": manifest.normalize,
            "teleport": 0.01,
            "trials": trials,
            "eps": cfg.eps,
            "max_outer": cfg.max_outer,
        },
        "solver": trace.summary(),
        "labels_file": labels_file,
    }
    if metrics is not None:
        report["metrics"] = metrics.as_dict()
    report["timings"] = timings
    return report


def save_report(report, path):
    Path(path).write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")


def load_report(path):
    """Parse a report file, rejecting unknown fields and foreign schemas."""
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(raw, dict):
        raise ValueError("report '%s' must hold a JSON object" % path)
    if raw.get("schema_version") != REPORT_SCHEMA_VERSION:
        raise ValueError(
            "report '%s' has schema_version %r, expected %d"
            % (path, raw.get("schema_version"), REPORT_SCHEMA_VERSION)
        )
    unknown = set(raw) - set(_REPORT_KEYS)
    if unknown:
        raise ValueError(
            "report '%s' has unknown fields %s" % (path, sorted(unknown))
        )
    missing = set(_REPORT_KEYS) - {"metrics"} - set(raw)
    if missing:
        raise ValueError(
            "report '%s' lacks required fields %s" % (path, sorted(missing))
        )
    return raw


def run_cluster(manifest_path, overrides=None, out_path=None, trials=20):
    """Execute the full pipeline described by a manifest.

    Parameters
    ----------
    manifest_path : path-like
        Manifest to run.
    overrides : dict, optional
        Config knobs that win over manifest fields and defaults.  Known
        keys: alpha, lam, beta, clusters, seed, eps, max_outer, normalize;
        unknown keys are rejected, None values mean "not given".
    out_path : path-like, optional
        Report destination; default ``report.json`` next to the manifest.
        Predicted labels land beside it with a ``_labels.txt`` suffix.
    trials : int, optional
        Independent k-means runs aggregated in the metrics block.  The
        emitted labels file instead holds the best of the same number of
        restarts, selected by the k-means objective.

    Returns
    -------
    dict
        The report, as written to disk.
    """
    overrides = dict(overrides or {})
    known = {"alpha", "lam", "beta", "clusters", "seed", "eps", "max_outer", "normalize"}
    bad = set(overrides) - known
    if bad:
        raise ValueError("unknown override keys %s" % sorted(bad))

    def pick(key, fallback):
        value = overrides.get(key)
        return fallback if value is None else value

    timings = {}
    start = time.perf_counter()

    t0 = time.perf_counter()
    manifest = load_manifest(manifest_path)
    dataset = load_dataset(manifest)
    timings["load"] = time.perf_counter() - t0

    n_clusters = int(pick("clusters", manifest.n_clusters))
    if not 1 <= n_clusters <= dataset.n_samples:
        raise ValueError("cluster count must lie in 1..%d" % dataset.n_samples)
    normalize = bool(pick("normalize", manifest.normalize))
    manifest.n_clusters = n_clusters
    manifest.normalize = normalize
    defaults = SolverConfig()
    cfg = SolverConfig(
        alpha=float(pick("alpha", defaults.alpha)),
        lam=float(pick("lam", defaults.lam)),
        beta=float(pick("beta", defaults.beta)),
        eps=float(pick("eps", defaults.eps)),
        max_outer=int(pick("max_outer", defaults.max_outer)),
        seed=int(pick("seed", defaults.seed)),
    ).validate()

    t0 = time.perf_counter()
    x = build_tensor(dataset, normalize=normalize)
    timings["build"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    c, trace = solve(x, cfg)
    timings["solve"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    best_labels = cluster_pipeline(
        c, n_clusters, restarts=trials, seed=cfg.seed
    )
    predictions = cluster_trials(c, n_clusters, trials=trials, seed=cfg.seed)
    timings["cluster"] = time.perf_counter() - t0

    metrics = None
    if dataset.labels is not None:
        metrics = evaluate_trials(dataset.labels, predictions)

    out = Path(out_path) if out_path is not None else Path(manifest_path).parent / "report.json"
    labels_path = out.with_name(out.stem + "_labels.txt")
    _write_labels(labels_path, best_labels)

    timings["total"] = time.perf_counter() - start
    report = build_report(
        manifest, dataset, cfg, trace, trials, labels_path.name, metrics, timings
    )
    save_report(report, out)
    return report
