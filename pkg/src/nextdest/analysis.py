"""Top-N F1 evaluation, the CS x WS replicated experiment, ANOVA and Tukey tests.

The experiment crosses customer-set size with window size; every cell is
trained and scored on freshly sampled customers for each replicate, and the
replicate-averaged 3x3 cell-mean grid feeds the factorial ANOVA (centered
linear codings, 1 df per term, 5 error df) and the Tukey comparisons
(pooled error of the additive two-factor fit on the cell means, 4 df).
"""

from __future__ import annotations

import concurrent.futures
import csv
import math
import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import dists
from .core import CustomerHistory, CityVocab, RawTrip, build_vocab
from .model import Hyperparams, TrainedModel, predict_proba, train
from .pipeline import WindowEntry, build_dataset, clean

DEFAULT_N_LIST = (1, 3, 5, 7)


# --- ranking metrics ---


def _top_n_sets(probs: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """(top-n class ids, argmax class) per row; ties resolved to the lower id."""
    order = np.argsort(-probs, axis=1, kind="stable")
    return order[:, :n], order[:, 0]


def topn_f1(probs: np.ndarray, labels: np.ndarray, n: int) -> float:
    """Support-weighted F1 of collapsed top-N predictions.

    Per instance the prediction counts as the true label whenever the true
    label ranks within the N most probable classes; otherwise the argmax
    class stands. The collapsed labels are scored with the ordinary
    support-weighted mean of per-class F1, so N=1 reduces to plain weighted
    F1 and the score can only grow with N.
    """
    probs = np.asarray(probs, dtype=np.float64)
    labels = np.asarray(labels)
    if probs.ndim != 2:
        raise ValueError(f"probs must be 2-d, got shape {probs.shape}")
    m, p = probs.shape
    if labels.shape != (m,):
        raise ValueError(f"labels shape {labels.shape} does not match {m} rows")
    if not 1 <= n <= p:
        raise ValueError(f"N must lie in [1, {p}], got {n}")
    top, argmax = _top_n_sets(probs, n)
    hit = (top == labels[:, None]).any(axis=1)
    collapsed = np.where(hit, labels, argmax)

    support = np.bincount(labels, minlength=p).astype(np.float64)
    predicted = np.bincount(collapsed, minlength=p).astype(np.float64)
    true_pos = np.bincount(labels[collapsed == labels], minlength=p).astype(np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        precision = np.where(predicted > 0, true_pos / predicted, 0.0)
        recall = np.where(support > 0, true_pos / support, 0.0)
        pr = precision + recall
        f1 = np.where(pr > 0, 2.0 * precision * recall / np.where(pr > 0, pr, 1.0), 0.0)
    return float((f1 * support).sum() / support.sum())


def topn_recall(probs: np.ndarray, labels: np.ndarray, n: int) -> float:
    """Fraction of instances whose true label ranks within the top N."""
    probs = np.asarray(probs, dtype=np.float64)
    labels = np.asarray(labels)
    if not 1 <= n <= probs.shape[1]:
        raise ValueError(f"N must lie in [1, {probs.shape[1]}], got {n}")
    top, _ = _top_n_sets(probs, n)
    return float((top == labels[:, None]).any(axis=1).mean())


def mode_baseline_probs(train_labels: Sequence[int], p: int, m: int) -> np.ndarray:
    """Constant ranking by global destination frequency, repeated for m rows."""
    counts = np.bincount(np.asarray(train_labels), minlength=p).astype(np.float64)
    if counts.sum() == 0:
        raise ValueError("no training labels given")
    return np.tile(counts / counts.sum(), (m, 1))


def evaluate_model(
    model: TrainedModel, entries: Sequence[WindowEntry], n_list: Sequence[int] = DEFAULT_N_LIST
) -> dict[str, dict[int, float]]:
    """Top-N F1 and recall@N of a trained model on window entries."""
    probs = predict_proba(model, entries)
    labels = np.array([e.target_destination for e in entries])
    return {
        "f1": {n: topn_f1(probs, labels, n) for n in n_list},
        "recall": {n: topn_recall(probs, labels, n) for n in n_list},
    }


# --- experiment grid ---


@dataclass(frozen=True)
class GridConfig:
    customer_sizes: tuple[int, ...]
    window_sizes: tuple[int, ...]
    replicates: int
    base_seed: int
    top_cities: int
    hyper: Hyperparams
    n_list: tuple[int, ...] = DEFAULT_N_LIST
    jobs: int = 1

    def __post_init__(self) -> None:
        if not self.customer_sizes or not self.window_sizes:
            raise ValueError("customer_sizes and window_sizes must be non-empty")
        if self.replicates < 1:
            raise ValueError("replicates must be positive")
        if self.jobs < 1:
            raise ValueError("jobs must be positive")


@dataclass(frozen=True)
class GridRow:
    customer_size: int
    window_size: int
    replicate: int
    f1: dict[int, float]
    recall: dict[int, float]


@dataclass
class ResultsGrid:
    n_list: tuple[int, ...]
    rows: list[GridRow] = field(default_factory=list)

    def sorted_rows(self) -> list[GridRow]:
        return sorted(self.rows, key=lambda r: (r.customer_size, r.window_size, r.replicate))

    def levels(self) -> tuple[list[int], list[int]]:
        cs = sorted({r.customer_size for r in self.rows})
        ws = sorted({r.window_size for r in self.rows})
        return cs, ws

    def cell_means(self, metric: str = "f1", n: int = 1) -> tuple[list[int], list[int], np.ndarray]:
        """Replicate-averaged (CS x WS) matrix for one metric; every cell must be filled."""
        cs_levels, ws_levels = self.levels()
        means = np.full((len(cs_levels), len(ws_levels)), np.nan)
        for i, cs in enumerate(cs_levels):
            for j, ws in enumerate(ws_levels):
                values = [
                    getattr(r, metric)[n]
                    for r in self.rows
                    if r.customer_size == cs and r.window_size == ws
                ]
                if not values:
                    raise ValueError(f"grid cell (cs={cs}, ws={ws}) has no replicates")
                means[i, j] = float(np.mean(values))
        return cs_levels, ws_levels, means

    def replicate_values(self, metric: str = "f1", n: int = 1) -> tuple[list[int], list[int], np.ndarray]:
        """(CS x WS x replicate) array of raw scores; replicate counts must be balanced."""
        cs_levels, ws_levels = self.levels()
        reps = sorted({r.replicate for r in self.rows})
        values = np.full((len(cs_levels), len(ws_levels), len(reps)), np.nan)
        for r in self.rows:
            i = cs_levels.index(r.customer_size)
            j = ws_levels.index(r.window_size)
            k = reps.index(r.replicate)
            values[i, j, k] = getattr(r, metric)[n]
        if np.isnan(values).any():
            raise ValueError("replicate design is unbalanced; every cell needs every replicate id")
        return cs_levels, ws_levels, values

    def to_csv(self, path: str | Path) -> None:
        header = (
            ["cs", "ws", "replicate"]
            + [f"top{n}" for n in self.n_list]
            + [f"recall{n}" for n in self.n_list]
        )
        tmp = f"{path}.tmp"
        with open(tmp, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in self.sorted_rows():
                writer.writerow(
                    [row.customer_size, row.window_size, row.replicate]
                    + [repr(row.f1[n]) for n in self.n_list]
                    + [repr(row.recall[n]) for n in self.n_list]
                )
        os.replace(tmp, path)

    @classmethod
    def from_csv(cls, path: str | Path, n_list: Sequence[int] = DEFAULT_N_LIST) -> "ResultsGrid":
        rows = []
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames or []
            required = ["cs", "ws", "replicate"] + [f"top{n}" for n in n_list]
            for column in required:
                if column not in header:
                    raise ValueError(f"missing column {column!r} in {path}")
            has_recall = all(f"recall{n}" in header for n in n_list)
            for record in reader:
                rows.append(
                    GridRow(
                        customer_size=int(record["cs"]),
                        window_size=int(record["ws"]),
                        replicate=int(record["replicate"]),
                        f1={n: float(record[f"top{n}"]) for n in n_list},
                        recall={
                            n: float(record[f"recall{n}"]) if has_recall else math.nan for n in n_list
                        },
                    )
                )
        return cls(n_list=tuple(n_list), rows=rows)


def _cell_seeds(base_seed: int, cs: int, ws: int, replicate: int) -> tuple[np.random.SeedSequence, int]:
    root = np.random.SeedSequence((base_seed, cs, ws, replicate))
    sample_seq, train_seq = root.spawn(2)
    train_seed = int(np.random.default_rng(train_seq).integers(2**63))
    return sample_seq, train_seed


def _run_cell(
    args: tuple[list[CustomerHistory], CityVocab, int, int, int, int, Hyperparams, tuple[int, ...]],
) -> GridRow:
    eligible, vocab, cs, ws, replicate, base_seed, hyper, n_list = args
    sample_seq, train_seed = _cell_seeds(base_seed, cs, ws, replicate)
    rng = np.random.default_rng(sample_seq)
    picks = rng.choice(len(eligible), size=cs, replace=False)
    sampled = [eligible[i] for i in sorted(int(i) for i in picks)]
    train_entries, test_entries = build_dataset(sampled, ws)
    cell_hyper = replace(hyper, window_size=ws, seed=train_seed)
    model = train(train_entries, vocab, cell_hyper)
    scores = evaluate_model(model, test_entries, n_list)
    return GridRow(
        customer_size=cs,
        window_size=ws,
        replicate=replicate,
        f1=scores["f1"],
        recall=scores["recall"],
    )


def run_grid(rows: Iterable[RawTrip], config: GridConfig) -> ResultsGrid:
    """Train and score every (CS, WS, replicate) cell on freshly sampled customers.

    Customer samples are drawn without replacement from the cleaned pool with
    a seed derived from (base_seed, CS, WS, replicate), so results do not
    depend on cell execution order or on the number of worker processes.
    """
    rows = list(rows)
    vocab = build_vocab(rows, config.top_cities)
    pool = clean(rows, vocab).histories
    pool.sort(key=lambda h: h.customer_id)

    eligible: dict[int, list[CustomerHistory]] = {}
    largest = max(config.customer_sizes)
    for ws in config.window_sizes:
        eligible[ws] = [h for h in pool if len(h) >= ws + 2]
        if len(eligible[ws]) < largest:
            raise ValueError(
                f"insufficient customers: window size {ws} leaves {len(eligible[ws])} "
                f"eligible customers but the largest customer size is {largest}"
            )

    cells = [
        (eligible[ws], vocab, cs, ws, r, config.base_seed, config.hyper, tuple(config.n_list))
        for cs in sorted(config.customer_sizes)
        for ws in sorted(config.window_sizes)
        for r in range(config.replicates)
    ]
    if config.jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=config.jobs) as pool_exec:
            results = list(pool_exec.map(_run_cell, cells))
    else:
        results = [_run_cell(cell) for cell in cells]
    return ResultsGrid(n_list=tuple(config.n_list), rows=results)


# --- factorial ANOVA ---


@dataclass(frozen=True)
class AnovaTerm:
    name: str
    ss: float
    df: int
    f: float | None
    p: float | None
    eta_sq: float | None
    partial_eta_sq: float | None


@dataclass(frozen=True)
class AnovaTable:
    terms: tuple[AnovaTerm, ...]
    error_ss: float
    error_df: int
    total_ss: float

    def term(self, name: str) -> AnovaTerm:
        for t in self.terms:
            if t.name == name:
                return t
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "terms": [
                {
                    "name": t.name,
                    "ss": t.ss,
                    "df": t.df,
                    "f": t.f,
                    "p": t.p,
                    "eta_sq": t.eta_sq,
                    "partial_eta_sq": t.partial_eta_sq,
                }
                for t in self.terms
            ],
            "error": {"ss": self.error_ss, "df": self.error_df},
            "total_ss": self.total_ss,
        }

    def to_text(self) -> str:
        def fmt(v, spec=".6f", width=10):
            return f"{'n/a':>{width}}" if v is None else f"{v:>{width}{spec}}"

        lines = [f"{'term':<8}{'SS':>12}{'df':>4}{'F':>10}{'p':>10}{'eta^2':>10}{'p.eta^2':>10}"]
        for t in self.terms:
            lines.append(
                f"{t.name:<8}{t.ss:>12.6f}{t.df:>4}"
                f"{fmt(t.f, '.3f')}{fmt(t.p, '.4f')}{fmt(t.eta_sq, '.3f')}{fmt(t.partial_eta_sq, '.3f')}"
            )
        lines.append(f"{'Error':<8}{self.error_ss:>12.6f}{self.error_df:>4}")
        return "\n".join(lines)


def _require_equally_spaced(levels: Sequence[float], what: str) -> None:
    if len(levels) != 3:
        raise ValueError(f"{what} must have exactly 3 levels, got {len(levels)}")
    lo, mid, hi = levels
    if not math.isclose(mid - lo, hi - mid, rel_tol=1e-9, abs_tol=1e-9):
        raise ValueError(f"{what} levels {levels} are not equally spaced")


def _linear_term_ss(y: np.ndarray, codes: np.ndarray) -> float:
    denom = float((codes**2).sum())
    beta = float((y * codes).sum()) / denom
    return beta * beta * denom


def _assemble_anova(
    names: Sequence[str], ss_terms: Sequence[float], ss_total: float, error_df: int
) -> AnovaTable:
    ss_error = max(ss_total - sum(ss_terms), 0.0)
    ms_error = ss_error / error_df if error_df > 0 else 0.0
    terms = []
    for name, ss in zip(names, ss_terms):
        if ms_error > 0.0:
            f_stat = ss / ms_error
            p = dists.f_sf(f_stat, 1, error_df)
        else:
            f_stat = None
            p = None
        eta = ss / ss_total if ss_total > 0 else None
        partial = ss / (ss + ss_error) if (ss + ss_error) > 0 else None
        terms.append(AnovaTerm(name, ss, 1, f_stat, p, eta, partial))
    return AnovaTable(tuple(terms), ss_error, error_df, ss_total)


def anova(
    cell_means: np.ndarray,
    cs_levels: Sequence[float] = (1.0, 2.0, 3.0),
    ws_levels: Sequence[float] = (1.0, 2.0, 3.0),
) -> AnovaTable:
    """Factorial ANOVA on a 3x3 grid of cell means.

    Each factor enters through its centered linear coding (-1, 0, +1), the
    interaction through the coding product; 1 df per term and 5 error df,
    with the error taken as the residual about the linear-response surface.
    """
    cell_means = np.asarray(cell_means, dtype=np.float64)
    if cell_means.shape != (3, 3):
        raise ValueError(f"cell means must form a 3x3 grid, got shape {cell_means.shape}")
    _require_equally_spaced(list(cs_levels), "customer size")
    _require_equally_spaced(list(ws_levels), "window size")
    code = np.array([-1.0, 0.0, 1.0])
    c_cs = np.repeat(code, 3).reshape(3, 3)
    c_ws = np.tile(code, 3).reshape(3, 3)
    y = cell_means - cell_means.mean()
    ss_cs = _linear_term_ss(y, c_cs)
    ss_ws = _linear_term_ss(y, c_ws)
    ss_int = _linear_term_ss(y, c_cs * c_ws)
    ss_total = float((y**2).sum())
    return _assemble_anova(("CS", "WS", "CSxWS"), (ss_cs, ss_ws, ss_int), ss_total, error_df=5)


def anova_replicates(values: np.ndarray) -> AnovaTable:
    """Same linear-coding decomposition on raw replicate scores (3 x 3 x R)."""
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 3 or values.shape[:2] != (3, 3) or values.shape[2] < 1:
        raise ValueError(f"need a 3x3xR array of replicate scores, got shape {values.shape}")
    n_rep = values.shape[2]
    code = np.array([-1.0, 0.0, 1.0])
    c_cs = np.repeat(code, 3).reshape(3, 3, 1) * np.ones((1, 1, n_rep))
    c_ws = np.tile(code, 3).reshape(3, 3, 1) * np.ones((1, 1, n_rep))
    y = values - values.mean()
    ss_cs = _linear_term_ss(y, c_cs)
    ss_ws = _linear_term_ss(y, c_ws)
    ss_int = _linear_term_ss(y, c_cs * c_ws)
    ss_total = float((y**2).sum())
    return _assemble_anova(
        ("CS", "WS", "CSxWS"), (ss_cs, ss_ws, ss_int), ss_total, error_df=values.size - 4
    )


# --- Tukey HSD ---


@dataclass(frozen=True)
class TukeyComparison:
    level_a: float
    level_b: float
    estimate: float
    se: float
    df: int
    t: float | None
    p: float | None


def tukey(
    cell_means: np.ndarray, levels: Sequence[float], factor: str = "cs"
) -> list[TukeyComparison]:
    """All-pairs Tukey comparison of one factor's level means on the 3x3 grid.

    The pooled error is the residual of the additive two-factor fit on the
    nine cell means (4 df), which is the estimate the paper's t ratios are
    consistent with. Estimates are exact level-mean differences; adjusted p
    comes from the studentized range with k=3.
    """
    cell_means = np.asarray(cell_means, dtype=np.float64)
    if cell_means.shape != (3, 3):
        raise ValueError(f"cell means must form a 3x3 grid, got shape {cell_means.shape}")
    if len(levels) != 3:
        raise ValueError(f"need exactly 3 factor levels, got {len(levels)}")
    if factor not in ("cs", "ws"):
        raise ValueError(f"factor must be 'cs' or 'ws', got {factor!r}")
    grid = cell_means if factor == "cs" else cell_means.T

    grand = grid.mean()
    row_means = grid.mean(axis=1)
    col_means = grid.mean(axis=0)
    ss_total = float(((grid - grand) ** 2).sum())
    ss_rows = 3.0 * float(((row_means - grand) ** 2).sum())
    ss_cols = 3.0 * float(((col_means - grand) ** 2).sum())
    ss_error = max(ss_total - ss_rows - ss_cols, 0.0)
    error_df = 4
    ms_error = ss_error / error_df
    se_diff = math.sqrt(2.0 * ms_error / 3.0)

    comparisons = []
    for a, b in ((0, 1), (0, 2), (1, 2)):
        estimate = float(row_means[a] - row_means[b])
        if se_diff > 0.0:
            t = estimate / se_diff
            q = abs(t) * math.sqrt(2.0)
            p = dists.studentized_range_sf(q, df=error_df)
        else:
            t = None
            p = 1.0 if estimate == 0.0 else 0.0
        comparisons.append(
            TukeyComparison(
                level_a=levels[a],
                level_b=levels[b],
                estimate=estimate,
                se=se_diff,
                df=error_df,
                t=t,
                p=p,
            )
        )
    return comparisons


def tukey_to_text(comparisons: Sequence[TukeyComparison], label: str = "CS") -> str:
    lines = [f"{'contrast':<24}{'estimate':>10}{'SE':>10}{'df':>4}{'t':>8}{'p':>8}"]
    for c in comparisons:
        t_txt = "n/a" if c.t is None else f"{c.t:.3f}"
        p_txt = "n/a" if c.p is None else f"{c.p:.4f}"
        contrast = f"{label}{c.level_a:g}, {label}{c.level_b:g}"
        lines.append(f"{contrast:<24}{c.estimate:>10.4f}{c.se:>10.6f}{c.df:>4}{t_txt:>8}{p_txt:>8}")
    return "\n".join(lines)
