"""Distribution-free statistics over scored expression matrices.

Everything here works on ranks: Pearson/Spearman correlation with a
significance threshold for long vectors, streaming all-pairs row
correlations, Kruskal-Wallis and one-sided Wilcoxon (Mann-Whitney)
tests per feature, Benjamini-Yekutieli FDR control computed in the log
domain, feature ranking, and hypergeometric gene-set enrichment.

P-values are :class:`~rankmerge.numerics.LogP` throughout so that
features hundreds of orders of magnitude beyond float underflow keep
distinct, comparable significance.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from itertools import combinations
from pathlib import Path
from typing import Callable, Sequence, TextIO

import numpy as np

from .errors import DegenerateDataError, ParseError
from .matrix import DataMatrix, Dataset, common_rows, exclude_samples, select_samples
from .numerics import (
    LogP,
    P_ONE,
    chi_sq_upper_tail_ln,
    inv_norm_cdf,
    log_choose,
    norm_upper_tail_ln,
)
from .transform import _midranks_dense

DIRECTIONS = ("over", "under", "none")


@dataclass(frozen=True)
class TestResult:
    """Outcome of one per-feature test.

    ``statistic`` is H for Kruskal-Wallis and the standardized rank-sum
    statistic for Wilcoxon (continuity correction enters only the
    p-value, so the statistic squares to the k=2 Kruskal-Wallis H).
    Degenerate features (all values tied, or an empty side) carry
    ``p_raw=None`` and direction "none".
    """

    feature: str
    statistic: float
    p_raw: LogP | None
    p_adjusted: LogP | None = None
    direction: str = "none"

    def __post_init__(self):
        if self.direction not in DIRECTIONS:
            raise ValueError(f"direction must be one of {DIRECTIONS}")


# ---------------------------------------------------------------------------
# plain correlations
# ---------------------------------------------------------------------------

def _complete_pair(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("correlation expects two 1-d vectors of equal length")
    keep = ~(np.isnan(x) | np.isnan(y))
    return x[keep], y[keep]


def pearson(x, y) -> float:
    """Pearson correlation after pairwise-complete missing removal."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xc, yc = _complete_pair(x, y)
    if xc.size < 3:
        raise ValueError(f"need >= 3 complete pairs, have {xc.size}")
    xm = xc - xc.mean()
    ym = yc - yc.mean()
    sx = math.sqrt(float(xm @ xm))
    sy = math.sqrt(float(ym @ ym))
    if sx == 0.0 or sy == 0.0:
        raise ValueError("zero variance input")
    return float(xm @ ym) / (sx * sy)


def spearman(x, y) -> float:
    """Pearson correlation of midranks (pairwise-complete first)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xc, yc = _complete_pair(x, y)
    if xc.size < 3:
        raise ValueError(f"need >= 3 complete pairs, have {xc.size}")
    return pearson(_midranks_dense(xc), _midranks_dense(yc))


def correlation_threshold(n: int, alpha: float = 0.05, sided: str = "one") -> float:
    """Null-correlation significance cutoff z_(1-alpha[/2]) / sqrt(n - 1).

    For long vectors a null correlation is approximately normal with
    standard deviation 1/sqrt(n - 1); values beyond the cutoff are
    significant at level ``alpha``.
    """
    if not isinstance(n, (int, np.integer)) or n < 10:
        raise ValueError(f"n must be an integer >= 10, got {n!r}")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha!r}")
    if sided not in ("one", "two"):
        raise ValueError(f"sided must be 'one' or 'two', got {sided!r}")
    q = 1.0 - alpha if sided == "one" else 1.0 - alpha / 2.0
    return inv_norm_cdf(q) / math.sqrt(n - 1)


_CORR_FUNCS: dict[str, Callable] = {"pearson": pearson, "spearman": spearman}


def median_correlation(x, y, method: str = "pearson") -> float:
    """Correlation between two median columns."""
    try:
        f = _CORR_FUNCS[method]
    except KeyError:
        raise ValueError(f"unknown correlation method {method!r}")
    return f(x, y)


# ---------------------------------------------------------------------------
# streaming all-pairs row correlations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PairwiseResult:
    emitted: int
    skipped: int


def pair_count(n_rows: int) -> int:
    """Number of unordered row pairs, C(n, 2)."""
    if n_rows < 0:
        raise ValueError("row count must be >= 0")
    return n_rows * (n_rows - 1) // 2


def pairwise_row_correlations(m: DataMatrix,
                              sink: Callable[[str, str, float], None],
                              method: str = "pearson",
                              chunk: int = 256,
                              threads: int = 1) -> PairwiseResult:
    """Stream the correlation of every unordered row pair to ``sink``.

    Pairs are emitted in a fixed order (by row position, i < j)
    regardless of ``threads``: worker threads only compute the block
    products, emission happens sequentially block by block, and each
    pair's value is produced by the same arithmetic either way.  Memory
    stays at O(chunk x rows).

    Constant rows have no defined correlation; their pairs are skipped
    and counted, as are pairs with fewer than 3 complete observations
    when missing values are present.
    """
    if method not in _CORR_FUNCS:
        raise ValueError(f"unknown correlation method {method!r}")
    if m.n_cols < 3:
        raise ValueError("need at least 3 columns")
    if chunk < 1 or threads < 1:
        raise ValueError("chunk and threads must be >= 1")
    _dup = len(set(m.row_names)) != m.n_rows
    if _dup:
        raise ValueError("row names must be unique for pairwise correlations")

    vals = np.array(m.values, dtype=float)
    n = m.n_rows
    names = m.row_names

    if method == "spearman":
        for i in range(n):
            present = ~np.isnan(vals[i])
            if present.any():
                vals[i, present] = _midranks_dense(vals[i, present])

    finite_min = np.nanmin(vals, axis=1, initial=np.inf)
    finite_max = np.nanmax(vals, axis=1, initial=-np.inf)
    n_present = (~np.isnan(vals)).sum(axis=1)
    constant = (finite_min == finite_max) | (n_present == 0)

    emitted = 0
    skipped = 0

    if not np.isnan(vals).any():
        centered = vals - vals.mean(axis=1, keepdims=True)
        norms = np.sqrt((centered * centered).sum(axis=1))
        inv_norms = np.zeros(n)
        ok = ~constant
        inv_norms[ok] = 1.0 / norms[ok]

        starts = list(range(0, n, chunk))

        def block(s: int) -> np.ndarray:
            e = min(s + chunk, n)
            return centered[s:e] @ centered[s:].T

        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(block, s) for s in starts]
            for s, fut in zip(starts, futures):
                g = fut.result()
                e = min(s + chunk, n)
                for i in range(s, e):
                    if constant[i]:
                        skipped += n - (i + 1)
                        continue
                    gi = g[i - s]
                    scale = inv_norms[i]
                    for j in range(i + 1, n):
                        if constant[j]:
                            skipped += 1
                            continue
                        sink(names[i], names[j], float(gi[j - s]) * scale * inv_norms[j])
                        emitted += 1
        return PairwiseResult(emitted, skipped)

    # missing-data path: pairwise-complete per pair
    isnan = np.isnan(vals)
    for i in range(n):
        if constant[i]:
            skipped += n - (i + 1)
            continue
        xi = vals[i]
        for j in range(i + 1, n):
            if constant[j]:
                skipped += 1
                continue
            keep = ~(isnan[i] | isnan[j])
            if keep.sum() < 3:
                skipped += 1
                continue
            x = xi[keep]
            y = vals[j, keep]
            xm = x - x.mean()
            ym = y - y.mean()
            den = math.sqrt(float(xm @ xm)) * math.sqrt(float(ym @ ym))
            if den == 0.0:
                skipped += 1
                continue
            sink(names[i], names[j], float(xm @ ym) / den)
            emitted += 1
    return PairwiseResult(emitted, skipped)


# ---------------------------------------------------------------------------
# Kruskal-Wallis
# ---------------------------------------------------------------------------

def _tie_factor(pooled_ranksource: np.ndarray) -> float:
    """1 - sum(t^3 - t) / (N^3 - N) over tie-group sizes t."""
    n = pooled_ranksource.size
    _, counts = np.unique(pooled_ranksource, return_counts=True)
    correction = float(((counts.astype(float) ** 3) - counts).sum())
    return 1.0 - correction / (float(n) ** 3 - n)


def _kw_from_groups(groups: Sequence[np.ndarray], feature: str = "") -> TestResult:
    """Kruskal-Wallis H and chi-square tail for pre-split value groups."""
    k = len(groups)
    if k < 2:
        raise ValueError("need at least two groups")
    sizes = [g.size for g in groups]
    if any(s == 0 for s in sizes):
        raise DegenerateDataError("empty group")
    pooled = np.concatenate(groups)
    n = pooled.size
    if n < k + 1:
        raise ValueError(f"need more than {k} values overall, have {n}")
    tie = _tie_factor(pooled)
    if tie == 0.0:
        raise DegenerateDataError("all values tied")
    ranks = _midranks_dense(pooled)
    h = 0.0
    start = 0
    for s in sizes:
        rsum = float(ranks[start:start + s].sum())
        h += rsum * rsum / s
        start += s
    h = 12.0 / (n * (n + 1.0)) * h - 3.0 * (n + 1.0)
    h = max(h / tie, 0.0)
    return TestResult(feature, h, chi_sq_upper_tail_ln(h, k - 1), None, "none")


def kruskal_wallis(values, labels, feature: str = "") -> TestResult:
    """Kruskal-Wallis test of k groups defined by a label per value.

    Missing values are dropped together with their labels.  H uses the
    tie-corrected form; the p-value is the chi-square upper tail with
    k - 1 degrees of freedom.
    """
    vals = np.asarray(values, dtype=float)
    labs = np.asarray(labels)
    if vals.shape != labs.shape or vals.ndim != 1:
        raise ValueError("values and labels must be 1-d and aligned")
    keep = ~np.isnan(vals)
    vals, labs = vals[keep], labs[keep]
    order: list = []
    groups: dict = {}
    for v, g in zip(vals, labs):
        if g not in groups:
            groups[g] = []
            order.append(g)
        groups[g].append(v)
    if len(order) < 2:
        raise ValueError("need at least two distinct labels")
    return _kw_from_groups([np.asarray(groups[g], dtype=float) for g in order],
                           feature)


def kw_per_feature(group_matrices: Sequence[DataMatrix]) -> list[TestResult]:
    """Kruskal-Wallis per common feature, one group per input matrix.

    Features where a group is entirely missing, pooled values are all
    tied, or too few values remain are reported as degenerate
    (statistic NaN, no p-value) rather than aborting the scan.
    """
    if len(group_matrices) < 2:
        raise ValueError("need at least two group matrices")
    features = common_rows(group_matrices)
    indexes = [m.row_index() for m in group_matrices]
    results: list[TestResult] = []
    for f in features:
        groups = []
        for m, idx in zip(group_matrices, indexes):
            row = m.values[idx[f]]
            groups.append(row[~np.isnan(row)])
        try:
            results.append(_kw_from_groups(groups, f))
        except (DegenerateDataError, ValueError):
            results.append(TestResult(f, float("nan"), None, None, "none"))
    return results


# ---------------------------------------------------------------------------
# one-sided Wilcoxon / Mann-Whitney
# ---------------------------------------------------------------------------

ALTERNATIVES = ("A_greater", "A_less")

EXACT_SIZE_LIMIT = 12


def _wilcoxon_exact_tail_ln(n_a: int, n_b: int, rank_sum_a: int,
                            alternative: str) -> float:
    """ln p by enumerating every assignment of distinct ranks to group A."""
    n = n_a + n_b
    total = math.comb(n, n_a)
    if alternative == "A_greater":
        count = sum(1 for c in combinations(range(1, n + 1), n_a)
                    if sum(c) >= rank_sum_a)
    else:
        count = sum(1 for c in combinations(range(1, n + 1), n_a)
                    if sum(c) <= rank_sum_a)
    return math.log(count) - math.log(total)


def wilcoxon_one_sided(a, b, alternative: str = "A_greater",
                       feature: str = "", exact: bool | None = None) -> TestResult:
    """One-sided rank-sum test of group A against group B.

    The normal approximation uses midranks, the tie-corrected variance
    and a 0.5 continuity correction.  For small tie-free problems
    (nA + nB <= 12) the exact enumeration tail is returned instead;
    pass ``exact=False`` to force the approximation or ``exact=True``
    to require enumeration.
    """
    if alternative not in ALTERNATIVES:
        raise ValueError(f"alternative must be one of {ALTERNATIVES}")
    av = np.asarray(a, dtype=float)
    bv = np.asarray(b, dtype=float)
    av = av[~np.isnan(av)]
    bv = bv[~np.isnan(bv)]
    n_a, n_b = av.size, bv.size
    if n_a < 1 or n_b < 1:
        raise DegenerateDataError("empty group")
    n = n_a + n_b
    if n < 4:
        raise ValueError(f"need at least 4 values overall, have {n}")
    pooled = np.concatenate([av, bv])
    tie = _tie_factor(pooled)
    if tie == 0.0:
        raise DegenerateDataError("all values tied")
    has_ties = np.unique(pooled).size < n

    ranks = _midranks_dense(pooled)
    rank_sum_a = float(ranks[:n_a].sum())
    u = rank_sum_a - n_a * (n_a + 1) / 2.0
    mean_u = n_a * n_b / 2.0
    sd_u = math.sqrt(tie * n_a * n_b * (n + 1) / 12.0)
    statistic = (u - mean_u) / sd_u
    direction = "over" if alternative == "A_greater" else "under"

    use_exact = (exact is True) or (exact is None and n <= EXACT_SIZE_LIMIT
                                    and not has_ties)
    if use_exact:
        if has_ties:
            raise ValueError("exact enumeration requires tie-free data")
        ln_p = _wilcoxon_exact_tail_ln(n_a, n_b, round(rank_sum_a), alternative)
        return TestResult(feature, statistic, LogP(ln_p), None, direction)

    if alternative == "A_greater":
        z = (u - mean_u - 0.5) / sd_u
    else:
        z = (mean_u - u - 0.5) / sd_u
    return TestResult(feature, statistic, norm_upper_tail_ln(z), None, direction)


def wilcoxon_group_vs_rest(ds: Dataset, field_name: str, keyword: str,
                           alternative: str = "A_greater",
                           mode: str = "substring",
                           exact: bool | None = None) -> list[TestResult]:
    """Per-feature one-sided Wilcoxon of matching samples vs the rest.

    Group A is the keyword selection, group B its complement; either
    side empty is an error.  Per-feature degeneracies (all tied, or a
    side entirely missing) become results with no p-value.
    """
    sel = select_samples(ds, field_name, keyword, mode)
    rest = exclude_samples(ds, field_name, keyword, mode)
    if rest.n_samples == ds.n_samples:
        raise ValueError(f"keyword {keyword!r} selects no sample")
    results: list[TestResult] = []
    for i, f in enumerate(ds.data.row_names):
        try:
            results.append(wilcoxon_one_sided(sel.data.values[i],
                                              rest.data.values[i],
                                              alternative, f, exact))
        except (DegenerateDataError, ValueError):
            results.append(TestResult(f, float("nan"), None, None, "none"))
    return results


# ---------------------------------------------------------------------------
# Benjamini-Yekutieli FDR
# ---------------------------------------------------------------------------

def benjamini_yekutieli(p_values: Sequence[LogP]) -> list[LogP]:
    """Adjusted p-values under arbitrary dependence, computed in log space.

    adjusted_(i) = min over j >= i of min(1, p_(j) * m * c(m) / j) with
    c(m) the harmonic sum 1 + 1/2 + ... + 1/m.
    """
    m = len(p_values)
    if m == 0:
        raise ValueError("need at least one p-value")
    ln_p = np.array([p.ln_p for p in p_values])
    c_m = float((1.0 / np.arange(1, m + 1)).sum())
    order = np.argsort(ln_p, kind="stable")
    ln_sorted = ln_p[order]
    ln_adj = ln_sorted + math.log(m) + math.log(c_m) - np.log(np.arange(1, m + 1))
    ln_adj = np.minimum(ln_adj, 0.0)
    ln_adj = np.minimum.accumulate(ln_adj[::-1])[::-1]
    out = np.empty(m)
    out[order] = ln_adj
    return [LogP(v) for v in out]


def apply_fdr(results: Sequence[TestResult]) -> list[TestResult]:
    """Attach Benjamini-Yekutieli adjusted p-values.

    Degenerate entries (no raw p) pass through unadjusted and do not
    count toward m.
    """
    tested = [i for i, r in enumerate(results) if r.p_raw is not None]
    if not tested:
        return list(results)
    adjusted = benjamini_yekutieli([results[i].p_raw for i in tested])
    out = list(results)
    for i, adj in zip(tested, adjusted):
        out[i] = replace(results[i], p_adjusted=adj)
    return out


def significant_features(results: Sequence[TestResult],
                         threshold: float = 0.05) -> list[TestResult]:
    """Entries with adjusted p strictly below ``threshold``.

    Results that carry a raw p but no adjusted p mean the FDR step was
    skipped; that is an error rather than a silent fallback to raw p.
    """
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must be in (0, 1), got {threshold!r}")
    for r in results:
        if r.p_raw is not None and r.p_adjusted is None:
            raise ValueError("results carry no adjusted p-values; apply FDR first")
    ln_t = math.log(threshold)
    return [r for r in results if r.p_adjusted is not None
            and r.p_adjusted.ln_p < ln_t]


def rank_features(results: Sequence[TestResult], by: str = "p") -> list[TestResult]:
    """Order results by significance.

    ``by="p"``: ascending raw p (ties broken by feature name).
    ``by="statistic"``: descending statistic magnitude; for one-sided
    tests the sign is respected, so an "under" test ranks its most
    negative statistics first.  Degenerate entries always sort last.
    """
    if by not in ("p", "statistic"):
        raise ValueError(f"by must be 'p' or 'statistic', got {by!r}")
    if not results:
        raise ValueError("no results to rank")

    def key(r: TestResult):
        if r.p_raw is None or math.isnan(r.statistic):
            return (1, 0.0, r.feature)
        if by == "p":
            return (0, r.p_raw.ln_p, r.feature)
        if r.direction == "over":
            return (0, -r.statistic, r.feature)
        if r.direction == "under":
            return (0, r.statistic, r.feature)
        return (0, -abs(r.statistic), r.feature)

    return sorted(results, key=key)


# ---------------------------------------------------------------------------
# gene-set enrichment
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeneSet:
    name: str
    description: str
    symbols: frozenset[str]

    def __post_init__(self):
        if not self.name:
            raise ValueError("gene set name must be non-empty")
        if not self.symbols:
            raise ValueError(f"gene set {self.name!r} has no symbols")


def parse_gmt(source) -> list[GeneSet]:
    """Parse GMT lines: name <tab> description <tab> symbol...

    Duplicate set names and symbol-less lines are rejected.
    """
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            return parse_gmt(fh)
    sets: list[GeneSet] = []
    seen: set[str] = set()
    for lineno, line in enumerate(source, start=1):
        line = line.rstrip("\r\n")
        if not line:
            continue
        cells = line.split("\t")
        if len(cells) < 3:
            raise ParseError("gene set line needs name, description and "
                             "at least one symbol", lineno)
        name, description = cells[0], cells[1]
        symbols = frozenset(s for s in cells[2:] if s)
        if not symbols:
            raise ParseError(f"gene set {name!r} has no symbols", lineno)
        if name in seen:
            raise ParseError(f"duplicate gene set name {name!r}", lineno)
        seen.add(name)
        sets.append(GeneSet(name, description, symbols))
    if not sets:
        raise ParseError("no gene sets found")
    return sets


def fisher_enrichment(universe: int, selected: int, reference: int,
                      overlap: int) -> LogP:
    """Upper hypergeometric tail P(X >= overlap).

    X counts the intersection of a ``selected``-sized and a
    ``reference``-sized subset drawn from a universe of ``universe``
    symbols.  Summation runs in the log domain via log-sum-exp.
    """
    n_, a, b, k = int(universe), int(selected), int(reference), int(overlap)
    if n_ < 1 or not (0 <= a <= n_) or not (0 <= b <= n_):
        raise ValueError("need 0 <= selected, reference <= universe")
    if k < 0 or k > min(a, b):
        raise ValueError(f"overlap {k} inconsistent with set sizes")
    lo = max(0, a + b - n_)
    if k <= lo:
        return P_ONE
    ln_total = log_choose(n_, b)
    terms = [log_choose(a, i) + log_choose(n_ - a, b - i) - ln_total
             for i in range(k, min(a, b) + 1)]
    peak = max(terms)
    ln_p = peak + math.log(sum(math.exp(t - peak) for t in terms))
    return LogP(min(ln_p, 0.0))


def enrich_genesets(selected: set[str], universe: set[str],
                    gene_sets: Sequence[GeneSet]) -> list[tuple[GeneSet, int, int, LogP]]:
    """Hypergeometric enrichment of each gene set against a selection.

    Symbols outside the universe are ignored on both sides.  Returns
    (gene_set, set_size_in_universe, overlap, p) per set, in input order.
    """
    if not universe:
        raise ValueError("empty universe")
    sel = selected & universe
    out = []
    for gs in gene_sets:
        ref = gs.symbols & universe
        k = len(sel & ref)
        p = fisher_enrichment(len(universe), len(sel), len(ref), k)
        out.append((gs, len(ref), k, p))
    return out


# ---------------------------------------------------------------------------
# result table input/output
# ---------------------------------------------------------------------------

RESULT_COLUMNS = ("feature", "statistic", "p_raw", "log10_p_raw",
                  "p_adj", "log10_p_adj", "direction")

_LN10 = math.log(10.0)


def _fmt_linear(lp: LogP | None) -> str:
    if lp is None:
        return "NA"
    if lp.is_underflow:
        return "<1e-308"
    return f"{lp.p:.6g}"


def _fmt_log10(lp: LogP | None) -> str:
    return "NA" if lp is None else f"{lp.log10:.6f}"


def write_results_tsv(results: Sequence[TestResult], dest: str | Path | TextIO) -> None:
    """Write a result table; see RESULT_COLUMNS for the layout.

    Linear p columns clamp below 1e-308 to the marker "<1e-308"; the
    log10 columns always carry the exact value.
    """
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8", newline="\n") as fh:
            write_results_tsv(results, fh)
        return
    dest.write("\t".join(RESULT_COLUMNS) + "\n")
    for r in results:
        stat = "NA" if math.isnan(r.statistic) else f"{r.statistic:.10g}"
        dest.write("\t".join([
            r.feature, stat,
            _fmt_linear(r.p_raw), _fmt_log10(r.p_raw),
            _fmt_linear(r.p_adjusted), _fmt_log10(r.p_adjusted),
            r.direction,
        ]) + "\n")


def read_results_tsv(source) -> list[TestResult]:
    """Read back a table written by :func:`write_results_tsv`.

    LogP values are reconstructed from the log10 columns, which do not
    clamp, so round-tripping preserves deep tails.
    """
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            return read_results_tsv(fh)
    header = source.readline().rstrip("\r\n").split("\t")
    if tuple(header) != RESULT_COLUMNS:
        raise ParseError(f"unexpected result columns {header}", 1)
    out: list[TestResult] = []
    for lineno, line in enumerate(source, start=2):
        line = line.rstrip("\r\n")
        if not line:
            continue
        cells = line.split("\t")
        if len(cells) != len(RESULT_COLUMNS):
            raise ParseError(f"expected {len(RESULT_COLUMNS)} columns, "
                             f"got {len(cells)}", lineno)
        feature, stat_s, _, lg_raw, _, lg_adj, direction = cells
        stat = float("nan") if stat_s == "NA" else float(stat_s)
        p_raw = None if lg_raw == "NA" else LogP(float(lg_raw) * _LN10)
        p_adj = None if lg_adj == "NA" else LogP(float(lg_adj) * _LN10)
        out.append(TestResult(feature, stat, p_raw, p_adj, direction))
    return out
