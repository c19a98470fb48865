"""Transaction datasets and the exact ARM measures (support, confidence, lift).

Measures are returned as :class:`fractions.Fraction`; converting to float is
left to whoever presents them.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import BinaryIO, Iterable, Sequence, TextIO

import numpy as np

from .errors import (
    AntecedentUnsupported,
    EmptyDataset,
    EmptyItemset,
    EmptyToken,
    MalformedLine,
    OverlappingSides,
    ZeroMarginal,
)

BASKET = "basket"
TABULAR = "tabular"


def check_token(token: str) -> str:
    """Validate a single attribute token and return it unchanged."""
    if not token:
        raise EmptyToken("empty attribute token")
    if "\n" in token or "\r" in token or "," in token:
        raise EmptyToken(f"token {token!r} contains a record separator")
    return token


def feature_of(token: str) -> str:
    """Feature name of a ``feature_value`` token (text before the last underscore)."""
    head, sep, _ = token.rpartition("_")
    return head if sep else token


@dataclass(frozen=True)
class TransactionDB:
    transactions: tuple[frozenset[str], ...]
    item_universe: frozenset[str] = field(init=False)
    _items: tuple[str, ...] = field(init=False, repr=False, compare=False)
    _column: dict = field(init=False, repr=False, compare=False)
    _matrix: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        txs = tuple(frozenset(t) for t in self.transactions)
        if not txs:
            raise EmptyDataset("dataset has no transactions")
        object.__setattr__(self, "transactions", txs)
        universe = frozenset().union(*txs)
        items = tuple(sorted(universe))
        column = {tok: j for j, tok in enumerate(items)}
        matrix = np.zeros((len(txs), len(items)), dtype=bool)
        for i, t in enumerate(txs):
            matrix[i, [column[tok] for tok in t]] = True
        object.__setattr__(self, "item_universe", universe)
        object.__setattr__(self, "_items", items)
        object.__setattr__(self, "_column", column)
        object.__setattr__(self, "_matrix", matrix)

    @classmethod
    def from_iterable(cls, transactions: Iterable[Iterable[str]]) -> "TransactionDB":
        return cls(tuple(frozenset(check_token(tok) for tok in t) for t in transactions))

    @property
    def count(self) -> int:
        return len(self.transactions)

    def __len__(self):
        return len(self.transactions)

    @property
    def items(self) -> tuple[str, ...]:
        """Sorted item universe; the column order of ``matrix``."""
        return self._items

    @property
    def matrix(self) -> np.ndarray:
        """Read-only boolean transactions-by-items incidence matrix."""
        view = self._matrix.view()
        view.flags.writeable = False
        return view

    def count_containing(self, items: Iterable[str]) -> int:
        """n(items): number of transactions holding every token of ``items``."""
        items = frozenset(items)
        if not items:
            raise EmptyItemset("itemset must be non-empty")
        if not items <= self.item_universe:
            return 0
        cols = [self._column[tok] for tok in items]
        return int(np.count_nonzero(self._matrix[:, cols].all(axis=1)))


def _decode(raw: bytes | str, line_number: int) -> str:
    if isinstance(raw, str):
        return raw
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise MalformedLine(line_number, f"not valid UTF-8 ({exc.reason})") from None


def _read_lines(source) -> list[str]:
    if isinstance(source, (bytes, str)):
        source = io.BytesIO(source.encode("utf-8")) if isinstance(source, str) else io.BytesIO(source)
    lines = []
    for number, raw in enumerate(source, start=1):
        text = _decode(raw, number)
        lines.append(text.rstrip("\r\n"))
    return lines


def load_transactions(source: BinaryIO | TextIO | bytes | str, format: str = BASKET) -> TransactionDB:
    """Parse a basket or tabular dataset.

    ``source`` may be a binary or text stream, or the raw content as bytes/str.
    Basket: one transaction per line, comma-separated tokens. Blank lines are
    skipped. Tabular: CSV with a header row; cell ``v`` under feature ``f``
    becomes the token ``f_v``.
    """
    lines = _read_lines(source)
    if format == BASKET:
        transactions = _parse_basket(lines)
    elif format == TABULAR:
        transactions = _parse_tabular(lines)
    else:
        raise ValueError(f"unknown format {format!r}")
    if not transactions:
        raise EmptyDataset("no data rows")
    return TransactionDB(tuple(transactions))


def _parse_basket(lines: Sequence[str]) -> list[frozenset[str]]:
    out = []
    for number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        tokens = [tok.strip() for tok in line.split(",")]
        if any(not tok for tok in tokens):
            raise EmptyToken(f"line {number}: empty token")
        out.append(frozenset(tokens))
    return out


def _parse_tabular(lines: Sequence[str]) -> list[frozenset[str]]:
    rows = list(csv.reader(lines))
    # csv.reader yields [] for blank lines
    numbered = [(n, row) for n, row in enumerate(rows, start=1) if row]
    if not numbered:
        raise EmptyDataset("missing header row")
    header_line, header = numbered[0]
    header = [h.strip() for h in header]
    if any(not h for h in header):
        raise MalformedLine(header_line, "empty feature name in header")
    if len(set(header)) != len(header):
        raise MalformedLine(header_line, "duplicate feature name in header")
    out = []
    for number, row in numbered[1:]:
        if len(row) != len(header):
            raise MalformedLine(number, f"expected {len(header)} cells, got {len(row)}")
        tokens = []
        for feature, cell in zip(header, row):
            cell = cell.strip()
            if not cell:
                raise EmptyToken(f"line {number}: empty cell for feature {feature!r}")
            tokens.append(check_token(f"{feature}_{cell}"))
        out.append(frozenset(tokens))
    return out


def support(items: Iterable[str], db: TransactionDB) -> Fraction:
    """n(items) / N."""
    return Fraction(db.count_containing(items), db.count)


def _sides(antecedent, consequent):
    x, y = frozenset(antecedent), frozenset(consequent)
    if not x or not y:
        raise EmptyItemset("both rule sides must be non-empty")
    if x & y:
        raise OverlappingSides(f"antecedent and consequent share {sorted(x & y)}")
    return x, y


def confidence(antecedent: Iterable[str], consequent: Iterable[str], db: TransactionDB) -> Fraction:
    x, y = _sides(antecedent, consequent)
    n_x = db.count_containing(x)
    if n_x == 0:
        raise AntecedentUnsupported(f"antecedent {sorted(x)} occurs in no transaction")
    return Fraction(db.count_containing(x | y), n_x)


def lift(antecedent: Iterable[str], consequent: Iterable[str], db: TransactionDB) -> Fraction:
    x, y = _sides(antecedent, consequent)
    n_x = db.count_containing(x)
    n_y = db.count_containing(y)
    if n_x == 0 or n_y == 0:
        raise ZeroMarginal("lift undefined: a rule side has zero support")
    # supp(XY) / (supp(X) supp(Y)) = n(XY) N / (n(X) n(Y))
    return Fraction(db.count_containing(x | y) * db.count, n_x * n_y)


def _fmt_edge(x: float) -> str:
    return f"{x:.6g}"


def discretize_equal_width(
    rows: Sequence[Sequence[str]],
    header: Sequence[str],
    columns: Iterable[str],
    bins: int = 3,
) -> list[list[str]]:
    """Replace numeric cells of ``columns`` by equal-width interval labels.

    Labels look like ``(-inf-4.5]``, ``(4.5-6]``, ``(6-inf)``. This is a plain
    convenience binning; nothing more elaborate is attempted.
    """
    if bins < 1:
        raise ValueError("bins must be >= 1")
    index = {name: j for j, name in enumerate(header)}
    out = [list(r) for r in rows]
    for name in columns:
        j = index[name]
        values = np.array([float(r[j]) for r in rows])
        lo, hi = float(values.min()), float(values.max())
        cuts = np.linspace(lo, hi, bins + 1)[1:-1]
        edges = ["-inf", *(_fmt_edge(c) for c in cuts), "inf"]
        labels = [
            f"({edges[b]}-{edges[b + 1]}" + (")" if b == bins - 1 else "]")
            for b in range(bins)
        ]
        # right-closed intervals, matching the labels
        which = np.searchsorted(cuts, values, side="left")
        for r, b in zip(out, which):
            r[j] = labels[int(b)]
    return out
