"""Rating-file readers for the supported formats."""

import io
import logging
from pathlib import Path

import numpy as np
import pandas as pd

from ..base.records import RatingRecord
from ..exceptions import DatasetError

logger = logging.getLogger(__name__)


class RatingFileLoader:
    """Reads `user<sep>item<sep>rating[<sep>timestamp]` lines."""

    name = "base"
    separator = ","
    engine = "c"
    allow_header = False

    def __init__(self, score_range: tuple[int, int]):
        self.score_range = score_range

    def load(self, path: Path) -> list[RatingRecord]:
        """Parse every line; the first invalid record aborts the load."""
        path = Path(path)
        try:
            numbered = self._non_blank_lines(path)
        except OSError as e:
            raise DatasetError(f"cannot read rating file: {e}", path=str(path)) from e

        if numbered and self.allow_header and self._is_header(numbered[0][1]):
            logger.debug(f"{path}: skipping header on line {numbered[0][0]}")
            numbered = numbered[1:]

        if not numbered:
            logger.info(f"{path}: no records")
            return []

        frame = self._read_frame(path, [line for _, line in numbered])
        records = self._to_records(frame, path, [number for number, _ in numbered])
        logger.info(f"{path}: loaded {len(records)} records")
        return records

    def _non_blank_lines(self, path: Path) -> list[tuple[int, str]]:
        """(1-based line number, text) of every line holding more than whitespace."""
        with open(path, "r", encoding="latin-1") as fh:
            return [
                (number, line.rstrip("\r\n"))
                for number, line in enumerate(fh, start=1)
                if line.strip()
            ]

    def _is_header(self, line: str) -> bool:
        fields = line.split(self.separator)
        if len(fields) < 3:
            return False
        try:
            float(fields[2])
        except ValueError:
            return True
        return False

    def _read_frame(self, path: Path, lines: list[str]) -> pd.DataFrame:
        try:
            return pd.read_csv(
                io.StringIO("\n".join(lines)),
                sep=self.separator,
                engine=self.engine,
                header=None,
                dtype=str,
                keep_default_na=False,
                skip_blank_lines=False,
            )
        except pd.errors.EmptyDataError:
            return pd.DataFrame()
        except pd.errors.ParserError as e:
            raise DatasetError(f"cannot parse rating file: {e}", path=str(path)) from e

    def _to_records(self, frame: pd.DataFrame, path: Path,
                    line_numbers: list[int]) -> list[RatingRecord]:
        if frame.empty:
            return []
        if frame.shape[1] < 3:
            raise DatasetError("expected at least 3 fields: user, item, rating",
                               path=str(path), line=line_numbers[0])
        if len(frame) != len(line_numbers):
            raise DatasetError(
                f"parsed {len(frame)} rows from {len(line_numbers)} lines", path=str(path)
            )

        low, high = self.score_range
        columns = [pd.to_numeric(frame[c].replace("", np.nan), errors="coerce") for c in range(3)]
        user, item, rating = (c.to_numpy(dtype=np.float64) for c in columns)
        timestamps = (
            pd.to_numeric(frame[3].replace("", np.nan), errors="coerce").to_numpy(dtype=np.float64)
            if frame.shape[1] > 3 else np.full(len(frame), np.nan)
        )

        def line_of(row: int) -> int:
            return line_numbers[int(row)]

        for label, values in (("user", user), ("item", item)):
            bad = np.flatnonzero(~np.isfinite(values) | (values != np.floor(values)))
            if bad.size:
                raise DatasetError(f"{label} id is not an integer", path=str(path),
                                   line=line_of(bad[0]))

        bad = np.flatnonzero(~np.isfinite(rating) | (rating != np.floor(rating)))
        if bad.size:
            raw = frame.iat[int(bad[0]), 2]
            raise DatasetError(f"rating {raw!r} is not an integer", path=str(path),
                               line=line_of(bad[0]))
        bad = np.flatnonzero((rating < low) | (rating > high))
        if bad.size:
            raise DatasetError(
                f"rating {int(rating[bad[0]])} outside score range [{low}, {high}]",
                path=str(path), line=line_of(bad[0]),
            )

        return [
            RatingRecord(
                user_raw=int(u),
                item_raw=int(i),
                rating=int(r),
                timestamp=None if not np.isfinite(t) else int(t),
            )
            for u, i, r, t in zip(user, item, rating, timestamps)
        ]


class MovieLens100KLoader(RatingFileLoader):
    """MovieLens 100K `u.data`: tab-separated."""

    name = "ml100k"
    separator = "\t"


class MovieLens1MLoader(RatingFileLoader):
    """MovieLens 1M `ratings.dat`: `::`-separated."""

    name = "ml1m"
    separator = "::"
    engine = "python"


class CsvLoader(RatingFileLoader):
    """Comma-separated with an optional header line."""

    name = "csv"
    separator = ","
    allow_header = True
