"""Append-only measurement stream shared by every simulator.

All values are stored as floats (even counts) so one record schema and one
CSV layout covers every experiment: run_id,t,metric,subject,value.
"""

import io
from typing import List, Tuple


class OutOfOrderRecord(ValueError):
    pass


CSV_HEADER = "run_id,t,metric,subject,value"


class MetricsSink:
    def __init__(self, run_id: str):
        self.run_id = run_id
        self.records: List[Tuple[str, int, str, str, float]] = []
        self._last_t = None

    def record(self, t: int, metric: str, subject: str, value) -> None:
        if self._last_t is not None and t < self._last_t:
            raise OutOfOrderRecord(
                "record at t=%d after t=%d in run %s" % (t, self._last_t, self.run_id))
        self._last_t = t
        self.records.append((self.run_id, int(t), metric, subject, float(value)))

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(CSV_HEADER + "\n")
        for run_id, t, metric, subject, value in self.records:
            buf.write("%s,%d,%s,%s,%s\n" % (run_id, t, metric, subject, repr(value)))
        return buf.getvalue()

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_csv())

    def last(self, metric: str, subject: str = None):
        for rec in reversed(self.records):
            if rec[2] == metric and (subject is None or rec[3] == subject):
                return rec[4]
        return None

    def series(self, metric: str, subject: str = None):
        """All (t, value) pairs for a metric, optionally filtered by subject."""
        return [(r[1], r[4]) for r in self.records
                if r[2] == metric and (subject is None or r[3] == subject)]
