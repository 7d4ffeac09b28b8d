"""Named tables of results with JSON and CSV serialization."""

from dataclasses import dataclass, field
import csv
import io
import json

import numpy as np

from . import __version__
from .errors import ConfigurationError


def _plain(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


@dataclass
class AnalysisReport:
    """A table of equal-length named columns plus free-form metadata."""

    name: str
    columns: dict
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.columns = {k: _plain(list(v)) for k, v in self.columns.items()}
        lengths = {len(v) for v in self.columns.values()}
        if len(lengths) > 1:
            raise ConfigurationError("all report columns must have equal length")
        self.metadata = _plain(dict(self.metadata))
        self.metadata.setdefault("version", __version__)

    def __len__(self):
        return len(next(iter(self.columns.values()), []))

    def rows(self):
        names = list(self.columns)
        return [dict(zip(names, vals)) for vals in zip(*self.columns.values())]

    def to_json(self, indent=2):
        return json.dumps({"name": self.name, "columns": self.columns,
                           "metadata": self.metadata}, indent=indent)

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        return cls(data["name"], data["columns"], data.get("metadata", {}))

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(list(self.columns))
        for vals in zip(*self.columns.values()):
            writer.writerow([repr(v) if isinstance(v, float) else v for v in vals])
        return buf.getvalue()
