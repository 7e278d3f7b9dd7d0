import json
import logging
import math
import os
import time
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional

import numpy as np

import settings
from wcop.config import ExperimentConfig

logger = logging.getLogger(__name__)


def to_jsonable(value):
    """Converts numpy scalars, complex numbers, enums and result objects into plain JSON values."""
    if hasattr(value, "to_dict"):
        return to_jsonable(value.to_dict())
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [to_jsonable(float(value.real)), to_jsonable(float(value.imag))]
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    return value


@dataclass
class CheckRecord:
    name: str
    tag: str
    predicted: object
    observed: object
    tolerance: float
    passed: bool

    def to_dict(self):
        return {
            "name": self.name,
            "tag": self.tag,
            "predicted": to_jsonable(self.predicted),
            "observed": to_jsonable(self.observed),
            "tolerance": to_jsonable(self.tolerance),
            "passed": bool(self.passed),
        }


class Report:
    """
    Результат выполнения команды: записи проверок и итоговые данные.
    Время выполнения хранится отдельно, сам отчет детерминирован.
    """

    def __init__(self, command: str, config: ExperimentConfig):
        self.command = command
        self.config = config
        self.records: List[CheckRecord] = []
        self.result: Dict = {}
        self.error: Optional[Dict] = None
        self._started = time.perf_counter()
        self._timing: Dict[str, float] = {}

    def check(self, name, tag, predicted, observed, tolerance, passed) -> CheckRecord:
        record = CheckRecord(name, tag, predicted, observed, tolerance, bool(passed))
        self.records.append(record)
        level = logging.INFO if record.passed else logging.WARNING
        logger.log(level, "check %s [%s]: %s", name, tag, "pass" if record.passed else "FAIL")
        return record

    def lap(self, name):
        self._timing[name] = time.perf_counter() - self._started

    @property
    def passed(self):
        return self.error is None and all(r.passed for r in self.records)

    @property
    def failed_records(self):
        return [r for r in self.records if not r.passed]

    def to_dict(self):
        data = {
            "command": self.command,
            "config_hash": self.config.config_hash,
            "tool_version": settings.TOOL_VERSION,
            "seed": self.config.seed,
            "records": [r.to_dict() for r in self.records],
            "result": to_jsonable(self.result),
        }
        if self.error is not None:
            data["error"] = to_jsonable(self.error)
        return data

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def timing(self):
        return {"command": self.command, "wall_time": time.perf_counter() - self._started,
                "laps": dict(self._timing)}

    def write(self, out_dir=None) -> str:
        out_dir = out_dir or self.config.output_dir
        os.makedirs(out_dir, exist_ok=True)

        path = os.path.join(out_dir, "%s.json" % self.command)
        with open(path, "w", encoding="utf-8") as f:
            f.write(self.to_json())
            f.write("\n")

        with open(os.path.join(out_dir, "%s.timing.json" % self.command), "w", encoding="utf-8") as f:
            json.dump(self.timing(), f, sort_keys=True, indent=2)

        logger.info("report written to %s", path)
        return path


def write_cloud_csv(points, path) -> str:
    """Point cloud as `re,im` rows."""
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    points = np.asarray(points, dtype=complex)
    np.savetxt(path, np.column_stack([points.real, points.imag]), delimiter=",",
               header="re,im", comments="", fmt="%.17g")
    return path
