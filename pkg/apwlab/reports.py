"""Report emission: decay and residual CSVs, certificate text, run metadata."""

import json
import platform
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

import numpy as np
import pandas as pd
import scipy

from .grid import SampledFunction
from .logs import get_logger

logger = get_logger("apwlab.reports")

DECAY_CSV = "decay.csv"
RESIDUAL_CSV = "residuals.csv"
CERTIFICATE_TXT = "certificate.txt"
METADATA_JSON = "metadata.json"


@dataclass(frozen=True)
class ReportBundle:
    out_dir: Path

    @property
    def decay(self) -> Path:
        return self.out_dir / DECAY_CSV

    @property
    def residuals(self) -> Path:
        return self.out_dir / RESIDUAL_CSV

    @property
    def certificate(self) -> Path:
        return self.out_dir / CERTIFICATE_TXT

    @property
    def metadata(self) -> Path:
        return self.out_dir / METADATA_JSON

    def complete(self) -> bool:
        return all(p.is_file() for p in (self.decay, self.residuals, self.certificate, self.metadata))


def _prepare(path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def write_frame(frame: pd.DataFrame, path: Union[str, Path]) -> Path:
    path = _prepare(path)
    frame.to_csv(path, index=False, float_format="%.17g")
    logger.debug("write_frame: path=%s rows=%s", path, len(frame))
    return path


def write_text(text: str, path: Union[str, Path]) -> Path:
    path = _prepare(path)
    path.write_text(text, encoding="utf-8")
    return path


def signal_frame(u: SampledFunction) -> pd.DataFrame:
    """One row per grid point: x0[, x1], re0, im0[, re1, im1]."""
    pts = u.grid.points().reshape(-1, u.grid.c)
    vals = u.values.reshape(-1, u.d)
    data: Dict[str, np.ndarray] = {f"x{a}": pts[:, a] for a in range(u.grid.c)}
    for j in range(u.d):
        data[f"re{j}"] = vals[:, j].real
        data[f"im{j}"] = vals[:, j].imag
    return pd.DataFrame(data, columns=list(data))


def versions() -> Dict[str, str]:
    from . import __version__

    return {
        "apwlab": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "pandas": pd.__version__,
    }


def write_metadata(path: Union[str, Path], command: str, config: Mapping[str, Any], seed: Optional[int],
                   started: float, exit_code: int, method: Optional[str] = None,
                   extra: Optional[Mapping[str, Any]] = None) -> Path:
    payload: Dict[str, Any] = {
        "command": command,
        "config": dict(config),
        "seed": seed,
        "method": method,
        "exit_code": exit_code,
        "versions": versions(),
        "wall_time_seconds": time.perf_counter() - started,
    }
    if extra:
        payload.update(extra)
    return write_text(json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n", path)
