"""
Sweep results and their CSV form.

A CSV starts with `# key: value` metadata lines (config hash, seed, tool
version, command, units) followed by the table written by pandas.
"""
import logging
import os
from typing import Any, Dict, List, Optional

import pandas as pd

from .. import __version__

logger = logging.getLogger(__name__)


class SweepResult:
    """
    Rows of one sweep plus the metadata needed to reproduce it.

    Every row carries the configuration hash and a `flagged` marker, so rows
    of different scenarios or failed points stay recognizable after the
    tables are merged.
    """

    def __init__(self,
                 command: str,
                 config_hash: str,
                 seed: int,
                 units: Optional[Dict[str, str]] = None):
        self.command = command
        self.config_hash = config_hash
        self.seed = seed
        self.units = dict(units or {})
        self.rows: List[Dict[str, Any]] = []

    def add_row(self, **values: Any) -> Dict[str, Any]:
        row = dict(values)
        row.setdefault('flagged', False)
        row.setdefault('message', '')
        row['config_hash'] = self.config_hash
        self.rows.append(row)
        return row

    def add_flagged(self, message: str, **values: Any) -> Dict[str, Any]:
        """Record a failed sweep point; the sweep goes on."""
        logger.warning(f"{self.command}: point {values} flagged: {message}")
        return self.add_row(flagged=True, message=message, **values)

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def flagged_count(self) -> int:
        return sum(1 for row in self.rows if row['flagged'])

    @property
    def metadata(self) -> Dict[str, str]:
        units = ';'.join(f"{column}={unit}" for column, unit in self.units.items())
        return {
            'command': self.command,
            'config_hash': self.config_hash,
            'seed': str(self.seed),
            'version': __version__,
            'units': units,
        }

    def to_frame(self) -> pd.DataFrame:
        """Rows as a DataFrame, in sweep order."""
        frame = pd.DataFrame(self.rows)
        if frame.empty:
            return pd.DataFrame(columns=['flagged', 'message', 'config_hash'])
        # bookkeeping columns last
        tail = ['flagged', 'message', 'config_hash']
        return frame[[c for c in frame.columns if c not in tail] + tail]

    def to_csv(self, path: str) -> str:
        """
        Write the metadata header and the table.

        Args:
            path: Output file; missing directories are created

        Returns:
            The path written
        """
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, 'w', newline='') as f:
            for key, value in self.metadata.items():
                f.write(f"# {key}: {value}\n")
            self.to_frame().to_csv(f, index=False)
        logger.info(f"Wrote {len(self.rows)} row(s) to {path}")
        return path

    @staticmethod
    def read_csv(path: str) -> pd.DataFrame:
        """Read a table written by to_csv, skipping the metadata header."""
        return pd.read_csv(path, comment='#')

    @staticmethod
    def read_metadata(path: str) -> Dict[str, str]:
        metadata = {}
        with open(path, 'r') as f:
            for line in f:
                if not line.startswith('#'):
                    break
                key, _, value = line[1:].partition(':')
                metadata[key.strip()] = value.strip()
        return metadata
