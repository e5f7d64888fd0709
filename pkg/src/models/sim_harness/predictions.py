import os
import math
import logging
import numpy as np
import pandas as pd
from dataclasses import dataclass, field
from typing import Any, Dict, List

from src.config import REPORT_COLUMNS
from src.data.encoder import write_json
from src.models.sim_harness.replication import STATUS_OK, procedure_names


def lower_nearest_rank(values, q):
    """Element at 1-based rank ceil(q * m) of the sorted values; nan when empty."""
    values = np.sort(np.asarray(values, dtype=float))
    if values.size == 0:
        return float('nan')
    rank = max(1, math.ceil(round(q * values.size, 9)))
    return float(values[rank - 1])


@dataclass
class ProcedureSummary:
    procedure: str
    reps: int
    covered: int = 0
    missed: int = 0
    skipped: int = 0
    simultaneous_hits: int = 0
    lengths: List[float] = field(default_factory=list)
    column_hits: Dict[int, List[int]] = field(default_factory=dict)
    skip_reasons: Dict[str, int] = field(default_factory=dict)

    def merge(self, outcome):
        if outcome.status != STATUS_OK:
            self.skipped += 1
            self.skip_reasons[outcome.reason] = self.skip_reasons.get(outcome.reason, 0) + 1
            return
        if outcome.covered:
            self.covered += 1
        else:
            self.missed += 1
        self.simultaneous_hits += int(outcome.simultaneous)
        self.lengths.append(outcome.length)
        for column, hit in zip(outcome.columns, outcome.column_covered):
            tally = self.column_hits.setdefault(int(column), [0, 0])
            tally[0] += int(hit)
            tally[1] += 1

    @property
    def used(self):
        return self.covered + self.missed

    def coverage(self):
        return self.covered / self.used if self.used else float('nan')

    def simultaneous(self):
        return self.simultaneous_hits / self.used if self.used else float('nan')

    def per_column(self):
        return {column: hits / seen for column, (hits, seen) in sorted(self.column_hits.items())}


@dataclass
class SimulationReport:
    """Aggregated coverage and length per procedure, plus the config that produced them."""
    config: Any
    summaries: List[ProcedureSummary]
    wall_time: float = 0.0

    def to_frame(self):
        rows = []
        for s in self.summaries:
            rows.append({
                'scenario_id': self.config.scenario_id,
                'procedure': s.procedure,
                'coverage': s.coverage(),
                'median_len': lower_nearest_rank(s.lengths, 0.5),
                'q90_len': lower_nearest_rank(s.lengths, 0.9),
                'simultaneous': s.simultaneous(),
                'nonexistent': s.skipped,
                'reps': s.reps,
                'seed': self.config.seed,
            })
        return pd.DataFrame(rows, columns=REPORT_COLUMNS)

    def details(self):
        return {
            'config': self.config.to_dict(),
            'procedures': [
                {
                    'procedure': s.procedure, 'covered': s.covered, 'missed': s.missed,
                    'skipped': s.skipped, 'skip_reasons': dict(sorted(s.skip_reasons.items())),
                    'per_column_coverage': s.per_column(),
                    'excluded_from_denominator': s.skipped > 0,
                }
                for s in self.summaries
            ],
        }


def aggregate(config, results, wall_time=0.0):
    """Folds replication results (in replication order) into a SimulationReport."""
    summaries = {name: ProcedureSummary(procedure=name, reps=config.reps) for name in procedure_names(config)}
    for result in sorted(results, key=lambda r: r.rep):
        for outcome in result.outcomes:
            summaries[outcome.procedure].merge(outcome)

    for s in summaries.values():
        if s.covered + s.missed + s.skipped != s.reps:
            logging.warning(f"{config.scenario_id}/{s.procedure}: {s.covered + s.missed + s.skipped} outcomes for {s.reps} reps")
    return SimulationReport(config=config, summaries=list(summaries.values()), wall_time=wall_time)


def sidecar_path(out_path):
    root, _ = os.path.splitext(out_path)
    return f"{root}.json"


def write_reports(reports, out_path):
    """
    CSV with one row per (scenario, procedure) and a JSON sidecar next to it.
    Wall time stays out of both files so identical configs give identical bytes.
    """
    frame = pd.concat([r.to_frame() for r in reports], ignore_index=True)

    out_dir = os.path.dirname(os.path.abspath(out_path))
    if not os.path.exists(out_dir):
        os.makedirs(out_dir)
    frame.to_csv(out_path, index=False, float_format='%.6f')
    write_json({'scenarios': [r.details() for r in reports]}, sidecar_path(out_path))

    logging.info(f"Wrote {len(frame)} report row(s) to {out_path}")
    return frame
