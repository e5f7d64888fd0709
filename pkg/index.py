"""
REPORT ROTATION & PRESET RERUN SCRIPT
=====================================
Run whenever the estimators or presets change.

LOGIC:
1. ROTATE: Existing backups in 'reports/previous_reports/' are shifted
   (prev_1 -> prev_2, etc.) to keep a chronological history.
2. ARCHIVE: Current reports (.csv and their .json sidecars) are renamed with
   '_prev_1' and moved to 'previous_reports/'.
3. RERUN: The desk-scale presets are simulated again into fresh reports.
"""

import os
import re
import shutil
import logging

from src.config import REPORT_DIR, setup_logging
from src.models.sim_harness.execution import run_pipeline
from src.models.sim_harness.scenarios import PRESETS

REPORT_EXTENSIONS = ('.csv', '.json')
PREV_PATTERN = re.compile(r'_prev_(\d+)')


def rotate_reports(report_dir=REPORT_DIR):
    """Moves current reports to previous_reports/ as *_prev_1, older backups one step up."""
    backup_dir = os.path.join(report_dir, 'previous_reports')
    os.makedirs(backup_dir, exist_ok=True)

    # 1. Shift existing backups, highest number first
    def prev_number(name):
        match = PREV_PATTERN.search(name)
        return int(match.group(1)) if match else -1

    for f in sorted(os.listdir(backup_dir), key=prev_number, reverse=True):
        current = prev_number(f)
        if current < 0:
            continue
        new_name = PREV_PATTERN.sub(f'_prev_{current + 1}', f, count=1)
        os.rename(os.path.join(backup_dir, f), os.path.join(backup_dir, new_name))

    # 2. Archive current reports
    moved = []
    for f in sorted(os.listdir(report_dir)):
        src_file = os.path.join(report_dir, f)
        if os.path.isfile(src_file) and f.endswith(REPORT_EXTENSIONS):
            name_part, ext_part = os.path.splitext(f)
            shutil.move(src_file, os.path.join(backup_dir, f"{name_part}_prev_1{ext_part}"))
            moved.append(f)
            logging.info(f"Backed up: {f} -> previous_reports/")
    return moved


def rotate_and_rerun(presets=None, reps=None, n_jobs=1, report_dir=REPORT_DIR):
    """Rotates old reports, then reruns the given presets (all of them by default)."""
    os.makedirs(report_dir, exist_ok=True)
    print("🔄 Starting report rotation...")
    rotate_reports(report_dir)

    print("\n🚀 Reports archived. Rerunning presets...")
    outputs = {}
    for name in presets or sorted(PRESETS):
        out_path = os.path.join(report_dir, f"{name}_report.csv")
        run_pipeline(preset=name, out_path=out_path, n_jobs=n_jobs, reps=reps)
        outputs[name] = out_path
    return outputs


if __name__ == "__main__":
    setup_logging()
    rotate_and_rerun()
