"""Run one or more verification suites and write a JSON report.

    python scripts/run_suite.py all --jobs 4 --report report.json
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from qtrace.cli import SUITES, run_suite
from qtrace.config import DEFAULT_RANGES, RunConfig


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("suites", nargs="+", choices=SUITES)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--extended", action="store_true")
    ap.add_argument("--cache-dir", type=Path)
    ap.add_argument("--report", type=Path)
    a = ap.parse_args()

    cfg = RunConfig(cache_dir=a.cache_dir, extended=a.extended, jobs=a.jobs)
    cfg.apply()
    records, ok = [], True
    for suite in a.suites:
        t0 = time.perf_counter()
        recs = run_suite(suite, cfg, dict(DEFAULT_RANGES))
        failed = [r for r in recs if not r.verdict]
        ok &= not failed
        print(f"{suite:10s} {len(recs) - len(failed):3d}/{len(recs):3d} passed  {time.perf_counter() - t0:6.1f}s")
        for r in failed:
            print(f"  FAIL {r.claim_id} N={r.N}: {r.failures}", file=sys.stderr)
        records.extend(recs)
    if a.report:
        a.report.write_text(json.dumps([r.to_json() for r in records], indent=2))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
