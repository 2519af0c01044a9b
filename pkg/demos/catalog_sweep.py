"""Sweep the whole solution catalog and verify every instance pointwise.

One line per instance: family, worst residual across all of its checks,
and the pass verdict at the default 1e-7 tolerance.  Pass --full to dump
the per-check breakdown for anything that caught your eye.
"""

import sys

from kkforms import default_grid, run_solution_checks


def worst_rel(report):
    return max(chk.value for chk in report.checks.values())


def main(argv):
    full = "--full" in argv
    reports = [run_solution_checks(inst, n_points=12, seed=7)
               for inst in default_grid()]

    width = max(len(r.label) for r in reports)
    for rep in reports:
        print(f"{'pass' if rep.passed else 'FAIL'}  {rep.label:<{width}}  "
              f"worst {worst_rel(rep):.2e}  ({len(rep.checks)} checks, "
              f"{rep.wall_ms:.0f} ms)")
        if full:
            for line in rep.lines()[1:]:
                print("   " + line)

    n_bad = sum(not r.passed for r in reports)
    print(f"\n{len(reports)} instances across "
          f"{len({r.family for r in reports})} families; {n_bad} failing")
    return 1 if n_bad else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
