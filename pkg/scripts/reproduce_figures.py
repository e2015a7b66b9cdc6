"""Print analytic and Monte Carlo rates for every figure preset next to the quoted values.

    python scripts/reproduce_figures.py [--samples N] [--seed S]
"""
import argparse

from onoma_relay.analytic import scheme_totals
from onoma_relay.montecarlo import EstimatorKind, estimate
from onoma_relay.presets import preset_table

# (a2, snr_db) -> quoted (onoma_sum, cnoma_sum)
QUOTED = {
    "fig4": {(0.1, 20.0): (15.0, 5.753)},
    "fig5": {(0.1, 30.0): (19.97, 7.421)},
    "fig6": {(0.1, 20.0): (16.05, 6.752)},
    "fig7": {(0.1, 30.0): (20.91, 8.375)},
    "fig8": {(0.1, 5.0): (5.571, 4.575), (0.1, 15.0): (9.995, 7.961)},
    "fig9": {(0.1, 5.0): (6.007, 5.011), (0.1, 15.0): (10.47, 8.44)},
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=1_000_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'fig':5} {'a2':>5} {'snr':>5} | {'O ana':>8} {'O mc':>8} {'O paper':>8} | "
          f"{'C ana':>8} {'C mc':>8} {'C paper':>8}")
    for fid, preset in preset_table().items():
        links = preset.links()
        for (a2, snr), (q_on, q_c) in QUOTED[fid].items():
            sys = preset.system(a2=a2, snr_db=snr)
            t = scheme_totals(*links, sys)
            on = estimate(links, sys, EstimatorKind.PAPER_FAITHFUL, args.samples, args.seed)["sum"]
            c = estimate(links, sys, EstimatorKind.CNOMA, args.samples, args.seed)["sum"]
            print(f"{fid:5} {a2:5.2f} {snr:5.1f} | {t.onoma.sum:8.3f} {on.mean:8.3f} {q_on:8.3f} | "
                  f"{t.cnoma.sum:8.3f} {c.mean:8.3f} {q_c:8.3f}")


if __name__ == "__main__":
    main()
