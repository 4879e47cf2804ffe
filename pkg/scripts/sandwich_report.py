from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

# Allow running as a standalone script from repo root.
ROOT = Path(__file__).resolve().parents[1]
SRC = ROOT / "src"
sys.path.insert(0, str(SRC))

from nearfar_cdma.bounds.capacity import capacity_bounds  # noqa: E402
from nearfar_cdma.core.params import SystemParams  # noqa: E402
from nearfar_cdma.oracle.mutual_info import finite_size_trend, sandwich_verdict, sum_capacity_estimate  # noqa: E402
from nearfar_cdma.spectral.signature import sample_signature  # noqa: E402


def sandwich(m: int, n: int, params: SystemParams, samples: int, seeds: list[int], jobs: int) -> dict:
    bs = capacity_bounds(params)
    upper = bs.exact if bs.exact is not None else bs.upper_conjectured
    rows = []
    for seed in seeds:
        est = sum_capacity_estimate(sample_signature(m, n, seed), params.sigma, params.rho, samples, seed, jobs=jobs)
        rows.append({**est.to_dict(), "verdict": sandwich_verdict(est, upper)})
    return {"m": m, "n": n, "bounds": bs.to_dict(), "estimates": rows}


def plot_trend(trend: list[dict], bounds: dict, outpath: Path) -> None:
    ms = [t["m"] for t in trend]
    ys = [t["mean_bits_per_user"] for t in trend]
    es = [3.0 * t["std_error"] for t in trend]
    plt.figure(figsize=(6.0, 4.5))
    plt.errorbar(ms, ys, yerr=es, marker="o", capsize=3, label="oracle (uniform inputs)")
    for key, style in (("lower", "--"), ("upper_conjectured", ":"), ("upper_tanaka", "-.")):
        if bounds.get(key) is not None:
            plt.axhline(bounds[key], ls=style, c="k", lw=1, label=key)
    plt.xlabel("m (chips)")
    plt.ylabel("bits/user")
    plt.grid(True, alpha=0.25)
    plt.legend(fontsize="small")
    plt.tight_layout()
    plt.savefig(outpath)
    plt.close()


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--beta", type=float, default=2.0)
    ap.add_argument("--ebn0-db", type=float, default=8.0)
    ap.add_argument("--pcf-db", type=float, default=20.0)
    ap.add_argument("--samples", type=int, default=100_000)
    ap.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2, 3, 4])
    ap.add_argument("--sizes", type=int, nargs="+", default=[2, 4, 6, 8], help="chip counts m for the trend")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--outdir", type=Path, default=Path("artifacts/sandwich"))
    args = ap.parse_args()

    args.outdir.mkdir(parents=True, exist_ok=True)
    params = SystemParams.from_db(args.beta, ebn0_db=args.ebn0_db, pcf_db=args.pcf_db)
    m = 6
    n = int(round(args.beta * m))
    report = sandwich(m, n, params, args.samples, args.seeds, args.jobs)
    trend = finite_size_trend(
        args.beta, args.sizes, params.sigma, params.rho, args.samples // 10, args.seeds, jobs=args.jobs
    )
    report["trend"] = [t.to_dict() for t in trend]
    plot_trend(report["trend"], report["bounds"], args.outdir / "finite_size_trend.png")

    (args.outdir / "sandwich_summary.json").write_text(json.dumps(report, indent=2), encoding="utf-8")
    print(json.dumps([r["verdict"] for r in report["estimates"]]))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
