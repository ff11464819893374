"""
Gera os dados de todas as figuras num diretório (um CSV por painel).

- fig2a/fig4: amostras de (λ1, λ2, η) em N=6
- fig2b: QFI de estados simétricos aleatórios em N=100
- fig3, fig5 (a, b, c), fig6, fig7
Sai com o pior código de saída entre os comandos.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from metrobound.cli.main import main as metrobound_main
from metrobound.core.settings import settings


def parse_args() -> argparse.Namespace:
    p = argparse.ArgumentParser()
    p.add_argument("--outdir", type=Path, default=Path("figures"))
    p.add_argument("--samples", type=int, default=settings.DEFAULT_SAMPLES)
    p.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    p.add_argument("--full-range", action="store_true", help="fig3 até N = 10^6")
    return p.parse_args()


def suite(args: argparse.Namespace) -> list[tuple[str, list[str]]]:
    common = ["--seed", str(args.seed)]
    sampled = [*common, "--samples", str(args.samples)]
    fig3 = ["fig3", *common] + (["--full-range"] if args.full_range else [])
    return [
        ("fig2a", ["fig2a", "--n", "6", *sampled]),
        ("fig2b", ["fig2b", "--n", "100", *sampled]),
        ("fig3", fig3),
        ("fig4", ["fig4", "--n", "6", *sampled]),
        ("fig5a", ["fig5", "--variant", "a", *common]),
        ("fig5b", ["fig5", "--variant", "b", *common]),
        ("fig5c", ["fig5", "--variant", "c", *common]),
        ("fig6", ["fig6", *common]),
        ("fig7", ["fig7", *common]),
    ]


def run() -> int:
    args = parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)
    worst = 0
    for name, argv in suite(args):
        out = args.outdir / f"{name}.csv"
        started = time.perf_counter()
        code = metrobound_main([*argv, "--out", str(out)])
        elapsed = time.perf_counter() - started
        print(f"{name}: exit={code} {elapsed:.1f}s -> {out}")
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(run())
