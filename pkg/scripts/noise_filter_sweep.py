#!/usr/bin/env python3
"""Sweep impulse-noise density against both smoothing filters.

For each density d the script corrupts a seeded block-texture frame with
salt-and-pepper noise, smooths it with the plain median and the hybrid
median (3x3), and prints the PSNR of each result against the clean frame.
Useful for picking a filter/window before a batch run.

    python scripts/noise_filter_sweep.py --densities 0.02 0.05 0.1 0.2
"""

import argparse

import numpy as np

from lumaforge import (
    FilterWindow,
    PixelBuffer,
    hybrid_median_filter,
    median_filter,
    psnr,
    salt_pepper,
)


def block_texture(seed: int, rows: int, cols: int, block: int = 8) -> PixelBuffer:
    rng = np.random.default_rng(seed)
    coarse = rng.integers(0, 256, ((rows + block - 1) // block, (cols + block - 1) // block), dtype=np.uint8)
    return PixelBuffer(np.kron(coarse, np.ones((block, block), dtype=np.uint8))[:rows, :cols])


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--densities", type=float, nargs="+", default=[0.02, 0.05, 0.1, 0.2, 0.4])
    parser.add_argument("--rows", type=int, default=144)
    parser.add_argument("--cols", type=int, default=176)
    parser.add_argument("--window", type=int, default=3, help="square window side")
    parser.add_argument("--trials", type=int, default=10, help="seeded trials per density")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    window = FilterWindow(args.window, args.window)
    print(f"{'d':>6}  {'noisy dB':>9}  {'median dB':>9}  {'hybrid dB':>9}")
    for d in args.densities:
        noisy_db, median_db, hybrid_db = [], [], []
        for trial in range(args.trials):
            clean = block_texture(args.seed + trial, args.rows, args.cols)
            noisy = salt_pepper(clean, d, seed=args.seed + 1000 + trial)
            noisy_db.append(psnr(noisy, clean).psnr_db)
            median_db.append(psnr(median_filter(noisy, window), clean).psnr_db)
            hybrid_db.append(psnr(hybrid_median_filter(noisy, window), clean).psnr_db)
        print(
            f"{d:6.3f}  {np.mean(noisy_db):9.2f}  {np.mean(median_db):9.2f}  {np.mean(hybrid_db):9.2f}"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
