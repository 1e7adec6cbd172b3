#!/usr/bin/env python3
"""Render figures from bosonbench output directories.

The CLI emits data only; this script turns each artifact family into a
PNG next to the data (or under --save). It detects what is present, so a
directory produced by any subcommand works:

    bosonbench coefficients --out runs/coef
    python scripts/plot_results.py runs/coef
"""

import argparse
import collections
import csv
import pathlib
import re
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read_csv(path):
    """Rows of a bosonbench CSV, '#' comments skipped, fields as strings."""
    with open(path, newline="") as handle:
        rows = [r for r in csv.reader(line for line in handle if not line.startswith("#"))]
    header, data = rows[0], rows[1:]
    return header, data


def fnum(text):
    return float("nan") if text in ("", "nan") else float(text)


def plot_scatter(directory, save_to):
    files = sorted(directory.glob("scatter_x*_t*.csv"))
    if not files:
        return
    by_order = collections.defaultdict(list)
    for path in files:
        match = re.match(r"scatter_x(.+)_t(\d+)\.csv", path.name)
        by_order[int(match.group(2))].append((float(match.group(1)), path))
    for order, entries in sorted(by_order.items()):
        fig, axes = plt.subplots(1, len(entries), figsize=(4 * len(entries), 4), squeeze=False)
        for axis, (x_ind, path) in zip(axes[0], sorted(entries)):
            _, data = read_csv(path)
            comp = [fnum(row[2]) for row in data]
            test = [fnum(row[1]) for row in data]
            axis.scatter(comp, test, s=8, alpha=0.6)
            lim = [min(comp + test), max(comp + test)]
            axis.plot(lim, lim, "r--", lw=1, label="x = y")
            axis.set_title(f"x_ind = {x_ind}, order {order}")
            axis.set_xlabel("ideal correlator")
            axis.set_ylabel("test correlator")
            axis.legend()
        fig.tight_layout()
        fig.savefig(save_to / f"scatter_t{order}.png", dpi=150)
        plt.close(fig)
        print(f"wrote scatter_t{order}.png")


def plot_coefficients(directory, save_to):
    for path in sorted(directory.glob("coefficients_*.csv")):
        axis_name = path.stem.split("_", 1)[1]
        _, data = read_csv(path)
        by_order = collections.defaultdict(list)
        for row in data:
            by_order[int(row[1])].append((fnum(row[0]), fnum(row[2]), fnum(row[3]), fnum(row[4])))
        fig, axes = plt.subplots(1, 3, figsize=(12, 4))
        for order, rows in sorted(by_order.items()):
            rows.sort()
            noise = [r[0] for r in rows]
            for axis, column, label in zip(axes, (1, 2, 3), ("Pearson", "Spearman", "gamma")):
                axis.plot(noise, [r[column] for r in rows], "o-", label=f"t = {order}")
                axis.set_xlabel(axis_name)
                axis.set_ylabel(label)
        for axis in axes:
            axis.legend()
        fig.tight_layout()
        fig.savefig(save_to / f"coefficients_{axis_name}.png", dpi=150)
        plt.close(fig)
        print(f"wrote coefficients_{axis_name}.png")


def plot_scaling(directory, save_to):
    for path in sorted(directory.glob("scaling_*.csv")):
        scale_name = path.stem.split("_", 1)[1]
        _, data = read_csv(path)
        by_scale = collections.defaultdict(list)
        for row in data:
            by_scale[(int(row[0]), int(row[2]))].append(
                (fnum(row[1]), fnum(row[3]), fnum(row[4]))
            )
        fig, axis = plt.subplots(figsize=(6, 4))
        for (scale, order), rows in sorted(by_scale.items()):
            rows.sort()
            axis.errorbar(
                [r[0] for r in rows],
                [r[1] for r in rows],
                yerr=[r[2] for r in rows],
                fmt="o-",
                capsize=3,
                label=f"{scale_name} = {scale}, t = {order}",
            )
        axis.set_xlabel("x_ind")
        axis.set_ylabel("gamma")
        axis.legend()
        fig.tight_layout()
        fig.savefig(save_to / f"scaling_{scale_name}.png", dpi=150)
        plt.close(fig)
        print(f"wrote scaling_{scale_name}.png")


def plot_cloud(directory, save_to):
    points = sorted(directory.glob("cloud_*_t*.csv"))
    points = [p for p in points if p.name != "cloud_summary.csv"]
    if points:
        by_order = collections.defaultdict(list)
        for path in points:
            match = re.match(r"cloud_([a-z]+)([0-9.]+)_t(\d+)\.csv", path.name)
            by_order[int(match.group(3))].append((float(match.group(2)), path))
        for order, entries in sorted(by_order.items()):
            fig, axis = plt.subplots(figsize=(5, 4))
            for value, path in sorted(entries):
                _, data = read_csv(path)
                cv = [fnum(r[1]) for r in data if r[3] != "degenerate"]
                cs = [fnum(r[2]) for r in data if r[3] != "degenerate"]
                axis.scatter(cv, cs, s=8, alpha=0.5, label=f"noise = {value}")
            axis.set_xlabel("CV")
            axis.set_ylabel("CS")
            axis.set_title(f"order {order}")
            axis.legend()
            fig.tight_layout()
            fig.savefig(save_to / f"cloud_t{order}.png", dpi=150)
            plt.close(fig)
            print(f"wrote cloud_t{order}.png")

    summary = directory / "cloud_summary.csv"
    if summary.exists():
        _, data = read_csv(summary)
        by_order = collections.defaultdict(list)
        for row in data:
            by_order[int(row[1])].append(
                (fnum(row[0]), fnum(row[2]), fnum(row[3]), fnum(row[4]), fnum(row[5]))
            )
        fig, (cv_axis, cs_axis) = plt.subplots(1, 2, figsize=(9, 4))
        for order, rows in sorted(by_order.items()):
            rows.sort()
            noise = [r[0] for r in rows]
            cv_axis.errorbar(noise, [r[1] for r in rows], yerr=[r[2] for r in rows],
                             fmt="o-", capsize=3, label=f"t = {order}")
            cs_axis.errorbar(noise, [r[3] for r in rows], yerr=[r[4] for r in rows],
                             fmt="o-", capsize=3, label=f"t = {order}")
        cv_axis.set_ylabel("mean CV")
        cs_axis.set_ylabel("mean CS")
        for axis in (cv_axis, cs_axis):
            axis.set_xlabel("noise value")
            axis.legend()
        fig.tight_layout()
        fig.savefig(save_to / "cloud_summary.png", dpi=150)
        plt.close(fig)
        print("wrote cloud_summary.png")


def plot_distributions(directory, save_to):
    background = directory / "background.csv"
    if background.exists():
        _, data = read_csv(background)
        probs = [fnum(r[1]) for r in data]
        fig, axis = plt.subplots(figsize=(6, 4))
        axis.plot(range(len(probs)), probs, "r-", lw=1, label="exact background")
        for path in sorted(directory.glob("empirical_pnoise*.csv")):
            value = path.stem.replace("empirical_pnoise", "")
            _, rows = read_csv(path)
            axis.plot(
                range(len(rows)),
                [fnum(r[1]) for r in rows],
                ".",
                ms=3,
                alpha=0.6,
                label=f"p_noise = {value}",
            )
        axis.set_xlabel("pattern rank")
        axis.set_ylabel("probability")
        axis.legend(fontsize=7)
        fig.tight_layout()
        fig.savefig(save_to / "distributions.png", dpi=150)
        plt.close(fig)
        print("wrote distributions.png")

    curves = [p for p in (directory / "tvd_pnoise.csv", directory / "tvd_xind.csv") if p.exists()]
    if curves:
        fig, axes = plt.subplots(1, len(curves), figsize=(5 * len(curves), 4), squeeze=False)
        for axis, path in zip(axes[0], curves):
            header, data = read_csv(path)
            xs = [fnum(r[0]) for r in data]
            axis.plot(xs, [fnum(r[1]) for r in data], "o-", label="empirical")
            axis.plot(xs, [fnum(r[2]) for r in data], "s--", label="exact")
            axis.set_xlabel(header[0])
            axis.set_ylabel("total variation distance")
            axis.legend()
        fig.tight_layout()
        fig.savefig(save_to / "tvd.png", dpi=150)
        plt.close(fig)
        print("wrote tvd.png")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("directory", type=pathlib.Path, help="bosonbench output directory")
    parser.add_argument("--save", type=pathlib.Path, help="directory for PNGs (default: same)")
    args = parser.parse_args()
    if not args.directory.is_dir():
        sys.exit(f"not a directory: {args.directory}")
    save_to = args.save or args.directory
    save_to.mkdir(parents=True, exist_ok=True)
    for renderer in (plot_scatter, plot_coefficients, plot_scaling, plot_cloud, plot_distributions):
        renderer(args.directory, save_to)


if __name__ == "__main__":
    main()
